#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace strauto {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Budget exhaustion (subset-state limits, caps). CLI maps this to exit 3.
struct ResourceError : Error {
    explicit ResourceError(const std::string& msg) : Error(msg) {}
};

using State = uint32_t;
using Letter = uint32_t;
using Word = std::vector<Letter>;

/// Letters are strings (length >= 1); ids are positions in `letters`.
/// The padding symbol is not part of the alphabet; its id is letters.size().
struct Alphabet {
    std::vector<std::string> letters;
    std::string pad_name = "_";

    Letter pad() const { return static_cast<Letter>(letters.size()); }
    size_t size() const { return letters.size(); }
    std::optional<Letter> find(const std::string& name) const;
    const std::string& name(Letter l) const;
    bool operator==(const Alphabet& o) const {
        return letters == o.letters && pad_name == o.pad_name;
    }
    void check() const;  // non-empty distinct names, pad name distinct
};

Word parse_word(const Alphabet& a, const std::string& text);  // single-char letters only
std::string word_to_string(const Alphabet& a, const Word& w);

/// A k-track convolution word: per position one letter per track, never all-pad,
/// and each track once padded stays padded.
struct ConvWord {
    int tracks = 1;
    std::vector<std::vector<Letter>> tuples;

    size_t length() const { return tuples.size(); }
    bool valid(const Alphabet& a) const;
    std::vector<Word> split(const Alphabet& a) const;  // per-track words, padding stripped
};

ConvWord convolve(const Alphabet& a, const std::vector<Word>& words);

/// Set of letters on one track, as an include or exclude list (sorted, unique).
/// exclude=true means "every track letter except items", pad included.
struct TrackSet {
    bool exclude = false;
    std::vector<Letter> items;

    static TrackSet single(Letter l) { return {false, {l}}; }
    static TrackSet any() { return {true, {}}; }
    bool member(Letter l) const;
    bool empty(Letter universe) const;     // universe = alphabet size + 1 (pad)
    uint64_t count(Letter universe) const;
    std::optional<Letter> least(Letter universe) const;
    bool operator==(const TrackSet& o) const {
        return exclude == o.exclude && items == o.items;
    }
};

TrackSet set_intersect(const TrackSet& a, const TrackSet& b);
TrackSet set_minus(const TrackSet& a, const TrackSet& b);

/// Splits `base` into maximal regions with constant membership in every
/// distinguisher set.
std::vector<TrackSet> atomize(const TrackSet& base, std::vector<TrackSet> distinguishers,
                              Letter universe);

/// Transition label: a box, i.e. one TrackSet per track. The label matches a
/// letter tuple iff every track letter lies in its set.
using Label = std::vector<TrackSet>;

bool label_matches(const Label& lab, const Letter* tuple);
Label label_of_tuple(const std::vector<Letter>& tuple);

struct Transition {
    State src;
    State dst;
    Label label;
};

struct ExploreLimits {
    uint64_t max_states = 1'000'000;
};

/// Nondeterministic automaton over k-track letter tuples from (alphabet+pad).
/// The language is read as a set of convolution words; label patterns that can
/// never occur in a valid convolution are semantically inert.
struct MultiTrackNfa {
    int tracks = 1;
    Alphabet alphabet;
    State num_states = 0;
    std::vector<State> initial;
    std::vector<State> finals;
    std::vector<Transition> transitions;

    MultiTrackNfa() = default;
    MultiTrackNfa(int tracks, Alphabet alphabet)
        : tracks(tracks), alphabet(std::move(alphabet)) {}

    Letter universe() const { return static_cast<Letter>(alphabet.size() + 1); }
    State add_state();
    State add_state(bool is_initial, bool is_final);
    void add_transition(State src, Label label, State dst);
    void add_transition(State src, const std::vector<Letter>& tuple, State dst);
    std::vector<char> final_mask() const;
    void check() const;  // structural invariants; throws Error
};

bool accepts(const MultiTrackNfa& a, const ConvWord& w);
bool accepts(const MultiTrackNfa& a, const std::vector<Word>& words);

/// Intersection; both automata must share tracks and alphabet.
MultiTrackNfa product(const MultiTrackNfa& a, const MultiTrackNfa& b);

/// Union by disjoint juxtaposition.
MultiTrackNfa unite(const MultiTrackNfa& a, const MultiTrackNfa& b);

/// Complement relative to the valid-convolution universe. Deterministic result
/// via subset construction synchronized with per-track padding state.
MultiTrackNfa complement(const MultiTrackNfa& a, const ExploreLimits& lim = {});

/// Language-preserving determinization over the valid-convolution universe.
MultiTrackNfa determinize(const MultiTrackNfa& a, const ExploreLimits& lim = {});

/// Restriction to the tracks in `keep` (order taken from `keep`, so this also
/// permutes). Trailing positions that become all-pad are re-normalized away.
/// Only valid convolutions of the source contribute.
MultiTrackNfa project(const MultiTrackNfa& a, const std::vector<int>& keep);

/// Embeds an automaton on t tracks into k tracks: track i of `a` becomes track
/// mapping[i]; unmapped tracks carry arbitrary content. After the mapped word
/// ends the mapped tracks stay padded while others continue.
MultiTrackNfa lift(const MultiTrackNfa& a, int tracks, const std::vector<int>& mapping);

/// Composition of binary relations: {(u,w) : exists v, (u,v) in a, (v,w) in b}.
MultiTrackNfa compose(const MultiTrackNfa& a, const MultiTrackNfa& b);

/// {(u,u) : u in L(domain)}; domain must be 1-track.
MultiTrackNfa identity_relation(const MultiTrackNfa& domain);

/// All pairs (u,v) of words with u != v.
MultiTrackNfa inequality_relation(const Alphabet& a);

/// {(u,v) : v strictly precedes u in length-lexicographic order}.
MultiTrackNfa llex_less_relation(const Alphabet& a);

/// Removes states that are unreachable or cannot reach a final state.
MultiTrackNfa trim(const MultiTrackNfa& a);

struct EmptinessWitness {
    std::optional<ConvWord> witness;  // nullopt iff language empty
    uint64_t states_explored = 0;
    bool empty() const { return !witness.has_value(); }
};

/// Shortest witness, ties broken lexicographically (alphabet order, pad last).
EmptinessWitness is_empty(const MultiTrackNfa& a, const ExploreLimits& lim = {});

/// Does L(sub) include into L(sup)? Returns a word of L(sub) \ L(sup) if not.
/// The complement of `sup` is explored on the fly, never materialized.
EmptinessWitness includes(const MultiTrackNfa& sup, const MultiTrackNfa& sub,
                          const ExploreLimits& lim = {});

struct ImageResult {
    std::vector<Word> words;  // sorted length-lexicographically
    bool truncated = false;   // some image word exceeds max_len
};

/// {v : (u,v) in R(rel)} for a 2-track rel, up to length max_len.
ImageResult image(const MultiTrackNfa& rel, const Word& u, size_t max_len);

}  // namespace strauto
