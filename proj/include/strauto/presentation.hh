#pragma once

#include <map>
#include <string>
#include <vector>

#include "strauto/nfa.hh"

namespace strauto {

struct NamedRelation {
    int arity = 1;
    MultiTrackNfa automaton;
};

/// An automatic presentation: regular domain, optional regular congruence
/// (absent means the identity, i.e. an injective presentation), and one
/// synchronized automaton per relation symbol.
struct Presentation {
    Alphabet alphabet;
    MultiTrackNfa domain;                          // 1-track
    std::optional<MultiTrackNfa> equality;         // 2-track congruence
    std::map<std::string, NamedRelation> relations;

    bool injective() const { return !equality.has_value(); }
    void check() const;  // structural: track counts, alphabets, arities agree
};

struct Finding {
    std::string check;     // domain-containment | no-all-pad | reflexive |
                           // symmetric | transitive | congruence-compat | injectivity
    std::string relation;  // relation name where applicable, else empty
    bool ok = true;
    std::optional<ConvWord> counterexample;
    std::string detail;
};

struct ValidationReport {
    bool passed = false;     // all mandatory findings ok (injectivity is informational)
    bool injective = false;  // equality absent or included in the identity
    std::vector<Finding> findings;
    std::vector<std::string> notes;  // e.g. the empty word is a domain element
};

/// Checks domain containment per relation track, absence of usable all-pad
/// transitions, that equality is an equivalence and a congruence, and whether
/// the presentation is injective. Failures carry counterexample convolutions.
ValidationReport validate(const Presentation& p, const ExploreLimits& lim = {});

/// 2-track automaton of the edge relation of the Gaifman graph: all ordered
/// pairs of distinct elements co-occurring in some relation tuple, symmetrized.
MultiTrackNfa gaifman_automaton(const Presentation& p);

/// Isomorphic injective presentation: the domain keeps only the
/// length-lexicographically least member of each equality class, relations are
/// saturated through the congruence and restricted; equality is dropped.
Presentation canonize(const Presentation& p, const ExploreLimits& lim = {});

struct DegreeResult {
    bool bounded = false;
    uint64_t degree = 0;          // meaningful when bounded
    uint64_t cap = 0;             // the cap the search ran with
    std::optional<Word> witness;  // element with `degree` neighbors (or > cap)
};

/// Exact maximum Gaifman degree if it is <= cap, else reports cap excess.
/// Requires an injective presentation (canonize first).
DegreeResult max_degree(const Presentation& p, uint64_t cap = 64,
                        const ExploreLimits& lim = {});

/// Gaifman neighbors of [u], exact when not truncated. For a cutoff that
/// guarantees truncation implies an infinite neighbor set, see
/// neighbor_length_bound.
ImageResult neighbors(const Presentation& p, const Word& u, size_t max_len);

/// Any neighbor longer than this pumps inside the padding phase, so truncation
/// at this cutoff proves the neighbor set infinite.
size_t neighbor_length_bound(const MultiTrackNfa& gaifman, size_t u_len);

struct GrowthPoint {
    uint64_t value = 0;      // g'(n) = max(n, largest ball size), capped
    bool saturated = false;  // ball size hit the cap (value is a lower bound)
};

/// g'(n) for the radius-n Gaifman balls; requires injective, validated,
/// bounded-degree presentations.
GrowthPoint growth(const Presentation& p, int radius, uint64_t cap_per_sphere,
                   const ExploreLimits& lim = {});

/// g'(0..radius) in one pass over the distance automata.
std::vector<GrowthPoint> growth_series(const Presentation& p, int radius,
                                       uint64_t cap_per_sphere,
                                       const ExploreLimits& lim = {});

}  // namespace strauto
