#include "strauto/nfa.hh"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>
#include <sstream>
#include <unordered_map>

#include "internal.hh"
#include "strauto/product.hh"

namespace strauto {

namespace {

std::vector<Letter> sorted_unique(std::vector<Letter> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

std::vector<State> sorted_unique_states(std::vector<State> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

// Transition indices grouped by source state.
std::vector<std::vector<uint32_t>> out_index(const MultiTrackNfa& a) {
    std::vector<std::vector<uint32_t>> by_src(a.num_states);
    for (uint32_t i = 0; i < a.transitions.size(); ++i)
        by_src[a.transitions[i].src].push_back(i);
    return by_src;
}

bool is_pad_only(const TrackSet& s, Letter pad) {
    return !s.exclude && s.items.size() == 1 && s.items[0] == pad;
}

}  // namespace

std::vector<TrackSet> atomize(const TrackSet& base, std::vector<TrackSet> ds,
                              Letter universe) {
    std::vector<TrackSet> regions;
    if (base.empty(universe)) return regions;
    regions.push_back(base);
    std::sort(ds.begin(), ds.end(), [](const TrackSet& a, const TrackSet& b) {
        return std::tie(a.exclude, a.items) < std::tie(b.exclude, b.items);
    });
    ds.erase(std::unique(ds.begin(), ds.end()), ds.end());
    for (const TrackSet& d : ds) {
        std::vector<TrackSet> next;
        next.reserve(regions.size() * 2);
        for (const TrackSet& r : regions) {
            TrackSet in = set_intersect(r, d);
            TrackSet out = set_minus(r, d);
            if (!in.empty(universe)) next.push_back(std::move(in));
            if (!out.empty(universe)) next.push_back(std::move(out));
        }
        regions = std::move(next);
    }
    return regions;
}

// ---------------------------------------------------------------- Alphabet

std::optional<Letter> Alphabet::find(const std::string& name) const {
    for (size_t i = 0; i < letters.size(); ++i)
        if (letters[i] == name) return static_cast<Letter>(i);
    return std::nullopt;
}

const std::string& Alphabet::name(Letter l) const {
    if (l < letters.size()) return letters[l];
    if (l == pad()) return pad_name;
    throw Error("letter id out of range");
}

void Alphabet::check() const {
    if (letters.empty()) throw Error("alphabet must not be empty");
    std::set<std::string> seen;
    for (const auto& s : letters) {
        if (s.empty()) throw Error("alphabet letters must be non-empty strings");
        if (s == pad_name) throw Error("padding symbol occurs in the alphabet");
        if (!seen.insert(s).second) throw Error("duplicate alphabet letter: " + s);
    }
    if (pad_name.empty()) throw Error("padding symbol must be non-empty");
}

Word parse_word(const Alphabet& a, const std::string& text) {
    Word w;
    w.reserve(text.size());
    for (char c : text) {
        auto l = a.find(std::string(1, c));
        if (!l) throw Error(std::string("letter not in alphabet: ") + c);
        w.push_back(*l);
    }
    return w;
}

std::string word_to_string(const Alphabet& a, const Word& w) {
    std::string s;
    for (Letter l : w) s += a.name(l);
    return s;
}

// ---------------------------------------------------------------- ConvWord

bool ConvWord::valid(const Alphabet& a) const {
    if (tracks < 1) return false;
    Letter pad = a.pad();
    std::vector<char> padded(tracks, 0);
    for (const auto& tup : tuples) {
        if (static_cast<int>(tup.size()) != tracks) return false;
        bool all_pad = true;
        for (int t = 0; t < tracks; ++t) {
            Letter l = tup[t];
            if (l > pad) return false;
            if (l == pad) {
                padded[t] = 1;
            } else {
                if (padded[t]) return false;  // resumed after padding
                all_pad = false;
            }
        }
        if (all_pad) return false;
    }
    return true;
}

std::vector<Word> ConvWord::split(const Alphabet& a) const {
    Letter pad = a.pad();
    std::vector<Word> out(tracks);
    for (const auto& tup : tuples)
        for (int t = 0; t < tracks; ++t)
            if (tup[t] != pad) out[t].push_back(tup[t]);
    return out;
}

ConvWord convolve(const Alphabet& a, const std::vector<Word>& words) {
    if (words.empty()) throw Error("convolve requires at least one word");
    Letter pad = a.pad();
    size_t len = 0;
    for (const auto& w : words) {
        for (Letter l : w)
            if (l >= a.size()) throw Error("convolve: letter outside alphabet");
        len = std::max(len, w.size());
    }
    ConvWord cw;
    cw.tracks = static_cast<int>(words.size());
    cw.tuples.reserve(len);
    for (size_t i = 0; i < len; ++i) {
        std::vector<Letter> tup(words.size());
        for (size_t t = 0; t < words.size(); ++t)
            tup[t] = i < words[t].size() ? words[t][i] : pad;
        cw.tuples.push_back(std::move(tup));
    }
    return cw;
}

// ---------------------------------------------------------------- TrackSet

bool TrackSet::member(Letter l) const {
    bool in = std::binary_search(items.begin(), items.end(), l);
    return exclude ? !in : in;
}

bool TrackSet::empty(Letter universe) const {
    return exclude ? items.size() >= universe : items.empty();
}

uint64_t TrackSet::count(Letter universe) const {
    return exclude ? universe - items.size() : items.size();
}

std::optional<Letter> TrackSet::least(Letter universe) const {
    if (!exclude) {
        if (items.empty() || items.front() >= universe) return std::nullopt;
        return items.front();
    }
    Letter l = 0;
    for (Letter x : items) {
        if (x != l) break;
        ++l;
    }
    if (l >= universe) return std::nullopt;
    return l;
}

TrackSet set_intersect(const TrackSet& a, const TrackSet& b) {
    TrackSet r;
    if (!a.exclude && !b.exclude) {
        std::set_intersection(a.items.begin(), a.items.end(), b.items.begin(),
                              b.items.end(), std::back_inserter(r.items));
    } else if (!a.exclude && b.exclude) {
        std::set_difference(a.items.begin(), a.items.end(), b.items.begin(),
                            b.items.end(), std::back_inserter(r.items));
    } else if (a.exclude && !b.exclude) {
        std::set_difference(b.items.begin(), b.items.end(), a.items.begin(),
                            a.items.end(), std::back_inserter(r.items));
    } else {
        r.exclude = true;
        std::set_union(a.items.begin(), a.items.end(), b.items.begin(),
                       b.items.end(), std::back_inserter(r.items));
    }
    return r;
}

TrackSet set_minus(const TrackSet& a, const TrackSet& b) {
    return set_intersect(a, TrackSet{!b.exclude, b.items});
}

bool label_matches(const Label& lab, const Letter* tuple) {
    for (size_t t = 0; t < lab.size(); ++t)
        if (!lab[t].member(tuple[t])) return false;
    return true;
}

Label label_of_tuple(const std::vector<Letter>& tuple) {
    Label lab;
    lab.reserve(tuple.size());
    for (Letter l : tuple) lab.push_back(TrackSet::single(l));
    return lab;
}

// ----------------------------------------------------------- MultiTrackNfa

State MultiTrackNfa::add_state() { return num_states++; }

State MultiTrackNfa::add_state(bool is_initial, bool is_final) {
    State s = num_states++;
    if (is_initial) initial.push_back(s);
    if (is_final) finals.push_back(s);
    return s;
}

void MultiTrackNfa::add_transition(State src, Label label, State dst) {
    if (static_cast<int>(label.size()) != tracks)
        throw Error("transition label width differs from track count");
    transitions.push_back({src, dst, std::move(label)});
}

void MultiTrackNfa::add_transition(State src, const std::vector<Letter>& tuple,
                                   State dst) {
    add_transition(src, label_of_tuple(tuple), dst);
}

std::vector<char> MultiTrackNfa::final_mask() const {
    std::vector<char> m(num_states, 0);
    for (State f : finals) m[f] = 1;
    return m;
}

void MultiTrackNfa::check() const {
    if (tracks < 1) throw Error("automaton needs at least one track");
    alphabet.check();
    Letter uni = universe();
    for (State s : initial)
        if (s >= num_states) throw Error("initial state out of range");
    for (State s : finals)
        if (s >= num_states) throw Error("final state out of range");
    for (const auto& t : transitions) {
        if (t.src >= num_states || t.dst >= num_states)
            throw Error("transition endpoint out of range");
        if (static_cast<int>(t.label.size()) != tracks)
            throw Error("transition label width differs from track count");
        for (const auto& s : t.label) {
            if (!std::is_sorted(s.items.begin(), s.items.end()))
                throw Error("letter set not sorted");
            if (std::adjacent_find(s.items.begin(), s.items.end()) != s.items.end())
                throw Error("letter set has duplicates");
            for (Letter l : s.items)
                if (l >= uni) throw Error("letter id out of range in label");
        }
    }
}

// ------------------------------------------------------------------ accepts

bool accepts(const MultiTrackNfa& a, const ConvWord& w) {
    if (w.tracks != a.tracks || !w.valid(a.alphabet)) return false;
    std::vector<char> cur(a.num_states, 0);
    bool any = false;
    for (State s : a.initial) cur[s] = 1, any = true;
    for (const auto& tup : w.tuples) {
        if (!any) return false;
        std::vector<char> next(a.num_states, 0);
        any = false;
        for (const auto& t : a.transitions) {
            if (!cur[t.src] || next[t.dst]) continue;
            if (label_matches(t.label, tup.data())) next[t.dst] = 1, any = true;
        }
        cur = std::move(next);
    }
    for (State f : a.finals)
        if (cur[f]) return true;
    return false;
}

bool accepts(const MultiTrackNfa& a, const std::vector<Word>& words) {
    if (static_cast<int>(words.size()) != a.tracks)
        throw Error("word count differs from track count");
    return accepts(a, convolve(a.alphabet, words));
}

// ------------------------------------------------------------------ product

MultiTrackNfa product(const MultiTrackNfa& a, const MultiTrackNfa& b) {
    if (a.tracks != b.tracks) throw Error("product: track counts differ");
    if (!(a.alphabet == b.alphabet)) throw Error("product: alphabets differ");
    Letter uni = a.universe();
    auto ia = out_index(a), ib = out_index(b);
    auto fb_a = a.final_mask(), fb_b = b.final_mask();

    MultiTrackNfa out;
    out.tracks = a.tracks;
    out.alphabet = a.alphabet;
    std::unordered_map<uint64_t, State, detail::U64Hash> intern;
    std::vector<std::pair<State, State>> info;
    auto get = [&](State sa, State sb) {
        uint64_t key = (static_cast<uint64_t>(sa) << 32) | sb;
        auto it = intern.find(key);
        if (it != intern.end()) return it->second;
        State s = out.add_state();
        intern.emplace(key, s);
        info.emplace_back(sa, sb);
        return s;
    };
    for (State sa : a.initial)
        for (State sb : b.initial) out.initial.push_back(get(sa, sb));
    out.initial = sorted_unique_states(out.initial);

    for (State cur = 0; cur < out.num_states; ++cur) {
        auto [sa, sb] = info[cur];
        if (fb_a[sa] && fb_b[sb]) out.finals.push_back(cur);
        for (uint32_t ta : ia[sa]) {
            for (uint32_t tb : ib[sb]) {
                Label lab(a.tracks);
                bool ok = true;
                for (int t = 0; t < a.tracks && ok; ++t) {
                    lab[t] = set_intersect(a.transitions[ta].label[t],
                                           b.transitions[tb].label[t]);
                    if (lab[t].empty(uni)) ok = false;
                }
                if (!ok) continue;
                out.add_transition(cur, std::move(lab),
                                   get(a.transitions[ta].dst, b.transitions[tb].dst));
            }
        }
    }
    return out;
}

MultiTrackNfa unite(const MultiTrackNfa& a, const MultiTrackNfa& b) {
    if (a.tracks != b.tracks) throw Error("union: track counts differ");
    if (!(a.alphabet == b.alphabet)) throw Error("union: alphabets differ");
    MultiTrackNfa out = a;
    State off = a.num_states;
    out.num_states += b.num_states;
    for (State s : b.initial) out.initial.push_back(s + off);
    for (State s : b.finals) out.finals.push_back(s + off);
    for (const auto& t : b.transitions)
        out.transitions.push_back({t.src + off, t.dst + off, t.label});
    return out;
}

// --------------------------------------------------- subset constructions

namespace {

// Shared core of determinize/complement: deterministic automaton over the
// valid-convolution universe, states = (reachable subset, padding mask).
// With `complete`, non-firing regions go to the empty subset so every valid
// word has a run (needed to complement); otherwise they are dropped.
MultiTrackNfa subset_construct(const MultiTrackNfa& a, const ExploreLimits& lim,
                               bool complete, bool negate_finals) {
    int k = a.tracks;
    Letter pad = a.alphabet.pad();
    Letter uni = a.universe();
    auto idx = out_index(a);
    auto fin = a.final_mask();

    MultiTrackNfa out;
    out.tracks = k;
    out.alphabet = a.alphabet;

    std::unordered_map<std::vector<uint32_t>, State, detail::U32VecHash> intern;
    std::vector<std::pair<std::vector<State>, uint32_t>> info;
    auto get = [&](std::vector<State> subset, uint32_t mask) {
        std::vector<uint32_t> key = subset;
        key.push_back(0x80000000u | mask);
        auto it = intern.find(key);
        if (it != intern.end()) return it->second;
        if (static_cast<uint64_t>(info.size()) >= lim.max_states)
            throw ResourceError("subset construction exceeded the state budget");
        State s = out.add_state();
        intern.emplace(std::move(key), s);
        info.emplace_back(std::move(subset), mask);
        return s;
    };

    out.initial = {get(sorted_unique_states(a.initial), 0)};

    struct Cand {
        Label box;
        State dst;
    };
    for (State cur = 0; cur < out.num_states; ++cur) {
        const auto subset = info[cur].first;     // copy: info grows below
        const uint32_t mask = info[cur].second;
        bool has_final = false;
        for (State s : subset) has_final |= fin[s] != 0;
        if (negate_finals ? !has_final : has_final) out.finals.push_back(cur);

        std::vector<Cand> cands;
        for (State s : subset) {
            for (uint32_t ti : idx[s]) {
                Label b = a.transitions[ti].label;
                bool ok = true;
                for (int t = 0; t < k && ok; ++t) {
                    if (mask >> t & 1) b[t] = set_intersect(b[t], TrackSet::single(pad));
                    if (b[t].empty(uni)) ok = false;
                }
                if (ok) cands.push_back({std::move(b), a.transitions[ti].dst});
            }
        }
        if (!complete && cands.empty()) continue;

        Label prefix(k);
        std::function<void(int, std::vector<uint32_t>&)> rec =
            [&](int t, std::vector<uint32_t>& alive) {
                if (t == k) {
                    bool all_pad = true;
                    for (int i = 0; i < k; ++i) all_pad &= is_pad_only(prefix[i], pad);
                    if (all_pad) return;
                    if (!complete && alive.empty()) return;
                    std::vector<State> dsts;
                    dsts.reserve(alive.size());
                    for (uint32_t i : alive) dsts.push_back(cands[i].dst);
                    dsts = sorted_unique_states(std::move(dsts));
                    uint32_t mask2 = mask;
                    for (int i = 0; i < k; ++i)
                        if (is_pad_only(prefix[i], pad)) mask2 |= 1u << i;
                    out.add_transition(cur, prefix, get(std::move(dsts), mask2));
                    return;
                }
                TrackSet base = (mask >> t & 1) ? TrackSet::single(pad) : TrackSet::any();
                std::vector<TrackSet> ds{TrackSet::single(pad)};
                for (uint32_t i : alive) ds.push_back(cands[i].box[t]);
                for (const TrackSet& atom : atomize(base, std::move(ds), uni)) {
                    Letter probe = *atom.least(uni);
                    std::vector<uint32_t> alive2;
                    for (uint32_t i : alive)
                        if (cands[i].box[t].member(probe)) alive2.push_back(i);
                    if (!complete && alive2.empty()) continue;
                    prefix[t] = atom;
                    rec(t + 1, alive2);
                }
            };
        std::vector<uint32_t> alive(cands.size());
        for (uint32_t i = 0; i < cands.size(); ++i) alive[i] = i;
        rec(0, alive);
    }
    return out;
}

}  // namespace

MultiTrackNfa complement(const MultiTrackNfa& a, const ExploreLimits& lim) {
    return subset_construct(a, lim, /*complete=*/true, /*negate_finals=*/true);
}

MultiTrackNfa determinize(const MultiTrackNfa& a, const ExploreLimits& lim) {
    return subset_construct(a, lim, /*complete=*/false, /*negate_finals=*/false);
}

// ------------------------------------------------------------------ project

MultiTrackNfa project(const MultiTrackNfa& a, const std::vector<int>& keep) {
    if (keep.empty()) throw Error("project: keep list must not be empty");
    std::set<int> seen;
    for (int t : keep) {
        if (t < 0 || t >= a.tracks) throw Error("project: track index out of range");
        if (!seen.insert(t).second) throw Error("project: duplicate track index");
    }
    int k = a.tracks;
    int k2 = static_cast<int>(keep.size());
    Letter pad = a.alphabet.pad();
    Letter uni = a.universe();
    auto idx = out_index(a);
    auto fin = a.final_mask();

    MultiTrackNfa out;
    out.tracks = k2;
    out.alphabet = a.alphabet;

    // Intermediate states: (source state, padding mask) to stay inside the
    // valid-convolution universe of the source.
    std::unordered_map<uint64_t, State, detail::U64Hash> intern;
    std::vector<std::pair<State, uint32_t>> info;
    auto get = [&](State s, uint32_t mask) {
        uint64_t key = (static_cast<uint64_t>(mask) << 32) | s;
        auto it = intern.find(key);
        if (it != intern.end()) return it->second;
        State n = out.add_state();
        intern.emplace(key, n);
        info.emplace_back(s, mask);
        return n;
    };
    for (State s : a.initial) out.initial.push_back(get(s, 0));
    out.initial = sorted_unique_states(out.initial);

    // Edges whose kept tracks are entirely padding vanish in the projection;
    // by the end-padding discipline they only occur in a run's suffix, so they
    // act as epsilon edges into the finals (resolved by closure below).
    std::vector<std::pair<State, State>> eps;

    for (State cur = 0; cur < out.num_states; ++cur) {
        auto [s, mask] = info[cur];
        if (fin[s]) out.finals.push_back(cur);
        for (uint32_t ti : idx[s]) {
            Label b = a.transitions[ti].label;
            bool ok = true;
            for (int t = 0; t < k && ok; ++t) {
                if (mask >> t & 1) b[t] = set_intersect(b[t], TrackSet::single(pad));
                if (b[t].empty(uni)) ok = false;
            }
            if (!ok) continue;
            State dst = a.transitions[ti].dst;
            // Split into padding-pure boxes per track.
            std::vector<int> mixed;
            for (int t = 0; t < k; ++t) {
                bool has_pad = b[t].member(pad);
                bool only_pad = has_pad && b[t].count(uni) == 1;
                if (has_pad && !only_pad) mixed.push_back(t);
            }
            for (uint32_t bits = 0; bits < (1u << mixed.size()); ++bits) {
                Label part = b;
                for (size_t i = 0; i < mixed.size(); ++i) {
                    part[mixed[i]] =
                        (bits >> i & 1)
                            ? TrackSet::single(pad)
                            : set_minus(part[mixed[i]], TrackSet::single(pad));
                }
                bool all_pad = true;
                uint32_t mask2 = mask;
                for (int t = 0; t < k; ++t) {
                    if (is_pad_only(part[t], pad))
                        mask2 |= 1u << t;
                    else
                        all_pad = false;
                }
                if (all_pad) continue;
                State ndst = get(dst, mask2);
                bool kept_all_pad = true;
                Label lab(k2);
                for (int i = 0; i < k2; ++i) {
                    lab[i] = part[keep[i]];
                    kept_all_pad &= is_pad_only(lab[i], pad);
                }
                if (kept_all_pad)
                    eps.emplace_back(cur, ndst);
                else
                    out.add_transition(cur, std::move(lab), ndst);
            }
        }
    }

    // Backward closure over the vanished edges.
    std::vector<std::vector<State>> rev(out.num_states);
    for (auto [u, v] : eps) rev[v].push_back(u);
    std::vector<char> fmark(out.num_states, 0);
    std::deque<State> queue;
    for (State f : out.finals) {
        if (!fmark[f]) fmark[f] = 1, queue.push_back(f);
    }
    while (!queue.empty()) {
        State v = queue.front();
        queue.pop_front();
        for (State u : rev[v])
            if (!fmark[u]) fmark[u] = 1, queue.push_back(u);
    }
    out.finals.clear();
    for (State s = 0; s < out.num_states; ++s)
        if (fmark[s]) out.finals.push_back(s);
    return trim(out);
}

// --------------------------------------------------------------------- lift

MultiTrackNfa lift(const MultiTrackNfa& a, int tracks, const std::vector<int>& mapping) {
    if (static_cast<int>(mapping.size()) != a.tracks)
        throw Error("lift: mapping size differs from source track count");
    if (tracks < a.tracks) throw Error("lift: target track count too small");
    std::set<int> seen;
    for (int t : mapping) {
        if (t < 0 || t >= tracks) throw Error("lift: mapped track out of range");
        if (!seen.insert(t).second) throw Error("lift: duplicate mapped track");
    }
    Letter pad = a.alphabet.pad();

    MultiTrackNfa out;
    out.tracks = tracks;
    out.alphabet = a.alphabet;
    out.num_states = a.num_states;
    out.initial = a.initial;
    auto mapped_label = [&](const Label& src) {
        Label lab(tracks, TrackSet::any());
        for (int t = 0; t < a.tracks; ++t) lab[mapping[t]] = src[t];
        return lab;
    };
    for (const auto& t : a.transitions)
        out.add_transition(t.src, mapped_label(t.label), t.dst);

    // After the embedded word ends, its tracks stay padded while the free
    // tracks may continue.
    State ended = out.add_state();
    Label pad_label(tracks, TrackSet::any());
    for (int t = 0; t < a.tracks; ++t) pad_label[mapping[t]] = TrackSet::single(pad);
    for (State f : a.finals) out.add_transition(f, pad_label, ended);
    out.add_transition(ended, pad_label, ended);
    out.finals = a.finals;
    out.finals.push_back(ended);
    return out;
}

MultiTrackNfa compose(const MultiTrackNfa& a, const MultiTrackNfa& b) {
    if (a.tracks != 2 || b.tracks != 2) throw Error("compose needs 2-track relations");
    if (!(a.alphabet == b.alphabet)) throw Error("compose: alphabets differ");
    MultiTrackNfa la = lift(a, 3, {0, 1});
    MultiTrackNfa lb = lift(b, 3, {1, 2});
    return project(product(la, lb), {0, 2});
}

// ------------------------------------------------------- basic relations

MultiTrackNfa identity_relation(const MultiTrackNfa& domain) {
    if (domain.tracks != 1) throw Error("identity_relation needs a 1-track domain");
    Letter uni = domain.universe();
    Letter pad = domain.alphabet.pad();
    MultiTrackNfa out;
    out.tracks = 2;
    out.alphabet = domain.alphabet;
    out.num_states = domain.num_states;
    out.initial = domain.initial;
    out.finals = domain.finals;
    for (const auto& t : domain.transitions) {
        for (Letter l = 0; l < uni; ++l) {
            if (l == pad || !t.label[0].member(l)) continue;
            out.add_transition(t.src, {TrackSet::single(l), TrackSet::single(l)}, t.dst);
        }
    }
    return out;
}

MultiTrackNfa inequality_relation(const Alphabet& a) {
    Letter pad = a.pad();
    MultiTrackNfa out;
    out.tracks = 2;
    out.alphabet = a;
    State eq = out.add_state();
    State neq = out.add_state();
    out.initial = {eq};
    out.finals = {neq};
    for (Letter l = 0; l < a.size(); ++l)
        out.add_transition(eq, {TrackSet::single(l), TrackSet::single(l)}, eq);
    for (Letter l = 0; l <= pad; ++l)
        out.add_transition(eq, {TrackSet::single(l), TrackSet{true, {l}}}, neq);
    out.add_transition(neq, {TrackSet::any(), TrackSet::any()}, neq);
    return out;
}

MultiTrackNfa llex_less_relation(const Alphabet& a) {
    // (u, v) with v strictly below u: v shorter, or same length and
    // lexicographically smaller under the alphabet's letter order.
    Letter pad = a.pad();
    TrackSet nonpad{true, {pad}};
    MultiTrackNfa out;
    out.tracks = 2;
    out.alphabet = a;
    State same = out.add_state();   // prefixes equal so far
    State lt = out.add_state();     // v's prefix smaller at first difference
    State gt = out.add_state();     // v's prefix larger at first difference
    State shorter = out.add_state();  // v ended, u still running
    out.initial = {same};
    out.finals = {lt, shorter};
    for (Letter l = 0; l < a.size(); ++l) {
        out.add_transition(same, {TrackSet::single(l), TrackSet::single(l)}, same);
        if (l > 0) {
            std::vector<Letter> below(l);
            for (Letter i = 0; i < l; ++i) below[i] = i;
            out.add_transition(same, {TrackSet::single(l), TrackSet{false, below}}, lt);
        }
        if (l + 1 < a.size()) {
            std::vector<Letter> above;
            for (Letter i = l + 1; i < a.size(); ++i) above.push_back(i);
            out.add_transition(same, {TrackSet::single(l), TrackSet{false, above}}, gt);
        }
    }
    out.add_transition(same, {nonpad, TrackSet::single(pad)}, shorter);
    out.add_transition(lt, {nonpad, nonpad}, lt);
    out.add_transition(lt, {nonpad, TrackSet::single(pad)}, shorter);
    out.add_transition(gt, {nonpad, nonpad}, gt);
    out.add_transition(gt, {nonpad, TrackSet::single(pad)}, shorter);
    out.add_transition(shorter, {nonpad, TrackSet::single(pad)}, shorter);
    return out;
}

// --------------------------------------------------------------------- trim

MultiTrackNfa trim(const MultiTrackNfa& a) {
    Letter uni = a.universe();
    std::vector<char> usable(a.transitions.size(), 1);
    for (size_t i = 0; i < a.transitions.size(); ++i)
        for (const auto& s : a.transitions[i].label)
            if (s.empty(uni)) usable[i] = 0;

    std::vector<char> reach(a.num_states, 0), prod(a.num_states, 0);
    std::deque<State> q;
    for (State s : a.initial)
        if (!reach[s]) reach[s] = 1, q.push_back(s);
    auto idx = out_index(a);
    while (!q.empty()) {
        State s = q.front();
        q.pop_front();
        for (uint32_t ti : idx[s]) {
            if (!usable[ti]) continue;
            State d = a.transitions[ti].dst;
            if (!reach[d]) reach[d] = 1, q.push_back(d);
        }
    }
    std::vector<std::vector<uint32_t>> rev(a.num_states);
    for (uint32_t i = 0; i < a.transitions.size(); ++i)
        if (usable[i]) rev[a.transitions[i].dst].push_back(i);
    for (State s : a.finals)
        if (!prod[s]) prod[s] = 1, q.push_back(s);
    while (!q.empty()) {
        State s = q.front();
        q.pop_front();
        for (uint32_t ti : rev[s]) {
            State u = a.transitions[ti].src;
            if (!prod[u]) prod[u] = 1, q.push_back(u);
        }
    }

    MultiTrackNfa out;
    out.tracks = a.tracks;
    out.alphabet = a.alphabet;
    std::vector<State> remap(a.num_states, UINT32_MAX);
    for (State s = 0; s < a.num_states; ++s)
        if (reach[s] && prod[s]) remap[s] = out.add_state();
    for (State s : a.initial)
        if (remap[s] != UINT32_MAX) out.initial.push_back(remap[s]);
    for (State s : a.finals)
        if (remap[s] != UINT32_MAX) out.finals.push_back(remap[s]);
    out.initial = sorted_unique_states(out.initial);
    out.finals = sorted_unique_states(out.finals);
    Letter pad = a.alphabet.pad();
    for (uint32_t i = 0; i < a.transitions.size(); ++i) {
        const auto& t = a.transitions[i];
        if (!usable[i] || remap[t.src] == UINT32_MAX || remap[t.dst] == UINT32_MAX)
            continue;
        bool admits_all_pad = true;
        for (const auto& s : t.label)
            if (!s.member(pad)) admits_all_pad = false;
        if (!admits_all_pad) {
            out.transitions.push_back({remap[t.src], remap[t.dst], t.label});
            continue;
        }
        // The all-padding tuple never occurs in a valid convolution; carve it
        // out so downstream hygiene checks see clean labels. The box minus one
        // corner splits into one box per track: pad on the earlier tracks,
        // anything but pad on this one, unchanged after.
        TrackSet pad_only = TrackSet::single(pad);
        for (int k = 0; k < a.tracks; ++k) {
            Label part = t.label;
            for (int j = 0; j < k; ++j) part[j] = pad_only;
            part[k] = set_minus(part[k], pad_only);
            bool empty = false;
            for (const auto& s : part)
                if (s.empty(uni)) empty = true;
            if (!empty)
                out.transitions.push_back({remap[t.src], remap[t.dst], std::move(part)});
        }
    }
    return out;
}

// ------------------------------------------------------- emptiness, image

EmptinessWitness is_empty(const MultiTrackNfa& a, const ExploreLimits& lim) {
    std::vector<int> all(a.tracks);
    for (int t = 0; t < a.tracks; ++t) all[t] = t;
    PositiveComponent pos(a, all);
    auto r = product_emptiness(a.tracks, a.alphabet, {&pos}, lim);
    return {r.witness, r.stats.joint_states};
}

EmptinessWitness includes(const MultiTrackNfa& sup, const MultiTrackNfa& sub,
                          const ExploreLimits& lim) {
    if (sup.tracks != sub.tracks) throw Error("includes: track counts differ");
    if (!(sup.alphabet == sub.alphabet)) throw Error("includes: alphabets differ");
    std::vector<int> all(sub.tracks);
    for (int t = 0; t < sub.tracks; ++t) all[t] = t;
    PositiveComponent in_sub(sub, all);
    ComplementComponent not_sup(sup, all);
    auto r = product_emptiness(sub.tracks, sub.alphabet, {&in_sub, &not_sup}, lim);
    return {r.witness, r.stats.joint_states};
}

ImageResult image(const MultiTrackNfa& rel, const Word& u, size_t max_len) {
    if (rel.tracks != 2) throw Error("image needs a 2-track relation");
    if (max_len < u.size()) throw Error("image: cutoff below |u|");
    Letter pad = rel.alphabet.pad();
    auto idx = out_index(rel);
    auto fin = rel.final_mask();

    // States that can still accept after >= 1 more (pad, letter) steps.
    std::vector<char> live(rel.num_states, 0);
    {
        std::vector<std::vector<State>> rev(rel.num_states);
        for (const auto& t : rel.transitions) {
            if (!t.label[0].member(pad)) continue;
            bool has_letter = false;
            for (Letter y = 0; y < rel.alphabet.size(); ++y)
                has_letter |= t.label[1].member(y);
            if (has_letter) rev[t.dst].push_back(t.src);
        }
        std::deque<State> q;
        std::vector<char> seen(rel.num_states, 0);
        for (State f : rel.finals) seen[f] = 1, q.push_back(f);
        while (!q.empty()) {
            State s = q.front();
            q.pop_front();
            for (State p : rev[s])
                if (!live[p]) {
                    live[p] = 1;
                    if (!seen[p]) seen[p] = 1, q.push_back(p);
                }
        }
    }

    ImageResult res;
    std::set<Word> found;
    std::vector<State> init = sorted_unique_states(rel.initial);

    // Runs the remaining (u letters, pad) tail after v ended at position pos.
    auto tail_accepts = [&](std::vector<State> subset, size_t pos) {
        for (size_t i = pos; i < u.size(); ++i) {
            std::vector<State> next;
            Letter tup[2] = {u[i], pad};
            for (State s : subset)
                for (uint32_t ti : idx[s])
                    if (label_matches(rel.transitions[ti].label, tup))
                        next.push_back(rel.transitions[ti].dst);
            subset = sorted_unique_states(std::move(next));
            if (subset.empty()) return false;
        }
        for (State s : subset)
            if (fin[s]) return true;
        return false;
    };

    Word v;
    std::function<void(std::vector<State>, size_t)> walk =
        [&](std::vector<State> subset, size_t pos) {
            if (subset.empty()) return;
            bool u_done = pos >= u.size();
            if (u_done) {
                for (State s : subset)
                    if (fin[s]) {
                        found.insert(v);
                        break;
                    }
            } else if (tail_accepts(subset, pos)) {
                found.insert(v);
            }
            if (v.size() >= max_len) {
                if (u_done) {
                    for (State s : subset)
                        if (live[s]) res.truncated = true;
                }
                return;
            }
            Letter x = u_done ? pad : u[pos];
            for (Letter y = 0; y < rel.alphabet.size(); ++y) {
                std::vector<State> next;
                Letter tup[2] = {x, y};
                for (State s : subset)
                    for (uint32_t ti : idx[s])
                        if (label_matches(rel.transitions[ti].label, tup))
                            next.push_back(rel.transitions[ti].dst);
                next = sorted_unique_states(std::move(next));
                if (next.empty()) continue;
                v.push_back(y);
                walk(std::move(next), pos + 1);
                v.pop_back();
            }
        };
    walk(init, 0);

    res.words.assign(found.begin(), found.end());
    std::sort(res.words.begin(), res.words.end(), [](const Word& a, const Word& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    return res;
}

}  // namespace strauto
