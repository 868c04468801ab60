#include "strauto/presentation.hh"

#include <algorithm>
#include <deque>
#include <memory>
#include <numeric>
#include <sstream>

#include "strauto/counting.hh"
#include "strauto/product.hh"

namespace strauto {

namespace {

bool same_alphabet(const Alphabet& a, const Alphabet& b) {
    return a.letters == b.letters && a.pad_name == b.pad_name;
}

std::vector<int> range(int from, int to) {
    std::vector<int> v(to - from);
    std::iota(v.begin(), v.end(), from);
    return v;
}

// Component stack for one emptiness query against the product engine.
struct EngineRun {
    std::vector<std::unique_ptr<Component>> own;
    std::vector<Component*> ptrs;

    void inside(const MultiTrackNfa& a, std::vector<int> tracks) {
        own.push_back(std::make_unique<PositiveComponent>(a, std::move(tracks)));
        ptrs.push_back(own.back().get());
    }
    void outside(const MultiTrackNfa& a, std::vector<int> tracks) {
        own.push_back(std::make_unique<ComplementComponent>(a, std::move(tracks)));
        ptrs.push_back(own.back().get());
    }
    ProductEmptiness run(int tracks, const Alphabet& alphabet, const ExploreLimits& lim) {
        return product_emptiness(tracks, alphabet, ptrs, lim);
    }
};

// A usable transition whose label admits the all-padding tuple, if any.
std::optional<std::string> usable_all_pad_transition(const MultiTrackNfa& a) {
    Letter uni = a.universe();
    Letter pad = a.alphabet.pad();
    std::vector<char> nonempty(a.transitions.size(), 1);
    for (size_t i = 0; i < a.transitions.size(); ++i)
        for (const auto& s : a.transitions[i].label)
            if (s.empty(uni)) nonempty[i] = 0;

    std::vector<char> reach(a.num_states, 0), prod(a.num_states, 0);
    std::deque<State> q;
    for (State s : a.initial)
        if (!reach[s]) reach[s] = 1, q.push_back(s);
    while (!q.empty()) {
        State s = q.front();
        q.pop_front();
        for (size_t i = 0; i < a.transitions.size(); ++i)
            if (nonempty[i] && a.transitions[i].src == s && !reach[a.transitions[i].dst])
                reach[a.transitions[i].dst] = 1, q.push_back(a.transitions[i].dst);
    }
    for (State s : a.finals)
        if (!prod[s]) prod[s] = 1, q.push_back(s);
    while (!q.empty()) {
        State s = q.front();
        q.pop_front();
        for (size_t i = 0; i < a.transitions.size(); ++i)
            if (nonempty[i] && a.transitions[i].dst == s && !prod[a.transitions[i].src])
                prod[a.transitions[i].src] = 1, q.push_back(a.transitions[i].src);
    }

    for (size_t i = 0; i < a.transitions.size(); ++i) {
        const Transition& t = a.transitions[i];
        if (!nonempty[i] || !reach[t.src] || !prod[t.dst]) continue;
        bool all_pad = true;
        for (const auto& s : t.label)
            if (!s.member(pad)) all_pad = false;
        if (all_pad) {
            std::ostringstream os;
            os << "transition " << t.src << " -> " << t.dst
               << " admits the all-padding tuple on a useful path";
            return os.str();
        }
    }
    return std::nullopt;
}

}  // namespace

void Presentation::check() const {
    alphabet.check();
    if (domain.tracks != 1) throw Error("domain automaton must have one track");
    if (!same_alphabet(domain.alphabet, alphabet))
        throw Error("domain automaton alphabet differs from the presentation alphabet");
    domain.check();
    if (equality) {
        if (equality->tracks != 2) throw Error("equality automaton must have two tracks");
        if (!same_alphabet(equality->alphabet, alphabet))
            throw Error("equality automaton alphabet differs from the presentation alphabet");
        equality->check();
    }
    for (const auto& [name, rel] : relations) {
        if (name.empty()) throw Error("relation names must be non-empty");
        if (rel.arity < 1) throw Error("relation arity must be positive: " + name);
        if (rel.automaton.tracks != rel.arity)
            throw Error("relation automaton track count differs from arity: " + name);
        if (!same_alphabet(rel.automaton.alphabet, alphabet))
            throw Error("relation automaton alphabet differs from the presentation: " + name);
        rel.automaton.check();
    }
}

ValidationReport validate(const Presentation& p, const ExploreLimits& lim) {
    p.check();
    ValidationReport report;
    auto& findings = report.findings;

    // Track-wise containment of every relation (and the congruence) in the
    // padded domain language.
    auto containment = [&](const std::string& label, const MultiTrackNfa& rel) {
        Finding f;
        f.check = "domain-containment";
        f.relation = label;
        f.ok = true;
        for (int i = 0; i < rel.tracks && f.ok; ++i) {
            EngineRun run;
            run.inside(rel, range(0, rel.tracks));
            run.outside(p.domain, {i});
            ProductEmptiness r = run.run(rel.tracks, p.alphabet, lim);
            if (!r.empty()) {
                f.ok = false;
                f.counterexample = r.witness;
                std::ostringstream os;
                os << "accepted tuple whose track " << i << " lies outside the domain";
                f.detail = os.str();
            }
        }
        findings.push_back(std::move(f));
    };
    if (p.equality) containment("=", *p.equality);
    for (const auto& [name, rel] : p.relations) containment(name, rel.automaton);

    // No automaton may use a transition admitting the all-padding tuple.
    auto hygiene = [&](const std::string& label, const MultiTrackNfa& a) {
        Finding f;
        f.check = "no-all-pad";
        f.relation = label;
        auto bad = usable_all_pad_transition(a);
        f.ok = !bad.has_value();
        if (bad) f.detail = *bad;
        findings.push_back(std::move(f));
    };
    hygiene("domain", p.domain);
    if (p.equality) hygiene("=", *p.equality);
    for (const auto& [name, rel] : p.relations) hygiene(name, rel.automaton);

    if (p.equality) {
        const MultiTrackNfa& eq = *p.equality;
        MultiTrackNfa ident = identity_relation(p.domain);

        {
            Finding f;
            f.check = "reflexive";
            EngineRun run;  // some (u,u) with u in the domain is missing
            run.inside(ident, {0, 1});
            run.outside(eq, {0, 1});
            ProductEmptiness r = run.run(2, p.alphabet, lim);
            f.ok = r.empty();
            if (!f.ok) {
                f.counterexample = r.witness;
                f.detail = "domain element not equal to itself";
            }
            findings.push_back(std::move(f));
        }
        {
            Finding f;
            f.check = "symmetric";
            MultiTrackNfa swapped = project(eq, {1, 0});
            EngineRun run;
            run.inside(swapped, {0, 1});
            run.outside(eq, {0, 1});
            ProductEmptiness r = run.run(2, p.alphabet, lim);
            f.ok = r.empty();
            if (!f.ok) {
                f.counterexample = r.witness;
                f.detail = "pair equal one way only";
            }
            findings.push_back(std::move(f));
        }
        {
            Finding f;
            f.check = "transitive";
            MultiTrackNfa two_step = compose(eq, eq);
            EngineRun run;
            run.inside(two_step, {0, 1});
            run.outside(eq, {0, 1});
            ProductEmptiness r = run.run(2, p.alphabet, lim);
            f.ok = r.empty();
            if (!f.ok) {
                f.counterexample = r.witness;
                f.detail = "two-step equality chain not collapsed";
            }
            findings.push_back(std::move(f));
        }

        // Congruence: replacing every tuple component by an equal word stays
        // inside the relation.
        for (const auto& [name, rel] : p.relations) {
            int m = rel.arity;
            Finding f;
            f.check = "congruence-compat";
            f.relation = name;
            EngineRun run;
            run.inside(rel.automaton, range(0, m));
            for (int i = 0; i < m; ++i) run.inside(eq, {i, m + i});
            run.outside(rel.automaton, range(m, 2 * m));
            ProductEmptiness r = run.run(2 * m, p.alphabet, lim);
            f.ok = r.empty();
            if (!f.ok) {
                f.counterexample = r.witness;
                f.detail =
                    "tuple in the relation with an equal counterpart outside it "
                    "(first half in, second half out)";
            }
            findings.push_back(std::move(f));
        }

        // Injectivity is informational: equality may legitimately glue words.
        {
            Finding f;
            f.check = "injectivity";
            MultiTrackNfa ident_all = identity_relation(p.domain);
            EngineRun run;  // a pair of distinct equal words
            run.inside(eq, {0, 1});
            run.outside(ident_all, {0, 1});
            ProductEmptiness r = run.run(2, p.alphabet, lim);
            f.ok = r.empty();
            report.injective = f.ok;
            if (!f.ok) {
                f.counterexample = r.witness;
                f.detail = "distinct words identified by the congruence";
            }
            findings.push_back(std::move(f));
        }
    } else {
        Finding f;
        f.check = "injectivity";
        f.ok = true;
        f.detail = "no congruence automaton; words stand for themselves";
        report.injective = true;
        findings.push_back(std::move(f));
    }

    report.passed = true;
    for (const Finding& f : findings)
        if (f.check != "injectivity" && !f.ok) report.passed = false;

    // Notes on legitimate but noteworthy shapes.
    EngineRun empty_check;
    empty_check.inside(p.domain, {0});
    if (empty_check.run(1, p.alphabet, lim).empty())
        report.notes.push_back("the domain language is empty");
    else if (accepts(p.domain, std::vector<Word>{Word{}}))
        report.notes.push_back("the empty word is a domain element");
    return report;
}

MultiTrackNfa gaifman_automaton(const Presentation& p) {
    p.check();
    MultiTrackNfa acc(2, p.alphabet);
    bool any = false;
    for (const auto& [name, rel] : p.relations) {
        if (rel.arity < 2) continue;
        for (int i = 0; i < rel.arity; ++i)
            for (int j = 0; j < rel.arity; ++j) {
                if (i == j) continue;
                MultiTrackNfa pr = project(rel.automaton, {i, j});
                acc = any ? unite(acc, pr) : pr;
                any = true;
            }
    }
    if (!any) return acc;
    MultiTrackNfa distinct =
        p.equality ? complement(*p.equality) : inequality_relation(p.alphabet);
    return trim(product(acc, distinct));
}

Presentation canonize(const Presentation& p, const ExploreLimits& lim) {
    p.check();
    if (!p.equality) return p;
    const MultiTrackNfa& eq = *p.equality;

    // Keep the length-lexicographically least member of every class: drop any
    // u with an equal v < u.
    MultiTrackNfa greater = project(llex_less_relation(p.alphabet), {1, 0});
    MultiTrackNfa bad = project(product(eq, greater), {0});
    MultiTrackNfa good = complement(bad, lim);

    Presentation out;
    out.alphabet = p.alphabet;
    out.domain = trim(product(p.domain, good));

    for (const auto& [name, rel] : p.relations) {
        int m = rel.arity;
        // Saturate through the congruence (one hop per track suffices once
        // equality is transitive), then restrict every track to the survivors.
        MultiTrackNfa acc = lift(rel.automaton, 2 * m, range(0, m));
        for (int i = 0; i < m; ++i) acc = product(acc, lift(eq, 2 * m, {i, m + i}));
        MultiTrackNfa sat = project(acc, range(m, 2 * m));
        for (int i = 0; i < m; ++i) sat = product(sat, lift(out.domain, m, {i}));
        out.relations[name] = {m, trim(sat)};
    }
    return out;
}

DegreeResult max_degree(const Presentation& p, uint64_t cap, const ExploreLimits& lim) {
    p.check();
    if (!p.injective())
        throw Error("degree computation needs an injective presentation; canonize first");
    if (cap == 0) throw Error("degree cap must be positive");
    MultiTrackNfa g = gaifman_automaton(p);
    OutDegreeResult r = max_out_degree(g, cap, lim);

    DegreeResult out;
    out.cap = cap;
    out.bounded = !r.exceeds_cap;
    out.degree = r.value;
    out.witness = r.witness;

    if (r.witness) {  // independent verification by direct neighbor listing
        ImageResult img = image(g, *r.witness, neighbor_length_bound(g, r.witness->size()));
        if (out.bounded) {
            if (img.truncated || img.words.size() != out.degree)
                throw Error("degree witness failed neighbor-count verification");
        } else if (!img.truncated && img.words.size() <= cap) {
            throw Error("degree cap witness failed neighbor-count verification");
        }
    }
    return out;
}

ImageResult neighbors(const Presentation& p, const Word& u, size_t max_len) {
    p.check();
    if (!p.injective())
        throw Error("neighbor listing needs an injective presentation; canonize first");
    if (!accepts(p.domain, std::vector<Word>{u}))
        throw Error("word is not in the domain: " + word_to_string(p.alphabet, u));
    MultiTrackNfa g = gaifman_automaton(p);
    return image(g, u, std::max(max_len, u.size()));
}

size_t neighbor_length_bound(const MultiTrackNfa& gaifman, size_t u_len) {
    // A neighbor longer than |u| + |states| repeats a state while the left
    // track pads, so it pumps to neighbors of every greater length.
    return u_len + gaifman.num_states + 1;
}

std::vector<GrowthPoint> growth_series(const Presentation& p, int radius,
                                       uint64_t cap_per_sphere,
                                       const ExploreLimits& lim) {
    p.check();
    if (!p.injective())
        throw Error("growth computation needs an injective presentation; canonize first");
    if (radius < 0) throw Error("growth radius must be >= 0");
    if (cap_per_sphere == 0) throw Error("growth cap must be positive");

    DegreeResult deg = max_degree(p, 64, lim);
    if (!deg.bounded)
        throw Error("growth computation needs a bounded-degree presentation");
    uint64_t delta = deg.degree;

    MultiTrackNfa g = gaifman_automaton(p);
    MultiTrackNfa within = identity_relation(p.domain);  // distance <= 0

    std::vector<GrowthPoint> out;
    for (int n = 0; n <= radius; ++n) {
        if (n > 0) within = trim(unite(within, compose(within, g)));
        // Balls hold at most 1 + delta + ... + delta^n elements.
        uint64_t geo = 1, term = 1;
        for (int i = 1; i <= n && geo < cap_per_sphere; ++i) {
            term = (delta != 0 && term > cap_per_sphere / delta) ? cap_per_sphere
                                                                 : term * delta;
            geo = std::min(cap_per_sphere, geo + term);
            if (delta == 0) break;
        }
        uint64_t cap = std::min(cap_per_sphere, geo);
        OutDegreeResult r = max_out_degree(within, cap, lim);
        GrowthPoint pt;
        pt.saturated = r.exceeds_cap;
        pt.value = std::max<uint64_t>(static_cast<uint64_t>(n), r.value);
        out.push_back(pt);
    }
    return out;
}

GrowthPoint growth(const Presentation& p, int radius, uint64_t cap_per_sphere,
                   const ExploreLimits& lim) {
    return growth_series(p, radius, cap_per_sphere, lim).back();
}

}  // namespace strauto
