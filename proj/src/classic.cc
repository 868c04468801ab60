#include "strauto/classic.hh"

#include <algorithm>
#include <numeric>

namespace strauto {

namespace {

// Subformula value: either a closed truth value or an automaton over the
// subformula's free variables, tracks ordered by global first occurrence.
struct Val {
    bool is_bool = false;
    bool b = false;
    std::vector<std::string> vars;
    MultiTrackNfa aut;
};

struct Builder {
    const Presentation& p;
    ExploreLimits lim;
    DecideStats stats;
    std::vector<std::string> order;  // every variable by first occurrence
    MultiTrackNfa ident;
    bool domain_nonempty = false;

    Builder(const Presentation& pres, const ExploreLimits& l) : p(pres), lim(l) {
        ident = identity_relation(p.domain);
        domain_nonempty = !is_empty(p.domain, lim).empty();
    }

    void note(const MultiTrackNfa& a, bool subset_built = false) {
        stats.peak_automaton_states = std::max<uint64_t>(stats.peak_automaton_states,
                                                         a.num_states);
        stats.total_automaton_states += a.num_states;
        if (subset_built)
            stats.peak_subset_states = std::max<uint64_t>(stats.peak_subset_states,
                                                          a.num_states);
    }

    void collect_order(const FormulaPtr& f) {
        auto see = [&](const std::string& v) {
            if (std::find(order.begin(), order.end(), v) == order.end())
                order.push_back(v);
        };
        switch (f->kind) {
            case FormulaKind::True:
            case FormulaKind::False: break;
            case FormulaKind::Atom:
            case FormulaKind::Eq:
                for (const auto& v : f->vars) see(v);
                break;
            case FormulaKind::Exists:
            case FormulaKind::Forall: see(f->vars[0]); [[fallthrough]];
            case FormulaKind::Not:
                collect_order(f->child[0]);
                break;
            case FormulaKind::And:
            case FormulaKind::Or:
            case FormulaKind::Implies:
                collect_order(f->child[0]);
                collect_order(f->child[1]);
                break;
        }
    }

    size_t rank(const std::string& v) const {
        auto it = std::find(order.begin(), order.end(), v);
        if (it == order.end()) throw Error("unknown variable: " + v);
        return static_cast<size_t>(it - order.begin());
    }

    // Domain cylinder on every track of `vars`.
    MultiTrackNfa full_relation(const std::vector<std::string>& vars) {
        int k = static_cast<int>(vars.size());
        if (k == 1) return p.domain;
        MultiTrackNfa acc = lift(p.domain, k, {0});
        for (int i = 1; i < k; ++i) acc = product(acc, lift(p.domain, k, {i}));
        return trim(acc);
    }

    // Re-express `v` over the variable set `vars` (a superset of v.vars),
    // constraining the added tracks to the domain.
    MultiTrackNfa expand(const Val& v, const std::vector<std::string>& vars) {
        if (v.vars == vars) return v.aut;
        int k = static_cast<int>(vars.size());
        std::vector<int> mapping;
        for (const auto& x : v.vars) {
            auto it = std::find(vars.begin(), vars.end(), x);
            mapping.push_back(static_cast<int>(it - vars.begin()));
        }
        MultiTrackNfa acc = lift(v.aut, k, mapping);
        for (int i = 0; i < k; ++i) {
            if (std::find(mapping.begin(), mapping.end(), i) != mapping.end()) continue;
            acc = product(acc, lift(p.domain, k, {i}));
        }
        return trim(acc);
    }

    std::vector<std::string> merge_vars(const std::vector<std::string>& a,
                                        const std::vector<std::string>& b) {
        std::vector<std::string> out = a;
        for (const auto& x : b)
            if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
        std::sort(out.begin(), out.end(), [&](const auto& l, const auto& r) {
            return rank(l) < rank(r);
        });
        return out;
    }

    Val eval(const FormulaPtr& f) {
        switch (f->kind) {
            case FormulaKind::True: return {true, true, {}, {}};
            case FormulaKind::False: return {true, false, {}, {}};
            case FormulaKind::Atom: return atom(f);
            case FormulaKind::Eq: return eq(f);
            case FormulaKind::Not: return negate(eval(f->child[0]));
            case FormulaKind::Or: return disjoin(eval(f->child[0]), eval(f->child[1]));
            case FormulaKind::Exists: return exists(f->vars[0], eval(f->child[0]));
            default:
                throw Error("checker expects normalized formulas");
        }
    }

    Val atom(const FormulaPtr& f) {
        auto it = p.relations.find(f->rel);
        if (it == p.relations.end()) throw Error("unknown relation: " + f->rel);
        const NamedRelation& rel = it->second;
        int m = rel.arity;
        if (static_cast<int>(f->vars.size()) != m)
            throw Error("relation " + f->rel + " expects " + std::to_string(m) +
                        " arguments, got " + std::to_string(f->vars.size()));

        // Repeated variables constrain the corresponding tracks to be equal.
        MultiTrackNfa acc = rel.automaton;
        std::vector<int> first(m, -1);
        for (int j = 0; j < m; ++j) {
            int fi = -1;
            for (int i = 0; i < j; ++i)
                if (f->vars[i] == f->vars[j]) {
                    fi = i;
                    break;
                }
            first[j] = fi;
            if (fi >= 0) acc = product(acc, lift(ident, m, {fi, j}));
        }

        // Keep the first occurrence of each variable, in global order.
        std::vector<std::string> vars;
        std::vector<int> keep;
        for (int j = 0; j < m; ++j)
            if (first[j] < 0) {
                vars.push_back(f->vars[j]);
                keep.push_back(j);
            }
        std::vector<size_t> perm(vars.size());
        std::iota(perm.begin(), perm.end(), 0);
        std::sort(perm.begin(), perm.end(),
                  [&](size_t a, size_t b) { return rank(vars[a]) < rank(vars[b]); });
        std::vector<std::string> sorted_vars;
        std::vector<int> sorted_keep;
        for (size_t i : perm) {
            sorted_vars.push_back(vars[i]);
            sorted_keep.push_back(keep[i]);
        }
        Val v;
        v.vars = std::move(sorted_vars);
        v.aut = static_cast<int>(v.vars.size()) == m && std::is_sorted(sorted_keep.begin(),
                                                                       sorted_keep.end())
                    ? trim(acc)
                    : project(acc, sorted_keep);
        note(v.aut);
        return v;
    }

    Val eq(const FormulaPtr& f) {
        const std::string& x = f->vars[0];
        const std::string& y = f->vars[1];
        Val v;
        if (x == y) {
            v.vars = {x};
            v.aut = p.domain;
        } else {
            v.vars = rank(x) < rank(y) ? std::vector<std::string>{x, y}
                                       : std::vector<std::string>{y, x};
            v.aut = ident;  // symmetric, so track order is immaterial
        }
        note(v.aut);
        return v;
    }

    Val negate(Val v) {
        if (v.is_bool) {
            v.b = !v.b;
            return v;
        }
        int k = static_cast<int>(v.vars.size());
        MultiTrackNfa comp = complement(v.aut, lim);
        note(comp, true);
        for (int i = 0; i < k; ++i) comp = product(comp, lift(p.domain, k, {i}));
        v.aut = trim(comp);
        note(v.aut);
        return v;
    }

    Val disjoin(Val a, Val b) {
        if (a.is_bool && b.is_bool) return {true, a.b || b.b, {}, {}};
        if (a.is_bool) std::swap(a, b);
        if (b.is_bool) {
            if (!b.b) return a;
            Val v;
            v.vars = a.vars;
            v.aut = full_relation(a.vars);
            note(v.aut);
            return v;
        }
        Val v;
        v.vars = merge_vars(a.vars, b.vars);
        v.aut = trim(unite(expand(a, v.vars), expand(b, v.vars)));
        note(v.aut);
        return v;
    }

    Val exists(const std::string& x, Val body) {
        if (body.is_bool) return {true, body.b && domain_nonempty, {}, {}};
        auto it = std::find(body.vars.begin(), body.vars.end(), x);
        if (it == body.vars.end()) return body;  // vacuous: assignments unchanged
        int idx = static_cast<int>(it - body.vars.begin());
        if (body.vars.size() == 1) {
            EmptinessWitness w = is_empty(body.aut, lim);
            stats.peak_subset_states =
                std::max(stats.peak_subset_states, w.states_explored);
            return {true, !w.empty(), {}, {}};
        }
        std::vector<int> keep;
        for (int i = 0; i < static_cast<int>(body.vars.size()); ++i)
            if (i != idx) keep.push_back(i);
        Val v;
        v.vars = body.vars;
        v.vars.erase(v.vars.begin() + idx);
        v.aut = project(body.aut, keep);
        note(v.aut);
        return v;
    }
};

}  // namespace

DefinableRelation definable_automaton(const Presentation& p, const FormulaPtr& f,
                                      const ExploreLimits& lim) {
    p.check();
    if (!p.injective())
        throw Error("assignment automata need an injective presentation; canonize first");
    if (free_variables(f).empty())
        throw Error("formula is closed; use the sentence checker");
    Builder b(p, lim);
    b.collect_order(f);
    Val v = b.eval(normalize(f));
    if (v.is_bool) throw Error("internal: open formula evaluated to a truth value");
    return {v.vars, v.aut};
}

Verdict decide_classic(const Presentation& p, const FormulaPtr& sentence,
                       const ExploreLimits& lim) {
    p.check();
    if (!free_variables(sentence).empty())
        throw Error("formula has free variables; the checker needs a sentence");
    const Presentation& q = p;
    std::optional<Presentation> canon;
    if (!p.injective()) canon = canonize(p, lim);
    const Presentation& use = canon ? *canon : q;

    Builder b(use, lim);
    b.collect_order(sentence);
    Val v = b.eval(normalize(sentence));
    if (!v.is_bool) throw Error("internal: sentence evaluated to an open relation");
    Verdict verdict;
    verdict.value = v.b;
    verdict.stats = b.stats;
    return verdict;
}

}  // namespace strauto
