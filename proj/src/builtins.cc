#include "strauto/builtins.hh"

namespace strauto {

namespace {

// Label helpers for hand-built automata.
Label singles(std::initializer_list<Letter> letters) {
    Label lab;
    for (Letter l : letters) lab.push_back(TrackSet::single(l));
    return lab;
}

// (ℕ, succ) as unary words: aⁿ with succ = {(aⁿ, aⁿ⁺¹)}; equality is spelled
// out explicitly rather than left implicit.
Presentation nat_succ() {
    Presentation p;
    p.alphabet.letters = {"a"};
    Letter a = 0, pad = p.alphabet.pad();

    MultiTrackNfa dom(1, p.alphabet);
    dom.add_state(true, true);
    dom.add_transition(0, singles({a}), 0);
    p.domain = dom;

    p.equality = identity_relation(dom);

    MultiTrackNfa succ(2, p.alphabet);
    succ.add_state(true, false);
    succ.add_state(false, true);
    succ.add_transition(0, singles({a, a}), 0);
    succ.add_transition(0, singles({pad, a}), 1);
    p.relations["succ"] = {2, succ};
    return p;
}

// ({0,1}*, s0, s1, pre): successor-by-appending and the prefix order.
Presentation prefix() {
    Presentation p;
    p.alphabet.letters = {"0", "1"};
    Letter z = 0, o = 1, pad = p.alphabet.pad();

    MultiTrackNfa dom(1, p.alphabet);
    dom.add_state(true, true);
    dom.add_transition(0, singles({z}), 0);
    dom.add_transition(0, singles({o}), 0);
    p.domain = dom;

    auto append = [&](Letter b) {
        MultiTrackNfa r(2, p.alphabet);
        r.add_state(true, false);
        r.add_state(false, true);
        r.add_transition(0, singles({z, z}), 0);
        r.add_transition(0, singles({o, o}), 0);
        r.add_transition(0, singles({pad, b}), 1);
        return r;
    };
    p.relations["s0"] = {2, append(z)};
    p.relations["s1"] = {2, append(o)};

    MultiTrackNfa pre(2, p.alphabet);
    pre.add_state(true, true);   // equal so far
    pre.add_state(false, true);  // left ended, right continues
    pre.add_transition(0, singles({z, z}), 0);
    pre.add_transition(0, singles({o, o}), 0);
    for (Letter b : {z, o}) {
        pre.add_transition(0, singles({pad, b}), 1);
        pre.add_transition(1, singles({pad, b}), 1);
    }
    p.relations["pre"] = {2, pre};
    return p;
}

// The tree on {0,1}*${0,1}* where the marker walks right one letter per step
// and, once at the end, restarts on each extension: an edge set
//   {(u$bv, ub$v)} ∪ {(u$, $ub)}.
Presentation intermediate_tree() {
    Presentation p;
    p.alphabet.letters = {"0", "1", "$"};
    Letter z = 0, o = 1, m = 2, pad = p.alphabet.pad();

    MultiTrackNfa dom(1, p.alphabet);
    dom.add_state(true, false);
    dom.add_state(false, true);
    dom.add_transition(0, singles({z}), 0);
    dom.add_transition(0, singles({o}), 0);
    dom.add_transition(0, singles({m}), 1);
    dom.add_transition(1, singles({z}), 1);
    dom.add_transition(1, singles({o}), 1);
    p.domain = dom;

    // Marker steps right: u$bv -> ub$v, remembering b across the swap.
    MultiTrackNfa step(2, p.alphabet);
    step.add_state(true, false);   // 0: common prefix u
    step.add_state(false, false);  // 1: saw ($,0)
    step.add_state(false, false);  // 2: saw ($,1)
    step.add_state(false, true);   // 3: common suffix v
    step.add_transition(0, singles({z, z}), 0);
    step.add_transition(0, singles({o, o}), 0);
    step.add_transition(0, singles({m, z}), 1);
    step.add_transition(0, singles({m, o}), 2);
    step.add_transition(1, singles({z, m}), 3);
    step.add_transition(2, singles({o, m}), 3);
    step.add_transition(3, singles({z, z}), 3);
    step.add_transition(3, singles({o, o}), 3);

    // Marker restarts on an extension: u$ -> $ub; the right word is the left
    // one shifted by the leading $, so remember the previous left letter.
    MultiTrackNfa ext(2, p.alphabet);
    ext.add_state(true, false);   // 0: nothing read
    ext.add_state(false, false);  // 1: previous left letter 0
    ext.add_state(false, false);  // 2: previous left letter 1
    ext.add_state(false, false);  // 3: left exhausted up to $
    ext.add_state(false, true);   // 4: extension letter read
    ext.add_transition(0, singles({z, m}), 1);
    ext.add_transition(0, singles({o, m}), 2);
    ext.add_transition(0, singles({m, m}), 3);
    ext.add_transition(1, singles({z, z}), 1);
    ext.add_transition(1, singles({o, z}), 2);
    ext.add_transition(1, singles({m, z}), 3);
    ext.add_transition(2, singles({z, o}), 1);
    ext.add_transition(2, singles({o, o}), 2);
    ext.add_transition(2, singles({m, o}), 3);
    ext.add_transition(3, singles({pad, z}), 4);
    ext.add_transition(3, singles({pad, o}), 4);
    p.relations["E"] = {2, unite(step, ext)};
    return p;
}

// ({a,b}*, E_n) with E_n = {(uw, vw) : |u| = |v| = n}: words of length >= n
// paired with every word agreeing beyond the first n positions.
Presentation block_flip(int n) {
    Presentation p;
    p.alphabet.letters = {"a", "b"};
    Letter a = 0, b = 1;
    Letter pad = p.alphabet.pad();

    MultiTrackNfa dom(1, p.alphabet);
    dom.add_state(true, true);
    dom.add_transition(0, singles({a}), 0);
    dom.add_transition(0, singles({b}), 0);
    p.domain = dom;

    TrackSet nonpad;
    nonpad.exclude = true;
    nonpad.items = {pad};

    MultiTrackNfa rel(2, p.alphabet);
    for (int i = 0; i < n; ++i) {
        rel.add_state(i == 0, false);
        rel.add_transition(i, {nonpad, nonpad}, i + 1);
    }
    rel.add_state(n == 0, true);
    rel.add_transition(n, singles({a, a}), n);
    rel.add_transition(n, singles({b, b}), n);
    p.relations["E"] = {2, rel};
    return p;
}

}  // namespace

Presentation builtin_presentation(const std::string& name) {
    if (name == "nat-succ") return nat_succ();
    if (name == "prefix") return prefix();
    if (name == "intermediate-tree") return intermediate_tree();
    if (name == "e1") return block_flip(1);
    if (name == "e2") return block_flip(2);
    throw Error("unknown builtin presentation: " + name);
}

std::vector<std::string> builtin_names() {
    return {"nat-succ", "prefix", "intermediate-tree", "e1", "e2"};
}

}  // namespace strauto
