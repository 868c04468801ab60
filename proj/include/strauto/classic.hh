#pragma once

#include "strauto/logic.hh"
#include "strauto/presentation.hh"

namespace strauto {

struct DecideStats {
    uint64_t peak_automaton_states = 0;   // largest materialized automaton
    uint64_t total_automaton_states = 0;  // summed over materialized automata
    uint64_t peak_subset_states = 0;      // peak live lazy-exploration states
    uint64_t spheres_enumerated = 0;
    uint64_t realizability_calls = 0;
    uint64_t memo_hits = 0;
};

struct Verdict {
    bool value = false;
    DecideStats stats;
    std::vector<std::string> warnings;
};

struct DefinableRelation {
    std::vector<std::string> free_variables;  // first-occurrence order
    MultiTrackNfa automaton;                  // one track per free variable
};

/// Automaton of satisfying assignments of a formula with >= 1 free variable
/// over an injective presentation, built inductively (atoms from the relation
/// automata, eq from the identity, complement/union/projection for the
/// connectives), every intermediate relative to the domain.
DefinableRelation definable_automaton(const Presentation& p, const FormulaPtr& f,
                                      const ExploreLimits& lim = {});

/// Truth of a closed sentence by the inductive automaton construction.
/// Non-injective presentations are canonized internally.
Verdict decide_classic(const Presentation& p, const FormulaPtr& sentence,
                       const ExploreLimits& lim = {});

}  // namespace strauto
