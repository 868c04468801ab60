#pragma once

#include <array>

#include "strauto/logic.hh"
#include "strauto/presentation.hh"

namespace strauto {

struct TuringMachine {
    std::vector<std::string> states;
    std::string initial;
    std::vector<std::string> accepting;
    std::vector<std::string> input_alphabet;  // subset of tape_alphabet
    std::vector<std::string> tape_alphabet;
    std::string blank;                        // in tape, not in input

    struct Rule {
        std::string state, read, next_state, write;
        char move = 'S';  // L | R | S
    };
    std::vector<Rule> rules;

    void check() const;  // deterministic; accepting states have no rules
    const Rule* rule_for(const std::string& state, const std::string& read) const;
    bool is_accepting(const std::string& state) const;
};

struct ReductionOutput {
    Presentation presentation;
    FormulaPtr sentence;
    std::string construction;  // "expspace" | "2expspace"
    int n = 0;                 // input length
    std::optional<int> m_override;
};

/// Window consistency: for equal-length configurations u,v (head symbol
/// embedded in the tape string), v is the successor of u iff every aligned
/// pair of 3-letter windows of #u#, #v# is listed here.
using Window = std::array<std::string, 3>;
std::vector<std::pair<Window, Window>> local_consistency_relation(const TuringMachine& m);

/// Presentation + closed sentence true iff the machine accepts the input
/// within tape space 2^n, n = input length.
ReductionOutput expspace_reduction(const TuringMachine& m,
                                   const std::vector<std::string>& input);

/// The doubly exponential variant: counters of length m = 2^n address a tape
/// of 2^m cells; m_override in {1,2,3} substitutes a desk-scale m.
ReductionOutput twoexpspace_reduction(const TuringMachine& m,
                                      const std::vector<std::string>& input,
                                      std::optional<int> m_override = {});

}  // namespace strauto
