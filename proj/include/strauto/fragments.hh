#pragma once

#include "strauto/classic.hh"

namespace strauto {

struct PrenexForm {
    std::vector<std::pair<bool, std::string>> prefix;  // (is_exists, variable)
    FormulaPtr matrix;                                 // quantifier-free
};

/// Standard prenexing with fresh-variable renaming. Used for fragment
/// dispatch; deciders evaluate the prenexed form, oracles the original.
PrenexForm prenex(const FormulaPtr& f);

/// Existential sentences: disjunctive normal form of the matrix, one lazy
/// product emptiness per disjunct. A DNF size guard falls back to the classic
/// engine with a warning. Throws Error on non-sigma1 input.
Verdict decide_sigma1(const Presentation& p, const FormulaPtr& sentence,
                      const ExploreLimits& lim = {});

/// exists*-forall* sentences via exists x. not exists y. not(matrix): the inner
/// automaton is materialized, its complement is explored lazily inside the
/// outer existential product, never stored. Throws Error on non-sigma2 input.
Verdict decide_sigma2(const Presentation& p, const FormulaPtr& sentence,
                      const ExploreLimits& lim = {});

}  // namespace strauto
