#pragma once

#include <memory>
#include <string>
#include <vector>

#include "strauto/nfa.hh"

namespace strauto {

enum class FormulaKind {
    True,
    False,
    Atom,     // rel_name(vars...)
    Eq,       // vars[0] = vars[1]
    Not,      // child[0]
    And,      // child[0] & child[1]
    Or,       // child[0] | child[1]
    Implies,  // child[0] -> child[1]
    Exists,   // E vars[0]. child[0]
    Forall,   // A vars[0]. child[0]
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
    FormulaKind kind = FormulaKind::True;
    std::string rel;                 // Atom only
    std::vector<std::string> vars;   // Atom args; Eq operands; quantified var
    std::vector<FormulaPtr> child;   // 1 for Not/quantifiers, 2 for binary
};

FormulaPtr mk_true();
FormulaPtr mk_false();
FormulaPtr mk_atom(std::string rel, std::vector<std::string> vars);
FormulaPtr mk_eq(std::string a, std::string b);
FormulaPtr mk_not(FormulaPtr f);
FormulaPtr mk_and(FormulaPtr a, FormulaPtr b);
FormulaPtr mk_or(FormulaPtr a, FormulaPtr b);
FormulaPtr mk_implies(FormulaPtr a, FormulaPtr b);
FormulaPtr mk_exists(std::string v, FormulaPtr f);
FormulaPtr mk_forall(std::string v, FormulaPtr f);

/// Grammar: true | false | name(v,...) | v = v | !f | f & f | f | f | f -> f |
/// E v. f | A v. f, precedence ! > & > | > ->, quantifier bodies extend as far
/// right as possible, parentheses allowed. Errors carry line:column positions.
FormulaPtr parse_formula(const std::string& text);

/// Re-parseable rendering (parse(format(f)) is structurally identical).
std::string format_formula(const FormulaPtr& f);

/// Free variables in order of first occurrence.
std::vector<std::string> free_variables(const FormulaPtr& f);

int quantifier_depth(const FormulaPtr& f);

struct FragmentClass {
    enum Tag { Sigma, Pi, Unclassified } tag = Unclassified;
    int level = 0;  // sigma/pi index; quantifier-free reports Sigma 0
};

/// Prenex-shape classification; non-prenex formulas are Unclassified.
FragmentClass classify_fragment(const FormulaPtr& f);

/// Rewrites to {not, or, exists, atoms, eq, true, false} preserving semantics.
FormulaPtr normalize(const FormulaPtr& f);

/// Formula of size O(m) with free variables x,y defining the 2^m-fold
/// composition of the named binary relation. Fresh variables are suffixed with
/// the nesting level; quantifier depth is 3m.
FormulaPtr power_path_formula(const std::string& rel, int m, const std::string& x,
                              const std::string& y);

/// Plain n-step composition: E z1...z_{n-1}. rel(x,z1) & ... & rel(z_{n-1},y).
FormulaPtr unary_path_formula(const std::string& rel, int n, const std::string& x,
                              const std::string& y);

}  // namespace strauto
