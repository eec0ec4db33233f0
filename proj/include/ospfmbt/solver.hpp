#pragma once

// Deterministic backtracking solver over small finite-domain variables.
// Conjuncts are SymExpr booleans; axioms are native predicates evaluated on
// complete assignments (used for global conditions such as topology
// connectivity that are cheaper to check in code than to encode).

#include <cstddef>
#include <functional>
#include <vector>

#include "ospfmbt/sym.hpp"

namespace ospfmbt {

using Axiom = std::function<bool(const Assignment&)>;

struct SolveResult {
  bool sat = false;
  Assignment assignment;  // valid only when sat
};

struct SolverStats {
  size_t nodes = 0;      // decision nodes explored
  size_t solutions = 0;  // solutions found (solve_all)
};

// Finds the first solution in deterministic order: variables ascending by id,
// values ascending from each variable's (possibly narrowed) domain.  Returns
// unsat when no assignment satisfies all conjuncts and axioms.
SolveResult solve(const std::vector<SymVar>& vars,
                  const std::vector<SymExprPtr>& conjuncts,
                  const std::vector<Axiom>& axioms = {},
                  SolverStats* stats = nullptr);

// Enumerates all solutions (up to limit) in the same deterministic order.
std::vector<Assignment> solve_all(const std::vector<SymVar>& vars,
                                  const std::vector<SymExprPtr>& conjuncts,
                                  const std::vector<Axiom>& axioms = {},
                                  size_t limit = SIZE_MAX,
                                  SolverStats* stats = nullptr);

}  // namespace ospfmbt
