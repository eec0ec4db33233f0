#pragma once

// Concolic execution support: a context that records the path constraint of a
// concrete run through instrumented branch points, and a generic depth-first
// explorer that enumerates all feasible paths of a deterministic program by
// re-solving negated branch prefixes (most recent branch first).

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ospfmbt/solver.hpp"
#include "ospfmbt/sym.hpp"

namespace ospfmbt {

// One recorded step of the path constraint.  A branch step says: at site
// `site` the condition `expr` evaluated concretely to `taken`.  A pin step
// (concretization) says: the run used the concrete value of `expr`, so the
// path is only replayable under expr == that value.
struct Conjunct {
  int site = 0;
  bool taken = false;  // branches: concrete outcome; pins: always true
  bool is_pin = false;
  int pinned = 0;      // pins: the concrete value expr was pinned to
  SymExprPtr expr;     // branches: the condition; pins: Eq(var-expr, value)
  SymExprPtr formula() const { return taken ? expr : sx_not(expr); }
};

struct PathConstraint {
  std::vector<Conjunct> conjuncts;
  std::vector<SymExprPtr> formulas() const;
};

// Path identity: ordered (site, outcome) pairs.  Branch steps contribute
// (site, 0/1); pin steps contribute (~site, pinned value) so that paths
// differing only in a concretized tie-break value stay distinct.
struct PathSig {
  std::vector<std::pair<int, int>> steps;
  bool operator<(const PathSig& o) const { return steps < o.steps; }
  bool operator==(const PathSig& o) const { return steps == o.steps; }
  std::string to_string() const;
};

class ConcolicContext {
 public:
  explicit ConcolicContext(Assignment assignment) : assignment_(std::move(assignment)) {}

  // Records the branch when the condition is symbolic and returns its
  // concrete outcome.  Concrete conditions are passed through untouched so
  // they never appear in the path constraint.
  bool take(int site, const SymCond& cond);

  // Concretization by pinning: records expr == current-value so later
  // assignments that follow this path agree with every value the run used
  // outside the branch vocabulary (e.g. checksum tie-breaks).  Affine
  // expressions are normalized to pin the underlying variable; duplicate
  // pins of the same variable/value are dropped.
  void pin(int site, const SymInt& value);

  const PathConstraint& constraint() const { return constraint_; }
  const Assignment& assignment() const { return assignment_; }
  PathSig signature() const;

 private:
  Assignment assignment_;
  PathConstraint constraint_;
};

// Convenience wrappers so model code reads the same with or without a context.
inline bool take(ConcolicContext* ctx, int site, const SymCond& cond) {
  return ctx ? ctx->take(site, cond) : cond.v;
}
inline void pin(ConcolicContext* ctx, int site, const SymInt& value) {
  if (ctx) ctx->pin(site, value);
}

struct ExploreLimits {
  size_t max_paths = 200000;  // explored-path cap; exceeding it sets truncated
};

template <class Payload>
struct ExploredPath {
  Assignment assignment;
  PathConstraint constraint;
  PathSig sig;
  Payload payload;
};

template <class Payload>
struct ExploreResult {
  std::vector<ExploredPath<Payload>> paths;
  size_t solver_calls = 0;
  size_t unsat_candidates = 0;
  size_t duplicate_paths = 0;
  bool truncated = false;
};

// Thrown by programs under exploration to declare the current path invalid
// (e.g. an assignment that decodes to a malformed topology); the explorer
// drops the path but still expands alternatives from its recorded prefix.
struct PathRejected : std::runtime_error {
  explicit PathRejected(const std::string& what) : std::runtime_error(what) {}
};

// Enumerates all feasible paths of `program`, a deterministic callable
// Payload(ConcolicContext&).  Exploration is depth-first, negating the most
// recent conjunct of the latest path first; candidate paths are deduplicated
// by signature; `base` constraints and `axioms` restrict every assignment.
//
// Two-way branch conjuncts are settled once both outcomes are queued.  Pin
// conjuncts are multi-valued: negating one excludes the observed value but
// leaves the position open (candidate depth stays at the pin), so successive
// candidates accumulate exclusions until the variable's domain is exhausted.
template <class Payload, class Program>
ExploreResult<Payload> explore(const std::vector<SymVar>& vars,
                               Program&& program,
                               const std::vector<SymExprPtr>& base = {},
                               const std::vector<Axiom>& axioms = {},
                               const ExploreLimits& limits = {}) {
  ExploreResult<Payload> result;
  struct Candidate {
    std::vector<SymExprPtr> formulas;  // base + accumulated prefix decisions
    size_t depth;                      // run-conjunct positions considered settled
  };
  std::vector<Candidate> stack;
  stack.push_back(Candidate{base, 0});
  std::vector<PathSig> seen;  // kept sorted

  auto seen_insert = [&seen](const PathSig& sig) {
    auto it = std::lower_bound(seen.begin(), seen.end(), sig);
    if (it != seen.end() && *it == sig) return false;
    seen.insert(it, sig);
    return true;
  };

  while (!stack.empty()) {
    Candidate cand = std::move(stack.back());
    stack.pop_back();
    result.solver_calls++;
    SolveResult sr = solve(vars, cand.formulas, axioms);
    if (!sr.sat) {
      result.unsat_candidates++;
      continue;
    }
    if (result.paths.size() >= limits.max_paths) {
      result.truncated = true;
      break;
    }
    ConcolicContext ctx(sr.assignment);
    bool rejected = false;
    Payload payload{};
    try {
      payload = program(ctx);
    } catch (const PathRejected&) {
      rejected = true;
    }
    const PathConstraint& pc = ctx.constraint();
    PathSig sig = ctx.signature();
    if (!seen_insert(sig)) {
      result.duplicate_paths++;
      continue;
    }
    // Expand alternatives for positions at or past the candidate's settled
    // prefix; pushing ascending j makes the most recent negation pop first.
    // Child constraints extend the inherited formulas (never rebuilt from
    // scratch) so pin exclusions accumulate across rounds.
    for (size_t j = cand.depth; j < pc.conjuncts.size(); ++j) {
      Candidate child;
      child.formulas = cand.formulas;
      for (size_t i = cand.depth; i < j; ++i) {
        child.formulas.push_back(pc.conjuncts[i].formula());
      }
      child.formulas.push_back(sx_not(pc.conjuncts[j].formula()));
      child.depth = pc.conjuncts[j].is_pin ? j : j + 1;
      stack.push_back(std::move(child));
    }
    if (!rejected) {
      ExploredPath<Payload> ep;
      ep.assignment = sr.assignment;
      ep.constraint = pc;
      ep.sig = std::move(sig);
      ep.payload = std::move(payload);
      result.paths.push_back(std::move(ep));
    }
  }
  return result;
}

}  // namespace ospfmbt
