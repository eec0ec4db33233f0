#include "ospfmbt/solver.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace ospfmbt {

namespace {

struct Domain {
  std::vector<int> values;  // ascending
};

struct Prepared {
  std::vector<SymVar> vars;                      // sorted by id
  std::map<int, Domain> domains;                 // var id -> candidate values
  std::vector<SymExprPtr> conjuncts;             // residual (non-narrowing) conjuncts
  std::vector<std::vector<int>> conjunct_vars;   // ids each conjunct mentions
  bool unsat = false;
};

// Narrows domains using conjuncts of the shape (var + k == c) and
// !(var + k == c); everything else stays for search-time evaluation.
Prepared prepare(const std::vector<SymVar>& vars_in,
                 const std::vector<SymExprPtr>& conjuncts) {
  Prepared p;
  p.vars = vars_in;
  std::sort(p.vars.begin(), p.vars.end(),
            [](const SymVar& a, const SymVar& b) { return a.id < b.id; });
  for (const auto& v : p.vars) {
    if (v.lo > v.hi) {
      p.unsat = true;
      return p;
    }
    Domain d;
    for (int x = v.lo; x <= v.hi; ++x) d.values.push_back(x);
    if (!p.domains.emplace(v.id, std::move(d)).second) {
      throw std::invalid_argument("duplicate variable id " + std::to_string(v.id));
    }
  }

  auto narrow_eq = [&](int var_id, int value) {
    auto it = p.domains.find(var_id);
    if (it == p.domains.end()) throw std::invalid_argument("conjunct mentions unknown variable");
    auto& vals = it->second.values;
    if (std::binary_search(vals.begin(), vals.end(), value)) {
      vals = {value};
    } else {
      vals.clear();
      p.unsat = true;
    }
  };
  auto narrow_ne = [&](int var_id, int value) {
    auto it = p.domains.find(var_id);
    if (it == p.domains.end()) throw std::invalid_argument("conjunct mentions unknown variable");
    auto& vals = it->second.values;
    vals.erase(std::remove(vals.begin(), vals.end(), value), vals.end());
    if (vals.empty()) p.unsat = true;
  };

  // (affine == const) in either orientation, optionally under one Not.
  auto as_eq_pin = [](const SymExprPtr& e) -> std::optional<std::pair<int, int>> {
    if (e->op != SymExpr::Op::Eq) return std::nullopt;
    auto la = sx_affine(e->a);
    if (la && e->b->op == SymExpr::Op::Const) {
      return std::make_pair(la->first, e->b->k - la->second);
    }
    auto ra = sx_affine(e->b);
    if (ra && e->a->op == SymExpr::Op::Const) {
      return std::make_pair(ra->first, e->a->k - ra->second);
    }
    return std::nullopt;
  };

  for (const auto& c : conjuncts) {
    if (auto pin = as_eq_pin(c)) {
      narrow_eq(pin->first, pin->second);
      continue;
    }
    if (c->op == SymExpr::Op::Not) {
      if (auto pin = as_eq_pin(c->a)) {
        narrow_ne(pin->first, pin->second);
        continue;
      }
    }
    if (c->op == SymExpr::Op::Const) {
      if (c->k == 0) p.unsat = true;
      continue;
    }
    p.conjuncts.push_back(c);
    p.conjunct_vars.push_back(sx_vars(c));
    for (int id : p.conjunct_vars.back()) {
      if (!p.domains.count(id)) throw std::invalid_argument("conjunct mentions unknown variable");
    }
  }
  return p;
}

struct Search {
  const Prepared& p;
  const std::vector<Axiom>& axioms;
  SolverStats* stats;
  size_t limit;
  std::vector<Assignment>* out;            // solve_all sink (may be null)
  Assignment current;
  // conjuncts indexed by the position (within sorted vars) of their last var
  std::vector<std::vector<size_t>> ready_at;

  bool found_one = false;
  Assignment first;

  bool conjunct_holds(size_t ci) const {
    return sx_eval(p.conjuncts[ci], current) != 0;
  }

  // Returns true when enumeration should stop entirely.
  bool rec(size_t vi) {
    if (stats) stats->nodes++;
    if (vi == p.vars.size()) {
      for (const auto& ax : axioms) {
        if (!ax(current)) return false;
      }
      if (stats) stats->solutions++;
      if (!found_one) {
        found_one = true;
        first = current;
      }
      if (out) {
        out->push_back(current);
        return out->size() >= limit;
      }
      return true;  // first-solution mode stops immediately
    }
    const SymVar& v = p.vars[vi];
    for (int val : p.domains.at(v.id).values) {
      current.set(v.id, val);
      bool ok = true;
      for (size_t ci : ready_at[vi]) {
        if (!conjunct_holds(ci)) {
          ok = false;
          break;
        }
      }
      if (ok && rec(vi + 1)) {
        current.erase(v.id);
        return true;
      }
    }
    current.erase(v.id);
    return false;
  }
};

void run_search(const Prepared& p, const std::vector<Axiom>& axioms, SolverStats* stats,
                size_t limit, std::vector<Assignment>* out, bool* sat, Assignment* first) {
  if (p.unsat) {
    if (sat) *sat = false;
    return;
  }
  Search s{p, axioms, stats, limit, out, Assignment{}, {}, false, Assignment{}};
  // Map var id -> position for conjunct readiness.
  std::map<int, size_t> pos;
  for (size_t i = 0; i < p.vars.size(); ++i) pos[p.vars[i].id] = i;
  s.ready_at.resize(p.vars.size());
  for (size_t ci = 0; ci < p.conjuncts.size(); ++ci) {
    size_t last = 0;
    if (p.conjunct_vars[ci].empty()) {
      // Ground conjunct: evaluate immediately.
      Assignment empty;
      if (sx_eval(p.conjuncts[ci], empty) == 0) {
        if (sat) *sat = false;
        return;
      }
      continue;
    }
    for (int id : p.conjunct_vars[ci]) last = std::max(last, pos.at(id));
    s.ready_at[last].push_back(ci);
  }
  s.rec(0);
  if (sat) *sat = s.found_one;
  if (first && s.found_one) *first = s.first;
}

}  // namespace

SolveResult solve(const std::vector<SymVar>& vars, const std::vector<SymExprPtr>& conjuncts,
                  const std::vector<Axiom>& axioms, SolverStats* stats) {
  Prepared p = prepare(vars, conjuncts);
  SolveResult r;
  run_search(p, axioms, stats, 1, nullptr, &r.sat, &r.assignment);
  return r;
}

std::vector<Assignment> solve_all(const std::vector<SymVar>& vars,
                                  const std::vector<SymExprPtr>& conjuncts,
                                  const std::vector<Axiom>& axioms, size_t limit,
                                  SolverStats* stats) {
  Prepared p = prepare(vars, conjuncts);
  std::vector<Assignment> out;
  bool sat = false;
  if (limit == 0) return out;
  run_search(p, axioms, stats, limit, &out, &sat, nullptr);
  return out;
}

}  // namespace ospfmbt
