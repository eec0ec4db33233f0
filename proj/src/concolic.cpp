#include "ospfmbt/concolic.hpp"

#include <sstream>

namespace ospfmbt {

std::vector<SymExprPtr> PathConstraint::formulas() const {
  std::vector<SymExprPtr> out;
  out.reserve(conjuncts.size());
  for (const auto& c : conjuncts) out.push_back(c.formula());
  return out;
}

std::string PathSig::to_string() const {
  std::ostringstream os;
  for (size_t i = 0; i < steps.size(); ++i) {
    if (i) os << ";";
    os << steps[i].first << ":" << steps[i].second;
  }
  return os.str();
}

bool ConcolicContext::take(int site, const SymCond& cond) {
  if (cond.e) {
    Conjunct c;
    c.site = site;
    c.taken = cond.v;
    c.expr = cond.e;
    constraint_.conjuncts.push_back(std::move(c));
  }
  return cond.v;
}

void ConcolicContext::pin(int site, const SymInt& value) {
  if (!value.e) return;
  SymExprPtr target = value.e;
  int pinned = value.v;
  // Normalize affine expressions to pin the variable itself, so equal pins
  // from repeated comparisons of the same field collapse.
  if (auto aff = sx_affine(value.e)) {
    target = sx_var_id(aff->first);
    pinned = value.v - aff->second;
    for (const auto& c : constraint_.conjuncts) {
      if (c.is_pin && c.expr->a->op == SymExpr::Op::Var &&
          c.expr->a->k == aff->first && c.pinned == pinned) {
        return;  // identical pin already recorded
      }
    }
  }
  Conjunct c;
  c.site = site;
  c.taken = true;
  c.is_pin = true;
  c.pinned = pinned;
  c.expr = sx_eq(target, sx_const(pinned));
  constraint_.conjuncts.push_back(std::move(c));
}

PathSig ConcolicContext::signature() const {
  PathSig sig;
  sig.steps.reserve(constraint_.conjuncts.size());
  for (const auto& c : constraint_.conjuncts) {
    if (c.is_pin) {
      sig.steps.emplace_back(~c.site, c.pinned);
    } else {
      sig.steps.emplace_back(c.site, c.taken ? 1 : 0);
    }
  }
  return sig;
}

}  // namespace ospfmbt
