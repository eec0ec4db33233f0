#include "ospfmbt/sym.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace ospfmbt {

const char* var_role_name(VarRole role) {
  switch (role) {
    case VarRole::MsgDest: return "dest";
    case VarRole::MsgAr: return "ar";
    case VarRole::MsgLsid: return "lsid";
    case VarRole::MsgSeq: return "seq";
    case VarRole::InitSeq: return "init";
    case VarRole::TopoP2p: return "p2p";
    case VarRole::TopoMember: return "member";
    case VarRole::Aux: return "aux";
  }
  return "?";
}

std::string SymVar::name() const {
  std::ostringstream os;
  os << var_role_name(role);
  switch (role) {
    case VarRole::TopoP2p:
      os << "[" << a << "," << b << "]";
      break;
    case VarRole::TopoMember:
      os << "[" << a << ",n" << b << "]";
      break;
    case VarRole::InitSeq:
      os << "[" << a << "]";
      break;
    case VarRole::MsgDest:
    case VarRole::MsgAr:
    case VarRole::MsgLsid:
    case VarRole::MsgSeq:
      os << "[m" << a << "]";
      break;
    case VarRole::Aux:
      os << "[" << id << "]";
      break;
  }
  return os.str();
}

namespace {
SymExprPtr make(SymExpr::Op op, int k, SymExprPtr a = nullptr, SymExprPtr b = nullptr) {
  auto e = std::make_shared<SymExpr>();
  e->op = op;
  e->k = k;
  e->a = std::move(a);
  e->b = std::move(b);
  return e;
}
}  // namespace

SymExprPtr sx_const(int v) { return make(SymExpr::Op::Const, v); }
SymExprPtr sx_var(const SymVar& v) { return make(SymExpr::Op::Var, v.id); }
SymExprPtr sx_var_id(int id) { return make(SymExpr::Op::Var, id); }

SymExprPtr sx_add(SymExprPtr a, SymExprPtr b) {
  return make(SymExpr::Op::Add, 0, std::move(a), std::move(b));
}

SymExprPtr sx_add_k(SymExprPtr a, int k) {
  if (k == 0) return a;
  if (a->op == SymExpr::Op::Const) return sx_const(a->k + k);
  // Fold (x + c) + k into x + (c + k) to keep affine chains shallow.
  if (a->op == SymExpr::Op::Add && a->b && a->b->op == SymExpr::Op::Const) {
    return sx_add(a->a, sx_const(a->b->k + k));
  }
  return sx_add(std::move(a), sx_const(k));
}

SymExprPtr sx_eq(SymExprPtr a, SymExprPtr b) {
  return make(SymExpr::Op::Eq, 0, std::move(a), std::move(b));
}
SymExprPtr sx_lt(SymExprPtr a, SymExprPtr b) {
  return make(SymExpr::Op::Lt, 0, std::move(a), std::move(b));
}
SymExprPtr sx_and(SymExprPtr a, SymExprPtr b) {
  return make(SymExpr::Op::And, 0, std::move(a), std::move(b));
}
SymExprPtr sx_or(SymExprPtr a, SymExprPtr b) {
  return make(SymExpr::Op::Or, 0, std::move(a), std::move(b));
}
SymExprPtr sx_not(SymExprPtr a) { return make(SymExpr::Op::Not, 0, std::move(a)); }

int Assignment::at(int id) const {
  auto it = values_.find(id);
  if (it == values_.end()) {
    throw std::out_of_range("assignment has no value for variable " + std::to_string(id));
  }
  return it->second;
}

int sx_eval(const SymExprPtr& e, const Assignment& a) {
  switch (e->op) {
    case SymExpr::Op::Const: return e->k;
    case SymExpr::Op::Var: return a.at(e->k);
    case SymExpr::Op::Add: return sx_eval(e->a, a) + sx_eval(e->b, a);
    case SymExpr::Op::Eq: return sx_eval(e->a, a) == sx_eval(e->b, a) ? 1 : 0;
    case SymExpr::Op::Lt: return sx_eval(e->a, a) < sx_eval(e->b, a) ? 1 : 0;
    case SymExpr::Op::And: return (sx_eval(e->a, a) != 0 && sx_eval(e->b, a) != 0) ? 1 : 0;
    case SymExpr::Op::Or: return (sx_eval(e->a, a) != 0 || sx_eval(e->b, a) != 0) ? 1 : 0;
    case SymExpr::Op::Not: return sx_eval(e->a, a) == 0 ? 1 : 0;
  }
  throw std::logic_error("unreachable expression op");
}

namespace {
void collect_vars(const SymExprPtr& e, std::set<int>& out) {
  if (!e) return;
  if (e->op == SymExpr::Op::Var) out.insert(e->k);
  collect_vars(e->a, out);
  collect_vars(e->b, out);
}
}  // namespace

std::vector<int> sx_vars(const SymExprPtr& e) {
  std::set<int> s;
  collect_vars(e, s);
  return std::vector<int>(s.begin(), s.end());
}

std::string sx_to_string(const SymExprPtr& e, const std::map<int, SymVar>* registry) {
  std::ostringstream os;
  switch (e->op) {
    case SymExpr::Op::Const:
      os << e->k;
      break;
    case SymExpr::Op::Var:
      if (registry && registry->count(e->k)) {
        os << registry->at(e->k).name();
      } else {
        os << "v" << e->k;
      }
      break;
    case SymExpr::Op::Add:
      os << "(" << sx_to_string(e->a, registry) << " + " << sx_to_string(e->b, registry) << ")";
      break;
    case SymExpr::Op::Eq:
      os << "(" << sx_to_string(e->a, registry) << " == " << sx_to_string(e->b, registry) << ")";
      break;
    case SymExpr::Op::Lt:
      os << "(" << sx_to_string(e->a, registry) << " < " << sx_to_string(e->b, registry) << ")";
      break;
    case SymExpr::Op::And:
      os << "(" << sx_to_string(e->a, registry) << " && " << sx_to_string(e->b, registry) << ")";
      break;
    case SymExpr::Op::Or:
      os << "(" << sx_to_string(e->a, registry) << " || " << sx_to_string(e->b, registry) << ")";
      break;
    case SymExpr::Op::Not:
      os << "!" << sx_to_string(e->a, registry);
      break;
  }
  return os.str();
}

std::optional<std::pair<int, int>> sx_affine(const SymExprPtr& e) {
  if (e->op == SymExpr::Op::Var) return std::make_pair(e->k, 0);
  if (e->op == SymExpr::Op::Add) {
    // Accept var+const and const+var (and nested folds produced by sx_add_k).
    auto left = sx_affine(e->a);
    if (left && e->b->op == SymExpr::Op::Const) {
      return std::make_pair(left->first, left->second + e->b->k);
    }
    auto right = sx_affine(e->b);
    if (right && e->a->op == SymExpr::Op::Const) {
      return std::make_pair(right->first, right->second + e->a->k);
    }
  }
  return std::nullopt;
}

namespace {
// Builds the symbolic expression for a comparison only when at least one side
// carries one; otherwise the condition stays concrete.
SymExprPtr side(const SymInt& x) { return x.e ? x.e : sx_const(x.v); }
}  // namespace

SymCond ceq(const SymInt& a, const SymInt& b) {
  SymCond c;
  c.v = a.v == b.v;
  if (a.e || b.e) c.e = sx_eq(side(a), side(b));
  return c;
}

SymCond ceq(const SymInt& a, int b) { return ceq(a, SymInt::concrete(b)); }

SymCond clt(const SymInt& a, const SymInt& b) {
  SymCond c;
  c.v = a.v < b.v;
  if (a.e || b.e) c.e = sx_lt(side(a), side(b));
  return c;
}

SymCond cgt(const SymInt& a, const SymInt& b) { return clt(b, a); }

SymCond cand(const SymCond& a, const SymCond& b) {
  SymCond c;
  c.v = a.v && b.v;
  if (a.e || b.e) {
    SymExprPtr ea = a.e ? a.e : sx_const(a.v ? 1 : 0);
    SymExprPtr eb = b.e ? b.e : sx_const(b.v ? 1 : 0);
    c.e = sx_and(ea, eb);
  }
  return c;
}

SymCond cor(const SymCond& a, const SymCond& b) {
  SymCond c;
  c.v = a.v || b.v;
  if (a.e || b.e) {
    SymExprPtr ea = a.e ? a.e : sx_const(a.v ? 1 : 0);
    SymExprPtr eb = b.e ? b.e : sx_const(b.v ? 1 : 0);
    c.e = sx_or(ea, eb);
  }
  return c;
}

SymCond cnot(const SymCond& a) {
  SymCond c;
  c.v = !a.v;
  if (a.e) c.e = sx_not(a.e);
  return c;
}

}  // namespace ospfmbt
