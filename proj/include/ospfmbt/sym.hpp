#pragma once

// Symbolic integer expressions over small finite-domain variables, plus the
// shadowed value types used by the concolic interpreter.  Expressions are
// immutable DAG nodes shared via shared_ptr; every expression evaluates to an
// int under an Assignment (booleans evaluate to 0/1).

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ospfmbt {

// Roles tie a variable back to the protocol-level quantity it stands for.
enum class VarRole : uint8_t {
  MsgDest,     // destination router of an injected message
  MsgAr,       // advertising-router field of an injected LSA
  MsgLsid,     // link-state-id field of an injected LSA
  MsgSeq,      // sequence number of an injected LSA (model domain)
  InitSeq,     // per-router initial own-LSA sequence number
  TopoP2p,     // 0/1: point-to-point link between routers a and b present
  TopoMember,  // 0/1: router a attached to network b
  Aux,         // anything else
};

const char* var_role_name(VarRole role);

struct SymVar {
  int id = -1;  // unique; also the solver's decision order
  int lo = 0;   // inclusive domain bounds
  int hi = 0;
  VarRole role = VarRole::Aux;
  int a = -1;  // role-specific: router index, link endpoint, message index...
  int b = -1;
  std::string name() const;
};

struct SymExpr;
using SymExprPtr = std::shared_ptr<const SymExpr>;

struct SymExpr {
  enum class Op : uint8_t { Const, Var, Add, Eq, Lt, And, Or, Not };
  Op op;
  int k = 0;  // Const: the value; Var: the variable id
  SymExprPtr a;
  SymExprPtr b;
};

SymExprPtr sx_const(int v);
SymExprPtr sx_var(const SymVar& v);
SymExprPtr sx_var_id(int id);
SymExprPtr sx_add(SymExprPtr a, SymExprPtr b);
SymExprPtr sx_add_k(SymExprPtr a, int k);  // folds consts; k==0 returns a
SymExprPtr sx_eq(SymExprPtr a, SymExprPtr b);
SymExprPtr sx_lt(SymExprPtr a, SymExprPtr b);
SymExprPtr sx_and(SymExprPtr a, SymExprPtr b);
SymExprPtr sx_or(SymExprPtr a, SymExprPtr b);
SymExprPtr sx_not(SymExprPtr a);

// A full (or partial) valuation of variables by id.
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(std::map<int, int> values) : values_(std::move(values)) {}

  bool has(int id) const { return values_.count(id) != 0; }
  int at(int id) const;
  void set(int id, int v) { values_[id] = v; }
  void erase(int id) { values_.erase(id); }
  const std::map<int, int>& values() const { return values_; }
  bool operator==(const Assignment& other) const { return values_ == other.values_; }

 private:
  std::map<int, int> values_;  // ordered so iteration is deterministic
};

// Evaluates an expression; throws std::out_of_range when a variable that the
// expression mentions is missing from the assignment.
int sx_eval(const SymExprPtr& e, const Assignment& a);

// Collects the distinct variable ids mentioned by an expression, ascending.
std::vector<int> sx_vars(const SymExprPtr& e);

// Renders an expression as text, e.g. "(msgseq[0] + 1)" or "(init[2] == 1)".
// Variable names fall back to "v<id>" when the registry lacks the id.
std::string sx_to_string(const SymExprPtr& e,
                         const std::map<int, SymVar>* registry = nullptr);

// If e is affine in exactly one variable with coefficient 1 (i.e. var + k),
// returns (var id, k).  A bare Const is not affine for this purpose.
std::optional<std::pair<int, int>> sx_affine(const SymExprPtr& e);

// Provenance tag carried by sequence-number values: Rel means the value lives
// in the model's relative domain; AbsInit marks a post-wraparound
// re-origination whose on-the-wire image is the protocol's fixed initial
// sequence number rather than a base-relative one.
enum class SeqTag : uint8_t { Rel = 0, AbsInit = 1 };

// A concrete int that optionally carries the expression it was derived from.
struct SymInt {
  int v = 0;
  SymExprPtr e;  // null => pure concrete
  SeqTag tag = SeqTag::Rel;

  static SymInt concrete(int v) { return SymInt{v, nullptr, SeqTag::Rel}; }
  static SymInt of_var(const SymVar& var, int value) {
    return SymInt{value, sx_var(var), SeqTag::Rel};
  }
  bool is_symbolic() const { return e != nullptr; }
  SymInt plus(int k) const {
    SymInt r = *this;
    r.v += k;
    if (r.e) r.e = sx_add_k(r.e, k);
    return r;
  }
};

// A concrete bool that optionally carries the condition it came from.
struct SymCond {
  bool v = false;
  SymExprPtr e;  // null => both operands were concrete
  bool is_symbolic() const { return e != nullptr; }
};

SymCond ceq(const SymInt& a, const SymInt& b);
SymCond ceq(const SymInt& a, int b);
SymCond clt(const SymInt& a, const SymInt& b);  // a < b
SymCond cgt(const SymInt& a, const SymInt& b);  // a > b
SymCond cand(const SymCond& a, const SymCond& b);
SymCond cor(const SymCond& a, const SymCond& b);
SymCond cnot(const SymCond& a);

}  // namespace ospfmbt
