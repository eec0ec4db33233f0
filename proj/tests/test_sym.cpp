#include <doctest.h>

#include "ospfmbt/sym.hpp"

using namespace ospfmbt;

namespace {
SymVar mk(int id, int lo, int hi, VarRole role = VarRole::Aux, int a = -1, int b = -1) {
  SymVar v;
  v.id = id;
  v.lo = lo;
  v.hi = hi;
  v.role = role;
  v.a = a;
  v.b = b;
  return v;
}
}  // namespace

TEST_CASE("expression evaluation over assignments") {
  SymVar x = mk(0, 0, 4, VarRole::MsgSeq, 0);
  SymVar y = mk(1, 0, 2, VarRole::InitSeq, 1);
  Assignment a;
  a.set(0, 3);
  a.set(1, 2);

  CHECK(sx_eval(sx_const(7), a) == 7);
  CHECK(sx_eval(sx_var(x), a) == 3);
  CHECK(sx_eval(sx_add(sx_var(x), sx_var(y)), a) == 5);
  CHECK(sx_eval(sx_add_k(sx_var(x), 2), a) == 5);
  CHECK(sx_eval(sx_eq(sx_var(x), sx_const(3)), a) == 1);
  CHECK(sx_eval(sx_eq(sx_var(x), sx_var(y)), a) == 0);
  CHECK(sx_eval(sx_lt(sx_var(y), sx_var(x)), a) == 1);
  CHECK(sx_eval(sx_not(sx_lt(sx_var(y), sx_var(x))), a) == 0);
  CHECK(sx_eval(sx_and(sx_const(1), sx_const(0)), a) == 0);
  CHECK(sx_eval(sx_or(sx_const(1), sx_const(0)), a) == 1);
  CHECK_THROWS_AS(sx_eval(sx_var_id(99), a), std::out_of_range);
}

TEST_CASE("affine detection and constant folding") {
  SymVar x = mk(5, 0, 4);
  auto e = sx_add_k(sx_var(x), 1);
  auto aff = sx_affine(e);
  REQUIRE(aff.has_value());
  CHECK(aff->first == 5);
  CHECK(aff->second == 1);

  // Chained +1 +2 folds into a single constant.
  auto e2 = sx_add_k(e, 2);
  auto aff2 = sx_affine(e2);
  REQUIRE(aff2.has_value());
  CHECK(aff2->second == 3);

  CHECK(sx_affine(sx_const(3)) == std::nullopt);
  CHECK_FALSE(sx_affine(sx_add(sx_var(x), sx_var(x))).has_value());
  auto node = sx_var(x);
  CHECK(sx_add_k(node, 0).get() == node.get());  // k=0 returns the same node
  auto folded = sx_add_k(sx_const(4), 3);
  CHECK(folded->op == SymExpr::Op::Const);
  CHECK(folded->k == 7);
}

TEST_CASE("variable collection is sorted and distinct") {
  SymVar x = mk(3, 0, 1);
  SymVar y = mk(1, 0, 1);
  auto e = sx_and(sx_eq(sx_var(x), sx_var(y)), sx_lt(sx_var(y), sx_var(x)));
  auto ids = sx_vars(e);
  REQUIRE(ids.size() == 2);
  CHECK(ids[0] == 1);
  CHECK(ids[1] == 3);
}

TEST_CASE("shadowed ints propagate expressions through arithmetic") {
  SymVar x = mk(0, 0, 4, VarRole::MsgSeq, 0);
  SymInt s = SymInt::of_var(x, 2);
  CHECK(s.v == 2);
  CHECK(s.is_symbolic());

  SymInt t = s.plus(1);
  CHECK(t.v == 3);
  auto aff = sx_affine(t.e);
  REQUIRE(aff.has_value());
  CHECK(aff->first == 0);
  CHECK(aff->second == 1);

  SymInt c = SymInt::concrete(3);
  CHECK_FALSE(c.is_symbolic());
  CHECK(c.plus(2).v == 5);
  CHECK_FALSE(c.plus(2).is_symbolic());
}

TEST_CASE("shadowed comparisons keep concrete results and symbolic shadows") {
  SymVar x = mk(0, 0, 4);
  SymInt s = SymInt::of_var(x, 2);
  SymInt c = SymInt::concrete(2);

  auto eq = ceq(s, c);
  CHECK(eq.v);
  CHECK(eq.is_symbolic());

  auto eq2 = ceq(c, SymInt::concrete(3));
  CHECK_FALSE(eq2.v);
  CHECK_FALSE(eq2.is_symbolic());

  auto lt = clt(c, s.plus(1));
  CHECK(lt.v);
  CHECK(lt.is_symbolic());
  auto gt = cgt(s, SymInt::concrete(5));
  CHECK_FALSE(gt.v);

  auto both = cand(eq, lt);
  CHECK(both.v);
  CHECK(both.is_symbolic());
  auto neither = cand(eq2, SymCond{true, nullptr});
  CHECK_FALSE(neither.v);
  CHECK_FALSE(neither.is_symbolic());
  CHECK(cnot(eq2).v);
  CHECK(cor(eq2, eq).v);
}

TEST_CASE("sequence tags survive arithmetic") {
  SymInt s = SymInt::concrete(0);
  s.tag = SeqTag::AbsInit;
  CHECK(s.plus(0).tag == SeqTag::AbsInit);
  CHECK(SymInt::concrete(1).tag == SeqTag::Rel);
}

TEST_CASE("expression rendering is stable") {
  SymVar x = mk(0, 0, 4, VarRole::MsgSeq, 0);
  std::map<int, SymVar> reg{{0, x}};
  auto e = sx_eq(sx_add_k(sx_var(x), 1), sx_const(3));
  CHECK(sx_to_string(e, &reg) == "((seq[m0] + 1) == 3)");
  CHECK(sx_to_string(e) == "((v0 + 1) == 3)");
}
