#include <doctest.h>

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ospfmbt/adapter.hpp"
#include "ospfmbt/model.hpp"
#include "ospfmbt/mutant.hpp"
#include "ospfmbt/testgen.hpp"
#include "ospfmbt/topology.hpp"

using namespace ospfmbt;

namespace {

// 0 --p2p-- 1 --p2p-- 2 --p2p-- 4, net0 {1, 3, 4} with DR 1.
ConcreteTopology arena5() {
  ConcreteTopology t;
  t.n = 5;
  t.p2p = {P2pLink{0, 1}, P2pLink{1, 2}, P2pLink{2, 4}};
  t.nets.push_back(Net{{1, 3, 4}});
  return t;
}

// Builds a test whose expectations come from a pristine replay.
TestFile make_test(const ConcreteTopology& topo, std::vector<int> init_vals,
                   std::vector<ProbeMsg> probes, std::string id) {
  TestFile tf;
  tf.id = std::move(id);
  tf.topology = topo;
  tf.initial_seqs = std::move(init_vals);
  tf.probe_msgs = std::move(probes);

  std::vector<SymInt> in;
  for (int v : tf.initial_seqs) in.push_back(SymInt::concrete(v));
  NetworkState st = standard_initial_state(topo, in);
  for (const ProbeMsg& pm : tf.probe_msgs)
    for (const TraceEvent& ev : run_message(st, probe_to_message(topo, pm)))
      tf.expected_trace.push_back(ev.to_string());
  tf.expected_final = expected_from_state(st, {});
  return tf;
}

Verdict run_against(const ConcreteTopology& topo, const MutantConfig& cfg,
                    const TestFile& tf, uint64_t seed = 1) {
  auto sut = make_mutant(topo, cfg, seed);
  return run_test(*sut, tf, {});
}

// First diff matching a field name, or a default-constructed one.
const Diff* find_diff(const Verdict& v, const std::string& field) {
  for (const Diff& d : v.diffs)
    if (d.field == field) return &d;
  return nullptr;
}

bool has_substr(const std::string& s, const std::string& needle) {
  return s.find(needle) != std::string::npos;
}

const std::vector<int> kZeros{0, 0, 0, 0, 0};
const std::vector<int> kStagger{2, 1, 0, 2, 1};

}  // namespace

TEST_CASE("mutant specs parse and format canonically") {
  CHECK(parse_mutant_spec("pristine").empty());
  CHECK(parse_mutant_spec("").empty());
  CHECK(mutant_spec_to_string(MutantConfig{}) == "pristine");

  const char* names[] = {"D1", "D2", "D3", "D4", "D5", "D6", "D7", "Q1"};
  for (const char* n : names) {
    MutantConfig cfg = parse_mutant_spec(n);
    CHECK(cfg.enabled.size() == 1);
    CHECK(mutant_spec_to_string(cfg) == n);
    CHECK(parse_deviation(n).has_value());
    CHECK(deviation_name(*parse_deviation(n)) == std::string(n));
  }
  CHECK_FALSE(parse_deviation("D8").has_value());
  CHECK_FALSE(parse_deviation("q1").has_value());

  // Combinations normalize to enum order; router scopes round-trip sorted.
  CHECK(mutant_spec_to_string(parse_mutant_spec("D5+D2")) == "D2+D5");
  CHECK(mutant_spec_to_string(parse_mutant_spec("D1@2,0,1")) == "D1@0,1,2");
  MutantConfig scoped = parse_mutant_spec("D1@0,2");
  CHECK(scoped.on(DeviationId::D1_NoInitAfterMaxSeqFightback, 0));
  CHECK_FALSE(scoped.on(DeviationId::D1_NoInitAfterMaxSeqFightback, 1));
  CHECK(scoped.on(DeviationId::D1_NoInitAfterMaxSeqFightback, 2));

  CHECK_THROWS_AS(parse_mutant_spec("D9"), std::invalid_argument);
  CHECK_THROWS_AS(parse_mutant_spec("D1+D1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_mutant_spec("D1@"), std::invalid_argument);
  CHECK_THROWS_AS(parse_mutant_spec("D1@x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_mutant_spec("+"), std::invalid_argument);
}

TEST_CASE("single-deviation catalog covers every deviation once") {
  std::vector<MutantConfig> cat = single_deviation_catalog();
  REQUIRE(cat.size() == 8);
  const char* names[] = {"D1", "D2", "D3", "D4", "D5", "D6", "D7", "Q1"};
  for (size_t i = 0; i < cat.size(); ++i) {
    CHECK(cat[i].enabled.size() == 1);
    CHECK_FALSE(cat[i].affected.has_value());
    CHECK(mutant_spec_to_string(cat[i]) == names[i]);
  }
}

TEST_CASE("pristine target passes every detecting probe") {
  // The same probes that detect each deviation below must be clean against
  // an unmutated target, or the detections would be vacuous.
  ConcreteTopology topo = arena5();
  std::vector<std::pair<std::vector<int>, ProbeMsg>> shapes = {
      {kZeros, {0, 0, 0, 3}},  {kZeros, {0, 0, 2, 4}},
      {kZeros, {0, 0, 1, 0}},  {kStagger, {0, 0, 0, 0}},
      {kZeros, {0, 0, 1, 1}},  {kZeros, {0, 0, 1, 3}},
      {kZeros, {3, 0, 0, 1}},  {kZeros, {0, 0, 1, 1}},
  };
  int i = 0;
  for (const auto& [inits, pm] : shapes) {
    TestFile tf = make_test(topo, inits, {pm}, "pristine-" + std::to_string(i++));
    Verdict v = run_against(topo, {}, tf);
    CAPTURE(tf.id);
    CHECK(v.outcome == Outcome::Pass);
    CHECK(v.diffs.empty());
  }
}

TEST_CASE("D1: suppressed fight-back leaves the victim's LSA missing") {
  ConcreteTopology topo = arena5();
  TestFile tf = make_test(topo, kZeros, {{0, 0, 0, 3}}, "det-d1");
  Verdict v = run_against(topo, parse_mutant_spec("D1"), tf);
  REQUIRE(v.outcome == Outcome::Fail);
  const Diff* d = find_diff(v, "missing");
  REQUIRE(d != nullptr);
  CHECK(d->router == 0);
  CHECK(has_substr(d->key, "lsid=0 ar=0"));
  CHECK(has_substr(d->expected, "seq=0i"));
  CHECK(d->observed == "absent");
}

TEST_CASE("D2: flush carries own content instead of the forged instance") {
  ConcreteTopology topo = arena5();
  TestFile tf = make_test(topo, kZeros, {{0, 0, 2, 4}}, "det-d2");
  Verdict v = run_against(topo, parse_mutant_spec("D2"), tf);
  REQUIRE(v.outcome == Outcome::Fail);
  // The forged key is never flushed, so it lingers at MaxSeq.
  const Diff* d = find_diff(v, "extra");
  REQUIRE(d != nullptr);
  CHECK(has_substr(d->observed, "0x7FFFFFFF"));
}

TEST_CASE("D3: dropped foreign-key instance never reaches the database") {
  ConcreteTopology topo = arena5();
  TestFile tf = make_test(topo, kZeros, {{0, 0, 1, 0}}, "det-d3");
  Verdict v = run_against(topo, parse_mutant_spec("D3"), tf);
  REQUIRE(v.outcome == Outcome::Fail);
  const Diff* d = find_diff(v, "missing");
  REQUIRE(d != nullptr);
  CHECK(has_substr(d->key, "lsid=0 ar=1"));
}

TEST_CASE("D4: fight-back on an older instance regresses the sequence") {
  ConcreteTopology topo = arena5();
  TestFile tf = make_test(topo, kStagger, {{0, 0, 0, 0}}, "det-d4");
  Verdict v = run_against(topo, parse_mutant_spec("D4"), tf);
  REQUIRE(v.outcome == Outcome::Fail);
  const Diff* d = find_diff(v, "seq");
  REQUIRE(d != nullptr);
  CHECK(has_substr(d->expected, "(2)"));
  CHECK(has_substr(d->observed, "0x800000B7"));
}

TEST_CASE("D5: escalating re-sends push the victim into a wrap") {
  ConcreteTopology topo = arena5();
  TestFile tf = make_test(topo, kZeros, {{0, 0, 1, 1}}, "det-d5");
  Verdict v = run_against(topo, parse_mutant_spec("D5"), tf);
  REQUIRE(v.outcome == Outcome::Fail);
  const Diff* d = find_diff(v, "seq");
  REQUIRE(d != nullptr);
  CHECK(has_substr(d->key, "lsid=1 ar=1"));
  CHECK(has_substr(d->expected, "(2)"));
  CHECK(has_substr(d->observed, "0x80000001"));
}

TEST_CASE("D6: swallowed flush leaves stale copies at the holders") {
  ConcreteTopology topo = arena5();
  TestFile tf = make_test(topo, kZeros, {{0, 0, 1, 3}}, "det-d6");
  Verdict v = run_against(topo, parse_mutant_spec("D6"), tf);
  REQUIRE(v.outcome == Outcome::Fail);
  const Diff* d = find_diff(v, "seq");
  REQUIRE(d != nullptr);
  CHECK(has_substr(d->expected, "0x80000001"));
  CHECK(has_substr(d->observed, "0x800000B7"));
}

TEST_CASE("D7: re-flooded direct delivery advances foreign databases") {
  ConcreteTopology topo = arena5();
  TestFile tf = make_test(topo, kZeros, {{3, 0, 0, 1}}, "det-d7");
  Verdict v = run_against(topo, parse_mutant_spec("D7"), tf);
  REQUIRE(v.outcome == Outcome::Fail);
  const Diff* d = find_diff(v, "seq");
  REQUIRE(d != nullptr);
  CHECK(has_substr(d->expected, "0x800000B7"));
  CHECK(has_substr(d->observed, "0x800000B9"));
}

TEST_CASE("Q1: spoof relayed before the self-check escapes the victim") {
  ConcreteTopology topo = arena5();
  TestFile tf = make_test(topo, kZeros, {{0, 0, 1, 1}}, "det-q1");
  Verdict v = run_against(topo, parse_mutant_spec("Q1"), tf);
  REQUIRE(v.outcome == Outcome::Fail);
  const Diff* d = find_diff(v, "extra");
  REQUIRE(d != nullptr);
  CHECK(d->router == 2);
  CHECK(has_substr(d->key, "lsid=10.0.0.1 ar=10.0.0.2"));
}

TEST_CASE("deviations stay silent off their trigger shapes") {
  ConcreteTopology topo = arena5();
  struct Case {
    const char* spec;
    std::vector<int> inits;
    ProbeMsg pm;
  };
  // Each probe avoids the corresponding hook: no fight-back for D1, no
  // MaxSeq wrap for D2/D6, matching keys for D3/D5, a newer instance for
  // D4, point-to-point delivery for D7, and a quickly-converging reflood
  // for Q1.
  std::vector<Case> cases = {
      {"D1", kStagger, {0, 0, 1, 0}}, {"D2", kZeros, {0, 0, 2, 3}},
      {"D3", kZeros, {0, 1, 1, 2}},   {"D4", kZeros, {0, 1, 1, 2}},
      {"D5", kZeros, {0, 1, 1, 2}},   {"D6", kZeros, {0, 1, 1, 1}},
      {"D7", kZeros, {2, 0, 0, 1}},   {"Q1", kZeros, {0, 1, 1, 1}},
  };
  for (const Case& c : cases) {
    TestFile tf = make_test(topo, c.inits, {c.pm},
                            std::string("loc-") + c.spec);
    Verdict v = run_against(topo, parse_mutant_spec(c.spec), tf);
    CAPTURE(tf.id);
    CHECK(v.outcome == Outcome::Pass);
  }
}

TEST_CASE("router scoping confines a deviation to the listed victims") {
  ConcreteTopology topo = arena5();
  TestFile tf = make_test(topo, kZeros, {{0, 0, 3, 3}}, "scope-d1");
  // Victim 3 is outside the scope: behavior is pristine.
  Verdict clean = run_against(topo, parse_mutant_spec("D1@0,1,2"), tf);
  CHECK(clean.outcome == Outcome::Pass);
  // Scoped onto the victim, the same probe detects it.
  Verdict hit = run_against(topo, parse_mutant_spec("D1@3"), tf);
  CHECK(hit.outcome == Outcome::Fail);
}

TEST_CASE("bounded deviation loops terminate with a verdict") {
  // D5/D6/Q1 inject re-send and re-flood loops; their round bounds must
  // keep the detecting runs terminating (Fail, not a stability timeout).
  ConcreteTopology topo = arena5();
  struct Case {
    const char* spec;
    ProbeMsg pm;
  };
  std::vector<Case> cases = {
      {"D5", {0, 0, 1, 1}}, {"D6", {0, 0, 1, 3}}, {"Q1", {0, 0, 1, 1}}};
  for (const Case& c : cases) {
    TestFile tf = make_test(topo, kZeros, {c.pm},
                            std::string("bound-") + c.spec);
    Verdict v = run_against(topo, parse_mutant_spec(c.spec), tf);
    CAPTURE(tf.id);
    CHECK(v.outcome == Outcome::Fail);
  }
}

TEST_CASE("a flood storm past the step budget reports inconclusive") {
  // Some D5 shapes seed interleaved install and purge waves that outrun
  // the budget; the verdict must say so rather than guess.
  ConcreteTopology topo = arena5();
  TestFile tf = make_test(topo, kZeros, {{0, 0, 3, 1}}, "storm-d5");
  Verdict v = run_against(topo, parse_mutant_spec("D5"), tf);
  CHECK(v.outcome == Outcome::Inconclusive);
  CHECK(has_substr(v.detail, "stability timeout"));
}

TEST_CASE("detection matrix summarizes a suite against the catalog") {
  ConcreteTopology topo = arena5();
  std::vector<TestFile> suite;
  suite.push_back(make_test(topo, kZeros, {{0, 0, 0, 3}}, "det-d1"));
  suite.push_back(make_test(topo, kZeros, {{0, 0, 2, 4}}, "det-d2"));
  suite.push_back(make_test(topo, kZeros, {{0, 0, 1, 0}}, "det-d3"));
  suite.push_back(make_test(topo, kStagger, {{0, 0, 0, 0}}, "det-d4"));
  suite.push_back(make_test(topo, kZeros, {{0, 0, 1, 1}}, "det-d5"));
  suite.push_back(make_test(topo, kZeros, {{0, 0, 1, 3}}, "det-d6"));
  suite.push_back(make_test(topo, kZeros, {{3, 0, 0, 1}}, "det-d7"));
  suite.push_back(make_test(topo, kZeros, {{2, 2, 2, 1}}, "benign"));

  std::vector<MutantConfig> catalog;
  catalog.push_back({});
  for (MutantConfig& c : single_deviation_catalog())
    catalog.push_back(std::move(c));

  std::vector<MatrixRow> rows = detection_matrix(suite, catalog);
  REQUIRE(rows.size() == 9);
  CHECK(rows[0].name == "pristine");
  CHECK(rows[0].fails == 0);
  CHECK(rows[0].inconclusive == 0);
  CHECK(rows[0].first_fail.empty());
  for (size_t i = 1; i < rows.size(); ++i) {
    CAPTURE(rows[i].name);
    CHECK(rows[i].fails >= 1);
  }
  CHECK(rows[1].name == "D1");
  CHECK(rows[1].first_fail == "det-d1");

  // Same seed, same rows.
  CHECK(detection_matrix(suite, catalog) == rows);

  std::string table = matrix_to_string(rows);
  CHECK(has_substr(table, "mutant"));
  CHECK(has_substr(table, "pristine"));
  CHECK(has_substr(table, "D7"));
  CHECK(std::count(table.begin(), table.end(), '\n') >= 10);
}
