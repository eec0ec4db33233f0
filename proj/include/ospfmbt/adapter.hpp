#pragma once

// The black-box boundary: the adapter interface a system under test hides
// behind, wire-level sequence-number normalization, the test runner, and the
// expected-vs-observed state comparison that produces verdicts.

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "ospfmbt/model.hpp"
#include "ospfmbt/testgen.hpp"
#include "ospfmbt/topology.hpp"
#include "ospfmbt/wire.hpp"

namespace ospfmbt {

// Transport or protocol failure at the adapter boundary (undecodable
// packet, missing LSA, unreachable device).  The runner converts it into an
// Inconclusive verdict.
struct SutError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Adapter interface
// ---------------------------------------------------------------------------
//
// One adapter instance fronts one system under test.  Calls within a test
// are strictly sequential: reset_all -> (reads/injects/awaits)*.  Independent
// adapter+runner pairs may run in parallel against disjoint SUTs.
class SutAdapter {
 public:
  virtual ~SutAdapter() = default;

  virtual int router_count() const = 0;

  // Soft-resets every router back to the standard initial state.  Own-LSA
  // wire sequence numbers afterwards are arbitrary; normalization aligns
  // them before a test runs.
  virtual void reset_all() = 0;

  // Current LSDB of one router as decoded wire LSAs (order unspecified).
  virtual std::vector<wire::WireLsa> read_lsdb(int router) = 0;

  // OSPF routes of one router, sorted by destination.
  virtual std::vector<RouteEntry> read_routing_table(int router) = 0;

  // Delivers one raw OSPF packet at `ingress`.  Throws SutError when the
  // packet cannot be decoded or delivered.
  virtual void inject(const std::vector<uint8_t>& packet, int ingress) = 0;

  // Blocks until the SUT is quiet or the timeout elapses; true means stable.
  // Network transports poll: no LSDB change across two reads separated by a
  // configurable quiet interval counts as stable.
  virtual bool await_stable(int timeout_ms) = 0;

  // Notification that normalization verified: router r's own LSA sits at
  // wire sequence wire_targets[r], agreed to represent the model value
  // target_model_seqs[r].  Desk-scale adapters use it to align their
  // internal sequence domain; real transports need nothing.
  virtual void on_normalized(const std::vector<int>& target_model_seqs,
                             const std::vector<uint32_t>& wire_targets) {
    (void)target_model_seqs;
    (void)wire_targets;
  }

  // Observed message log since the last reset, where the adapter can
  // provide one (empty otherwise).
  virtual std::vector<std::string> message_log() { return {}; }
};

// ---------------------------------------------------------------------------
// Verdicts
// ---------------------------------------------------------------------------
enum class Outcome : uint8_t { Pass, Fail, Inconclusive };
const char* outcome_name(Outcome o);

// Where a difference was observed: while verifying the setup prefix (the
// start state of an extended test) or in the final state after the probes.
enum class DiffStage : uint8_t { Setup, Final };

struct Diff {
  DiffStage stage = DiffStage::Final;
  int router = 0;
  std::string key;    // LSDB key in model ids, e.g. "rtr lsid=2 ar=2"
  std::string field;  // "seq", "age", "links", "attached", "missing", "extra"
  std::string expected;
  std::string observed;

  bool operator==(const Diff& o) const {
    return stage == o.stage && router == o.router && key == o.key &&
           field == o.field && expected == o.expected && observed == o.observed;
  }
  std::string to_string() const;
};

struct Verdict {
  std::string test_id;
  Outcome outcome = Outcome::Inconclusive;
  std::string detail;               // reason for Inconclusive
  std::vector<Diff> diffs;          // LSDB diffs; Fail <=> non-empty
  std::vector<Diff> route_diffs;    // advisory, never decides the outcome
  std::vector<std::string> model_trace;
  std::vector<std::string> sut_trace;

  bool operator==(const Verdict& o) const;
};

// ---------------------------------------------------------------------------
// Normalization and comparison
// ---------------------------------------------------------------------------

// The agreed model<->wire alignment: router r's own LSA sits at wire sequence
// targets[r], representing model value model_seqs[r].  The wire image of
// model value m advertised by r is targets[r] + (m - model_seqs[r]); the
// model maximum maps to the wire maximum and a post-wrap value k maps to
// kInitialSeq + k, both absolutely.
struct WireBases {
  std::vector<uint32_t> targets;
  std::vector<int> model_seqs;
};

// Wire image of one expected sequence encoding.  Offsets anchor at the
// symbol's router; concrete values anchor at the advertising router.
uint32_t expected_wire_seq(const SeqEnc& seq, int ar, const WireBases& bases);

// Reads each router's own-LSA wire sequence number, computes the alignment
// plan, injects one spoofed self-LSA per router at (target - 1) so the
// fight-back lands exactly on the target, waits for stability, and verifies
// the observed values.  Throws SutError on any miss.
WireBases normalize_sequence_numbers(SutAdapter& adapter,
                                     const ConcreteTopology& topo,
                                     const std::vector<int>& target_model_seqs,
                                     int timeout_ms = 2000);

// Expected-vs-observed LSDB comparison.  Entries match bidirectionally on
// (type, lsid, ar); link and attached lists compare as sets; sequence
// numbers compare through `bases`; MaxAge compares as age >= 3600.  Every
// mismatched field, missing entry, or extra entry yields one diff.
std::vector<Diff> compare_states(
    const std::vector<std::vector<ExpectedLsa>>& expected,
    const std::vector<std::vector<wire::WireLsa>>& observed,
    const WireBases& bases, DiffStage stage = DiffStage::Final);

struct RunOptions {
  int stability_timeout_ms = 2000;
  // Verify the intermediate state after the setup prefix of extended tests.
  bool verify_setup_state = true;
  // Read and compare routing tables (advisory diffs).
  bool read_routes = true;
};

// Runs one test end to end: reset -> normalize -> setup (verifying the
// reached start state) -> probes -> read-back -> compare.  Stability timeouts
// and adapter errors yield Inconclusive; state differences yield Fail.
Verdict run_test(SutAdapter& adapter, const TestFile& test,
                 const RunOptions& opts = {});

// ---------------------------------------------------------------------------
// Verdict reports (JSON lines)
// ---------------------------------------------------------------------------
std::string verdict_to_json(const Verdict& v);
Verdict verdict_from_json(const std::string& line);
void append_report(const std::string& path, const Verdict& v);
std::vector<Verdict> read_report(const std::string& path);

// ---------------------------------------------------------------------------
// In-process adapter: the reference model (optionally with injected
// deviations) behind the byte-level interface
// ---------------------------------------------------------------------------
//
// Every boundary crossing is honest: reset draws genuinely arbitrary wire
// bases (seeded), read_lsdb renders model LSAs to encoded-and-decoded wire
// LSAs with real checksums, and inject decodes raw packets.  Because the
// model's sequence domain is a small window, pre-normalization self-spoofs
// are absorbed at the wire level (the router's own wire sequence advances to
// spoof + 1, exactly a fight-back); once on_normalized realigns the internal
// domain onto the agreed targets, injections decode into the model relative
// to the per-router anchors.
class InProcessAdapter : public SutAdapter {
 public:
  explicit InProcessAdapter(ConcreteTopology topo, MutantConfig cfg = {},
                            uint64_t seed = 1);

  int router_count() const override;
  void reset_all() override;
  std::vector<wire::WireLsa> read_lsdb(int router) override;
  std::vector<RouteEntry> read_routing_table(int router) override;
  void inject(const std::vector<uint8_t>& packet, int ingress) override;
  bool await_stable(int timeout_ms) override;
  void on_normalized(const std::vector<int>& target_model_seqs,
                     const std::vector<uint32_t>& wire_targets) override;
  std::vector<std::string> message_log() override;

  // Test backdoors (not part of the black-box surface).
  const NetworkState& state() const { return st_; }
  void set_state(NetworkState s) { st_ = std::move(s); }

 private:
  wire::WireLsa render(const Lsa& lsa) const;

  ConcreteTopology topo_;
  MutantConfig cfg_;
  std::mt19937_64 rng_;
  NetworkState st_;
  std::vector<int> anchor_model_;      // model value rendered at anchor_wire_
  std::vector<uint32_t> anchor_wire_;  // per advertising router
  bool normalized_ = false;
  std::vector<std::string> log_;
};

// ---------------------------------------------------------------------------
// Remote-CLI transport skeleton
// ---------------------------------------------------------------------------
//
// Extension point for real routers driven over a management session plus a
// raw-packet send hook on the lab segment.  The skeleton owns the flow
// (which commands run when, how stability is polled); everything
// device-specific -- session plumbing, output parsing, packet delivery --
// arrives as callbacks.  Any operation whose hook is missing throws
// SutError, so the skeleton is safe to construct incomplete.
struct RemoteCliTransport {
  // Issues one management command on a router's session, e.g. the soft
  // reset "clear ip ospf process".
  std::function<void(int router, const std::string& command)> command;
  // Issues a dump command and returns the raw console output, e.g.
  // "show ip ospf database router" / "show ip route ospf".
  std::function<std::string(int router, const std::string& command)> query;
  // Device-specific parsers for the two dump formats.
  std::function<std::vector<wire::WireLsa>(const std::string& dump)> parse_lsdb;
  std::function<std::vector<RouteEntry>(const std::string& dump)> parse_routes;
  // Sends one raw OSPF packet so it ingresses at the given router.
  std::function<void(int ingress, const std::vector<uint8_t>& packet)> send_raw;
  // Quiet interval between the two stability polls.
  int poll_interval_ms = 500;
};

class RemoteCliAdapter : public SutAdapter {
 public:
  RemoteCliAdapter(int routers, RemoteCliTransport transport);

  int router_count() const override;
  void reset_all() override;
  std::vector<wire::WireLsa> read_lsdb(int router) override;
  std::vector<RouteEntry> read_routing_table(int router) override;
  void inject(const std::vector<uint8_t>& packet, int ingress) override;
  bool await_stable(int timeout_ms) override;

  static constexpr const char* kResetCommand = "clear ip ospf process";
  static constexpr const char* kLsdbCommand = "show ip ospf database router";
  static constexpr const char* kRouteCommand = "show ip route ospf";

 private:
  int n_;
  RemoteCliTransport t_;
};

}  // namespace ospfmbt
