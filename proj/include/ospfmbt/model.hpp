// Executable OSPF reference model: LSDBs, flooding, fight-back, sequence
// wrap, and SPF route computation over small concrete topologies.  All state
// transitions are value-semantic and deterministic; LSA fields may carry
// symbolic shadows (SymInt) so the same code drives both concrete replay and
// concolic exploration.
#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "ospfmbt/concolic.hpp"
#include "ospfmbt/sym.hpp"
#include "ospfmbt/topology.hpp"
#include "ospfmbt/wire.hpp"

namespace ospfmbt {

// Model sequence-number domain: [0, kSeqMax].  kSeqMax plays the role of
// MaxSeqNum; value 0 tagged SeqTag::AbsInit plays the role of InitialSeqNum.
constexpr int kSeqMax = 4;
// Largest initial sequence number handed to standard_initial_state.
constexpr int kInitSeqMax = 2;

enum class LsType : uint8_t { Router = 1, Network = 2 };

enum class Newness { Newer, Same, Older };

const char* newness_name(Newness n);

// ---------------------------------------------------------------------------
// Injectable implementation quirks.  Each id enables one behavioral hook in
// the router procedure; an empty config is the pristine reference model.
// ---------------------------------------------------------------------------
enum class DeviationId {
  D1_NoInitAfterMaxSeqFightback,
  D2_MaxAgeWithOwnLinks,
  D3_KeyByLsidOnly,
  D4_FightbackOnOlder,
  D5_RepeatedFalseResend,
  D6_MaxAgeRefloodLoop,
  D7_UnicastDrReflood,
  Q1_FloodBeforeSelfCheck,
};

const char* deviation_name(DeviationId id);

struct MutantConfig {
  std::set<DeviationId> enabled;
  // When set, hooks fire only on these router ids (models quirks observed on
  // a subset of routers).
  std::optional<std::set<int>> affected;
  int d5_rounds = 8;
  int d6_rounds = 8;
  int q1_rounds = 8;

  bool on(DeviationId id, int router) const {
    if (enabled.find(id) == enabled.end()) return false;
    return !affected || affected->count(router) > 0;
  }
  bool empty() const { return enabled.empty(); }
};

// ---------------------------------------------------------------------------
// LSAs and messages
// ---------------------------------------------------------------------------
enum class ModelLinkKind : uint8_t { P2p, Transit };

struct ModelLink {
  ModelLinkKind kind;
  int target;  // peer router id (P2p) or net index (Transit); cost is 1

  bool operator==(const ModelLink& o) const {
    return kind == o.kind && target == o.target;
  }
  bool operator<(const ModelLink& o) const {
    if (kind != o.kind) return kind < o.kind;
    return target < o.target;
  }
};

struct Lsa {
  LsType type = LsType::Router;
  SymInt lsid;  // router id (Router) or net index (Network)
  SymInt ar;    // advertising router id
  SymInt seq;   // model sequence number in [0, kSeqMax]
  bool max_age = false;
  std::vector<ModelLink> links;  // Router body
  std::vector<int> attached;     // Network body: attached router ids

  // Concrete LSDB key; symbolic shadows ride along on the fields.
  std::tuple<int, int, int> key() const {
    return {static_cast<int>(type), lsid.v, ar.v};
  }
};

bool same_content(const Lsa& a, const Lsa& b);  // ignores max_age

struct LsaMessage {
  int src = 0;
  int dest = 0;
  Via via;               // delivery interface at dest
  bool injected = false; // true only for attacker-injected messages
  Lsa lsa;
};

// One processed message plus the router's reaction, for trace diffing.
struct TraceEvent {
  int router = 0;
  LsaMessage msg;
  std::string action;

  std::string to_string() const;
};

using Trace = std::vector<TraceEvent>;

struct NonTermination : std::runtime_error {
  explicit NonTermination(std::string what, Trace partial_trace)
      : std::runtime_error(std::move(what)), partial(std::move(partial_trace)) {}
  Trace partial;
};

// ---------------------------------------------------------------------------
// Network state
// ---------------------------------------------------------------------------
// A sequence-number wrap in flight: the originator keeps the MaxAge flush
// instance in its database and holds the restarted LSA back until no copy of
// the flush remains queued anywhere, mirroring the protocol's rule that a
// flush must complete before the counter may restart.
struct PendingWrap {
  Lsa flush;
  bool do_reinit = false;
  Lsa reinit;
};

struct RouterState {
  int id = 0;
  std::vector<Lsa> lsdb;  // sorted by Lsa::key()
  std::deque<LsaMessage> queue;
  std::optional<PendingWrap> pending;
};

// Per-run counters for bounded mutant loops, keyed by (router, victim ar).
struct MutantRunState {
  std::map<std::pair<int, int>, int> d5_used;
  std::map<std::pair<int, int>, int> d6_used;
  // Q1 refloods, keyed by (router, lsid, ar, seq): without a bound, a
  // reflooded spoof and its flush wave can reinstall each other forever.
  std::map<std::tuple<int, int, int, int>, int> q1_used;
};

struct NetworkState {
  ConcreteTopology topo;
  std::vector<RouterState> routers;
  std::vector<SymInt> init_seqs;  // one per router, as given at construction
  MutantConfig cfg;
  MutantRunState mrs;

  bool stable() const {
    for (const auto& r : routers)
      if (!r.queue.empty() || r.pending) return false;
    return true;
  }
};

// Builds the stable standard state: every LSDB holds one Router-LSA per
// router (links mirroring the topology) and one Network-LSA per multi-access
// net with >= 2 members, originated by its DR with the DR's initial sequence
// number; all queues empty.  Throws std::invalid_argument on a disconnected
// topology or out-of-range initial seqs.
NetworkState standard_initial_state(const ConcreteTopology& topo,
                                    const std::vector<SymInt>& init_seqs,
                                    MutantConfig cfg = {});

// LSA instance ordering for one database key: sequence number first, then
// the Fletcher checksum of the canonical encodings, then the MaxAge flag;
// equal on all three compares as Same.
Newness is_newer(const Lsa& a, const Lsa& b, ConcolicContext* ctx = nullptr);

// Canonical wire image of a model LSA (a pure function of its fields) and
// its checksum; shared by is_newer and the adapter's rendering.  The image
// carries the canonical sequence mapping (initial + model value); adapters
// overwrite ls_seq with the anchored wire value before encoding.
wire::WireLsa wire_image(const Lsa& lsa);
std::vector<uint8_t> canonical_lsa_bytes(const Lsa& lsa);
uint16_t canonical_checksum(const Lsa& lsa);

// Processes one message at msg.dest per the router procedure (newness check,
// install/flood, self-originated fight-back, MaxAge purge), appending any
// reactions to the router queues and the trace.
void receive_lsa(NetworkState& state, const LsaMessage& msg,
                 ConcolicContext* ctx = nullptr, Trace* trace = nullptr);

// Enqueues a message at its destination without processing it.
void inject_message(NetworkState& state, const LsaMessage& msg);

// Default step budget for run_to_stable on this state.
size_t step_budget(const NetworkState& state);

// Round-robin scheduler: each router drains one message per turn until all
// queues are empty.  Returns the ordered trace of processed messages.
// Throws NonTermination (with the partial trace) past the step budget.
Trace run_to_stable(NetworkState& state, ConcolicContext* ctx = nullptr);

// Fair randomized scheduler used by interleaving-indifference tests: picks a
// uniformly random non-empty queue each step.
Trace run_to_stable_seeded(NetworkState& state, uint64_t seed);

// Convenience: inject then run to stability.
Trace run_message(NetworkState& state, const LsaMessage& msg,
                  ConcolicContext* ctx = nullptr);

// ---------------------------------------------------------------------------
// Routing tables
// ---------------------------------------------------------------------------
struct RouteEntry {
  int dest = 0;      // destination router id
  int next_hop = 0;  // neighbor router id of the first hop
  int cost = 0;

  bool operator==(const RouteEntry& o) const {
    return dest == o.dest && next_hop == o.next_hop && cost == o.cost;
  }
};

// Shortest paths over the graph induced by `router`'s LSDB with the
// bidirectional check (a link counts only when both endpoints advertise it).
// Unreachable routers are absent.  Entries sorted by dest.
std::vector<RouteEntry> compute_routing_table(const NetworkState& state,
                                              int router);

// ---------------------------------------------------------------------------
// Helpers shared with testgen / adapters
// ---------------------------------------------------------------------------
const Lsa* find_lsa(const RouterState& r, LsType type, int lsid, int ar);

// Builds the links a router would advertise for its current topology.
std::vector<ModelLink> own_links(const ConcreteTopology& topo, int router);

std::string lsa_to_string(const Lsa& lsa);
std::string state_to_string(const NetworkState& state);

}  // namespace ospfmbt
