#pragma once

// Test generation: explores the model's reaction to symbolic attacker
// messages and emits self-contained test files.  A depth-1 run injects one
// symbolic Router-LSA into the standard initial state; deeper suites reuse
// the unique stable states reached by earlier iterations as start states
// (systematic extension) or jump to a random reachable state first
// (arbitrary prefix).

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ospfmbt/concolic.hpp"
#include "ospfmbt/model.hpp"
#include "ospfmbt/sym.hpp"
#include "ospfmbt/topology.hpp"

namespace ospfmbt {

// ---------------------------------------------------------------------------
// Test-file building blocks
// ---------------------------------------------------------------------------

// Compact attacker message: every generated message is a Router-LSA with
// age 0 and an empty link list, delivered to `dest` along the standard
// attacker route (router 0 is the attacker's foothold).
struct ProbeMsg {
  int dest = 0;
  int lsid = 0;
  int ar = 0;
  int seq = 0;

  bool operator==(const ProbeMsg& o) const {
    return dest == o.dest && lsid == o.lsid && ar == o.ar && seq == o.seq;
  }
  std::string to_string() const;  // "dest=2 lsid=0 ar=2 seq=4"
  static ProbeMsg parse(const std::string& text);
};

// Expands a compact message into a concrete deliverable LsaMessage.
LsaMessage probe_to_message(const ConcreteTopology& topo, const ProbeMsg& pm);

// A sequence number in an expected/canonical state: a concrete model value,
// an offset from one router's initial sequence number, or the absolute
// post-wraparound re-origination value.
struct SeqEnc {
  enum class Kind : uint8_t { Concrete, InitOffset, AbsInit };
  Kind kind = Kind::Concrete;
  int router = -1;  // InitOffset: router whose initial sequence anchors it
  int value = 0;    // Concrete: the value; InitOffset: the offset

  bool operator==(const SeqEnc& o) const {
    return kind == o.kind && router == o.router && value == o.value;
  }
  std::string to_string() const;  // "3", "S1+0", "0i"
  static SeqEnc parse(const std::string& text);
};

// Derives the canonical encoding of a possibly-symbolic sequence value.
// Values affine in one initial-sequence variable keep the symbolic offset;
// everything else (including message-sequence expressions) concretizes.
SeqEnc encode_seq(const SymInt& seq, const std::map<int, SymVar>& registry);

// One LSDB entry of an expected final state, with links sorted.
struct ExpectedLsa {
  LsType type = LsType::Router;
  int lsid = 0;
  int ar = 0;
  SeqEnc seq;
  bool max_age = false;
  std::vector<ModelLink> links;  // Router-LSA, sorted
  std::vector<int> attached;     // Network-LSA, sorted

  bool operator==(const ExpectedLsa& o) const {
    return type == o.type && lsid == o.lsid && ar == o.ar && seq == o.seq &&
           max_age == o.max_age && links == o.links && attached == o.attached;
  }
  std::string to_string() const;
  static ExpectedLsa parse(const std::string& text);
};

// Per-router expected LSDBs derived from a model state, entries in key order.
std::vector<std::vector<ExpectedLsa>> expected_from_state(
    const NetworkState& state, const std::map<int, SymVar>& registry);

// Canonical text of an expected-state table: one "R<r>: {...} {...}" line per
// router.  Two states with equal canonical text are merged during extension.
std::string canonical_text(const std::vector<std::vector<ExpectedLsa>>& expected);

// Shorthand: expected_from_state + canonical_text.  Keys are comparable only
// between states over the same topology.
std::string canonicalize(const NetworkState& state,
                         const std::map<int, SymVar>& registry);

// One generated test: replaying setup_msgs then probe_msgs from the standard
// initial state (with the recorded initial sequence numbers) reproduces
// expected_final and expected_trace exactly.
struct TestFile {
  std::string id;
  ConcreteTopology topology;
  std::vector<int> initial_seqs;                        // per router
  std::vector<ProbeMsg> setup_msgs;                     // reach the start state
  std::vector<ProbeMsg> probe_msgs;                     // the explored probe(s)
  std::vector<std::vector<ExpectedLsa>> expected_final; // per router
  std::vector<std::string> expected_trace;              // model trace lines
  std::string canonical_final;                          // derived, not serialized

  bool operator==(const TestFile& o) const;
  std::string to_text() const;
  static TestFile from_text(const std::string& text);
};

// A stable state reachable from the standard initial state by replaying
// `witness` (under initial sequence numbers consistent with the original
// exploration path; the canonical key keeps them symbolic as offsets).
struct ReachableState {
  std::string key;
  std::vector<ProbeMsg> witness;
};

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

struct GenLimits {
  size_t max_paths = 200000;       // per-exploration path cap
  size_t max_total_tests = SIZE_MAX;  // whole-generation test cap
};

struct IterationStat {
  int depth = 0;
  size_t start_states = 0;  // |RIS| explored this iteration
  size_t tests = 0;         // tests emitted this iteration
  size_t new_states = 0;    // unique final states not seen before
};

struct GenResult {
  std::vector<TestFile> tests;
  std::vector<IterationStat> iterations;
  size_t solver_calls = 0;
  bool truncated = false;
};

// Depth 1: one symbolic message into the standard initial state; one test
// per feasible path.
GenResult generate_depth1(const ConcreteTopology& topo, const GenLimits& limits = {});

// Depth 1 over a whole topology family: topology variables join the symbolic
// input; each test embeds the solved concrete topology.
GenResult generate_depth1(const SymbolicTopology& st, const GenLimits& limits = {});

// Unique final states of a batch of tests, first witness wins.  Keys compare
// canonical text, so feed it tests from a single topology.
std::vector<ReachableState> extract_reachable_states(const std::vector<TestFile>& tests);

// Iterative deepening with state merging: explores one symbolic message from
// every not-yet-explored reachable state, depth 1 through max_depth.
GenResult systematic_extension(const ConcreteTopology& topo, int max_depth,
                               const GenLimits& limits = {});

// Replays `prefix_len` seeded random concrete messages from the standard
// state, then explores one symbolic message from wherever that landed.
// prefix_len = 0 degenerates to depth-1 generation.
GenResult arbitrary_prefix(const ConcreteTopology& topo, int prefix_len,
                           uint64_t seed, const GenLimits& limits = {});

// Unoptimized depth-K exploration: K symbolic messages in one program, no
// intermediate-state merging.  Oracle for systematic_extension soundness.
GenResult generate_naive(const ConcreteTopology& topo, int depth,
                         const GenLimits& limits = {});

// ---------------------------------------------------------------------------
// Exhaustive-enumeration oracle hooks
// ---------------------------------------------------------------------------

// The depth-1 variable plan in solver decision order (message fields first,
// then per-router initial sequence numbers).
std::vector<SymVar> depth1_vars(const ConcreteTopology& topo);

// Runs the depth-1 program once under a full concrete assignment and returns
// the recorded path signature.
PathSig depth1_signature(const ConcreteTopology& topo, const Assignment& full);

// Path signatures of all feasible depth-1 paths found by exploration.
std::vector<PathSig> depth1_path_signatures(const ConcreteTopology& topo,
                                            const GenLimits& limits = {});

// ---------------------------------------------------------------------------
// Suite I/O
// ---------------------------------------------------------------------------

struct SuiteManifest {
  int format = 1;
  std::string generator;  // "depth1", "depth1-symbolic", "extension", "prefix", "naive"
  std::string config;     // human-readable generation parameters
  uint64_t seed = 0;
  std::string config_hash;  // filled in by write_suite
  size_t test_count = 0;
  size_t unique_states = 0;
  std::vector<IterationStat> iterations;
  std::vector<std::string> test_ids;
};

struct Suite {
  SuiteManifest manifest;
  std::vector<TestFile> tests;
};

// Writes one "<id>.test" file per test plus "manifest.json" into `dir`
// (created if missing).  Fills manifest counts, ids, and config hash.
// Identical generation inputs produce byte-identical suites.
void write_suite(const std::string& dir, const GenResult& gen, SuiteManifest manifest);

// Loads a suite directory written by write_suite.
Suite read_suite(const std::string& dir);

}  // namespace ospfmbt
