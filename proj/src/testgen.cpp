#include "ospfmbt/testgen.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <utility>

#include <json.hpp>

namespace fs = std::filesystem;

namespace ospfmbt {

namespace {

// Branch-site ids used by the generator itself (the model owns 10..52).
constexpr int kSiteTopoPin = 100;
constexpr int kSiteProbeDest = 101;
constexpr int kSiteCanonPin = 102;

std::string zfill(size_t value, int width) {
  std::ostringstream os;
  os << "t" << std::setw(width) << std::setfill('0') << value;
  return os.str();
}

std::string fnv1a64_hex(const std::string& text) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

int parse_kv(const std::string& tok, const std::string& key) {
  if (tok.rfind(key + "=", 0) != 0) {
    throw std::invalid_argument("expected " + key + "=..., got: " + tok);
  }
  return std::stoi(tok.substr(key.size() + 1));
}

std::vector<std::string> split_ws(const std::string& text) {
  std::istringstream is(text);
  std::vector<std::string> out;
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(text);
  while (std::getline(is, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exploration program
// ---------------------------------------------------------------------------

struct RunPayload {
  NetworkState state;
  Trace trace;
};

struct MsgVars {
  SymVar dest, lsid, ar, seq;
};

struct VarPlan {
  std::vector<SymVar> all;   // solver decision order: topo, messages, inits
  std::vector<SymVar> topo;
  std::vector<MsgVars> msgs;
  std::vector<SymVar> inits;
  std::map<int, SymVar> registry;
};

VarPlan plan_vars(int n, const SymbolicTopology* st, int probe_count) {
  VarPlan p;
  int next = 0;
  if (st) {
    p.topo = st->vars();
    for (const SymVar& v : p.topo) next = std::max(next, v.id + 1);
  }
  for (int i = 0; i < probe_count; ++i) {
    MsgVars mv;
    mv.dest = SymVar{next++, 0, n - 1, VarRole::MsgDest, i, -1};
    mv.lsid = SymVar{next++, 0, n - 1, VarRole::MsgLsid, i, -1};
    mv.ar = SymVar{next++, 0, n - 1, VarRole::MsgAr, i, -1};
    mv.seq = SymVar{next++, 0, kSeqMax, VarRole::MsgSeq, i, -1};
    p.msgs.push_back(mv);
  }
  for (int r = 0; r < n; ++r) {
    p.inits.push_back(SymVar{next++, 0, kInitSeqMax, VarRole::InitSeq, r, -1});
  }
  p.all = p.topo;
  for (const MsgVars& mv : p.msgs) {
    p.all.push_back(mv.dest);
    p.all.push_back(mv.lsid);
    p.all.push_back(mv.ar);
    p.all.push_back(mv.seq);
  }
  p.all.insert(p.all.end(), p.inits.begin(), p.inits.end());
  for (const SymVar& v : p.all) p.registry.emplace(v.id, v);
  return p;
}

struct ProgramSpec {
  const ConcreteTopology* conc = nullptr;
  const SymbolicTopology* sym = nullptr;
  std::vector<ProbeMsg> setup;
  const std::string* start_key = nullptr;  // reject paths that replay elsewhere
};

RunPayload run_program(const ProgramSpec& spec, const VarPlan& plan,
                       ConcolicContext& ctx) {
  const Assignment& asg = ctx.assignment();
  ConcreteTopology topo;
  if (spec.sym) {
    // Pin the topology first so the path signature keys on it and the
    // explorer enumerates the whole family even through rejections.
    for (const SymVar& v : plan.topo) {
      pin(&ctx, kSiteTopoPin, SymInt::of_var(v, asg.at(v.id)));
    }
    auto t = spec.sym->concretize(asg);
    if (!t) throw PathRejected("invalid topology assignment");
    topo = std::move(*t);
  } else {
    topo = *spec.conc;
  }
  std::vector<SymInt> inits;
  inits.reserve(topo.n);
  for (int r = 0; r < topo.n; ++r) {
    inits.push_back(SymInt::of_var(plan.inits[r], asg.at(plan.inits[r].id)));
  }
  NetworkState state = standard_initial_state(topo, inits);
  Trace trace;
  auto append = [&trace](Trace&& t) {
    trace.insert(trace.end(), std::make_move_iterator(t.begin()),
                 std::make_move_iterator(t.end()));
  };
  for (const ProbeMsg& pm : spec.setup) {
    append(run_message(state, probe_to_message(topo, pm), &ctx));
  }
  if (spec.start_key && canonicalize(state, plan.registry) != *spec.start_key) {
    throw PathRejected("setup replay diverged from the declared start state");
  }
  for (const MsgVars& mv : plan.msgs) {
    int dest = asg.at(mv.dest.id);
    pin(&ctx, kSiteProbeDest, SymInt::of_var(mv.dest, dest));
    Route route = resolve_route(topo, 0, dest);
    LsaMessage m;
    m.src = route.src;
    m.dest = dest;
    m.via = route.via;
    m.injected = true;
    m.lsa.type = LsType::Router;
    m.lsa.lsid = SymInt::of_var(mv.lsid, asg.at(mv.lsid.id));
    m.lsa.ar = SymInt::of_var(mv.ar, asg.at(mv.ar.id));
    m.lsa.seq = SymInt::of_var(mv.seq, asg.at(mv.seq.id));
    append(run_message(state, m, &ctx));
  }
  // Observation pinning: the canonical final state concretizes every field
  // that is not an initial-sequence offset, so any symbolic value flowing
  // into it must be fixed in the path constraint.  Otherwise one path would
  // cover assignments with distinct canonical outcomes, and state merging
  // would drop the non-representative ones.
  auto pin_concretized = [&](const SymInt& x, bool is_seq) {
    if (!x.e) return;
    if (is_seq) {
      if (auto aff = sx_affine(x.e)) {
        auto it = plan.registry.find(aff->first);
        if (it != plan.registry.end() && it->second.role == VarRole::InitSeq) {
          return;  // stays symbolic in the canonical encoding
        }
      }
    }
    pin(&ctx, kSiteCanonPin, x);
  };
  for (const RouterState& r : state.routers) {
    for (const Lsa& lsa : r.lsdb) {
      pin_concretized(lsa.lsid, false);
      pin_concretized(lsa.ar, false);
      pin_concretized(lsa.seq, true);
    }
  }
  return RunPayload{std::move(state), std::move(trace)};
}

size_t remaining_cap(const GenLimits& limits, size_t emitted) {
  size_t rem = limits.max_total_tests > emitted ? limits.max_total_tests - emitted : 0;
  return std::min(limits.max_paths, rem);
}

std::vector<TestFile> explore_once(const ProgramSpec& spec, int n, int probe_count,
                                   const std::string& id_prefix, size_t& id_counter,
                                   size_t max_paths, GenResult& sink) {
  VarPlan plan = plan_vars(n, spec.sym, probe_count);
  auto program = [&](ConcolicContext& ctx) { return run_program(spec, plan, ctx); };
  std::vector<Axiom> axioms;
  if (spec.sym) axioms.push_back(spec.sym->validity_axiom());
  ExploreLimits el;
  el.max_paths = max_paths;
  auto res = explore<RunPayload>(plan.all, program, {}, axioms, el);
  sink.solver_calls += res.solver_calls;
  if (res.truncated) sink.truncated = true;
  std::vector<TestFile> tests;
  tests.reserve(res.paths.size());
  for (auto& p : res.paths) {
    TestFile tf;
    tf.id = id_prefix + "-" + zfill(id_counter++, 6);
    if (spec.sym) {
      tf.topology = *spec.sym->concretize(p.assignment);
    } else {
      tf.topology = *spec.conc;
    }
    for (const SymVar& iv : plan.inits) {
      tf.initial_seqs.push_back(p.assignment.at(iv.id));
    }
    tf.setup_msgs = spec.setup;
    for (const MsgVars& mv : plan.msgs) {
      tf.probe_msgs.push_back(ProbeMsg{
          p.assignment.at(mv.dest.id), p.assignment.at(mv.lsid.id),
          p.assignment.at(mv.ar.id), p.assignment.at(mv.seq.id)});
    }
    tf.expected_final = expected_from_state(p.payload.state, plan.registry);
    tf.expected_trace.reserve(p.payload.trace.size());
    for (const TraceEvent& ev : p.payload.trace) {
      tf.expected_trace.push_back(ev.to_string());
    }
    tf.canonical_final = canonical_text(tf.expected_final);
    tests.push_back(std::move(tf));
  }
  return tests;
}

std::string links_text(const std::vector<ModelLink>& links) {
  std::ostringstream os;
  os << "links=[";
  for (size_t i = 0; i < links.size(); ++i) {
    if (i) os << ",";
    os << (links[i].kind == ModelLinkKind::P2p ? "p" : "t") << links[i].target;
  }
  os << "]";
  return os.str();
}

std::string attached_text(const std::vector<int>& attached) {
  std::ostringstream os;
  os << "att=[";
  for (size_t i = 0; i < attached.size(); ++i) {
    if (i) os << ",";
    os << attached[i];
  }
  os << "]";
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// ProbeMsg
// ---------------------------------------------------------------------------

std::string ProbeMsg::to_string() const {
  std::ostringstream os;
  os << "dest=" << dest << " lsid=" << lsid << " ar=" << ar << " seq=" << seq;
  return os.str();
}

ProbeMsg ProbeMsg::parse(const std::string& text) {
  auto toks = split_ws(text);
  if (toks.size() != 4) throw std::invalid_argument("bad message line: " + text);
  ProbeMsg m;
  m.dest = parse_kv(toks[0], "dest");
  m.lsid = parse_kv(toks[1], "lsid");
  m.ar = parse_kv(toks[2], "ar");
  m.seq = parse_kv(toks[3], "seq");
  return m;
}

LsaMessage probe_to_message(const ConcreteTopology& topo, const ProbeMsg& pm) {
  Route route = resolve_route(topo, 0, pm.dest);
  LsaMessage m;
  m.src = route.src;
  m.dest = pm.dest;
  m.via = route.via;
  m.injected = true;
  m.lsa.type = LsType::Router;
  m.lsa.lsid = SymInt::concrete(pm.lsid);
  m.lsa.ar = SymInt::concrete(pm.ar);
  m.lsa.seq = SymInt::concrete(pm.seq);
  return m;
}

// ---------------------------------------------------------------------------
// SeqEnc
// ---------------------------------------------------------------------------

std::string SeqEnc::to_string() const {
  switch (kind) {
    case Kind::AbsInit:
      return "0i";
    case Kind::InitOffset: {
      std::ostringstream os;
      os << "S" << router << "+" << value;
      return os.str();
    }
    case Kind::Concrete:
    default:
      return std::to_string(value);
  }
}

SeqEnc SeqEnc::parse(const std::string& text) {
  SeqEnc e;
  if (text == "0i") {
    e.kind = Kind::AbsInit;
    e.router = -1;
    e.value = 0;
    return e;
  }
  if (!text.empty() && text[0] == 'S') {
    auto plus = text.find('+');
    if (plus == std::string::npos) {
      throw std::invalid_argument("bad sequence encoding: " + text);
    }
    e.kind = Kind::InitOffset;
    e.router = std::stoi(text.substr(1, plus - 1));
    e.value = std::stoi(text.substr(plus + 1));
    return e;
  }
  e.kind = Kind::Concrete;
  e.value = std::stoi(text);
  return e;
}

SeqEnc encode_seq(const SymInt& seq, const std::map<int, SymVar>& registry) {
  SeqEnc e;
  if (seq.tag == SeqTag::AbsInit) {
    e.kind = SeqEnc::Kind::AbsInit;
    e.value = 0;
    return e;
  }
  if (seq.e) {
    if (auto aff = sx_affine(seq.e)) {
      auto it = registry.find(aff->first);
      if (it != registry.end() && it->second.role == VarRole::InitSeq) {
        e.kind = SeqEnc::Kind::InitOffset;
        e.router = it->second.a;
        e.value = aff->second;
        return e;
      }
    }
  }
  e.kind = SeqEnc::Kind::Concrete;
  e.value = seq.v;
  return e;
}

// ---------------------------------------------------------------------------
// ExpectedLsa
// ---------------------------------------------------------------------------

std::string ExpectedLsa::to_string() const {
  std::ostringstream os;
  os << (type == LsType::Router ? "rtr" : "net");
  os << " lsid=" << lsid << " ar=" << ar << " seq=" << seq.to_string();
  if (max_age) os << " maxage";
  os << " " << (type == LsType::Router ? links_text(links) : attached_text(attached));
  return os.str();
}

ExpectedLsa ExpectedLsa::parse(const std::string& text) {
  auto toks = split_ws(text);
  if (toks.size() < 4) throw std::invalid_argument("bad expected entry: " + text);
  ExpectedLsa e;
  if (toks[0] == "rtr") {
    e.type = LsType::Router;
  } else if (toks[0] == "net") {
    e.type = LsType::Network;
  } else {
    throw std::invalid_argument("bad LSA type: " + toks[0]);
  }
  e.lsid = parse_kv(toks[1], "lsid");
  e.ar = parse_kv(toks[2], "ar");
  if (toks[3].rfind("seq=", 0) != 0) {
    throw std::invalid_argument("expected seq=..., got: " + toks[3]);
  }
  e.seq = SeqEnc::parse(toks[3].substr(4));
  size_t i = 4;
  if (i < toks.size() && toks[i] == "maxage") {
    e.max_age = true;
    ++i;
  }
  if (i >= toks.size()) throw std::invalid_argument("missing links/att: " + text);
  const std::string& body = toks[i];
  auto parse_bracket = [&](const std::string& tok, const std::string& key) {
    std::string prefix = key + "=[";
    if (tok.rfind(prefix, 0) != 0 || tok.back() != ']') {
      throw std::invalid_argument("bad " + key + " list: " + tok);
    }
    return split_commas(tok.substr(prefix.size(), tok.size() - prefix.size() - 1));
  };
  if (e.type == LsType::Router) {
    for (const std::string& item : parse_bracket(body, "links")) {
      ModelLink l;
      if (item[0] == 'p') {
        l.kind = ModelLinkKind::P2p;
      } else if (item[0] == 't') {
        l.kind = ModelLinkKind::Transit;
      } else {
        throw std::invalid_argument("bad link item: " + item);
      }
      l.target = std::stoi(item.substr(1));
      e.links.push_back(l);
    }
  } else {
    for (const std::string& item : parse_bracket(body, "att")) {
      e.attached.push_back(std::stoi(item));
    }
  }
  return e;
}

std::vector<std::vector<ExpectedLsa>> expected_from_state(
    const NetworkState& state, const std::map<int, SymVar>& registry) {
  std::vector<std::vector<ExpectedLsa>> out(state.topo.n);
  for (int r = 0; r < state.topo.n; ++r) {
    for (const Lsa& lsa : state.routers[r].lsdb) {
      ExpectedLsa e;
      e.type = lsa.type;
      e.lsid = lsa.lsid.v;
      e.ar = lsa.ar.v;
      e.seq = encode_seq(lsa.seq, registry);
      e.max_age = lsa.max_age;
      e.links = lsa.links;
      std::sort(e.links.begin(), e.links.end());
      e.attached = lsa.attached;
      std::sort(e.attached.begin(), e.attached.end());
      out[r].push_back(std::move(e));
    }
  }
  return out;
}

std::string canonical_text(const std::vector<std::vector<ExpectedLsa>>& expected) {
  std::ostringstream os;
  for (size_t r = 0; r < expected.size(); ++r) {
    os << "R" << r << ":";
    for (const ExpectedLsa& e : expected[r]) os << " {" << e.to_string() << "}";
    os << "\n";
  }
  return os.str();
}

std::string canonicalize(const NetworkState& state,
                         const std::map<int, SymVar>& registry) {
  return canonical_text(expected_from_state(state, registry));
}

// ---------------------------------------------------------------------------
// TestFile
// ---------------------------------------------------------------------------

bool TestFile::operator==(const TestFile& o) const {
  return id == o.id && topology == o.topology && initial_seqs == o.initial_seqs &&
         setup_msgs == o.setup_msgs && probe_msgs == o.probe_msgs &&
         expected_final == o.expected_final && expected_trace == o.expected_trace;
}

std::string TestFile::to_text() const {
  std::ostringstream os;
  os << "ospfmbt-test v1\n";
  os << "id: " << id << "\n";
  os << "topology:\n" << topology.to_text();
  os << "inits:";
  for (int v : initial_seqs) os << " " << v;
  os << "\n";
  for (const ProbeMsg& m : setup_msgs) os << "setup: " << m.to_string() << "\n";
  for (const ProbeMsg& m : probe_msgs) os << "probe: " << m.to_string() << "\n";
  for (size_t r = 0; r < expected_final.size(); ++r) {
    for (const ExpectedLsa& e : expected_final[r]) {
      os << "expect R" << r << ": " << e.to_string() << "\n";
    }
  }
  for (const std::string& t : expected_trace) os << "trace: " << t << "\n";
  os << "end\n";
  return os.str();
}

TestFile TestFile::from_text(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line != "ospfmbt-test v1") {
    throw std::invalid_argument("missing or unsupported test-file header");
  }
  TestFile tf;
  std::string topo_block;
  bool in_topo = false;
  bool saw_end = false;
  while (std::getline(is, line)) {
    if (line == "end") {
      saw_end = true;
      break;
    }
    if (!line.empty() && (line[0] == ' ' || line[0] == '\t')) {
      if (!in_topo) throw std::invalid_argument("unexpected indented line: " + line);
      topo_block += line;
      topo_block += "\n";
      continue;
    }
    in_topo = false;
    if (line.rfind("id: ", 0) == 0) {
      tf.id = line.substr(4);
    } else if (line == "topology:") {
      in_topo = true;
    } else if (line.rfind("inits:", 0) == 0) {
      std::istringstream vs(line.substr(6));
      int v;
      while (vs >> v) tf.initial_seqs.push_back(v);
    } else if (line.rfind("setup: ", 0) == 0) {
      tf.setup_msgs.push_back(ProbeMsg::parse(line.substr(7)));
    } else if (line.rfind("probe: ", 0) == 0) {
      tf.probe_msgs.push_back(ProbeMsg::parse(line.substr(7)));
    } else if (line.rfind("expect R", 0) == 0) {
      auto colon = line.find(": ", 8);
      if (colon == std::string::npos) {
        throw std::invalid_argument("bad expect line: " + line);
      }
      int r = std::stoi(line.substr(8, colon - 8));
      if (r < 0) throw std::invalid_argument("bad router index: " + line);
      if ((size_t)r >= tf.expected_final.size()) tf.expected_final.resize(r + 1);
      tf.expected_final[r].push_back(ExpectedLsa::parse(line.substr(colon + 2)));
    } else if (line.rfind("trace: ", 0) == 0) {
      tf.expected_trace.push_back(line.substr(7));
    } else if (!line.empty()) {
      throw std::invalid_argument("unrecognized test-file line: " + line);
    }
  }
  if (!saw_end) throw std::invalid_argument("truncated test file (no end line)");
  if (tf.id.empty()) throw std::invalid_argument("test file missing id");
  tf.topology = ConcreteTopology::from_text(topo_block);
  if ((int)tf.initial_seqs.size() != tf.topology.n) {
    throw std::invalid_argument("inits count does not match topology");
  }
  if (tf.probe_msgs.empty()) throw std::invalid_argument("test file has no probe");
  if ((int)tf.expected_final.size() < tf.topology.n) {
    tf.expected_final.resize(tf.topology.n);
  }
  tf.canonical_final = canonical_text(tf.expected_final);
  return tf;
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

std::vector<ReachableState> extract_reachable_states(const std::vector<TestFile>& tests) {
  std::vector<ReachableState> out;
  std::set<std::string> seen;
  for (const TestFile& t : tests) {
    if (!seen.insert(t.canonical_final).second) continue;
    ReachableState rs;
    rs.key = t.canonical_final;
    rs.witness = t.setup_msgs;
    rs.witness.insert(rs.witness.end(), t.probe_msgs.begin(), t.probe_msgs.end());
    out.push_back(std::move(rs));
  }
  return out;
}

GenResult generate_depth1(const ConcreteTopology& topo, const GenLimits& limits) {
  GenResult g;
  size_t counter = 0;
  ProgramSpec spec;
  spec.conc = &topo;
  g.tests = explore_once(spec, topo.n, 1, "d1", counter, remaining_cap(limits, 0), g);
  g.iterations.push_back(IterationStat{
      1, 1, g.tests.size(), extract_reachable_states(g.tests).size()});
  return g;
}

GenResult generate_depth1(const SymbolicTopology& st, const GenLimits& limits) {
  GenResult g;
  size_t counter = 0;
  ProgramSpec spec;
  spec.sym = &st;
  g.tests = explore_once(spec, st.n, 1, "d1", counter, remaining_cap(limits, 0), g);
  g.iterations.push_back(IterationStat{1, 1, g.tests.size(), 0});
  return g;
}

GenResult systematic_extension(const ConcreteTopology& topo, int max_depth,
                               const GenLimits& limits) {
  if (max_depth < 1) throw std::invalid_argument("max_depth must be >= 1");
  GenResult g;
  VarPlan plan = plan_vars(topo.n, nullptr, 1);
  std::vector<SymInt> inits0;
  for (int r = 0; r < topo.n; ++r) inits0.push_back(SymInt::of_var(plan.inits[r], 0));
  NetworkState standard = standard_initial_state(topo, inits0);
  std::vector<ReachableState> ris;
  ris.push_back(ReachableState{canonicalize(standard, plan.registry), {}});
  std::set<std::string> ers;
  for (int depth = 1; depth <= max_depth && !ris.empty(); ++depth) {
    std::string prefix = "d" + std::to_string(depth);
    size_t counter = 0;
    std::vector<TestFile> iter_tests;
    for (const ReachableState& s : ris) {
      size_t cap = remaining_cap(limits, g.tests.size() + iter_tests.size());
      if (cap == 0) {
        g.truncated = true;
        break;
      }
      ProgramSpec spec;
      spec.conc = &topo;
      spec.setup = s.witness;
      spec.start_key = depth == 1 ? nullptr : &s.key;
      auto tests = explore_once(spec, topo.n, 1, prefix, counter, cap, g);
      iter_tests.insert(iter_tests.end(), std::make_move_iterator(tests.begin()),
                        std::make_move_iterator(tests.end()));
    }
    auto reached = extract_reachable_states(iter_tests);
    for (const ReachableState& s : ris) ers.insert(s.key);
    std::vector<ReachableState> next;
    for (ReachableState& s : reached) {
      if (!ers.count(s.key)) next.push_back(std::move(s));
    }
    g.iterations.push_back(
        IterationStat{depth, ris.size(), iter_tests.size(), next.size()});
    g.tests.insert(g.tests.end(), std::make_move_iterator(iter_tests.begin()),
                   std::make_move_iterator(iter_tests.end()));
    ris = std::move(next);
  }
  return g;
}

GenResult arbitrary_prefix(const ConcreteTopology& topo, int prefix_len,
                           uint64_t seed, const GenLimits& limits) {
  if (prefix_len < 0) throw std::invalid_argument("prefix_len must be >= 0");
  std::mt19937_64 rng(seed);
  std::vector<ProbeMsg> prefix;
  for (int i = 0; i < prefix_len; ++i) {
    ProbeMsg m;
    m.dest = (int)(rng() % (uint64_t)topo.n);
    m.lsid = (int)(rng() % (uint64_t)topo.n);
    m.ar = (int)(rng() % (uint64_t)topo.n);
    m.seq = (int)(rng() % (uint64_t)(kSeqMax + 1));
    prefix.push_back(m);
  }
  GenResult g;
  size_t counter = 0;
  ProgramSpec spec;
  spec.conc = &topo;
  spec.setup = std::move(prefix);
  g.tests = explore_once(spec, topo.n, 1, "ap", counter, remaining_cap(limits, 0), g);
  g.iterations.push_back(IterationStat{
      prefix_len + 1, 1, g.tests.size(), extract_reachable_states(g.tests).size()});
  return g;
}

GenResult generate_naive(const ConcreteTopology& topo, int depth,
                         const GenLimits& limits) {
  if (depth < 1) throw std::invalid_argument("depth must be >= 1");
  GenResult g;
  size_t counter = 0;
  ProgramSpec spec;
  spec.conc = &topo;
  std::string prefix = "n" + std::to_string(depth);
  g.tests = explore_once(spec, topo.n, depth, prefix, counter,
                         remaining_cap(limits, 0), g);
  g.iterations.push_back(IterationStat{
      depth, 1, g.tests.size(), extract_reachable_states(g.tests).size()});
  return g;
}

// ---------------------------------------------------------------------------
// Oracle hooks
// ---------------------------------------------------------------------------

std::vector<SymVar> depth1_vars(const ConcreteTopology& topo) {
  return plan_vars(topo.n, nullptr, 1).all;
}

PathSig depth1_signature(const ConcreteTopology& topo, const Assignment& full) {
  VarPlan plan = plan_vars(topo.n, nullptr, 1);
  ProgramSpec spec;
  spec.conc = &topo;
  ConcolicContext ctx(full);
  run_program(spec, plan, ctx);
  return ctx.signature();
}

std::vector<PathSig> depth1_path_signatures(const ConcreteTopology& topo,
                                            const GenLimits& limits) {
  VarPlan plan = plan_vars(topo.n, nullptr, 1);
  ProgramSpec spec;
  spec.conc = &topo;
  auto program = [&](ConcolicContext& ctx) { return run_program(spec, plan, ctx); };
  ExploreLimits el;
  el.max_paths = limits.max_paths;
  auto res = explore<RunPayload>(plan.all, program, {}, {}, el);
  std::vector<PathSig> sigs;
  sigs.reserve(res.paths.size());
  for (const auto& p : res.paths) sigs.push_back(p.sig);
  return sigs;
}

// ---------------------------------------------------------------------------
// Suite I/O
// ---------------------------------------------------------------------------

void write_suite(const std::string& dir, const GenResult& gen, SuiteManifest manifest) {
  fs::create_directories(dir);
  manifest.test_count = gen.tests.size();
  manifest.unique_states = extract_reachable_states(gen.tests).size();
  manifest.iterations = gen.iterations;
  manifest.test_ids.clear();
  for (const TestFile& t : gen.tests) manifest.test_ids.push_back(t.id);
  manifest.config_hash = fnv1a64_hex(manifest.generator + "|" + manifest.config +
                                     "|" + std::to_string(manifest.seed));
  for (const TestFile& t : gen.tests) {
    std::ofstream f(fs::path(dir) / (t.id + ".test"), std::ios::binary);
    if (!f) throw std::runtime_error("cannot write test file for " + t.id);
    f << t.to_text();
  }
  nlohmann::json j;
  j["format"] = manifest.format;
  j["generator"] = manifest.generator;
  j["config"] = manifest.config;
  j["config_hash"] = manifest.config_hash;
  j["seed"] = manifest.seed;
  j["test_count"] = manifest.test_count;
  j["unique_states"] = manifest.unique_states;
  j["truncated"] = gen.truncated;
  nlohmann::json iters = nlohmann::json::array();
  for (const IterationStat& it : manifest.iterations) {
    nlohmann::json ji;
    ji["depth"] = it.depth;
    ji["start_states"] = it.start_states;
    ji["tests"] = it.tests;
    ji["new_states"] = it.new_states;
    iters.push_back(ji);
  }
  j["iterations"] = iters;
  j["test_ids"] = manifest.test_ids;
  std::ofstream mf(fs::path(dir) / "manifest.json", std::ios::binary);
  if (!mf) throw std::runtime_error("cannot write manifest in " + dir);
  mf << j.dump(2) << "\n";
}

Suite read_suite(const std::string& dir) {
  std::ifstream mf(fs::path(dir) / "manifest.json", std::ios::binary);
  if (!mf) throw std::runtime_error("cannot open manifest in " + dir);
  nlohmann::json j = nlohmann::json::parse(mf);
  Suite s;
  s.manifest.format = j.at("format").get<int>();
  if (s.manifest.format != 1) {
    throw std::runtime_error("unsupported suite format " +
                             std::to_string(s.manifest.format));
  }
  s.manifest.generator = j.at("generator").get<std::string>();
  s.manifest.config = j.at("config").get<std::string>();
  s.manifest.config_hash = j.at("config_hash").get<std::string>();
  s.manifest.seed = j.at("seed").get<uint64_t>();
  s.manifest.test_count = j.at("test_count").get<size_t>();
  s.manifest.unique_states = j.at("unique_states").get<size_t>();
  for (const auto& ji : j.at("iterations")) {
    IterationStat it;
    it.depth = ji.at("depth").get<int>();
    it.start_states = ji.at("start_states").get<size_t>();
    it.tests = ji.at("tests").get<size_t>();
    it.new_states = ji.at("new_states").get<size_t>();
    s.manifest.iterations.push_back(it);
  }
  for (const auto& id : j.at("test_ids")) {
    s.manifest.test_ids.push_back(id.get<std::string>());
  }
  for (const std::string& id : s.manifest.test_ids) {
    std::ifstream tf(fs::path(dir) / (id + ".test"), std::ios::binary);
    if (!tf) throw std::runtime_error("missing test file for " + id);
    std::ostringstream buf;
    buf << tf.rdbuf();
    s.tests.push_back(TestFile::from_text(buf.str()));
  }
  return s;
}

}  // namespace ospfmbt
