#include "ospfmbt/adapter.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace ospfmbt {

namespace {

std::string hex32(uint32_t v) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "0x%08X", v);
  return buf;
}

// Inverse of wire::router_ip; -1 when the address is not a router of [0, n).
int router_index(uint32_t ip, int n) {
  if (ip < wire::router_ip(0)) return -1;
  uint32_t off = ip - wire::router_ip(0);
  if (off >= uint32_t(n)) return -1;
  return int(off);
}

std::string key_string(LsType type, int lsid, int ar) {
  std::ostringstream os;
  os << (type == LsType::Router ? "rtr" : "net") << " lsid=" << lsid
     << " ar=" << ar;
  return os.str();
}

// Model-id view of an expected entry, for rendering and key matching.
Lsa to_model_lsa(const ExpectedLsa& e) {
  Lsa lsa;
  lsa.type = e.type;
  lsa.lsid = SymInt::concrete(e.lsid);
  lsa.ar = SymInt::concrete(e.ar);
  lsa.seq = SymInt::concrete(0);
  lsa.max_age = e.max_age;
  lsa.links = e.links;
  lsa.attached = e.attached;
  return lsa;
}

bool link_less(const wire::WireLink& a, const wire::WireLink& b) {
  return std::tie(a.type, a.link_id, a.link_data, a.metric) <
         std::tie(b.type, b.link_id, b.link_data, b.metric);
}

std::string links_string(std::vector<wire::WireLink> links) {
  std::sort(links.begin(), links.end(), link_less);
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < links.size(); ++i) {
    if (i) os << " ";
    os << "t" << int(links[i].type) << ":"
       << wire::ip_to_string(links[i].link_id);
  }
  os << "]";
  return os.str();
}

std::string attached_string(std::vector<uint32_t> att) {
  std::sort(att.begin(), att.end());
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < att.size(); ++i) {
    if (i) os << " ";
    os << wire::ip_to_string(att[i]);
  }
  os << "]";
  return os.str();
}

std::vector<uint8_t> encode_probe_packet(const ConcreteTopology& topo,
                                         const ProbeMsg& pm,
                                         const WireBases& bases) {
  if (pm.ar < 0 || pm.ar >= topo.n || pm.lsid < 0 || pm.lsid >= topo.n ||
      pm.dest < 0 || pm.dest >= topo.n) {
    throw SutError("probe fields outside the router domain");
  }
  wire::WireLsa w;
  w.ls_type = wire::kLsTypeRouter;
  w.link_state_id = wire::router_ip(pm.lsid);
  w.advertising_router = wire::router_ip(pm.ar);
  w.ls_seq = wire::model_to_wire_seq(pm.seq, bases.model_seqs[pm.ar],
                                     bases.targets[pm.ar]);
  wire::LsuPacket pkt;
  pkt.router_id = wire::router_ip(resolve_route(topo, 0, pm.dest).src);
  pkt.lsas.push_back(w);
  return wire::encode_lsu(pkt);
}

std::vector<std::vector<wire::WireLsa>> read_all_lsdbs(SutAdapter& adapter) {
  std::vector<std::vector<wire::WireLsa>> out;
  for (int r = 0; r < adapter.router_count(); ++r)
    out.push_back(adapter.read_lsdb(r));
  return out;
}

const char* stage_name(DiffStage s) {
  return s == DiffStage::Setup ? "setup" : "final";
}

std::string route_string(const RouteEntry& e) {
  std::ostringstream os;
  os << "next=" << e.next_hop << " cost=" << e.cost;
  return os.str();
}

}  // namespace

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Pass: return "Pass";
    case Outcome::Fail: return "Fail";
    case Outcome::Inconclusive: return "Inconclusive";
  }
  return "?";
}

std::string Diff::to_string() const {
  std::ostringstream os;
  os << "[" << stage_name(stage) << "] R" << router << " " << key << " "
     << field << ": expected " << expected << " observed " << observed;
  return os.str();
}

bool Verdict::operator==(const Verdict& o) const {
  return test_id == o.test_id && outcome == o.outcome && detail == o.detail &&
         diffs == o.diffs && route_diffs == o.route_diffs &&
         model_trace == o.model_trace && sut_trace == o.sut_trace;
}

uint32_t expected_wire_seq(const SeqEnc& seq, int ar, const WireBases& bases) {
  switch (seq.kind) {
    case SeqEnc::Kind::AbsInit:
      return wire::kInitialSeq + uint32_t(seq.value);
    case SeqEnc::Kind::InitOffset: {
      int r = seq.router;
      if (r < 0 || size_t(r) >= bases.targets.size())
        throw SutError("sequence symbol router outside the base map");
      return uint32_t(int64_t(bases.targets[r]) + seq.value);
    }
    case SeqEnc::Kind::Concrete:
      if (ar < 0 || size_t(ar) >= bases.targets.size())
        throw SutError("advertising router outside the base map");
      return wire::model_to_wire_seq(seq.value, bases.model_seqs[ar],
                                     bases.targets[ar]);
  }
  throw SutError("unknown sequence encoding");
}

WireBases normalize_sequence_numbers(SutAdapter& adapter,
                                     const ConcreteTopology& topo,
                                     const std::vector<int>& target_model_seqs,
                                     int timeout_ms) {
  const int n = topo.n;
  if (adapter.router_count() != n)
    throw SutError("adapter router count does not match the topology");
  if (int(target_model_seqs.size()) != n)
    throw SutError("one target model sequence per router required");

  auto read_own_seq = [&](int r) -> uint32_t {
    for (const wire::WireLsa& w : adapter.read_lsdb(r)) {
      if (w.ls_type == wire::kLsTypeRouter &&
          w.link_state_id == wire::router_ip(r) &&
          w.advertising_router == wire::router_ip(r)) {
        return w.ls_seq;
      }
    }
    throw SutError("router " + std::to_string(r) +
                   " has no own LSA after reset");
  };

  std::vector<uint32_t> observed;
  for (int r = 0; r < n; ++r) observed.push_back(read_own_seq(r));

  wire::NormalizationPlan plan =
      wire::normalization_plan(observed, target_model_seqs);

  for (int r = 0; r < n; ++r) {
    wire::WireLsa spoof;
    spoof.ls_type = wire::kLsTypeRouter;
    spoof.link_state_id = wire::router_ip(r);
    spoof.advertising_router = wire::router_ip(r);
    spoof.ls_seq = plan.inject_seqs[r];
    wire::LsuPacket pkt;
    pkt.router_id = wire::router_ip(r);
    pkt.lsas.push_back(spoof);
    adapter.inject(wire::encode_lsu(pkt), r);
  }
  if (!adapter.await_stable(timeout_ms))
    throw SutError("stability timeout during normalization");

  for (int r = 0; r < n; ++r) {
    uint32_t got = read_own_seq(r);
    if (got != plan.targets[r]) {
      throw SutError("normalization mismatch at router " + std::to_string(r) +
                     ": want " + hex32(plan.targets[r]) + " got " +
                     hex32(got));
    }
  }
  return WireBases{plan.targets, target_model_seqs};
}

std::vector<Diff> compare_states(
    const std::vector<std::vector<ExpectedLsa>>& expected,
    const std::vector<std::vector<wire::WireLsa>>& observed,
    const WireBases& bases, DiffStage stage) {
  std::vector<Diff> diffs;
  auto add = [&](int r, const std::string& key, const std::string& field,
                 std::string exp, std::string obs) {
    diffs.push_back(Diff{stage, r, key, field, std::move(exp), std::move(obs)});
  };

  const size_t n = expected.size();
  if (observed.size() != n) throw SutError("observed router count mismatch");

  for (size_t r = 0; r < n; ++r) {
    std::vector<bool> matched(observed[r].size(), false);
    for (const ExpectedLsa& e : expected[r]) {
      wire::WireLsa want = wire_image(to_model_lsa(e));
      const std::string key = key_string(e.type, e.lsid, e.ar);

      int found = -1;
      for (size_t i = 0; i < observed[r].size(); ++i) {
        const wire::WireLsa& o = observed[r][i];
        if (!matched[i] && o.ls_type == want.ls_type &&
            o.link_state_id == want.link_state_id &&
            o.advertising_router == want.advertising_router) {
          found = int(i);
          break;
        }
      }
      if (found < 0) {
        add(int(r), key, "missing", e.to_string(), "absent");
        continue;
      }
      matched[found] = true;
      const wire::WireLsa& o = observed[r][size_t(found)];

      uint32_t want_seq = expected_wire_seq(e.seq, e.ar, bases);
      if (o.ls_seq != want_seq) {
        add(int(r), key, "seq", hex32(want_seq) + " (" + e.seq.to_string() + ")",
            hex32(o.ls_seq));
      }
      const bool obs_aged = o.ls_age >= wire::kMaxAge;
      if (obs_aged != e.max_age) {
        add(int(r), key, "age", e.max_age ? "maxage" : "fresh",
            obs_aged ? "maxage" : "fresh");
      }
      if (e.type == LsType::Router) {
        std::vector<wire::WireLink> a = want.links;
        std::vector<wire::WireLink> b = o.links;
        std::sort(a.begin(), a.end(), link_less);
        std::sort(b.begin(), b.end(), link_less);
        if (!(a == b)) {
          add(int(r), key, "links", links_string(want.links),
              links_string(o.links));
        }
      } else {
        std::vector<uint32_t> a = want.attached;
        std::vector<uint32_t> b = o.attached;
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        if (a != b) {
          add(int(r), key, "attached", attached_string(want.attached),
              attached_string(o.attached));
        }
        if (o.netmask != want.netmask) {
          add(int(r), key, "netmask", wire::ip_to_string(want.netmask),
              wire::ip_to_string(o.netmask));
        }
      }
    }
    for (size_t i = 0; i < observed[r].size(); ++i) {
      if (matched[i]) continue;
      const wire::WireLsa& o = observed[r][i];
      std::ostringstream desc;
      desc << (o.ls_type == wire::kLsTypeRouter ? "rtr" : "net")
           << " lsid=" << wire::ip_to_string(o.link_state_id)
           << " ar=" << wire::ip_to_string(o.advertising_router)
           << " seq=" << hex32(o.ls_seq);
      add(int(r), desc.str(), "extra", "absent", desc.str());
    }
  }
  return diffs;
}

Verdict run_test(SutAdapter& adapter, const TestFile& test,
                 const RunOptions& opts) {
  Verdict v;
  v.test_id = test.id;
  v.model_trace = test.expected_trace;
  const ConcreteTopology& topo = test.topology;

  auto finish = [&](Outcome outcome, std::string detail) -> Verdict& {
    v.outcome = outcome;
    v.detail = std::move(detail);
    v.sut_trace = adapter.message_log();
    return v;
  };

  try {
    adapter.reset_all();
    WireBases bases = normalize_sequence_numbers(
        adapter, topo, test.initial_seqs, opts.stability_timeout_ms);
    adapter.on_normalized(test.initial_seqs, bases.targets);

    // Shadow replay of the reference model, used for the intermediate-state
    // check and the advisory routing expectation.
    std::vector<SymInt> inits;
    for (int s : test.initial_seqs) inits.push_back(SymInt::concrete(s));
    NetworkState model = standard_initial_state(topo, inits);

    for (const ProbeMsg& pm : test.setup_msgs) {
      adapter.inject(encode_probe_packet(topo, pm, bases), pm.dest);
      if (!adapter.await_stable(opts.stability_timeout_ms))
        return finish(Outcome::Inconclusive, "stability timeout during setup");
      run_message(model, probe_to_message(topo, pm));
    }
    if (!test.setup_msgs.empty() && opts.verify_setup_state) {
      std::vector<Diff> sdiffs =
          compare_states(expected_from_state(model, {}), read_all_lsdbs(adapter),
                         bases, DiffStage::Setup);
      if (!sdiffs.empty()) {
        v.diffs = std::move(sdiffs);
        return finish(Outcome::Fail, "start state mismatch after setup");
      }
    }

    for (const ProbeMsg& pm : test.probe_msgs) {
      adapter.inject(encode_probe_packet(topo, pm, bases), pm.dest);
      if (!adapter.await_stable(opts.stability_timeout_ms))
        return finish(Outcome::Inconclusive, "stability timeout after probe");
      run_message(model, probe_to_message(topo, pm));
    }

    v.diffs = compare_states(test.expected_final, read_all_lsdbs(adapter),
                             bases, DiffStage::Final);
    if (opts.read_routes) {
      for (int r = 0; r < topo.n; ++r) {
        std::vector<RouteEntry> want = compute_routing_table(model, r);
        std::vector<RouteEntry> got = adapter.read_routing_table(r);
        size_t wi = 0, gi = 0;
        while (wi < want.size() || gi < got.size()) {
          if (gi >= got.size() ||
              (wi < want.size() && want[wi].dest < got[gi].dest)) {
            v.route_diffs.push_back(
                Diff{DiffStage::Final, r, "dest=" + std::to_string(want[wi].dest),
                     "route-missing", route_string(want[wi]), "absent"});
            ++wi;
          } else if (wi >= want.size() || got[gi].dest < want[wi].dest) {
            v.route_diffs.push_back(
                Diff{DiffStage::Final, r, "dest=" + std::to_string(got[gi].dest),
                     "route-extra", "absent", route_string(got[gi])});
            ++gi;
          } else {
            if (!(want[wi] == got[gi])) {
              v.route_diffs.push_back(Diff{
                  DiffStage::Final, r, "dest=" + std::to_string(want[wi].dest),
                  "route", route_string(want[wi]), route_string(got[gi])});
            }
            ++wi;
            ++gi;
          }
        }
      }
    }
    return finish(v.diffs.empty() ? Outcome::Pass : Outcome::Fail, "");
  } catch (const NonTermination& e) {
    return finish(Outcome::Inconclusive,
                  std::string("model replay did not stabilize: ") + e.what());
  } catch (const std::exception& e) {
    return finish(Outcome::Inconclusive, e.what());
  }
}

// ---------------------------------------------------------------------------
// Verdict reports
// ---------------------------------------------------------------------------
namespace {

nlohmann::json diff_to_json(const Diff& d) {
  return nlohmann::json{{"stage", stage_name(d.stage)}, {"router", d.router},
                        {"key", d.key},                 {"field", d.field},
                        {"expected", d.expected},       {"observed", d.observed}};
}

Diff diff_from_json(const nlohmann::json& j) {
  Diff d;
  const std::string stage = j.at("stage").get<std::string>();
  if (stage == "setup") {
    d.stage = DiffStage::Setup;
  } else if (stage == "final") {
    d.stage = DiffStage::Final;
  } else {
    throw std::runtime_error("verdict report: unknown diff stage " + stage);
  }
  d.router = j.at("router").get<int>();
  d.key = j.at("key").get<std::string>();
  d.field = j.at("field").get<std::string>();
  d.expected = j.at("expected").get<std::string>();
  d.observed = j.at("observed").get<std::string>();
  return d;
}

}  // namespace

std::string verdict_to_json(const Verdict& v) {
  nlohmann::json j;
  j["test_id"] = v.test_id;
  j["outcome"] = outcome_name(v.outcome);
  j["detail"] = v.detail;
  j["diffs"] = nlohmann::json::array();
  for (const Diff& d : v.diffs) j["diffs"].push_back(diff_to_json(d));
  j["route_diffs"] = nlohmann::json::array();
  for (const Diff& d : v.route_diffs) j["route_diffs"].push_back(diff_to_json(d));
  j["model_trace"] = v.model_trace;
  j["sut_trace"] = v.sut_trace;
  return j.dump();
}

Verdict verdict_from_json(const std::string& line) {
  nlohmann::json j = nlohmann::json::parse(line);
  Verdict v;
  v.test_id = j.at("test_id").get<std::string>();
  const std::string outcome = j.at("outcome").get<std::string>();
  if (outcome == "Pass") {
    v.outcome = Outcome::Pass;
  } else if (outcome == "Fail") {
    v.outcome = Outcome::Fail;
  } else if (outcome == "Inconclusive") {
    v.outcome = Outcome::Inconclusive;
  } else {
    throw std::runtime_error("verdict report: unknown outcome " + outcome);
  }
  v.detail = j.at("detail").get<std::string>();
  for (const auto& d : j.at("diffs")) v.diffs.push_back(diff_from_json(d));
  for (const auto& d : j.at("route_diffs"))
    v.route_diffs.push_back(diff_from_json(d));
  v.model_trace = j.at("model_trace").get<std::vector<std::string>>();
  v.sut_trace = j.at("sut_trace").get<std::vector<std::string>>();
  return v;
}

void append_report(const std::string& path, const Verdict& v) {
  std::ofstream out(path, std::ios::app);
  if (!out) throw std::runtime_error("cannot open report file " + path);
  out << verdict_to_json(v) << "\n";
}

std::vector<Verdict> read_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open report file " + path);
  std::vector<Verdict> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(verdict_from_json(line));
  }
  return out;
}

// ---------------------------------------------------------------------------
// In-process adapter
// ---------------------------------------------------------------------------
InProcessAdapter::InProcessAdapter(ConcreteTopology topo, MutantConfig cfg,
                                   uint64_t seed)
    : topo_(std::move(topo)), cfg_(std::move(cfg)), rng_(seed) {
  topo_.validate();
  reset_all();
}

int InProcessAdapter::router_count() const { return topo_.n; }

void InProcessAdapter::reset_all() {
  std::vector<SymInt> inits(size_t(topo_.n), SymInt::concrete(0));
  st_ = standard_initial_state(topo_, inits, cfg_);
  anchor_model_.assign(size_t(topo_.n), 0);
  anchor_wire_.resize(size_t(topo_.n));
  for (int r = 0; r < topo_.n; ++r)
    anchor_wire_[size_t(r)] = wire::kInitialSeq + uint32_t(rng_() % 0x100);
  normalized_ = false;
  log_.clear();
  log_.push_back("reset");
}

wire::WireLsa InProcessAdapter::render(const Lsa& lsa) const {
  wire::WireLsa w = wire_image(lsa);
  if (lsa.seq.tag != SeqTag::AbsInit) {
    const int a = lsa.ar.v;
    if (a < 0 || a >= topo_.n) throw SutError("entry outside router domain");
    if (lsa.seq.v == kSeqMax) {
      w.ls_seq = wire::kMaxSeqNum;
    } else {
      w.ls_seq = uint32_t(int64_t(anchor_wire_[size_t(a)]) +
                          (lsa.seq.v - anchor_model_[size_t(a)]));
    }
  }
  std::vector<uint8_t> bytes = wire::encode_lsa(w);
  wire::LsaDecodeResult dec = wire::decode_lsa(bytes.data(), bytes.size());
  if (dec.error != wire::DecodeError::None)
    throw SutError("rendered LSA did not round-trip");
  return dec.lsa;
}

std::vector<wire::WireLsa> InProcessAdapter::read_lsdb(int router) {
  if (router < 0 || router >= topo_.n)
    throw SutError("read_lsdb: router out of range");
  std::vector<wire::WireLsa> out;
  for (const Lsa& lsa : st_.routers[size_t(router)].lsdb)
    out.push_back(render(lsa));
  return out;
}

std::vector<RouteEntry> InProcessAdapter::read_routing_table(int router) {
  if (router < 0 || router >= topo_.n)
    throw SutError("read_routing_table: router out of range");
  return compute_routing_table(st_, router);
}

void InProcessAdapter::inject(const std::vector<uint8_t>& packet, int ingress) {
  if (ingress < 0 || ingress >= topo_.n)
    throw SutError("inject: ingress out of range");
  wire::LsuDecodeResult dec = wire::decode_lsu(packet);
  if (dec.error != wire::DecodeError::None)
    throw SutError(std::string("inject: ") +
                   wire::decode_error_name(dec.error));

  for (const wire::WireLsa& w : dec.packet.lsas) {
    if (w.ls_type != wire::kLsTypeRouter)
      throw SutError("inject: only router LSAs are accepted");
    const int lsid = router_index(w.link_state_id, topo_.n);
    const int ar = router_index(w.advertising_router, topo_.n);
    if (lsid < 0 || ar < 0)
      throw SutError("inject: LSA ids outside the router domain");

    if (!normalized_) {
      // Pre-normalization self-spoof: answered at the wire level, since the
      // arbitrary post-reset bases need not fit the model's window.  The
      // router fights back by advancing its own LSA to spoof + 1.
      if (lsid != ingress || ar != ingress)
        throw SutError("inject: expected a self-spoof before normalization");
      const Lsa* own =
          find_lsa(st_.routers[size_t(ingress)], LsType::Router, ingress,
                   ingress);
      if (!own) throw SutError("inject: router lacks its own LSA");
      const uint32_t cur = render(*own).ls_seq;
      if (wire::seq_less(cur, w.ls_seq)) {
        anchor_model_[size_t(ingress)] = own->seq.v;
        anchor_wire_[size_t(ingress)] = w.ls_seq + 1;
        log_.push_back("R" + std::to_string(ingress) + " wire-fightback " +
                       hex32(w.ls_seq + 1));
      } else {
        log_.push_back("R" + std::to_string(ingress) + " wire-discard-stale " +
                       hex32(w.ls_seq));
      }
      continue;
    }

    if (!w.links.empty())
      throw SutError("inject: probe body must be empty");
    if (w.ls_age >= wire::kMaxAge)
      throw SutError("inject: aged probes are not in the vocabulary");
    std::optional<int> seq = wire::wire_to_model_seq(
        w.ls_seq, anchor_model_[size_t(ar)], anchor_wire_[size_t(ar)]);
    if (!seq)
      throw SutError("inject: sequence " + hex32(w.ls_seq) +
                     " outside the model window of router " +
                     std::to_string(ar));

    ProbeMsg pm{ingress, lsid, ar, *seq};
    LsaMessage msg = probe_to_message(topo_, pm);
    const int src = router_index(dec.packet.router_id, topo_.n);
    if (src != msg.src)
      throw SutError("inject: sender does not match the delivery route");
    inject_message(st_, msg);
  }
}

bool InProcessAdapter::await_stable(int timeout_ms) {
  (void)timeout_ms;  // stability is exact for the in-process model
  try {
    Trace t = run_to_stable(st_);
    for (const TraceEvent& ev : t) log_.push_back(ev.to_string());
    return true;
  } catch (const NonTermination& e) {
    for (const TraceEvent& ev : e.partial) log_.push_back(ev.to_string());
    log_.push_back(std::string("non-termination: ") + e.what());
    return false;
  }
}

void InProcessAdapter::on_normalized(const std::vector<int>& target_model_seqs,
                                     const std::vector<uint32_t>& wire_targets) {
  if (int(target_model_seqs.size()) != topo_.n ||
      int(wire_targets.size()) != topo_.n) {
    throw SutError("on_normalized: one target per router required");
  }
  std::vector<SymInt> inits;
  for (int s : target_model_seqs) inits.push_back(SymInt::concrete(s));
  st_ = standard_initial_state(topo_, inits, cfg_);
  anchor_model_ = target_model_seqs;
  anchor_wire_ = wire_targets;
  normalized_ = true;
  log_.push_back("normalized");
}

std::vector<std::string> InProcessAdapter::message_log() { return log_; }

// ---------------------------------------------------------------------------
// Remote-CLI skeleton
// ---------------------------------------------------------------------------
RemoteCliAdapter::RemoteCliAdapter(int routers, RemoteCliTransport transport)
    : n_(routers), t_(std::move(transport)) {}

int RemoteCliAdapter::router_count() const { return n_; }

void RemoteCliAdapter::reset_all() {
  if (!t_.command) throw SutError("remote transport: command hook not wired");
  for (int r = 0; r < n_; ++r) t_.command(r, kResetCommand);
}

std::vector<wire::WireLsa> RemoteCliAdapter::read_lsdb(int router) {
  if (!t_.query || !t_.parse_lsdb)
    throw SutError("remote transport: query/parse_lsdb hooks not wired");
  return t_.parse_lsdb(t_.query(router, kLsdbCommand));
}

std::vector<RouteEntry> RemoteCliAdapter::read_routing_table(int router) {
  if (!t_.query || !t_.parse_routes)
    throw SutError("remote transport: query/parse_routes hooks not wired");
  return t_.parse_routes(t_.query(router, kRouteCommand));
}

void RemoteCliAdapter::inject(const std::vector<uint8_t>& packet, int ingress) {
  if (!t_.send_raw) throw SutError("remote transport: send_raw hook not wired");
  t_.send_raw(ingress, packet);
}

bool RemoteCliAdapter::await_stable(int timeout_ms) {
  if (!t_.query) throw SutError("remote transport: query hook not wired");
  const auto deadline = std::chrono::steady_clock::now() +
                        std::chrono::milliseconds(timeout_ms);
  auto snapshot = [&] {
    std::string s;
    for (int r = 0; r < n_; ++r) {
      s += t_.query(r, kLsdbCommand);
      s += '\n';
    }
    return s;
  };
  std::string prev = snapshot();
  for (;;) {
    if (t_.poll_interval_ms > 0) {
      std::this_thread::sleep_for(
          std::chrono::milliseconds(t_.poll_interval_ms));
    }
    std::string cur = snapshot();
    if (cur == prev) return true;
    if (std::chrono::steady_clock::now() > deadline) return false;
    prev = std::move(cur);
  }
}

}  // namespace ospfmbt
