#include "ospfmbt/model.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "ospfmbt/wire.hpp"

namespace ospfmbt {

namespace {

// Concolic branch sites.  Site ids only need to be stable and distinct; the
// path signature keys on (site, outcome) sequences.
constexpr int kSiteKeyLsid = 10;
constexpr int kSiteKeyAr = 11;
constexpr int kSiteSelf = 20;
constexpr int kSiteSeqGt = 30;
constexpr int kSiteSeqEq = 31;
constexpr int kSitePin = 40;
constexpr int kSiteFbAtMax = 50;
constexpr int kSiteFbReachMax = 51;
constexpr int kSiteFbOwnKey = 52;

using wire::subnet_addr;

bool key_less(const Lsa& a, const Lsa& b) { return a.key() < b.key(); }

int find_index(const RouterState& r, LsType type, int lsid, int ar) {
  for (size_t i = 0; i < r.lsdb.size(); ++i) {
    const Lsa& e = r.lsdb[i];
    if (e.type == type && e.lsid.v == lsid && e.ar.v == ar) return int(i);
  }
  return -1;
}

// First Router-LSA claiming advertising router `ar` under a mismatched
// link-state id (the footprint of a spoofed third-party LSA).
int find_mismatched(const RouterState& r, int ar) {
  for (size_t i = 0; i < r.lsdb.size(); ++i) {
    const Lsa& e = r.lsdb[i];
    if (e.type == LsType::Router && e.ar.v == ar && e.lsid.v != ar) return int(i);
  }
  return -1;
}

void insert_sorted(RouterState& r, const Lsa& lsa) {
  auto it = std::lower_bound(r.lsdb.begin(), r.lsdb.end(), lsa, key_less);
  r.lsdb.insert(it, lsa);
}

// Replaces the matched slot (when any) with the new instance, keeping the
// database sorted by key even when the replacement changes the key (the
// lsid-only keying quirk can do that).
void install(RouterState& r, int matched, const Lsa& lsa) {
  if (matched >= 0) r.lsdb.erase(r.lsdb.begin() + matched);
  insert_sorted(r, lsa);
}

// Database lookup for an incoming LSA.  Visits entries in key order and
// records the comparisons so exploration can steer the incoming fields onto
// every database key.  With `lsid_only`, the advertising router is ignored.
int scan_lsdb(const RouterState& r, const Lsa& in, bool lsid_only,
              ConcolicContext* ctx) {
  for (size_t i = 0; i < r.lsdb.size(); ++i) {
    const Lsa& e = r.lsdb[i];
    if (e.type != in.type) continue;
    if (!take(ctx, kSiteKeyLsid, ceq(in.lsid, e.lsid))) continue;
    if (!lsid_only && !take(ctx, kSiteKeyAr, ceq(in.ar, e.ar))) continue;
    return int(i);
  }
  return -1;
}

// Delivery interface for a locally generated message between adjacent
// routers: the shared point-to-point link if one exists, else the lowest
// shared network.
Via via_between(const ConcreteTopology& topo, int from, int to) {
  if (topo.has_p2p(from, to)) return Via{Via::Kind::P2p, -1};
  for (size_t j = 0; j < topo.nets.size(); ++j) {
    if (topo.on_net(from, int(j)) && topo.on_net(to, int(j)))
      return Via{Via::Kind::Net, int(j)};
  }
  throw std::logic_error("via_between: routers are not adjacent");
}

void enqueue(NetworkState& state, const LsaMessage& msg) {
  state.routers[msg.dest].queue.push_back(msg);
}

void log_event(Trace* trace, int router, const LsaMessage& msg,
               const char* action) {
  if (trace) trace->push_back(TraceEvent{router, msg, action});
}

void log_local(Trace* trace, int router, const Lsa& lsa, const char* action) {
  if (trace) {
    LsaMessage m;
    m.src = router;
    m.dest = router;
    m.via = Via{Via::Kind::Inject, -1};
    m.injected = false;
    m.lsa = lsa;
    trace->push_back(TraceEvent{router, m, action});
  }
}

// Floods `lsa` out of every interface of `me`, honoring the arrival rules:
// never back over the arriving point-to-point link, and not onto the
// arriving network when the sender was that network's designated router
// (the DR already delivered it to every member).  The unicast-reflood quirk
// disables the latter suppression for attacker-injected deliveries.
void flood(NetworkState& state, int me, const Lsa& lsa,
           const LsaMessage* arrival) {
  for (const Iface& iface : state.topo.ifaces_of(me)) {
    if (iface.kind == Via::Kind::P2p) {
      if (arrival && arrival->via.kind == Via::Kind::P2p &&
          arrival->src == iface.peer)
        continue;
      LsaMessage m;
      m.src = me;
      m.dest = iface.peer;
      m.via = Via{Via::Kind::P2p, -1};
      m.lsa = lsa;
      enqueue(state, m);
    } else {
      const int j = iface.net;
      const bool from_this_net = arrival &&
                                 arrival->via.kind == Via::Kind::Net &&
                                 arrival->via.net == j;
      if (from_this_net && arrival->src == state.topo.dr_of(j)) {
        const bool reflood =
            state.cfg.on(DeviationId::D7_UnicastDrReflood, me) &&
            arrival->injected;
        if (!reflood) continue;
      }
      for (int y : state.topo.nets[j].members) {
        if (y == me) continue;
        if (from_this_net && y == arrival->src) continue;
        LsaMessage m;
        m.src = me;
        m.dest = y;
        m.via = Via{Via::Kind::Net, j};
        m.lsa = lsa;
        enqueue(state, m);
      }
    }
  }
}

// Local origination: updates the router's own database (a MaxAge origination
// removes the instance; a fresh one installs it) and floods on all
// interfaces.
void originate(NetworkState& state, int me, const Lsa& lsa, Trace* trace,
               const char* action) {
  RouterState& rt = state.routers[me];
  int idx = find_index(rt, lsa.type, lsa.lsid.v, lsa.ar.v);
  if (lsa.max_age) {
    if (idx >= 0) rt.lsdb.erase(rt.lsdb.begin() + idx);
  } else {
    install(rt, idx, lsa);
  }
  log_local(trace, me, lsa, action);
  flood(state, me, lsa, nullptr);
}

// Starts a sequence-number wrap: the MaxAge flush instance is retained in
// the originator's database and flooded, and the restart (when one is due)
// is parked until no copy of the flush is still queued anywhere.  Without
// that ordering a flush wave and its restart wave can chase each other
// around a topology cycle forever.
void begin_wrap(NetworkState& state, int me, const Lsa& flush, bool do_reinit,
                const Lsa& reinit, Trace* trace) {
  RouterState& rt = state.routers[me];
  install(rt, find_index(rt, flush.type, flush.lsid.v, flush.ar.v), flush);
  log_local(trace, me, flush, "flush");
  flood(state, me, flush, nullptr);
  rt.pending = PendingWrap{flush, do_reinit, reinit};
}

// Self-defense against a newer instance that claims to be ours.  Below the
// maximum the router simply re-originates its own LSA one sequence number
// past the false instance.  A false instance at the maximum must be flushed
// (MaxAge) before the counter can restart from the initial value, and a
// fight-back that would itself land on the maximum triggers the same
// flush-and-restart on the router's own LSA.
void fight_back(NetworkState& state, int me, const Lsa& false_lsa,
                ConcolicContext* ctx, Trace* trace) {
  const std::vector<ModelLink> mine = own_links(state.topo, me);

  const bool at_max =
      take(ctx, kSiteFbAtMax, ceq(false_lsa.seq, SymInt::concrete(kSeqMax)));
  if (at_max) {
    Lsa flush = false_lsa;
    flush.seq = SymInt::concrete(kSeqMax);
    flush.max_age = true;
    if (state.cfg.on(DeviationId::D2_MaxAgeWithOwnLinks, me)) {
      flush.links = mine;  // quirk: flush body carries the current links
      flush.attached.clear();
    }
    const bool own_key =
        take(ctx, kSiteFbOwnKey, ceq(false_lsa.lsid, SymInt::concrete(me)));
    const bool skip_reinit =
        state.cfg.on(DeviationId::D1_NoInitAfterMaxSeqFightback, me);
    Lsa fresh;
    if (own_key && !skip_reinit) {
      fresh.type = LsType::Router;
      fresh.lsid = SymInt::concrete(me);
      fresh.ar = SymInt::concrete(me);
      fresh.seq = SymInt{0, nullptr, SeqTag::AbsInit};
      fresh.links = mine;
    }
    begin_wrap(state, me, flush, own_key && !skip_reinit, fresh, trace);
    if (own_key && skip_reinit) log_local(trace, me, flush, "skip-reinit");
    return;
  }

  const bool reach_max = take(
      ctx, kSiteFbReachMax, ceq(false_lsa.seq, SymInt::concrete(kSeqMax - 1)));
  if (reach_max) {
    Lsa flush;
    flush.type = LsType::Router;
    flush.lsid = SymInt::concrete(me);
    flush.ar = SymInt::concrete(me);
    flush.seq = SymInt::concrete(kSeqMax);
    flush.max_age = true;
    flush.links = mine;
    const bool skip_reinit =
        state.cfg.on(DeviationId::D1_NoInitAfterMaxSeqFightback, me);
    Lsa fresh;
    if (!skip_reinit) {
      fresh.type = LsType::Router;
      fresh.lsid = SymInt::concrete(me);
      fresh.ar = SymInt::concrete(me);
      fresh.seq = SymInt{0, nullptr, SeqTag::AbsInit};
      fresh.links = mine;
    }
    begin_wrap(state, me, flush, !skip_reinit, fresh, trace);
    if (skip_reinit) log_local(trace, me, flush, "skip-reinit");
    return;
  }

  Lsa fb;
  fb.type = LsType::Router;
  fb.lsid = SymInt::concrete(me);
  fb.ar = SymInt::concrete(me);
  fb.seq = false_lsa.seq.plus(1);
  fb.links = mine;
  originate(state, me, fb, trace, "fightback");
}

// Bounded replay hook: a router that still holds a spoofed third-party LSA
// for victim `war` re-sends it toward the victim after each fight-back it
// installs, escalating the sequence number past the fight-back's.
void maybe_resend_after_fightback(NetworkState& state, int me,
                                  const LsaMessage& msg, Trace* trace) {
  const Lsa& in = msg.lsa;
  if (!state.cfg.on(DeviationId::D5_RepeatedFalseResend, me)) return;
  if (in.max_age || in.lsid.v != in.ar.v || in.ar.v == me) return;
  if (msg.src == me) return;
  int pidx = find_mismatched(state.routers[me], in.ar.v);
  if (pidx < 0) return;
  int& used = state.mrs.d5_used[{me, in.ar.v}];
  if (used >= state.cfg.d5_rounds) return;
  used++;
  Lsa again = state.routers[me].lsdb[pidx];
  again.seq = SymInt::concrete(std::min(in.seq.v + 1, kSeqMax));
  LsaMessage m;
  m.src = me;
  m.dest = msg.src;
  m.via = via_between(state.topo, me, msg.src);
  m.lsa = again;
  enqueue(state, m);
  log_local(trace, me, again, "resend-false");
}

}  // namespace

const char* newness_name(Newness n) {
  switch (n) {
    case Newness::Newer: return "newer";
    case Newness::Same: return "same";
    case Newness::Older: return "older";
  }
  return "?";
}

const char* deviation_name(DeviationId id) {
  switch (id) {
    case DeviationId::D1_NoInitAfterMaxSeqFightback: return "D1";
    case DeviationId::D2_MaxAgeWithOwnLinks: return "D2";
    case DeviationId::D3_KeyByLsidOnly: return "D3";
    case DeviationId::D4_FightbackOnOlder: return "D4";
    case DeviationId::D5_RepeatedFalseResend: return "D5";
    case DeviationId::D6_MaxAgeRefloodLoop: return "D6";
    case DeviationId::D7_UnicastDrReflood: return "D7";
    case DeviationId::Q1_FloodBeforeSelfCheck: return "Q1";
  }
  return "?";
}

bool same_content(const Lsa& a, const Lsa& b) {
  return a.type == b.type && a.lsid.v == b.lsid.v && a.ar.v == b.ar.v &&
         a.seq.v == b.seq.v && a.links == b.links && a.attached == b.attached;
}

std::vector<ModelLink> own_links(const ConcreteTopology& topo, int router) {
  std::vector<ModelLink> out;
  for (const Iface& iface : topo.ifaces_of(router)) {
    if (iface.kind == Via::Kind::P2p) {
      out.push_back(ModelLink{ModelLinkKind::P2p, iface.peer});
    } else {
      out.push_back(ModelLink{ModelLinkKind::Transit, iface.net});
    }
  }
  return out;
}

NetworkState standard_initial_state(const ConcreteTopology& topo,
                                    const std::vector<SymInt>& init_seqs,
                                    MutantConfig cfg) {
  topo.validate();
  if (int(init_seqs.size()) != topo.n) {
    throw std::invalid_argument("standard_initial_state: need one initial seq per router");
  }
  for (const SymInt& s : init_seqs) {
    if (s.v < 0 || s.v > kInitSeqMax) {
      throw std::invalid_argument("standard_initial_state: initial seq out of range");
    }
  }

  std::vector<Lsa> lsdb;
  for (int r = 0; r < topo.n; ++r) {
    Lsa lsa;
    lsa.type = LsType::Router;
    lsa.lsid = SymInt::concrete(r);
    lsa.ar = SymInt::concrete(r);
    lsa.seq = init_seqs[r];
    lsa.links = own_links(topo, r);
    lsdb.push_back(std::move(lsa));
  }
  for (size_t j = 0; j < topo.nets.size(); ++j) {
    Lsa lsa;
    lsa.type = LsType::Network;
    lsa.lsid = SymInt::concrete(int(j));
    lsa.ar = SymInt::concrete(topo.dr_of(int(j)));
    lsa.seq = init_seqs[topo.dr_of(int(j))];
    lsa.attached = topo.nets[j].members;
    lsdb.push_back(std::move(lsa));
  }
  std::sort(lsdb.begin(), lsdb.end(), key_less);

  NetworkState state;
  state.topo = topo;
  state.init_seqs = init_seqs;
  state.cfg = std::move(cfg);
  state.routers.resize(topo.n);
  for (int r = 0; r < topo.n; ++r) {
    state.routers[r].id = r;
    state.routers[r].lsdb = lsdb;
  }
  return state;
}

wire::WireLsa wire_image(const Lsa& lsa) {
  wire::WireLsa w;
  w.ls_age = lsa.max_age ? wire::kMaxAge : 0;
  w.ls_type = lsa.type == LsType::Router ? wire::kLsTypeRouter
                                         : wire::kLsTypeNetwork;
  w.link_state_id = lsa.type == LsType::Router ? wire::router_ip(lsa.lsid.v)
                                               : subnet_addr(lsa.lsid.v);
  w.advertising_router = wire::router_ip(lsa.ar.v);
  w.ls_seq = wire::kInitialSeq + uint32_t(lsa.seq.v);
  if (lsa.type == LsType::Router) {
    for (const ModelLink& l : lsa.links) {
      wire::WireLink wl;
      if (l.kind == ModelLinkKind::P2p) {
        wl.type = 1;
        wl.link_id = wire::router_ip(l.target);
        wl.link_data = wire::router_ip(lsa.ar.v);
      } else {
        wl.type = 2;
        wl.link_id = subnet_addr(l.target);
        wl.link_data = wire::net_iface_addr(lsa.ar.v, l.target);
      }
      w.links.push_back(wl);
    }
  } else {
    w.netmask = wire::net_mask();
    for (int r : lsa.attached) w.attached.push_back(wire::router_ip(r));
  }
  return w;
}

std::vector<uint8_t> canonical_lsa_bytes(const Lsa& lsa) {
  return wire::encode_lsa(wire_image(lsa));
}

uint16_t canonical_checksum(const Lsa& lsa) {
  std::vector<uint8_t> bytes = canonical_lsa_bytes(lsa);
  return uint16_t((uint16_t(bytes[16]) << 8) | uint16_t(bytes[17]));
}

Newness is_newer(const Lsa& a, const Lsa& b, ConcolicContext* ctx) {
  if (take(ctx, kSiteSeqGt, cgt(a.seq, b.seq))) return Newness::Newer;
  if (!take(ctx, kSiteSeqEq, ceq(a.seq, b.seq))) return Newness::Older;
  // Equal sequence numbers: the comparison falls through to the checksum of
  // the canonical encodings, which needs every field concrete.
  pin(ctx, kSitePin, a.lsid);
  pin(ctx, kSitePin, a.ar);
  pin(ctx, kSitePin, a.seq);
  pin(ctx, kSitePin, b.lsid);
  pin(ctx, kSitePin, b.ar);
  pin(ctx, kSitePin, b.seq);
  const uint16_t ca = canonical_checksum(a);
  const uint16_t cb = canonical_checksum(b);
  if (ca != cb) return ca > cb ? Newness::Newer : Newness::Older;
  if (a.max_age != b.max_age) return a.max_age ? Newness::Newer : Newness::Older;
  return Newness::Same;
}

void receive_lsa(NetworkState& state, const LsaMessage& msg,
                 ConcolicContext* ctx, Trace* trace) {
  const int me = msg.dest;
  RouterState& rt = state.routers[me];
  const Lsa& in = msg.lsa;
  const bool lsid_only = state.cfg.on(DeviationId::D3_KeyByLsidOnly, me);

  const int matched = scan_lsdb(rt, in, lsid_only, ctx);

  if (in.max_age) {
    // Quirk hook: a router still holding a spoofed third-party LSA for this
    // victim swallows the victim's own-LSA flush, re-sending the spoof for a
    // bounded number of rounds instead of purging.
    if (state.cfg.on(DeviationId::D6_MaxAgeRefloodLoop, me) &&
        in.lsid.v == in.ar.v && in.ar.v != me && msg.src != me) {
      const int pidx = find_mismatched(rt, in.ar.v);
      if (pidx >= 0) {
        int& used = state.mrs.d6_used[{me, in.ar.v}];
        if (used < state.cfg.d6_rounds) {
          used++;
          LsaMessage m;
          m.src = me;
          m.dest = msg.src;
          m.via = via_between(state.topo, me, msg.src);
          m.lsa = rt.lsdb[pidx];
          enqueue(state, m);
          log_event(trace, me, msg, "swallow-flush-resend");
        } else {
          log_event(trace, me, msg, "swallow-flush");
        }
        return;
      }
    }
    const bool self = take(ctx, kSiteSelf, ceq(in.ar, SymInt::concrete(me)));
    if (self) {
      // Own-LSA MaxAge instances circulating back are flush echoes.
      log_event(trace, me, msg, "ignore-own-maxage");
      return;
    }
    if (matched < 0) {
      // Unknown MaxAge LSAs are acknowledged and dropped, never installed
      // or relayed; this is what lets flush waves terminate.
      log_event(trace, me, msg, "drop-unknown-maxage");
      return;
    }
    const Newness nw = is_newer(in, rt.lsdb[matched], ctx);
    if (nw == Newness::Newer) {
      rt.lsdb.erase(rt.lsdb.begin() + matched);
      log_event(trace, me, msg, "purge");
      flood(state, me, in, &msg);
    } else {
      log_event(trace, me, msg, "drop-stale-maxage");
    }
    return;
  }

  const bool self = take(ctx, kSiteSelf, ceq(in.ar, SymInt::concrete(me)));
  if (self) {
    // A fresh instance claiming to be ours: eligibility is judged against
    // our own router-LSA, whatever link-state id the instance carries.
    const int own_idx = find_index(rt, LsType::Router, me, me);
    // The database copy of the instance's own key still rules first.  In
    // particular a retained flush for that key outranks a same-sequence
    // copy, so a flushed forgery cannot reinstall itself here forever.
    // (For our own key the anchor below is that copy, so nothing changes.)
    if (matched >= 0 && matched != own_idx &&
        is_newer(in, rt.lsdb[matched], ctx) != Newness::Newer) {
      log_event(trace, me, msg, "discard-self-stale");
      return;
    }
    const Newness nw =
        own_idx >= 0 ? is_newer(in, rt.lsdb[own_idx], ctx) : Newness::Newer;
    if (nw == Newness::Newer) {
      install(rt, matched, in);
      int* q1_used = nullptr;
      if (state.cfg.on(DeviationId::Q1_FloodBeforeSelfCheck, me)) {
        q1_used = &state.mrs.q1_used[{me, in.lsid.v, in.ar.v, in.seq.v}];
      }
      if (q1_used && *q1_used < state.cfg.q1_rounds) {
        // Quirk: the instance is relayed onward before the self-origination
        // check runs, so the spoof escapes into the network.  Bounded per
        // instance: the reflood and its own flush wave can otherwise keep
        // reinstalling each other.
        ++*q1_used;
        log_event(trace, me, msg, "install-self-flood");
        flood(state, me, in, &msg);
      } else {
        log_event(trace, me, msg, "install-self");
      }
      fight_back(state, me, in, ctx, trace);
    } else if (nw == Newness::Older &&
               state.cfg.on(DeviationId::D4_FightbackOnOlder, me) &&
               in.seq.v < rt.lsdb[own_idx].seq.v && in.seq.v + 1 <= kSeqMax) {
      // Quirk: fight back even though the instance is older, re-originating
      // at the instance's successor — a sequence regression.
      log_event(trace, me, msg, "discard-self-stale");
      Lsa fb;
      fb.type = LsType::Router;
      fb.lsid = SymInt::concrete(me);
      fb.ar = SymInt::concrete(me);
      fb.seq = SymInt::concrete(in.seq.v + 1);
      fb.links = own_links(state.topo, me);
      originate(state, me, fb, trace, "fightback-on-older");
    } else {
      log_event(trace, me, msg, "discard-self-stale");
    }
    return;
  }

  if (matched < 0) {
    install(rt, -1, in);
    log_event(trace, me, msg, "install");
    flood(state, me, in, &msg);
    maybe_resend_after_fightback(state, me, msg, trace);
    return;
  }
  const Newness nw = is_newer(in, rt.lsdb[matched], ctx);
  if (nw == Newness::Newer) {
    install(rt, matched, in);
    log_event(trace, me, msg, "install-replace");
    flood(state, me, in, &msg);
    maybe_resend_after_fightback(state, me, msg, trace);
  } else {
    log_event(trace, me, msg, "discard-stale");
  }
}

void inject_message(NetworkState& state, const LsaMessage& msg) {
  if (msg.dest < 0 || msg.dest >= state.topo.n) {
    throw std::invalid_argument("inject_message: destination out of range");
  }
  enqueue(state, msg);
}

size_t step_budget(const NetworkState& state) {
  const size_t n = size_t(state.topo.n);
  const size_t m = state.topo.nets.size();
  const size_t keys = n * n + n + m;
  const size_t ifaces = std::max(1, state.topo.interface_count());
  size_t budget = n * keys * size_t(kSeqMax + 2) * ifaces;
  if (state.cfg.enabled.count(DeviationId::D5_RepeatedFalseResend) ||
      state.cfg.enabled.count(DeviationId::D6_MaxAgeRefloodLoop) ||
      state.cfg.enabled.count(DeviationId::Q1_FloodBeforeSelfCheck)) {
    budget *= size_t(state.cfg.d5_rounds + state.cfg.d6_rounds +
                     state.cfg.q1_rounds + 2);
  }
  // Any deviation inflates traffic beyond the pristine bound (refloods,
  // regressions, extra wrap cycles); measured headroom is ~3x, doubled.
  if (!state.cfg.empty()) budget *= 8;
  return budget;
}

// Completes every wrap whose flush no longer has a copy queued anywhere:
// the originator drops the retained MaxAge instance (unless something newer
// replaced it mid-flush) and, when the wrap restarts the router's own LSA,
// originates the initial-sequence instance.
void release_wraps(NetworkState& state, Trace* trace) {
  for (int r = 0; r < state.topo.n; ++r) {
    RouterState& rt = state.routers[r];
    if (!rt.pending) continue;
    const Lsa& flush = rt.pending->flush;
    bool in_flight = false;
    for (const RouterState& other : state.routers) {
      for (const LsaMessage& m : other.queue) {
        if (m.lsa.max_age && m.lsa.type == flush.type &&
            m.lsa.lsid.v == flush.lsid.v && m.lsa.ar.v == flush.ar.v) {
          in_flight = true;
          break;
        }
      }
      if (in_flight) break;
    }
    if (in_flight) continue;
    const PendingWrap pw = std::move(*rt.pending);
    rt.pending.reset();
    if (pw.do_reinit) {
      originate(state, r, pw.reinit, trace, "reinit");
    } else {
      int idx = find_index(rt, pw.flush.type, pw.flush.lsid.v, pw.flush.ar.v);
      if (idx >= 0 && rt.lsdb[idx].max_age)
        rt.lsdb.erase(rt.lsdb.begin() + idx);
      log_local(trace, r, pw.flush, "flush-complete");
    }
  }
}

Trace run_to_stable(NetworkState& state, ConcolicContext* ctx) {
  Trace trace;
  const size_t budget = step_budget(state);
  size_t steps = 0;
  for (;;) {
    bool progress = false;
    for (int r = 0; r < state.topo.n; ++r) {
      auto& q = state.routers[r].queue;
      if (q.empty()) continue;
      LsaMessage m = q.front();
      q.pop_front();
      if (++steps > budget) {
        throw NonTermination("run_to_stable: step budget exceeded",
                             std::move(trace));
      }
      receive_lsa(state, m, ctx, &trace);
      release_wraps(state, &trace);
      progress = true;
    }
    if (!progress) {
      release_wraps(state, &trace);
      if (state.stable()) return trace;
    }
  }
}

Trace run_to_stable_seeded(NetworkState& state, uint64_t seed) {
  std::mt19937_64 rng(seed);
  Trace trace;
  const size_t budget = step_budget(state);
  size_t steps = 0;
  for (;;) {
    std::vector<int> ready;
    for (int r = 0; r < state.topo.n; ++r) {
      if (!state.routers[r].queue.empty()) ready.push_back(r);
    }
    if (ready.empty()) {
      release_wraps(state, &trace);
      if (state.stable()) return trace;
      continue;
    }
    const int r = ready[std::uniform_int_distribution<size_t>(
        0, ready.size() - 1)(rng)];
    LsaMessage m = state.routers[r].queue.front();
    state.routers[r].queue.pop_front();
    if (++steps > budget) {
      throw NonTermination("run_to_stable_seeded: step budget exceeded",
                           std::move(trace));
    }
    receive_lsa(state, m, nullptr, &trace);
    release_wraps(state, &trace);
  }
}

Trace run_message(NetworkState& state, const LsaMessage& msg,
                  ConcolicContext* ctx) {
  inject_message(state, msg);
  return run_to_stable(state, ctx);
}

std::vector<RouteEntry> compute_routing_table(const NetworkState& state,
                                              int router) {
  const RouterState& rt = state.routers[router];
  const int n = state.topo.n;
  const int m = int(state.topo.nets.size());

  // Usable vertices: a router r contributes through its own-keyed LSA only;
  // a network j through any non-aged network-LSA for it.
  std::vector<const Lsa*> router_lsa(n, nullptr);
  std::vector<const Lsa*> net_lsa(m, nullptr);
  for (const Lsa& e : rt.lsdb) {
    if (e.max_age) continue;
    if (e.type == LsType::Router) {
      if (e.lsid.v == e.ar.v && e.lsid.v >= 0 && e.lsid.v < n &&
          !router_lsa[e.lsid.v]) {
        router_lsa[e.lsid.v] = &e;
      }
    } else if (e.lsid.v >= 0 && e.lsid.v < m && !net_lsa[e.lsid.v]) {
      net_lsa[e.lsid.v] = &e;
    }
  }

  auto advertises = [](const Lsa* lsa, ModelLinkKind kind, int target) {
    if (!lsa) return false;
    for (const ModelLink& l : lsa->links) {
      if (l.kind == kind && l.target == target) return true;
    }
    return false;
  };
  auto attached_to = [](const Lsa* lsa, int r) {
    if (!lsa) return false;
    return std::find(lsa->attached.begin(), lsa->attached.end(), r) !=
           lsa->attached.end();
  };

  // Vertices: routers 0..n-1, then networks n..n+m-1.
  const int V = n + m;
  const int kInf = 1 << 29;
  std::vector<int> dist(V, kInf);
  std::vector<int> next_hop(V, -1);
  std::vector<bool> done(V, false);
  if (!router_lsa[router]) return {};
  dist[router] = 0;

  for (;;) {
    int u = -1;
    for (int v = 0; v < V; ++v) {
      if (!done[v] && dist[v] < kInf && (u < 0 || dist[v] < dist[u])) u = v;
    }
    if (u < 0) break;
    done[u] = true;

    auto relax = [&](int v, int cost, int nh) {
      if (dist[u] + cost < dist[v]) {
        dist[v] = dist[u] + cost;
        next_hop[v] = nh;
      }
    };

    if (u < n) {
      const Lsa* lu = router_lsa[u];
      for (const ModelLink& l : lu->links) {
        if (l.kind == ModelLinkKind::P2p) {
          const int t = l.target;
          if (t < 0 || t >= n) continue;
          if (!advertises(router_lsa[t], ModelLinkKind::P2p, u)) continue;
          relax(t, 1, u == router ? t : next_hop[u]);
        } else {
          const int j = l.target;
          if (j < 0 || j >= m) continue;
          if (!attached_to(net_lsa[j], u)) continue;
          relax(n + j, 1, u == router ? -1 : next_hop[u]);
        }
      }
    } else {
      const int j = u - n;
      const Lsa* lj = net_lsa[j];
      for (int y : lj->attached) {
        if (y < 0 || y >= n) continue;
        if (!advertises(router_lsa[y], ModelLinkKind::Transit, j)) continue;
        relax(y, 0, next_hop[u] == -1 ? y : next_hop[u]);
      }
    }
  }

  std::vector<RouteEntry> out;
  for (int r = 0; r < n; ++r) {
    if (r == router || dist[r] >= kInf) continue;
    out.push_back(RouteEntry{r, next_hop[r], dist[r]});
  }
  return out;
}

const Lsa* find_lsa(const RouterState& r, LsType type, int lsid, int ar) {
  const int idx = find_index(r, type, lsid, ar);
  return idx >= 0 ? &r.lsdb[idx] : nullptr;
}

std::string lsa_to_string(const Lsa& lsa) {
  std::ostringstream os;
  os << (lsa.type == LsType::Router ? "rtr" : "net");
  os << " lsid=" << lsa.lsid.v << " ar=" << lsa.ar.v << " seq=" << lsa.seq.v;
  if (lsa.seq.tag == SeqTag::AbsInit) os << "i";
  if (lsa.max_age) os << " maxage";
  if (lsa.type == LsType::Router) {
    os << " links=[";
    for (size_t i = 0; i < lsa.links.size(); ++i) {
      if (i) os << ",";
      os << (lsa.links[i].kind == ModelLinkKind::P2p ? "p" : "t")
         << lsa.links[i].target;
    }
    os << "]";
  } else {
    os << " att=[";
    for (size_t i = 0; i < lsa.attached.size(); ++i) {
      if (i) os << ",";
      os << lsa.attached[i];
    }
    os << "]";
  }
  return os.str();
}

std::string state_to_string(const NetworkState& state) {
  std::ostringstream os;
  for (int r = 0; r < state.topo.n; ++r) {
    os << "R" << r << ":";
    for (const Lsa& e : state.routers[r].lsdb) {
      os << " {" << lsa_to_string(e) << "}";
    }
    os << "\n";
  }
  return os.str();
}

std::string TraceEvent::to_string() const {
  std::ostringstream os;
  os << "R" << router << " ";
  if (msg.via.kind == Via::Kind::Inject && msg.src == router) {
    os << "local";
  } else {
    os << "from=" << msg.src;
    switch (msg.via.kind) {
      case Via::Kind::Inject: os << " via=inject"; break;
      case Via::Kind::P2p: os << " via=p2p"; break;
      case Via::Kind::Net: os << " via=net" << msg.via.net; break;
    }
    if (msg.injected) os << " injected";
  }
  os << " {" << lsa_to_string(msg.lsa) << "} " << action;
  return os.str();
}

}  // namespace ospfmbt
