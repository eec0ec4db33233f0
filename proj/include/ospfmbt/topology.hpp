#pragma once

// Concrete and symbolic network topologies.  A topology is a set of routers
// (indices 0..n-1), point-to-point links, and multi-access networks
// (broadcast segments) with a designated router each.  The attacker always
// occupies router 0.

#include <optional>
#include <string>
#include <vector>

#include "ospfmbt/solver.hpp"
#include "ospfmbt/sym.hpp"

namespace ospfmbt {

struct P2pLink {
  int a = 0;  // a < b always
  int b = 0;
  bool operator==(const P2pLink& o) const { return a == o.a && b == o.b; }
};

struct Net {
  std::vector<int> members;  // ascending router indices, size >= 2
  int dr() const { return members.front(); }  // designated router: lowest index
};

// How a message reaches a router: directly injected by the tester, over a
// point-to-point link, or over a network segment.
struct Via {
  enum class Kind : uint8_t { Inject, P2p, Net };
  Kind kind = Kind::Inject;
  int net = -1;  // valid when kind == Net
  bool operator==(const Via& o) const { return kind == o.kind && net == o.net; }
};

struct Iface {
  Via::Kind kind;  // P2p or Net
  int peer = -1;   // P2p: neighbor router
  int net = -1;    // Net: network index
};

struct ConcreteTopology {
  int n = 0;
  std::vector<P2pLink> p2p;  // sorted (a, b)
  std::vector<Net> nets;

  bool has_p2p(int i, int j) const;
  bool on_net(int r, int net) const;
  int dr_of(int net) const { return nets[net].dr(); }
  std::vector<Iface> ifaces_of(int r) const;  // p2p links first (by peer), then nets
  std::vector<int> neighbors_of(int r) const;  // distinct, ascending
  int interface_count() const;  // total attachment points across the topology
  bool connected() const;

  // Throws std::invalid_argument when malformed (indices out of range,
  // unordered/duplicate links, nets with fewer than two members, or a
  // disconnected graph with n > 1).
  void validate() const;

  std::string to_text() const;
  static ConcreteTopology from_text(const std::string& text);
  std::string fingerprint() const;  // compact canonical one-liner

  bool operator==(const ConcreteTopology& o) const;
};

// A topology family: n routers, m candidate networks, with presence of each
// p2p link and each network membership left symbolic.  Variable ids are
// allocated from `first_var_id` in a fixed order: p2p(i,j) for i<j
// lexicographically, then member(net, r) ordered by (net, r).
struct SymbolicTopology {
  int n = 0;
  int m = 0;
  int first_var_id = 0;

  std::vector<SymVar> vars() const;
  // Decodes an assignment into a concrete topology; nets keep their index
  // positions (a net with < 2 members makes the assignment invalid).
  std::optional<ConcreteTopology> concretize(const Assignment& a) const;
  // Axiom enforcing validity (every net >= 2 members, graph connected).
  Axiom validity_axiom() const;
};

// All valid concrete topologies of the family, in ascending assignment order.
std::vector<ConcreteTopology> enumerate_valid(const SymbolicTopology& st);

// The source router adjacent to `dest` on a shortest attacker->dest path
// (ties broken toward the lower router index), plus the interface the
// delivery uses (a shared p2p link if one exists, else the lowest shared
// net).  dest == attacker yields src == attacker and Via::Inject.
struct Route {
  int src = 0;
  Via via;
};
Route resolve_route(const ConcreteTopology& topo, int attacker, int dest);

}  // namespace ospfmbt
