#include "ospfmbt/topology.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ospfmbt {

bool ConcreteTopology::has_p2p(int i, int j) const {
  if (i > j) std::swap(i, j);
  for (const auto& l : p2p) {
    if (l.a == i && l.b == j) return true;
  }
  return false;
}

bool ConcreteTopology::on_net(int r, int net) const {
  const auto& m = nets[net].members;
  return std::binary_search(m.begin(), m.end(), r);
}

std::vector<Iface> ConcreteTopology::ifaces_of(int r) const {
  std::vector<Iface> out;
  std::vector<int> peers;
  for (const auto& l : p2p) {
    if (l.a == r) peers.push_back(l.b);
    if (l.b == r) peers.push_back(l.a);
  }
  std::sort(peers.begin(), peers.end());
  for (int p : peers) out.push_back(Iface{Via::Kind::P2p, p, -1});
  for (int j = 0; j < static_cast<int>(nets.size()); ++j) {
    if (on_net(r, j)) out.push_back(Iface{Via::Kind::Net, -1, j});
  }
  return out;
}

std::vector<int> ConcreteTopology::neighbors_of(int r) const {
  std::set<int> s;
  for (const auto& l : p2p) {
    if (l.a == r) s.insert(l.b);
    if (l.b == r) s.insert(l.a);
  }
  for (const auto& net : nets) {
    if (std::binary_search(net.members.begin(), net.members.end(), r)) {
      for (int m : net.members) {
        if (m != r) s.insert(m);
      }
    }
  }
  return std::vector<int>(s.begin(), s.end());
}

int ConcreteTopology::interface_count() const {
  int c = static_cast<int>(p2p.size()) * 2;
  for (const auto& net : nets) c += static_cast<int>(net.members.size());
  return c;
}

bool ConcreteTopology::connected() const {
  if (n <= 1) return true;
  std::vector<bool> seen(n, false);
  std::deque<int> q{0};
  seen[0] = true;
  int count = 1;
  while (!q.empty()) {
    int r = q.front();
    q.pop_front();
    for (int x : neighbors_of(r)) {
      if (!seen[x]) {
        seen[x] = true;
        count++;
        q.push_back(x);
      }
    }
  }
  return count == n;
}

void ConcreteTopology::validate() const {
  if (n < 1) throw std::invalid_argument("topology needs at least one router");
  std::set<std::pair<int, int>> links;
  for (const auto& l : p2p) {
    if (l.a >= l.b) throw std::invalid_argument("p2p link endpoints must satisfy a < b");
    if (l.a < 0 || l.b >= n) throw std::invalid_argument("p2p link endpoint out of range");
    if (!links.insert({l.a, l.b}).second) throw std::invalid_argument("duplicate p2p link");
  }
  for (const auto& net : nets) {
    if (net.members.size() < 2) {
      throw std::invalid_argument("network needs at least two members");
    }
    int prev = -1;
    for (int m : net.members) {
      if (m < 0 || m >= n) throw std::invalid_argument("network member out of range");
      if (m <= prev) throw std::invalid_argument("network members must be ascending");
      prev = m;
    }
  }
  if (!connected()) throw std::invalid_argument("topology is not connected");
}

std::string ConcreteTopology::to_text() const {
  std::ostringstream os;
  os << "  routers: " << n << "\n";
  for (const auto& l : p2p) os << "  p2p: " << l.a << "-" << l.b << "\n";
  for (size_t j = 0; j < nets.size(); ++j) {
    os << "  net: " << j << " members=";
    for (size_t i = 0; i < nets[j].members.size(); ++i) {
      if (i) os << ",";
      os << nets[j].members[i];
    }
    os << "\n";
  }
  return os.str();
}

ConcreteTopology ConcreteTopology::from_text(const std::string& text) {
  ConcreteTopology t;
  std::istringstream is(text);
  std::string line;
  int expect_net = 0;
  while (std::getline(is, line)) {
    auto pos = line.find_first_not_of(" \t");
    if (pos == std::string::npos) continue;
    line = line.substr(pos);
    if (line.rfind("routers:", 0) == 0) {
      t.n = std::stoi(line.substr(8));
    } else if (line.rfind("p2p:", 0) == 0) {
      std::string rest = line.substr(4);
      auto dash = rest.find('-');
      if (dash == std::string::npos) throw std::invalid_argument("bad p2p line: " + line);
      P2pLink l;
      l.a = std::stoi(rest.substr(0, dash));
      l.b = std::stoi(rest.substr(dash + 1));
      t.p2p.push_back(l);
    } else if (line.rfind("net:", 0) == 0) {
      std::string rest = line.substr(4);
      std::istringstream rs(rest);
      int idx;
      std::string members_tok;
      rs >> idx >> members_tok;
      if (idx != expect_net) throw std::invalid_argument("net indices must be sequential");
      expect_net++;
      if (members_tok.rfind("members=", 0) != 0) {
        throw std::invalid_argument("bad net line: " + line);
      }
      Net net;
      std::istringstream ms(members_tok.substr(8));
      std::string tok;
      while (std::getline(ms, tok, ',')) net.members.push_back(std::stoi(tok));
      t.nets.push_back(std::move(net));
    } else {
      throw std::invalid_argument("unrecognized topology line: " + line);
    }
  }
  t.validate();
  return t;
}

std::string ConcreteTopology::fingerprint() const {
  std::ostringstream os;
  os << "n" << n;
  for (const auto& l : p2p) os << ";p" << l.a << "-" << l.b;
  for (const auto& net : nets) {
    os << ";N";
    for (size_t i = 0; i < net.members.size(); ++i) {
      if (i) os << ",";
      os << net.members[i];
    }
  }
  return os.str();
}

bool ConcreteTopology::operator==(const ConcreteTopology& o) const {
  if (n != o.n || p2p.size() != o.p2p.size() || nets.size() != o.nets.size()) return false;
  for (size_t i = 0; i < p2p.size(); ++i) {
    if (!(p2p[i] == o.p2p[i])) return false;
  }
  for (size_t i = 0; i < nets.size(); ++i) {
    if (nets[i].members != o.nets[i].members) return false;
  }
  return true;
}

std::vector<SymVar> SymbolicTopology::vars() const {
  std::vector<SymVar> out;
  int id = first_var_id;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      SymVar v;
      v.id = id++;
      v.lo = 0;
      v.hi = 1;
      v.role = VarRole::TopoP2p;
      v.a = i;
      v.b = j;
      out.push_back(v);
    }
  }
  for (int net = 0; net < m; ++net) {
    for (int r = 0; r < n; ++r) {
      SymVar v;
      v.id = id++;
      v.lo = 0;
      v.hi = 1;
      v.role = VarRole::TopoMember;
      v.a = r;
      v.b = net;
      out.push_back(v);
    }
  }
  return out;
}

std::optional<ConcreteTopology> SymbolicTopology::concretize(const Assignment& a) const {
  ConcreteTopology t;
  t.n = n;
  int id = first_var_id;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (a.at(id++) != 0) t.p2p.push_back(P2pLink{i, j});
    }
  }
  for (int net = 0; net < m; ++net) {
    Net nt;
    for (int r = 0; r < n; ++r) {
      if (a.at(id++) != 0) nt.members.push_back(r);
    }
    if (nt.members.size() == 1) return std::nullopt;  // dangling segment
    if (nt.members.size() >= 2) t.nets.push_back(std::move(nt));
  }
  // Note: empty nets simply vanish; remaining nets are re-indexed in order.
  if (!t.connected()) return std::nullopt;
  return t;
}

Axiom SymbolicTopology::validity_axiom() const {
  SymbolicTopology self = *this;
  return [self](const Assignment& a) { return self.concretize(a).has_value(); };
}

std::vector<ConcreteTopology> enumerate_valid(const SymbolicTopology& st) {
  std::vector<ConcreteTopology> out;
  auto vars = st.vars();
  auto all = solve_all(vars, {}, {st.validity_axiom()});
  out.reserve(all.size());
  std::set<std::string> seen;  // distinct assignments can decode to one topology
  for (const auto& a : all) {
    auto t = st.concretize(a);
    if (t && seen.insert(t->fingerprint()).second) out.push_back(*t);
  }
  return out;
}

Route resolve_route(const ConcreteTopology& topo, int attacker, int dest) {
  Route r;
  if (dest == attacker) {
    r.src = attacker;
    r.via = Via{Via::Kind::Inject, -1};
    return r;
  }
  // BFS from the attacker; neighbors_of returns ascending indices so the
  // first predecessor discovered for dest is the lowest-index one at the
  // shortest distance.
  std::vector<int> dist(topo.n, -1);
  dist[attacker] = 0;
  std::deque<int> q{attacker};
  while (!q.empty()) {
    int x = q.front();
    q.pop_front();
    for (int y : topo.neighbors_of(x)) {
      if (dist[y] < 0) {
        dist[y] = dist[x] + 1;
        q.push_back(y);
      }
    }
  }
  if (dist[dest] < 0) throw std::invalid_argument("destination unreachable from attacker");
  int best = -1;
  for (int y : topo.neighbors_of(dest)) {
    if (dist[y] == dist[dest] - 1) {
      best = y;
      break;  // ascending order => lowest index wins ties
    }
  }
  if (best < 0) throw std::logic_error("BFS predecessor missing");
  r.src = best;
  if (topo.has_p2p(best, dest)) {
    r.via = Via{Via::Kind::P2p, -1};
  } else {
    for (int j = 0; j < static_cast<int>(topo.nets.size()); ++j) {
      if (topo.on_net(best, j) && topo.on_net(dest, j)) {
        r.via = Via{Via::Kind::Net, j};
        break;
      }
    }
  }
  return r;
}

}  // namespace ospfmbt
