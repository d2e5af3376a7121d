#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <set>
#include <vector>

#include "clusterkit/rng.hpp"
#include "clusterkit/topology.hpp"
#include "clusterkit/types.hpp"

namespace clusterkit::oracle {

// Brute-force reference computations, deliberately written against the
// topology alone (no protocol code paths) so the distributed implementations
// have something independent to be measured against.

inline std::map<NodeId, unsigned> bfs_distances(const Topology& t, NodeId from,
                                                unsigned cap) {
  std::map<NodeId, unsigned> dist;
  dist[from] = 0;
  std::deque<NodeId> q{from};
  while (!q.empty()) {
    NodeId u = q.front();
    q.pop_front();
    unsigned du = dist[u];
    if (du == cap) continue;
    for (NodeId v : t.neighbors(u)) {
      if (!dist.count(v)) {
        dist[v] = du + 1;
        q.push_back(v);
      }
    }
  }
  return dist;
}

// ATTR election: a node heads iff its (attribute, id) pair is the strict
// minimum over its k-hop neighborhood.
inline std::set<NodeId> attr_heads(
    const Topology& t, const std::map<NodeId, std::uint32_t>& attr,
    unsigned k) {
  std::set<NodeId> heads;
  for (const auto& n : t.nodes()) {
    auto mine = std::pair(attr.at(n.id), n.id);
    bool best = true;
    for (NodeId v : k_hop_neighbors(t, n.id, k)) {
      if (std::pair(attr.at(v), v) < mine) {
        best = false;
        break;
      }
    }
    if (best) heads.insert(n.id);
  }
  return heads;
}

// Probabilistic election replay: same stream, same draw.
inline std::set<NodeId> prob_heads(const Topology& t, std::uint64_t seed,
                                   double p) {
  std::set<NodeId> heads;
  for (const auto& n : t.nodes()) {
    Rng r = Rng::node_stream(seed, n.id, RngPurpose::Protocol);
    if (r.next_double() < p) heads.insert(n.id);
  }
  return heads;
}

// MaxMin d-cluster election, replayed centrally over synchronized rounds.
// Returns each node's elected head.
inline std::map<NodeId, NodeId> maxmind_elected(const Topology& t, unsigned d) {
  const auto& nodes = t.nodes();
  std::map<NodeId, NodeId> w;
  std::map<NodeId, std::vector<NodeId>> logmax, logmin;
  std::map<NodeId, bool> saw_self;
  for (const auto& n : nodes) {
    w[n.id] = n.id;
    saw_self[n.id] = false;
  }
  for (unsigned i = 0; i < d; ++i) {
    std::map<NodeId, NodeId> next = w;
    for (const auto& n : nodes) {
      for (NodeId v : t.neighbors(n.id)) {
        next[n.id] = std::max(next[n.id], w[v]);
      }
    }
    w = next;
    for (const auto& n : nodes) logmax[n.id].push_back(w[n.id]);
  }
  for (unsigned i = 0; i < d; ++i) {
    std::map<NodeId, NodeId> next = w;
    for (const auto& n : nodes) {
      for (NodeId v : t.neighbors(n.id)) {
        if (w[v] == n.id) saw_self[n.id] = true;
        next[n.id] = std::min(next[n.id], w[v]);
      }
    }
    w = next;
    for (const auto& n : nodes) logmin[n.id].push_back(w[n.id]);
  }
  std::map<NodeId, NodeId> elected;
  for (const auto& n : nodes) {
    NodeId pick;
    if (saw_self[n.id]) {
      pick = n.id;
    } else {
      std::set<NodeId> mx(logmax[n.id].begin(), logmax[n.id].end());
      NodeId best = kBroadcast;
      for (NodeId v : logmin[n.id]) {
        if (mx.count(v)) best = std::min(best, v);
      }
      pick = best != kBroadcast ? best : logmax[n.id].back();
    }
    elected[n.id] = pick;
  }
  return elected;
}

// MOCA membership: every non-head node belongs to each head within k hops;
// heads belong only to themselves.
inline std::map<NodeId, std::vector<ClusterId>> moca_memberships(
    const Topology& t, const std::set<NodeId>& heads, unsigned k) {
  std::map<NodeId, std::vector<ClusterId>> out;
  for (const auto& n : t.nodes()) out[n.id] = {};
  for (NodeId h : heads) {
    auto dist = bfs_distances(t, h, k);
    for (auto& [v, dv] : dist) {
      if (v == h || heads.count(v)) continue;
      out[v].push_back(h);
    }
  }
  for (NodeId h : heads) out[h] = {h};
  for (auto& [v, ms] : out) std::sort(ms.begin(), ms.end());
  return out;
}

// Image of the edge cut: for each cluster, the set of other clusters with at
// least one radio link into it. Nodes may hold several memberships.
inline std::map<ClusterId, std::set<ClusterId>> edge_cut(
    const Topology& t,
    const std::map<NodeId, std::vector<ClusterId>>& memberships) {
  std::map<ClusterId, std::set<ClusterId>> adj;
  for (const auto& n : t.nodes()) {
    const auto& mu = memberships.at(n.id);
    for (NodeId v : t.neighbors(n.id)) {
      for (ClusterId cu : mu) {
        for (ClusterId cv : memberships.at(v)) {
          if (cu != cv) adj[cu].insert(cv);
        }
      }
    }
  }
  return adj;
}

// Nearest adjacent head by link distance, lower id on ties. kBroadcast when
// no head is in range.
inline NodeId nearest_head(const Topology& t, const std::set<NodeId>& heads,
                           NodeId u) {
  NodeId best = kBroadcast;
  double best_d = std::numeric_limits<double>::infinity();
  for (NodeId v : t.neighbors(u)) {
    if (!heads.count(v)) continue;
    double dv = t.distance(u, v);
    if (dv < best_d || (dv == best_d && v < best)) {
      best_d = dv;
      best = v;
    }
  }
  return best;
}

// Unweighted shortest-path distance over an arbitrary cluster graph;
// -1 when unreachable.
inline int graph_distance(const std::map<ClusterId, std::set<ClusterId>>& g,
                          ClusterId a, ClusterId b) {
  if (a == b) return 0;
  std::map<ClusterId, int> dist{{a, 0}};
  std::deque<ClusterId> q{a};
  while (!q.empty()) {
    ClusterId u = q.front();
    q.pop_front();
    auto it = g.find(u);
    if (it == g.end()) continue;
    for (ClusterId v : it->second) {
      if (dist.count(v)) continue;
      dist[v] = dist[u] + 1;
      if (v == b) return dist[v];
      q.push_back(v);
    }
  }
  return -1;
}

// Path legality over the radio graph: endpoint-correct and hop-adjacent.
// Relay nodes may repeat: an inter-cluster walk detours through the source
// head, so a gateway sitting on the head's subtree is visited coming and
// going. Each leg still terminates, so the walk is finite and loop-free in
// time even when it is not vertex-simple.
inline bool path_valid(const Topology& t, const std::vector<NodeId>& path,
                       NodeId src, NodeId dst) {
  if (path.empty() || path.front() != src || path.back() != dst) return false;
  for (std::size_t i = 1; i < path.size(); ++i) {
    const auto& nb = t.neighbors(path[i - 1]);
    if (!std::binary_search(nb.begin(), nb.end(), path[i])) return false;
  }
  return true;
}

// Stricter form for tree routes: additionally vertex-simple. Intra-cluster
// paths ride one up-down sweep of the spanning tree and never revisit.
inline bool path_simple(const Topology& t, const std::vector<NodeId>& path,
                        NodeId src, NodeId dst) {
  if (!path_valid(t, path, src, dst)) return false;
  std::set<NodeId> seen(path.begin(), path.end());
  return seen.size() == path.size();
}

}  // namespace clusterkit::oracle
