#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "clusterkit/core.hpp"
#include "clusterkit/topology.hpp"

namespace clusterkit {

// Post-quiescence snapshot of every node's clustering state, taken from the
// attached core components. Routing and key distribution read this view;
// they never touch live protocol state.
class ClusterView {
 public:
  struct NodeInfo {
    Role role = Role::UNCLUSTERED;
    ClusterId cluster = kNoCluster;
    std::vector<ClusterId> memberships;
    std::map<ClusterId, NodeId> parents;  // per-membership uplink
    std::set<NodeId> children;
    std::map<NodeId, std::vector<ClusterId>> observations;
  };

  explicit ClusterView(const Topology& topo) : topo_(&topo) {}

  void add(const CoreComponent& cc) {
    NodeInfo info;
    info.role = cc.state().role;
    info.cluster = cc.state().cluster;
    info.memberships = cc.it_module().memberships(cc);
    // uplinks() covers memberships plus pure relay attachments, so chains
    // through forwarding heads stay walkable.
    info.parents = cc.it_module().uplinks(cc);
    info.children = cc.table().children;
    info.observations = cc.it_module().observations();
    nodes_[cc.self()] = std::move(info);
  }

  const Topology& topology() const { return *topo_; }
  bool has(NodeId n) const { return nodes_.count(n) != 0; }
  const NodeInfo& info(NodeId n) const { return nodes_.at(n); }
  const std::map<NodeId, NodeInfo>& nodes() const { return nodes_; }

  std::vector<NodeId> members_of(ClusterId c) const {
    std::vector<NodeId> out;
    for (auto& [id, info] : nodes_) {
      for (ClusterId m : info.memberships) {
        if (m == c) {
          out.push_back(id);
          break;
        }
      }
    }
    return out;
  }

 private:
  const Topology* topo_;
  std::map<NodeId, NodeInfo> nodes_;
};

enum class RouteMode : std::uint8_t { INTRA, INTER };
enum class RouteStatus : std::uint8_t {
  OK,
  NOT_IN_CLUSTER,
  UNREACHABLE,
  UNKNOWN_NODE,
};

struct RouteResult {
  std::vector<NodeId> path;
  unsigned hop_count = 0;
  RouteMode mode = RouteMode::INTRA;
};

struct RouteOutcome {
  RouteStatus status = RouteStatus::OK;
  RouteResult route;
  std::string detail;
  bool ok() const { return status == RouteStatus::OK; }
};

// Tree and gateway routing over a finished formation. Intra-cluster routes
// follow parent/child links through the lowest common ancestor; inter-cluster
// routes ride a breadth-first search of the gateway graph, entering each
// transit cluster at a gateway and leaving through its head.
class ClusterRadio {
 public:
  explicit ClusterRadio(const ClusterView& view) : view_(&view) {
    build_cluster_graph();
  }

  RouteOutcome intra_route(NodeId src, NodeId dst) const {
    if (!view_->has(src) || !view_->has(dst)) {
      return {RouteStatus::UNKNOWN_NODE, {}, "node not in view"};
    }
    if (src == dst) return {RouteStatus::OK, {{src}, 0, RouteMode::INTRA}, ""};
    ClusterId shared = shared_cluster(src, dst);
    if (shared == kNoCluster) {
      return {RouteStatus::NOT_IN_CLUSTER, {}, "no common cluster"};
    }
    auto path = tree_path(shared, src, dst);
    if (path.empty()) {
      return {RouteStatus::UNREACHABLE, {}, "broken parent chain"};
    }
    return {RouteStatus::OK,
            {path, static_cast<unsigned>(path.size() - 1), RouteMode::INTRA},
            ""};
  }

  RouteOutcome inter_route(NodeId src, NodeId dst) const {
    if (!view_->has(src) || !view_->has(dst)) {
      return {RouteStatus::UNKNOWN_NODE, {}, "node not in view"};
    }
    if (shared_cluster(src, dst) != kNoCluster || src == dst) {
      return intra_route(src, dst);
    }
    auto& si = view_->info(src);
    auto& di = view_->info(dst);
    if (si.memberships.empty() || di.memberships.empty()) {
      return {RouteStatus::NOT_IN_CLUSTER, {}, "endpoint unclustered"};
    }
    auto cluster_path = cluster_level_path(si.memberships, di.memberships);
    if (cluster_path.empty()) {
      return {RouteStatus::UNREACHABLE, {}, "destination cluster unreachable"};
    }
    std::vector<NodeId> path{src};
    NodeId entry = src;
    for (std::size_t i = 0; i + 1 < cluster_path.size(); ++i) {
      ClusterId cur = cluster_path[i];
      auto [u, v] = crossing_.at({cur, cluster_path[i + 1]});
      // Ride the tree through this cluster's head, then hand over at the
      // gateway edge.
      if (!append_tree(path, cur, entry, static_cast<NodeId>(cur))) {
        return {RouteStatus::UNREACHABLE, {}, "broken parent chain"};
      }
      if (!append_tree(path, cur, static_cast<NodeId>(cur), u)) {
        return {RouteStatus::UNREACHABLE, {}, "broken parent chain"};
      }
      path.push_back(v);
      entry = v;
    }
    if (!append_tree(path, cluster_path.back(), entry, dst)) {
      return {RouteStatus::UNREACHABLE, {}, "broken parent chain"};
    }
    return {RouteStatus::OK,
            {path, static_cast<unsigned>(path.size() - 1), RouteMode::INTER},
            ""};
  }

  // Cluster-graph distance between two cluster ids; 0 if equal, -1 if apart.
  int cluster_distance(ClusterId a, ClusterId b) const {
    auto p = cluster_level_path({a}, {b});
    return p.empty() ? -1 : static_cast<int>(p.size()) - 1;
  }

  const std::map<ClusterId, std::set<ClusterId>>& cluster_graph() const {
    return graph_;
  }

 private:
  void build_cluster_graph() {
    for (auto& [u, info] : view_->nodes()) {
      std::set<ClusterId> mine(info.memberships.begin(),
                               info.memberships.end());
      if (mine.empty()) continue;
      for (auto& [v, clusters] : info.observations) {
        for (ClusterId c : clusters) {
          if (mine.count(c)) continue;
          for (ClusterId m : mine) {
            graph_[m].insert(c);
            graph_[c].insert(m);
            auto key = std::pair(m, c);
            auto wit = std::pair(u, v);
            auto it = crossing_.find(key);
            if (it == crossing_.end() || wit < it->second) {
              crossing_[key] = wit;
            }
            // The reverse witness rides the same physical edge.
            auto rkey = std::pair(c, m);
            auto rwit = std::pair(v, u);
            auto rit = crossing_.find(rkey);
            if (rit == crossing_.end() || rwit < rit->second) {
              crossing_[rkey] = rwit;
            }
          }
        }
      }
    }
  }

  ClusterId shared_cluster(NodeId a, NodeId b) const {
    auto& ia = view_->info(a);
    auto& ib = view_->info(b);
    std::set<ClusterId> sa(ia.memberships.begin(), ia.memberships.end());
    for (ClusterId c : ib.memberships) {
      if (sa.count(c)) return c;
    }
    return kNoCluster;
  }

  // Ancestor chain of n inside cluster c, starting at n, ending at the head.
  std::vector<NodeId> chain(ClusterId c, NodeId n) const {
    std::vector<NodeId> out{n};
    NodeId cur = n;
    while (cur != static_cast<NodeId>(c)) {
      auto& info = view_->info(cur);
      auto it = info.parents.find(c);
      if (it == info.parents.end() || it->second == kBroadcast) return {};
      cur = it->second;
      out.push_back(cur);
      if (out.size() > view_->nodes().size()) return {};  // cycle guard
    }
    return out;
  }

  std::vector<NodeId> tree_path(ClusterId c, NodeId a, NodeId b) const {
    auto ca = chain(c, a);
    auto cb = chain(c, b);
    if (ca.empty() || cb.empty()) return {};
    std::set<NodeId> in_a(ca.begin(), ca.end());
    // Lowest common ancestor: first node of b's chain that a's chain holds.
    std::size_t meet = 0;
    while (meet < cb.size() && !in_a.count(cb[meet])) ++meet;
    if (meet == cb.size()) return {};
    std::vector<NodeId> path;
    for (NodeId n : ca) {
      path.push_back(n);
      if (n == cb[meet]) break;
    }
    for (std::size_t i = meet; i-- > 0;) path.push_back(cb[i]);
    return path;
  }

  bool append_tree(std::vector<NodeId>& path, ClusterId c, NodeId from,
                   NodeId to) const {
    auto seg = tree_path(c, from, to);
    if (seg.empty() && from != to) return false;
    for (NodeId n : seg) {
      if (path.empty() || path.back() != n) path.push_back(n);
    }
    return true;
  }

  std::vector<ClusterId> cluster_level_path(
      const std::vector<ClusterId>& from,
      const std::vector<ClusterId>& to) const {
    std::set<ClusterId> targets(to.begin(), to.end());
    std::map<ClusterId, ClusterId> prev;
    std::deque<ClusterId> queue;
    for (ClusterId c : from) {
      if (!prev.count(c)) {
        prev[c] = c;
        queue.push_back(c);
      }
    }
    while (!queue.empty()) {
      ClusterId cur = queue.front();
      queue.pop_front();
      if (targets.count(cur)) {
        std::vector<ClusterId> path{cur};
        while (prev[path.back()] != path.back()) path.push_back(prev[path.back()]);
        std::reverse(path.begin(), path.end());
        return path;
      }
      auto it = graph_.find(cur);
      if (it == graph_.end()) continue;
      for (ClusterId nxt : it->second) {
        if (!prev.count(nxt)) {
          prev[nxt] = cur;
          queue.push_back(nxt);
        }
      }
    }
    return {};
  }

  const ClusterView* view_;
  std::map<ClusterId, std::set<ClusterId>> graph_;
  std::map<std::pair<ClusterId, ClusterId>, std::pair<NodeId, NodeId>> crossing_;
};

}  // namespace clusterkit
