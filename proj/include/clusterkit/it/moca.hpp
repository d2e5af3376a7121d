#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "clusterkit/core.hpp"

namespace clusterkit {

// Overlap-aware bookkeeping: a node holds one attachment per cluster it
// joined, and a neighbor counts as in-cluster when the two membership sets
// intersect. Heads collect the ids of clusters overlapping their own, fed
// by accept extensions and by completion-time reports from members.
class MocaIt : public ItModule {
 public:
  const char* name() const override { return "moca"; }

  void reset() override {
    ItModule::reset();
    memberships_.clear();
    relay_uplinks_.clear();
    neighbor_clusters_.clear();
    fired_.clear();
    adjacent_.clear();
    reported_.clear();
  }

  void note_neighbor(CoreComponent& cc, NodeId who, ClusterId cluster) override {
    neighbor_clusters_[who].insert(cluster);
    table_.known[who] = cluster;
    table_.unexamined.erase(who);
    classify(cc, who);
  }

  void on_self_changed(CoreComponent& cc) override {
    const ClusterState& st = cc.state();
    if (st.role == Role::HEAD) {
      memberships_[st.cluster] = {cc.self(), 0};
    } else if (st.cluster != kNoCluster) {
      memberships_[st.cluster] = {st.parent, st.hops};
    }
    reclassify_all(cc);
  }

  void add_membership(CoreComponent& cc, ClusterId cluster, NodeId parent,
                      std::uint8_t hops) {
    memberships_[cluster] = {parent, hops};
    reclassify_all(cc);
  }

  // Heads forward foreign recruit waves without joining; the reverse pointer
  // still has to exist so accepts and data can ride back through them.
  void note_relay(ClusterId cluster, NodeId parent, std::uint8_t hops) {
    if (!memberships_.count(cluster)) {
      relay_uplinks_[cluster] = {parent, hops};
    }
  }

  void note_adjacent(ClusterId cluster) { adjacent_.insert(cluster); }

  // Members of several clusters tell each of their heads about the others.
  void on_complete(CoreComponent& cc) override {
    if (cc.state().role == Role::HEAD || memberships_.size() < 2) return;
    cc.it_timer(1);
  }

  void on_timer(CoreComponent& cc, std::uint64_t) override {
    for (auto& [cluster, att] : memberships_) {
      std::vector<ClusterId> others;
      for (auto& [other, oa] : memberships_) {
        if (other != cluster) others.push_back(other);
      }
      for (std::size_t i = 0; i < others.size(); i += kMaxConvergecastIds) {
        std::size_t n = std::min(others.size() - i,
                                 std::size_t{kMaxConvergecastIds});
        cc.send_convergecast(att.parent, cluster,
                             {others.begin() + i, others.begin() + i + n});
      }
    }
  }

  void on_convergecast(CoreComponent& cc, const WireMessage& m,
                       const ConvergecastPayload& p, const Delivery&) override {
    if (cc.state().role == Role::HEAD && m.cluster == cc.self()) {
      for (ClusterId c : p.clusters) {
        if (c != cc.self()) adjacent_.insert(c);
      }
      return;
    }
    // Forward along whichever uplink serves this cluster; chains may pass
    // through heads that only relay it.
    NodeId up = kBroadcast;
    if (auto it = memberships_.find(m.cluster); it != memberships_.end()) {
      up = it->second.parent;
    } else if (auto rit = relay_uplinks_.find(m.cluster);
               rit != relay_uplinks_.end()) {
      up = rit->second.parent;
    }
    if (up == kBroadcast) return;
    std::vector<ClusterId> fresh;
    for (ClusterId c : p.clusters) {
      if (c != m.cluster && reported_[m.cluster].insert(c).second) {
        fresh.push_back(c);
      }
    }
    for (std::size_t i = 0; i < fresh.size(); i += kMaxConvergecastIds) {
      std::size_t n = std::min(fresh.size() - i, std::size_t{kMaxConvergecastIds});
      cc.send_convergecast(up, m.cluster, {fresh.begin() + i, fresh.begin() + i + n});
    }
  }

  NodeId parent_for(const CoreComponent& cc, ClusterId cluster) const override {
    if (cc.state().role == Role::HEAD && cluster == cc.self()) return cc.self();
    auto it = memberships_.find(cluster);
    if (it != memberships_.end()) return it->second.parent;
    auto rit = relay_uplinks_.find(cluster);
    return rit == relay_uplinks_.end() ? kBroadcast : rit->second.parent;
  }

  std::map<ClusterId, NodeId> uplinks(const CoreComponent& cc) const override {
    auto out = ItModule::uplinks(cc);
    for (auto& [c, att] : relay_uplinks_) out.emplace(c, att.parent);
    return out;
  }

  std::vector<ClusterId> memberships(const CoreComponent&) const override {
    std::vector<ClusterId> out;
    for (auto& [c, a] : memberships_) out.push_back(c);
    return out;
  }

  std::map<NodeId, std::vector<ClusterId>> observations() const override {
    std::map<NodeId, std::vector<ClusterId>> out;
    for (auto& [who, cls] : neighbor_clusters_) {
      out[who] = {cls.begin(), cls.end()};
    }
    return out;
  }

  std::uint8_t hops_in(ClusterId cluster) const {
    auto it = memberships_.find(cluster);
    return it == memberships_.end() ? 0 : it->second.hops;
  }

  const std::set<ClusterId>& adjacent_clusters() const { return adjacent_; }

 private:
  struct Attachment {
    NodeId parent;
    std::uint8_t hops;
  };

  void reclassify_all(CoreComponent& cc) {
    for (auto& [who, cls] : neighbor_clusters_) classify(cc, who);
  }

  void classify(CoreComponent& cc, NodeId who) {
    bool shared = false;
    for (ClusterId c : neighbor_clusters_[who]) {
      if (memberships_.count(c)) {
        shared = true;
        break;
      }
    }
    if (shared) {
      table_.cluster_neighbors.insert(who);
      table_.non_cluster_neighbors.erase(who);
      return;
    }
    table_.non_cluster_neighbors.insert(who);
    table_.cluster_neighbors.erase(who);
    if (!memberships_.empty() && fired_.insert(who).second) {
      cc.fire_event(ClusterEvent::NEIGHBOR_OTHER_CLUSTER, who,
                    table_.known[who]);
      cc.mark_gateway();
    }
  }

  std::map<ClusterId, Attachment> memberships_;
  std::map<ClusterId, Attachment> relay_uplinks_;  // forwarded, never joined
  std::map<NodeId, std::set<ClusterId>> neighbor_clusters_;
  std::set<NodeId> fired_;
  std::set<ClusterId> adjacent_;  // heads: clusters overlapping this one
  std::map<ClusterId, std::set<ClusterId>> reported_;  // relay dedup per cluster
};

}  // namespace clusterkit
