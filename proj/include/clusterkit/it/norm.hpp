#pragma once

#include <set>

#include "clusterkit/core.hpp"

namespace clusterkit {

// Single-membership neighbor bookkeeping. Splits the neighborhood into
// same-cluster and other-cluster sets as observations arrive and flags
// boundary members as gateways.
class NormIt : public ItModule {
 public:
  const char* name() const override { return "norm"; }

  void reset() override {
    ItModule::reset();
    fired_.clear();
  }

  void note_neighbor(CoreComponent& cc, NodeId who, ClusterId cluster) override {
    table_.known[who] = cluster;
    table_.unexamined.erase(who);
    classify(cc, who);
  }

  void on_self_changed(CoreComponent& cc) override {
    for (auto& [who, cl] : table_.known) classify(cc, who);
  }

 protected:
  void classify(CoreComponent& cc, NodeId who) {
    ClusterId mine = cc.state().cluster;
    ClusterId theirs = table_.known[who];
    if (mine != kNoCluster && theirs == mine) {
      table_.cluster_neighbors.insert(who);
      table_.non_cluster_neighbors.erase(who);
      return;
    }
    table_.non_cluster_neighbors.insert(who);
    table_.cluster_neighbors.erase(who);
    if (mine != kNoCluster && fired_.insert(who).second) {
      cc.fire_event(ClusterEvent::NEIGHBOR_OTHER_CLUSTER, who, theirs);
      cc.mark_gateway();
    }
  }

  std::set<NodeId> fired_;  // other-cluster event fired, once per epoch
};

}  // namespace clusterkit
