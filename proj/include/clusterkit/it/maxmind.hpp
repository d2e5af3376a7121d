#pragma once

#include <set>
#include <vector>

#include "clusterkit/core.hpp"
#include "clusterkit/it/norm.hpp"

namespace clusterkit {

// MaxMin interconnection: after formation settles, boundary members report
// the foreign clusters they can hear up the parent chain, so each head
// learns which clusters touch its own.
class MaxMindIt : public NormIt {
 public:
  const char* name() const override { return "maxmind"; }

  void reset() override {
    NormIt::reset();
    adjacent_.clear();
    reported_.clear();
  }

  void on_complete(CoreComponent& cc) override {
    cc.it_timer(2);  // hellos from the whole neighborhood land next round
  }

  void on_timer(CoreComponent& cc, std::uint64_t) override {
    std::set<ClusterId> foreign;
    ClusterId mine = cc.state().cluster;
    for (auto& [who, cl] : table_.known) {
      if (cl != mine && cl != kNoCluster) foreign.insert(cl);
    }
    if (cc.state().role == Role::HEAD) {
      adjacent_.insert(foreign.begin(), foreign.end());
      return;
    }
    report(cc, foreign);
  }

  void on_convergecast(CoreComponent& cc, const WireMessage& m,
                       const ConvergecastPayload& p, const Delivery&) override {
    if (m.cluster != cc.state().cluster) return;
    if (cc.state().role == Role::HEAD) {
      for (ClusterId c : p.clusters) {
        if (c != cc.self()) adjacent_.insert(c);
      }
      return;
    }
    std::set<ClusterId> fresh(p.clusters.begin(), p.clusters.end());
    report(cc, fresh);
  }

  const std::set<ClusterId>& adjacent_clusters() const { return adjacent_; }

 private:
  void report(CoreComponent& cc, const std::set<ClusterId>& clusters) {
    const ClusterState& st = cc.state();
    if (!member_like(st.role) || st.parent == kBroadcast) return;
    std::vector<ClusterId> batch;
    for (ClusterId c : clusters) {
      if (c == st.cluster || !reported_.insert(c).second) continue;
      batch.push_back(c);
      if (batch.size() == kMaxConvergecastIds) {
        cc.send_convergecast(st.parent, st.cluster, batch);
        batch.clear();
      }
    }
    if (!batch.empty()) cc.send_convergecast(st.parent, st.cluster, batch);
  }

  std::set<ClusterId> adjacent_;
  std::set<ClusterId> reported_;
};

}  // namespace clusterkit
