#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "clusterkit/core.hpp"

namespace clusterkit {

// MaxMin d-cluster election. Runs d floodmax rounds then d floodmin rounds,
// keeping a logbook of the winner after every exchange. Election rules, in
// order: a node that saw its own id come back during floodmin heads a
// cluster; otherwise the smallest id present in both logbooks wins;
// otherwise the floodmax winner does. Non-heads adopt their elected head
// through the neighbor that first delivered its id, which yields exact
// hop distances on lossless networks.
class MaxMinDChd : public ChdModule {
 public:
  const char* name() const override { return "maxmind"; }

  void reset() override {
    w_ = kBroadcast;
    pending_.clear();
    logmax_.clear();
    logmin_.clear();
    first_src_.clear();
    saw_self_in_min_ = false;
  }

  void start(CoreComponent& cc) override {
    w_ = cc.self();
    cc.bcast_maxmin(w_);
    cc.chd_timer(1, 1);
  }

  void on_maxmin(CoreComponent&, const WireMessage& m,
                 const MaxMinFloodPayload& p, const Delivery&) override {
    pending_.push_back({m.sender, p.id});
  }

  void on_timer(CoreComponent& cc, std::uint64_t i) override {
    unsigned d = params_.d;
    bool floodmax = i <= d;
    for (auto& [sender, id] : pending_) {
      if (floodmax) {
        first_src_.try_emplace(id, Source{sender, static_cast<unsigned>(i)});
        w_ = std::max(w_, id);
      } else {
        if (id == cc.self()) saw_self_in_min_ = true;
        w_ = std::min(w_, id);
      }
    }
    pending_.clear();
    (floodmax ? logmax_ : logmin_).push_back(w_);
    if (i < 2 * d) {
      cc.bcast_maxmin(w_);
      cc.chd_timer(1, i + 1);
      return;
    }
    elect(cc);
  }

  const std::vector<NodeId>& logmax() const { return logmax_; }
  const std::vector<NodeId>& logmin() const { return logmin_; }

 private:
  struct Source {
    NodeId via;
    unsigned hops;
  };

  void elect(CoreComponent& cc) {
    NodeId head = kBroadcast;
    if (saw_self_in_min_) {
      head = cc.self();
    } else {
      std::set<NodeId> pairs;
      std::set<NodeId> maxset(logmax_.begin(), logmax_.end());
      for (NodeId id : logmin_) {
        if (maxset.count(id)) pairs.insert(id);
      }
      if (!pairs.empty()) {
        head = *pairs.begin();
      } else {
        head = logmax_.back();
      }
    }
    if (head == cc.self()) {
      cc.declare_head();
      return;
    }
    cc.declare_non_head();
    auto it = first_src_.find(head);
    if (it == first_src_.end()) return;  // unreachable head: quiet timer orphans
    cc.adopt(head, it->second.via, static_cast<std::uint8_t>(it->second.hops));
  }

  NodeId w_ = kBroadcast;
  std::vector<std::pair<NodeId, NodeId>> pending_;  // (sender, carried id)
  std::vector<NodeId> logmax_;
  std::vector<NodeId> logmin_;
  std::map<NodeId, Source> first_src_;
  bool saw_self_in_min_ = false;
};

}  // namespace clusterkit
