#pragma once

#include <set>

#include "clusterkit/core.hpp"
#include "clusterkit/it/moca.hpp"

namespace clusterkit {

// Overlapping join: every recruit wave floods the full k-ball and every
// non-head inside it joins, so nodes collect one membership per reachable
// head. Relays forward each origin once, heads included, which keeps the
// reached set equal to the exact k-hop ball. The lowest joined head id
// serves as the node's primary cluster.
class MocaJd : public JdModule {
 public:
  const char* name() const override { return "moca"; }

  void reset() override {
    relayed_.clear();
    joined_.clear();
  }

  void on_head_start(CoreComponent& cc) override {
    relayed_.insert(cc.self());
    cc.bcast_request(cc.self(), 1,
                     static_cast<std::uint8_t>(params_.k > 1 ? params_.k - 1 : 0),
                     0);
  }

  void on_request(CoreComponent& cc, const WireMessage& m,
                  const JoinRequestPayload& p, const Delivery&) override {
    if (cc.state().role != Role::HEAD && !joined_.count(p.origin_head)) {
      joined_.insert(p.origin_head);
      if (cc.state().cluster == kNoCluster ||
          p.origin_head < cc.state().cluster) {
        cc.adopt(p.origin_head, m.sender, m.hops);
      } else if (auto* mit = dynamic_cast<MocaIt*>(&cc.it_module())) {
        mit->add_membership(cc, p.origin_head, m.sender, m.hops);
        cc.fire_event(ClusterEvent::JOINED_CLUSTER, cc.self(), p.origin_head);
      }
      cc.bcast_accept(p.origin_head, m.sender, m.hops);
    }
    if (m.hops < params_.k && relayed_.insert(p.origin_head).second) {
      // Heads pass foreign waves along without joining; keep the reverse
      // pointer so accepts and routed data can flow back through them.
      if (cc.state().role == Role::HEAD) {
        if (auto* mit = dynamic_cast<MocaIt*>(&cc.it_module())) {
          mit->note_relay(p.origin_head, m.sender, m.hops);
        }
      }
      cc.bcast_request(p.origin_head, static_cast<std::uint8_t>(m.hops + 1),
                       static_cast<std::uint8_t>(params_.k - m.hops - 1),
                       p.metric_q16);
    }
  }

  void on_accept(CoreComponent& cc, const WireMessage& m,
                 const JoinAcceptPayload& ja, const Delivery&) override {
    // Joiners list their other heads; that is how a head first hears which
    // clusters overlap its own.
    if (cc.state().role != Role::HEAD || m.cluster != cc.self()) return;
    if (auto* mit = dynamic_cast<MocaIt*>(&cc.it_module())) {
      for (ClusterId h : ja.other_heads) {
        if (h != cc.self()) mit->note_adjacent(h);
      }
    }
  }

 private:
  std::set<ClusterId> relayed_;
  std::set<ClusterId> joined_;
};

}  // namespace clusterkit
