#pragma once

#include <cstdint>
#include <utility>

#include "clusterkit/core.hpp"

namespace clusterkit {

// Attribute-champion election: k gossip rounds propagate the smallest
// (value, id) pair through the k-hop neighborhood; a node that still
// champions itself afterwards declares head.
class AttrChd : public ChdModule {
 public:
  const char* name() const override { return "attr"; }

  void reset() override {
    best_value_ = 0;
    best_owner_ = kBroadcast;
  }

  void start(CoreComponent& cc) override {
    best_value_ = cc.attribute();
    best_owner_ = cc.self();
    unsigned k = params_.k;
    cc.bcast_attribute(best_value_, best_owner_, 0,
                       static_cast<std::uint8_t>(k > 0 ? k - 1 : 0));
    cc.chd_timer(1, 1);
  }

  void on_attribute(CoreComponent&, const WireMessage& m,
                    const AttributeFloodPayload& p, const Delivery&) override {
    if (std::pair(p.value, m.cluster) < std::pair(best_value_, best_owner_)) {
      best_value_ = p.value;
      best_owner_ = m.cluster;
    }
  }

  void on_timer(CoreComponent& cc, std::uint64_t i) override {
    unsigned k = params_.k;
    if (i < k) {
      cc.bcast_attribute(best_value_, best_owner_,
                         static_cast<std::uint8_t>(i),
                         static_cast<std::uint8_t>(k - 1 - i));
      cc.chd_timer(1, i + 1);
      return;
    }
    if (best_owner_ == cc.self()) {
      cc.declare_head();
    } else {
      cc.declare_non_head();
    }
  }

 private:
  std::uint32_t best_value_ = 0;
  NodeId best_owner_ = kBroadcast;
};

}  // namespace clusterkit
