#pragma once

#include <algorithm>

#include "clusterkit/core.hpp"

namespace clusterkit {

// Energy-biased coin: the base probability is scaled by residual energy,
// so depleted nodes rarely volunteer.
class TccaChd : public ChdModule {
 public:
  const char* name() const override { return "tcca"; }

  void start(CoreComponent& cc) override {
    double scale = params_.e_max > 0.0 ? cc.energy() / params_.e_max : 0.0;
    double pe = std::clamp(params_.p * scale, 0.0, 1.0);
    if (cc.rng().next_double() < pe) {
      cc.declare_head();
    } else {
      cc.declare_non_head();
    }
  }
};

}  // namespace clusterkit
