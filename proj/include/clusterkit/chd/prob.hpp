#pragma once

#include "clusterkit/core.hpp"

namespace clusterkit {

// Memoryless head election: each node tosses one biased coin per epoch.
class ProbChd : public ChdModule {
 public:
  const char* name() const override { return "prob"; }

  void start(CoreComponent& cc) override {
    if (cc.rng().next_double() < params_.p) {
      cc.declare_head();
    } else {
      cc.declare_non_head();
    }
  }
};

}  // namespace clusterkit
