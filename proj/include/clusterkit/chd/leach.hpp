#pragma once

#include <cmath>
#include <cstdint>

#include "clusterkit/core.hpp"

namespace clusterkit {

// Rotation threshold for epoch r. Nodes that already served in the current
// cycle are excluded by the caller; the denominator shrinks as the cycle
// progresses so the last eligible epoch reaches probability one.
inline double leach_threshold(double P, std::uint32_t r) {
  std::uint32_t cycle = static_cast<std::uint32_t>(std::ceil(1.0 / P));
  double denom = 1.0 - P * static_cast<double>(r % cycle);
  if (denom <= P) return 1.0;
  return P / denom;
}

// Rotating head election: every node serves exactly once per 1/P epochs.
class LeachChd : public ChdModule {
 public:
  const char* name() const override { return "leach"; }

  void start(CoreComponent& cc) override {
    std::uint32_t cycle =
        static_cast<std::uint32_t>(std::ceil(1.0 / params_.P_desired));
    if (cc.epoch() % cycle == 0) served_ = false;
    if (served_) {
      cc.declare_non_head();
      return;
    }
    double t = leach_threshold(params_.P_desired, cc.epoch());
    if (cc.rng().next_double() < t) {
      served_ = true;
      cc.declare_head();
    } else {
      cc.declare_non_head();
    }
  }

 private:
  bool served_ = false;  // survives across epochs within a cycle
};

}  // namespace clusterkit
