#pragma once

#include <cstdint>

#include "clusterkit/types.hpp"

namespace clusterkit {

// Knobs shared by a composition; forwarded to every module in one
// set_parameters fan-out when the core is enabled.
struct ChdParams {
  double p = 0.15;          // head probability (PROB, TCCA base)
  std::uint32_t t = 0;      // re-clustering period in rounds, 0 = one-shot
  unsigned k = 1;           // hop radius (ATTR election, BFS/DFS joins)
  unsigned d = 2;           // MaxMin hop parameter
  double P_desired = 0.2;   // LEACH desired head fraction
  double e_max = 1.0;       // energy normalizer
};

// Per-node values supplied by the experiment harness.
struct NodeEnv {
  double energy = 1.0;            // residual energy in [0, e_max]
  std::uint32_t attribute = 0;    // ATTR election value
  bool attribute_set = false;     // false: node id is used as the attribute
};

}  // namespace clusterkit
