#pragma once

// Umbrella header: the full framework in one include.

#include "clusterkit/types.hpp"
#include "clusterkit/rng.hpp"
#include "clusterkit/wire.hpp"
#include "clusterkit/topology.hpp"
#include "clusterkit/sim.hpp"
#include "clusterkit/params.hpp"
#include "clusterkit/contracts.hpp"
#include "clusterkit/core.hpp"
#include "clusterkit/presets.hpp"
#include "clusterkit/harness.hpp"
#include "clusterkit/apps/radio.hpp"
#include "clusterkit/apps/gke.hpp"
#include "clusterkit/exp/config.hpp"
#include "clusterkit/exp/metrics.hpp"
#include "clusterkit/exp/runner.hpp"
#include "clusterkit/exp/plot.hpp"
#include "clusterkit/validate/oracles.hpp"
