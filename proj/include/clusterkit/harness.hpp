#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "clusterkit/apps/radio.hpp"
#include "clusterkit/core.hpp"
#include "clusterkit/exp/runner.hpp"
#include "clusterkit/presets.hpp"
#include "clusterkit/sim.hpp"
#include "clusterkit/topology.hpp"

namespace clusterkit {

// Owns one simulated formation end to end: topology, simulator, agents.
// Pointer-stable, so it can be returned by value.
struct Formation {
  std::unique_ptr<Topology> topo;
  std::unique_ptr<Simulator> sim;
  std::vector<std::unique_ptr<CoreComponent>> agents;
  std::map<NodeId, CoreComponent*> by_id;
  RoundReport last;

  CoreComponent& node(NodeId id) { return *by_id.at(id); }
  const CoreComponent& node(NodeId id) const { return *by_id.at(id); }

  ClusterView view() const {
    ClusterView v(*topo);
    for (const auto& cc : agents) v.add(*cc);
    return v;
  }

  std::map<NodeId, ClusterId> cluster_of() const {
    std::map<NodeId, ClusterId> out;
    for (auto& [id, cc] : by_id) out[id] = cc->state().cluster;
    return out;
  }

  std::set<NodeId> heads(bool include_orphans = true) const {
    std::set<NodeId> out;
    for (auto& [id, cc] : by_id) {
      if (cc->state().role == Role::HEAD &&
          (include_orphans || !cc->is_orphan())) {
        out.insert(id);
      }
    }
    return out;
  }

  bool all_complete() const {
    for (const auto& cc : agents) {
      if (!cc->formation_complete()) return false;
    }
    return true;
  }
};

struct FormationOptions {
  std::string algorithm = "lca";  // preset name, or "custom"
  std::string chd, jd, it;
  ChdParams params;
  std::uint64_t seed = 1;
  double loss = 0.0;
  std::map<NodeId, NodeEnv> env;  // per-node overrides; others default
  bool run = true;
  std::uint64_t cap = 0;  // 0: derived from params
};

inline Formation make_formation(Topology topo, const FormationOptions& opt) {
  Formation f;
  f.topo = std::make_unique<Topology>(std::move(topo));
  f.sim = std::make_unique<Simulator>(*f.topo, opt.seed, opt.loss);
  for (const auto& n : f.topo->nodes()) {
    Composition comp = opt.algorithm == "custom"
                           ? make_custom(opt.chd, opt.jd, opt.it, opt.params)
                           : make_composition(opt.algorithm, opt.params);
    NodeEnv env;
    if (auto it = opt.env.find(n.id); it != opt.env.end()) env = it->second;
    f.agents.push_back(std::make_unique<CoreComponent>(std::move(comp), env));
    f.by_id[n.id] = f.agents.back().get();
    f.sim->attach(n.id, f.agents.back().get());
  }
  return f;
}

inline Formation run_formation(Topology topo, const FormationOptions& opt) {
  Formation f = make_formation(std::move(topo), opt);
  f.sim->start();
  if (opt.run) {
    ChdParams eff = f.agents.empty() ? opt.params : f.agents[0]->params();
    std::uint64_t cap = opt.cap ? opt.cap : round_cap(eff);
    f.last = f.sim->run(cap);
  }
  return f;
}

}  // namespace clusterkit
