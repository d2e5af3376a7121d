// Walkthrough: generate a field, form clusters two ways, then use the
// structure: route a packet across clusters and seal a group key.

#include <cstdio>
#include <memory>
#include <vector>

#include "clusterkit/apps/gke.hpp"
#include "clusterkit/clusterkit.hpp"

using namespace clusterkit;

static void summarize(const char* title, Formation& f) {
  std::printf("\n== %s ==\n", title);
  std::map<ClusterId, int> sizes;
  int orphans = 0;
  for (auto& [id, cc] : f.by_id) {
    for (ClusterId c : cc->it_module().memberships(*cc)) ++sizes[c];
    if (cc->is_orphan()) ++orphans;
  }
  std::printf("rounds=%llu heads=%zu orphans=%d msgs=%llu\n",
              static_cast<unsigned long long>(f.sim->round()),
              f.heads(false).size(), orphans,
              static_cast<unsigned long long>(f.sim->total_sent()));
  for (auto& [c, n] : sizes) std::printf("  cluster %-3u %d nodes\n", c, n);
}

int main() {
  TopologySpec spec{TopologyKind::FixedDensity, 60, 8.0, 0.0, 20.0, 11, ""};
  Topology topo = build_topology(spec);
  std::printf("field: %zu nodes, mean degree %.1f, giant component %.0f%%\n",
              topo.size(), topo.mean_degree(),
              100.0 * topo.largest_component_fraction());

  // k-hop clusters around locally lowest-id champions
  FormationOptions lca;
  lca.algorithm = "lca";
  lca.params.k = 2;
  lca.seed = 11;
  Formation f1 = run_formation(topo, lca);
  summarize("lca, k=2", f1);

  // same field, overlapping clusters
  FormationOptions moca;
  moca.algorithm = "moca";
  moca.params.k = 2;
  moca.params.p = 0.25;
  moca.seed = 11;
  Formation f2 = run_formation(topo, moca);
  summarize("moca, k=2 p=0.25", f2);

  // ride the finished structure
  ClusterView view = f1.view();
  ClusterRadio radio(view);
  auto heads = f1.heads(false);
  if (heads.size() >= 2) {
    NodeId a = *heads.begin();
    NodeId b = *std::next(heads.begin());
    auto out = radio.inter_route(a, b);
    std::printf("\nroute head %u -> head %u: ", a, b);
    if (out.ok()) {
      for (NodeId n : out.route.path) std::printf("%u ", n);
      std::printf("(%u hops, %d cluster links)\n", out.route.hop_count,
                  radio.cluster_distance(f1.node(a).state().cluster,
                                         f1.node(b).state().cluster));
    } else {
      std::printf("failed: %s\n", out.detail.c_str());
    }
  }

  // group key over a serial (token) join, folded as members arrive
  std::vector<Topology::Node> ring;
  for (std::uint32_t i = 1; i <= 6; ++i) {
    ring.push_back({i, 12.0 * i, 0.0});
  }
  FormationOptions gke;
  gke.algorithm = "custom";
  gke.chd = "attr";
  gke.jd = "dfs";
  gke.it = "norm";
  gke.params.k = 5;
  gke.seed = 1;
  gke.run = false;
  Formation f3 = make_formation(Topology::from_nodes(15.0, ring), gke);
  SumCombiner sum;
  std::vector<std::unique_ptr<GroupKeyApp>> apps;
  for (auto& cc : f3.agents) {
    apps.push_back(std::make_unique<GroupKeyApp>(*cc, 2024, sum));
  }
  f3.sim->start();
  f3.sim->run(200);
  const GroupKey& key = apps[0]->key();
  std::printf("\ngroup key: ready=%s contributors=%u value=%016llx\n",
              key.ready ? "yes" : "no", key.contributors,
              static_cast<unsigned long long>(key.value));
  return 0;
}
