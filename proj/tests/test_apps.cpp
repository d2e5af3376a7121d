#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <vector>

#include "clusterkit/apps/gke.hpp"
#include "clusterkit/harness.hpp"
#include "clusterkit/validate/oracles.hpp"

using namespace clusterkit;

namespace {

// heads 1 and 2 bridged by gateway 7 (member of 1)
Formation bridged_line() {
  std::vector<Topology::Node> ns{{1, 0, 0}, {2, 20, 0}, {7, 10, 0}};
  Topology t = Topology::from_nodes(12.0, ns);
  FormationOptions o;
  o.algorithm = "custom";
  o.chd = "attr";
  o.jd = "bfs-lca";
  o.it = "norm";
  o.params.k = 1;
  o.seed = 1;
  return run_formation(t, o);
}

}  // namespace

TEST_CASE("intra routing degenerate cases") {
  Formation f = bridged_line();
  ClusterView v = f.view();
  ClusterRadio r(v);

  auto self_route = r.intra_route(7, 7);
  CHECK(self_route.status == RouteStatus::OK);
  CHECK(self_route.route.path == std::vector<NodeId>{7});
  CHECK(self_route.route.hop_count == 0);

  CHECK(r.intra_route(7, 2).status == RouteStatus::NOT_IN_CLUSTER);
  CHECK(r.intra_route(7, 99).status == RouteStatus::UNKNOWN_NODE);
}

TEST_CASE("inter routing crosses the bridge through its gateway") {
  Formation f = bridged_line();
  ClusterView v = f.view();
  ClusterRadio r(v);

  auto out = r.inter_route(1, 2);
  REQUIRE(out.ok());
  CHECK(out.route.path == std::vector<NodeId>{1, 7, 2});
  CHECK(out.route.hop_count == 2);
  CHECK(out.route.mode == RouteMode::INTER);

  auto back = r.inter_route(2, 7);
  REQUIRE(back.ok());
  CHECK(back.route.path == std::vector<NodeId>{2, 7});

  // same cluster: falls back to the tree
  auto same = r.inter_route(7, 1);
  REQUIRE(same.ok());
  CHECK(same.route.mode == RouteMode::INTRA);
  CHECK(same.route.path == std::vector<NodeId>{7, 1});

  CHECK(r.cluster_distance(1, 2) == 1);
  CHECK(r.cluster_distance(1, 1) == 0);
}

TEST_CASE("inter routing reports unreachable islands") {
  std::vector<Topology::Node> ns{{1, 0, 0}, {2, 10, 0}, {8, 1000, 0}, {9, 1010, 0}};
  Topology t = Topology::from_nodes(12.0, ns);
  FormationOptions o;
  o.algorithm = "lca";
  o.params.p = 1.0;
  o.params.k = 1;
  o.seed = 1;
  Formation f = run_formation(t, o);
  ClusterView v = f.view();
  ClusterRadio r(v);

  auto out = r.inter_route(1, 8);
  CHECK(out.status == RouteStatus::UNREACHABLE);

  // neighbors heading their own singleton clusters still reach each other
  auto near = r.inter_route(1, 2);
  REQUIRE(near.ok());
  CHECK(near.route.path == std::vector<NodeId>{1, 2});
}

TEST_CASE("intra routes ride one sweep of the tree") {
  for (std::uint64_t seed : {3ull, 21ull}) {
    TopologySpec ts{TopologyKind::FixedDensity, 70, 9.0, 0.0, 20.0, seed, ""};
    Topology t = build_topology(ts);
    FormationOptions o;
    o.algorithm = "lca";
    o.params.k = 2;
    o.params.p = 0.2;
    o.seed = seed;
    Formation f = run_formation(t, o);
    ClusterView v = f.view();
    ClusterRadio r(v);
    std::map<ClusterId, std::vector<NodeId>> by_cluster;
    for (auto& [id, cc] : f.by_id) by_cluster[cc->state().cluster].push_back(id);
    for (auto& [c, members] : by_cluster) {
      for (NodeId a : members) {
        for (NodeId b : members) {
          if (a >= b) continue;
          auto out = r.intra_route(a, b);
          REQUIRE(out.ok());
          CHECK(oracle::path_simple(t, out.route.path, a, b));
          CHECK(out.route.hop_count == out.route.path.size() - 1);
          // both legs stay inside the k-hop tree
          CHECK(out.route.hop_count <= 4);
        }
      }
    }
  }
}

TEST_CASE("cluster graph distances match the edge cut") {
  for (std::uint64_t seed : {3ull, 21ull}) {
    TopologySpec ts{TopologyKind::FixedDensity, 70, 9.0, 0.0, 20.0, seed, ""};
    Topology t = build_topology(ts);
    FormationOptions o;
    o.algorithm = "lca";
    o.params.k = 2;
    o.params.p = 0.2;
    o.seed = seed;
    Formation f = run_formation(t, o);
    ClusterView v = f.view();
    ClusterRadio r(v);
    std::map<NodeId, std::vector<ClusterId>> ms;
    std::set<ClusterId> clusters;
    for (auto& [id, cc] : f.by_id) {
      ms[id] = {cc->state().cluster};
      clusters.insert(cc->state().cluster);
    }
    auto g = oracle::edge_cut(t, ms);
    for (ClusterId a : clusters) {
      for (ClusterId b : clusters) {
        int want = (a == b) ? 0 : oracle::graph_distance(g, a, b);
        CHECK(r.cluster_distance(a, b) == want);
      }
    }
  }
}

TEST_CASE("group key folds every member exactly once") {
  SumCombiner sum;
  std::vector<Topology::Node> ns{{1, 0, 0}, {2, 1, 0}, {3, 0, 1}, {4, 1, 1}, {5, 2, 0}};
  Topology t = Topology::from_nodes(20.0, ns);
  FormationOptions o;
  o.algorithm = "custom";
  o.chd = "attr";
  o.jd = "dfs";
  o.it = "norm";
  o.params.k = 1;
  o.seed = 1;
  o.run = false;
  Formation f = make_formation(t, o);
  std::vector<std::unique_ptr<GroupKeyApp>> apps;
  for (auto& cc : f.agents) apps.push_back(std::make_unique<GroupKeyApp>(*cc, 42, sum));
  f.sim->start();
  f.last = f.sim->run(200);
  REQUIRE(f.last.quiescent);

  std::uint64_t want = 0;
  for (NodeId id = 1; id <= 5; ++id) want += node_secret(42, id);
  const GroupKey& k = apps[0]->key();
  REQUIRE(k.ready);
  CHECK(k.contributors == 5);
  CHECK(k.value == want);

  // members hold no key of their own; the head hands one to every member
  CHECK_FALSE(apps[1]->key().ready);
  ClusterView v = f.view();
  CHECK(apps[1]->distribute(v).empty());
  auto dist = apps[0]->distribute(v);
  REQUIRE(dist.size() == 5);
  for (auto& [id, gk] : dist) {
    CHECK(gk.value == k.value);
    CHECK(gk.contributors == 5);
  }
}

TEST_CASE("group key is independent of fold order") {
  SumCombiner sum;
  std::vector<std::uint64_t> secrets;
  for (NodeId id = 1; id <= 6; ++id) secrets.push_back(node_secret(9, id));

  auto fold = [&](const std::vector<std::uint64_t>& order) {
    std::uint64_t acc = sum.init();
    for (auto s : order) acc = sum.contribute(acc, s);
    return sum.finalize(acc, static_cast<std::uint32_t>(order.size()));
  };
  std::uint64_t base = fold(secrets);
  std::vector<std::uint64_t> shuffled = secrets;
  std::sort(shuffled.rbegin(), shuffled.rend());
  CHECK(fold(shuffled) == base);
  std::rotate(shuffled.begin(), shuffled.begin() + 2, shuffled.end());
  CHECK(fold(shuffled) == base);
}

TEST_CASE("group key resets across epochs") {
  // two formation epochs: the second key folds the same set again
  SumCombiner sum;
  std::vector<Topology::Node> ns{{1, 0, 0}, {2, 10, 0}, {3, 20, 0}};
  Topology t = Topology::from_nodes(12.0, ns);
  FormationOptions o;
  o.algorithm = "custom";
  o.chd = "attr";
  o.jd = "dfs";
  o.it = "norm";
  o.params.k = 2;
  o.params.t = 20;
  o.seed = 1;
  o.run = false;
  Formation f = make_formation(t, o);
  std::vector<std::unique_ptr<GroupKeyApp>> apps;
  for (auto& cc : f.agents) apps.push_back(std::make_unique<GroupKeyApp>(*cc, 42, sum));
  f.sim->start();
  // stop inside epoch 1, after its formation settled but before epoch 2 resets
  for (int r = 0; r < 35; ++r) f.last = f.sim->step_round();

  std::uint64_t want = node_secret(42, 1) + node_secret(42, 2) + node_secret(42, 3);
  REQUIRE(f.node(1).epoch() == 1);
  const GroupKey& k = apps[0]->key();
  REQUIRE(k.ready);
  CHECK(k.contributors == 3);
  CHECK(k.value == want);
}
