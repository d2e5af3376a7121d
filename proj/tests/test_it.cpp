#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>
#include <vector>

#include "clusterkit/harness.hpp"
#include "clusterkit/validate/oracles.hpp"

using namespace clusterkit;

namespace {

// 1 and 2 head their own clusters; 7 sits between them and joins 1.
Formation contested_line(const char* it) {
  std::vector<Topology::Node> ns{{1, 0, 0}, {2, 20, 0}, {7, 10, 0}};
  Topology t = Topology::from_nodes(12.0, ns);
  FormationOptions o;
  o.algorithm = "custom";
  o.chd = "attr";
  o.jd = "bfs-lca";
  o.it = it;
  o.params.k = 1;
  o.seed = 1;
  o.run = false;
  return make_formation(t, o);
}

}  // namespace

TEST_CASE("next neighbor yields ascending ids, each once") {
  std::vector<Topology::Node> ns{{1, 0, 0}, {7, 10, 0}, {3, 0, 10}, {9, -10, 0}};
  Topology t = Topology::from_nodes(12.0, ns);
  FormationOptions o;
  o.algorithm = "lca";
  o.params.p = 1.0;
  o.seed = 1;
  Formation f = run_formation(t, o);

  CoreComponent& c = f.node(1);
  c.table().unexamined = {7, 3, 9};
  CHECK(c.it_module().next_neighbor(c) == 3);
  CHECK(c.it_module().next_neighbor(c) == 7);
  CHECK(c.it_module().next_neighbor(c) == 9);
  CHECK(c.it_module().next_neighbor(c) == kBroadcast);
  // consumed for good
  CHECK(c.table().unexamined.empty());
}

TEST_CASE("members flag foreign neighbors as gateways") {
  Formation f = contested_line("norm");
  std::map<NodeId, std::vector<std::pair<NodeId, ClusterId>>> flagged;
  for (auto& [id, cc] : f.by_id) {
    NodeId at = id;
    cc->register_changed_callback(
        [&flagged, at](ClusterEvent e, NodeId subj, ClusterId cl) {
          if (e == ClusterEvent::NEIGHBOR_OTHER_CLUSTER) flagged[at].push_back({subj, cl});
        });
  }
  f.sim->start();
  for (int r = 0; r < 60 && !f.last.quiescent; ++r) f.last = f.sim->step_round();

  // 7 joined 1 and hears 2: member becomes a gateway
  CHECK(f.node(7).state().cluster == 1);
  CHECK(f.node(7).state().role == Role::GATEWAY);
  REQUIRE(flagged[7].size() == 1);
  CHECK(flagged[7][0] == std::pair<NodeId, ClusterId>{2, 2});

  // head 2 hears foreign 7 but keeps its role
  CHECK(f.node(2).state().role == Role::HEAD);
  REQUIRE(flagged[2].size() == 1);
  CHECK(flagged[2][0].first == 7);
  // head 1 only borders its own member
  CHECK(flagged.count(1) == 0);

  // the neighborhood ends up fully classified
  auto& tb = f.node(7).table();
  CHECK(tb.cluster_neighbors == std::set<NodeId>{1});
  CHECK(tb.non_cluster_neighbors == std::set<NodeId>{2});
  CHECK(tb.unexamined.empty());
}

TEST_CASE("classification partitions every neighborhood") {
  for (std::uint64_t seed : {3ull, 21ull}) {
    TopologySpec ts{TopologyKind::FixedDensity, 70, 9.0, 0.0, 20.0, seed, ""};
    Topology t = build_topology(ts);
    FormationOptions o;
    o.algorithm = "lca";
    o.params.k = 2;
    o.params.p = 0.2;
    o.seed = seed;
    Formation f = run_formation(t, o);
    for (auto& [id, cc] : f.by_id) {
      auto& tb = cc->table();
      CHECK(tb.unexamined.empty());
      for (NodeId v : t.neighbors(id)) {
        bool same = f.node(v).state().cluster == cc->state().cluster;
        CHECK(tb.cluster_neighbors.count(v) == (same ? 1 : 0));
        CHECK(tb.non_cluster_neighbors.count(v) == (same ? 0 : 1));
      }
    }
  }
}

TEST_CASE("maxmind heads learn the image of the edge cut") {
  Formation f = contested_line("maxmind");
  f.sim->start();
  for (int r = 0; r < 60 && !f.last.quiescent; ++r) f.last = f.sim->step_round();
  auto* m1 = dynamic_cast<MaxMindIt*>(&f.node(1).it_module());
  auto* m2 = dynamic_cast<MaxMindIt*>(&f.node(2).it_module());
  REQUIRE(m1 != nullptr);
  CHECK(m1->adjacent_clusters() == std::set<ClusterId>{2});
  CHECK(m2->adjacent_clusters() == std::set<ClusterId>{1});

  for (std::uint64_t seed : {1ull, 7ull, 13ull}) {
    TopologySpec ts{TopologyKind::FixedDensity, 80, 9.0, 0.0, 20.0, seed, ""};
    Topology t = build_topology(ts);
    FormationOptions o;
    o.algorithm = "maxmind";
    o.params.d = 2;
    o.seed = seed;
    Formation g = run_formation(t, o);
    std::map<NodeId, std::vector<ClusterId>> ms;
    for (auto& [id, cc] : g.by_id) ms[id] = {cc->state().cluster};
    auto want = oracle::edge_cut(t, ms);
    for (NodeId h : g.heads(true)) {
      auto* mi = dynamic_cast<MaxMindIt*>(&g.node(h).it_module());
      REQUIRE(mi != nullptr);
      std::set<ClusterId> w = want.count(h) ? want.at(h) : std::set<ClusterId>{};
      CHECK(mi->adjacent_clusters() == w);
    }
  }
}

TEST_CASE("moca heads learn every overlapping cluster") {
  // Reports ride the member uplinks, including stretches relayed by other
  // heads, so each head ends up knowing exactly who shares nodes with it.
  for (std::uint64_t seed : {4ull, 9ull}) {
    TopologySpec ts{TopologyKind::FixedDensity, 80, 9.0, 0.0, 20.0, seed, ""};
    Topology t = build_topology(ts);
    FormationOptions o;
    o.algorithm = "moca";
    o.params.p = 0.3;
    o.params.k = 2;
    o.seed = seed;
    Formation f = run_formation(t, o);
    std::map<ClusterId, std::set<ClusterId>> want;
    for (auto& [id, cc] : f.by_id) {
      auto ms = cc->it_module().memberships(*cc);
      for (ClusterId a : ms) {
        for (ClusterId b : ms) {
          if (a != b) want[a].insert(b);
        }
      }
    }
    for (NodeId h : f.heads(false)) {
      auto* mi = dynamic_cast<MocaIt*>(&f.node(h).it_module());
      REQUIRE(mi != nullptr);
      std::set<ClusterId> w = want.count(h) ? want.at(h) : std::set<ClusterId>{};
      CHECK(mi->adjacent_clusters() == w);
    }
  }
}

TEST_CASE("moca shared members introduce their heads") {
  std::vector<Topology::Node> ns{{1, 0, 0}, {2, 10, 0}, {3, 20, 0}};
  Topology t = Topology::from_nodes(12.0, ns);
  FormationOptions o;
  o.algorithm = "moca";
  o.params.p = 0.5;
  o.params.k = 2;
  o.seed = 6;
  Formation f = run_formation(t, o);
  REQUIRE(f.heads(false) == std::set<NodeId>{1, 2});
  REQUIRE(f.node(3).it_module().memberships(f.node(3)) ==
          std::vector<ClusterId>{1, 2});

  auto* m1 = dynamic_cast<MocaIt*>(&f.node(1).it_module());
  auto* m2 = dynamic_cast<MocaIt*>(&f.node(2).it_module());
  CHECK(m1->adjacent_clusters() == std::set<ClusterId>{2});
  CHECK(m2->adjacent_clusters() == std::set<ClusterId>{1});
  CHECK(m2->hops_in(2) == 0);
}
