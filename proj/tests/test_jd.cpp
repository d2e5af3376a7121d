#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>
#include <vector>

#include "clusterkit/harness.hpp"
#include "clusterkit/validate/oracles.hpp"

using namespace clusterkit;

namespace {

// Two heads with a contested node 7 between them. Attribute election is
// deterministic here: 1 and 2 each champion their own 1-ball, 7 never wins.
Formation contested(const char* jd, double x2, double x7, FormationOptions o = {}) {
  std::vector<Topology::Node> ns{{1, 0, 0}, {2, x2, 0}, {7, x7, 0}};
  Topology t = Topology::from_nodes(12.0, ns);
  o.algorithm = "custom";
  o.chd = "attr";
  o.jd = jd;
  o.it = "norm";
  o.params.k = 1;
  o.seed = 1;
  return run_formation(t, o);
}

}  // namespace

TEST_CASE("bfs ties break toward the lower head id") {
  // 7 sits exactly one hop from both heads, so the hop scores tie.
  Formation f = contested("bfs-lca", 20, 10);
  CHECK(f.heads(false) == std::set<NodeId>{1, 2});
  CHECK(f.node(7).state().cluster == 1);
  CHECK(f.node(7).state().parent == 1);
  // the losing offer gets an explicit refusal
  CHECK(f.sim->sent(MsgType::JOIN_DENY) == 1);
}

TEST_CASE("bfs leach joins the stronger signal") {
  // d(7,1) = 9 and d(7,2) = 6: same hop count, 2 comes in louder.
  Formation f = contested("bfs-leach", 15, 9);
  CHECK(f.heads(false) == std::set<NodeId>{1, 2});
  CHECK(f.node(7).state().cluster == 2);
  CHECK(f.node(7).state().parent == 2);
  CHECK(f.sim->sent(MsgType::JOIN_DENY) == 1);
}

TEST_CASE("bfs tcca weighs advertised energy") {
  FormationOptions o;
  o.params.e_max = 1.0;
  o.env[1].energy = 0.5;
  o.env[2].energy = 0.9;
  o.env[7].energy = 1.0;
  Formation f = contested("bfs-tcca", 20, 10, o);
  CHECK(f.heads(false) == std::set<NodeId>{1, 2});
  CHECK(f.node(7).state().cluster == 2);

  // equal energies fall back to the id order
  FormationOptions eq;
  eq.params.e_max = 1.0;
  eq.env[1].energy = 0.7;
  eq.env[2].energy = 0.7;
  eq.env[7].energy = 1.0;
  Formation g = contested("bfs-tcca", 20, 10, eq);
  CHECK(g.node(7).state().cluster == 1);
}

TEST_CASE("leach members pick the nearest head") {
  int checked = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    TopologySpec ts{TopologyKind::FixedDensity, 80, 10.0, 0.0, 20.0, seed, ""};
    Topology t = build_topology(ts);
    FormationOptions o;
    o.algorithm = "leach";
    o.params.P_desired = 0.2;
    o.seed = seed;
    Formation f = run_formation(t, o);
    std::set<NodeId> heads = f.heads(false);
    if (heads.empty()) continue;
    for (auto& [id, cc] : f.by_id) {
      if (cc->state().role == Role::HEAD || cc->is_orphan()) continue;
      ++checked;
      CHECK(cc->state().cluster == oracle::nearest_head(t, heads, id));
    }
  }
  // make sure the sweep actually exercised something
  CHECK(checked > 400);
}

TEST_CASE("dfs token walks a path in order") {
  std::vector<Topology::Node> ns{{1, 0, 0}, {2, 10, 0}, {3, 20, 0}};
  Topology t = Topology::from_nodes(12.0, ns);
  FormationOptions o;
  o.algorithm = "custom";
  o.chd = "attr";
  o.jd = "dfs";
  o.it = "norm";
  o.params.k = 2;
  o.seed = 1;
  o.run = false;
  Formation f = make_formation(t, o);

  std::vector<NodeId> join_order;
  for (auto& [id, cc] : f.by_id) {
    NodeId at = id;
    cc->register_changed_callback([&join_order, at](ClusterEvent e, NodeId subj, ClusterId) {
      if (e == ClusterEvent::JOINED_CLUSTER && subj == at) join_order.push_back(at);
    });
  }
  f.sim->start();
  for (int r = 0; r < 60 && !f.last.quiescent; ++r) f.last = f.sim->step_round();

  REQUIRE(f.last.quiescent);
  CHECK(f.sim->round() == 12);
  CHECK(join_order == std::vector<NodeId>{2, 3});
  for (auto id : {1u, 2u, 3u}) CHECK(f.node(id).state().cluster == 1);
  CHECK(f.node(2).state().parent == 1);
  CHECK(f.node(3).state().parent == 2);
  // one invite per edge of the walk, plus the forwarded accept back up
  CHECK(f.sim->sent(MsgType::JOIN_REQUEST) == 2);
  CHECK(f.sim->sent(MsgType::JOIN_ACCEPT) == 3);
  CHECK(f.sim->sent(MsgType::RESUME) == 2);
  CHECK(f.sim->sent(MsgType::JOIN_DENY) == 0);
}

TEST_CASE("dfs visits a complete graph in id order") {
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

  std::vector<NodeId> join_order;
  for (auto& [id, cc] : f.by_id) {
    NodeId at = id;
    cc->register_changed_callback([&join_order, at](ClusterEvent e, NodeId subj, ClusterId) {
      if (e == ClusterEvent::JOINED_CLUSTER && subj == at) join_order.push_back(at);
    });
  }
  f.sim->start();
  for (int r = 0; r < 80 && !f.last.quiescent; ++r) f.last = f.sim->step_round();

  REQUIRE(f.last.quiescent);
  CHECK(f.sim->round() == 14);
  CHECK(f.all_complete());
  CHECK(join_order == std::vector<NodeId>{2, 3, 4, 5});
  for (auto id : {2u, 3u, 4u, 5u}) {
    CHECK(f.node(id).state().cluster == 1);
    CHECK(f.node(id).state().parent == 1);
    CHECK(f.node(id).state().hops == 1);
  }
  // members at the hop limit hand the token straight back
  CHECK(f.sim->sent(MsgType::JOIN_REQUEST) == 4);
  CHECK(f.sim->sent(MsgType::JOIN_ACCEPT) == 4);
  CHECK(f.sim->sent(MsgType::RESUME) == 4);
  CHECK(f.sim->sent(MsgType::JOIN_DENY) == 0);
}

TEST_CASE("dfs leaves unreached spokes to the quiet timeout") {
  // A star, visited one spoke at a time. Spokes 4 and 5 overhear nothing
  // while the token works 2 and 3 (invites are unicast), so their quiet
  // timers run out and they promote themselves before their turn comes.
  std::vector<Topology::Node> ns{{1, 0, 0}, {2, 10, 0}, {3, -10, 0}, {4, 0, 10}, {5, 0, -10}};
  Topology t = Topology::from_nodes(12.0, ns);
  FormationOptions o;
  o.algorithm = "custom";
  o.chd = "attr";
  o.jd = "dfs";
  o.it = "norm";
  o.params.k = 1;
  o.seed = 1;
  Formation f = run_formation(t, o);

  CHECK(f.node(2).state().cluster == 1);
  CHECK(f.node(3).state().cluster == 1);
  for (auto id : {4u, 5u}) {
    CHECK(f.node(id).is_orphan());
    CHECK(f.node(id).state().role == Role::HEAD);
    CHECK(f.node(id).state().cluster == id);
  }
}

TEST_CASE("dfs elects like bfs and covers no extra ground") {
  // Same election, so the same heads. The serial walk can drop far nodes the
  // parallel flood would have caught, but never the other way around.
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    TopologySpec ts{TopologyKind::FixedDensity, 60, 8.0, 0.0, 20.0, seed, ""};
    Topology t = build_topology(ts);
    FormationOptions a;
    a.algorithm = "custom";
    a.chd = "attr";
    a.jd = "bfs-lca";
    a.it = "norm";
    a.params.k = 2;
    a.seed = seed;
    FormationOptions b = a;
    b.jd = "dfs";
    Formation fa = run_formation(t, a);
    Formation fb = run_formation(t, b);
    CHECK(fa.heads(false) == fb.heads(false));
    for (auto& [id, cc] : fb.by_id) {
      if (!cc->is_orphan()) CHECK_FALSE(fa.node(id).is_orphan());
    }
  }
}

TEST_CASE("moca at p=1 makes every node its own cluster") {
  TopologySpec ts{TopologyKind::FixedDensity, 40, 8.0, 0.0, 20.0, 2, ""};
  Topology t = build_topology(ts);
  FormationOptions o;
  o.algorithm = "moca";
  o.params.p = 1.0;
  o.params.k = 2;
  o.seed = 2;
  Formation f = run_formation(t, o);
  for (auto& [id, cc] : f.by_id) {
    CHECK(cc->state().role == Role::HEAD);
    CHECK(cc->it_module().memberships(*cc) == std::vector<ClusterId>{id});
  }
}

TEST_CASE("moca memberships match the k-ball oracle") {
  for (std::uint64_t seed : {4ull, 9ull}) {
    TopologySpec ts{TopologyKind::FixedDensity, 80, 9.0, 0.0, 20.0, seed, ""};
    Topology t = build_topology(ts);
    FormationOptions o;
    o.algorithm = "moca";
    o.params.p = 0.3;
    o.params.k = 2;
    o.seed = seed;
    Formation f = run_formation(t, o);
    std::set<NodeId> heads = f.heads(false);
    auto want = oracle::moca_memberships(t, heads, 2);
    for (auto& [id, cc] : f.by_id) {
      std::vector<ClusterId> w = want.count(id) ? want.at(id) : std::vector<ClusterId>{};
      if (w.empty()) w = {id};  // out of reach of every head: self-promoted
      CHECK(cc->it_module().memberships(*cc) == w);
    }

    // every (node, membership) pair walks to its head through the view
    ClusterView v = f.view();
    for (auto& [id, info] : v.nodes()) {
      for (ClusterId c : info.memberships) {
        NodeId cur = id;
        std::size_t steps = 0;
        while (cur != static_cast<NodeId>(c) && steps <= 2) {
          auto it = v.info(cur).parents.find(c);
          REQUIRE(it != v.info(cur).parents.end());
          cur = it->second;
          ++steps;
        }
        CHECK(cur == static_cast<NodeId>(c));
      }
    }
  }
}

TEST_CASE("moca heads relay waves they do not join") {
  // Line 1-2-3 with heads 1 and 2: head 2 forwards 1's recruit wave to 3
  // without becoming a member of 1, yet still owns an uplink toward 1 so
  // 3's membership in 1 stays routable.
  std::vector<Topology::Node> ns{{1, 0, 0}, {2, 10, 0}, {3, 20, 0}};
  Topology t = Topology::from_nodes(12.0, ns);
  FormationOptions o;
  o.algorithm = "moca";
  o.params.p = 0.5;
  o.params.k = 2;
  o.seed = 6;
  Formation f = run_formation(t, o);
  REQUIRE(f.heads(false) == std::set<NodeId>{1, 2});

  CHECK(f.node(2).it_module().memberships(f.node(2)) == std::vector<ClusterId>{2});
  CHECK(f.node(3).it_module().memberships(f.node(3)) == std::vector<ClusterId>{1, 2});

  ClusterView v = f.view();
  auto p2 = v.info(2).parents;
  CHECK(p2 == (std::map<ClusterId, NodeId>{{1, 1}, {2, 2}}));
  auto p3 = v.info(3).parents;
  REQUIRE(p3.count(1) == 1);
  CHECK(p3.at(1) == 2);
}
