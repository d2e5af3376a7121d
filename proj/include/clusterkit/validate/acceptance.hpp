#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "clusterkit/apps/gke.hpp"
#include "clusterkit/apps/radio.hpp"
#include "clusterkit/exp/config.hpp"
#include "clusterkit/exp/metrics.hpp"
#include "clusterkit/exp/runner.hpp"
#include "clusterkit/harness.hpp"
#include "clusterkit/it/maxmind.hpp"
#include "clusterkit/it/moca.hpp"
#include "clusterkit/validate/oracles.hpp"
#include "clusterkit/wire.hpp"

namespace clusterkit::acceptance {

// Release gate: nine checks, one printed line each. Every check compares the
// shipped behavior against an independent oracle, a closed-form bound, or a
// reproducibility contract; none of them consult protocol internals to decide
// what "correct" means.

struct Criterion {
  int id;
  std::string name;
  bool pass;
  std::string detail;
};

namespace detail {

inline std::string fail_at(const std::string& what) { return what; }

template <typename F>
Criterion timed(int id, const std::string& name, F&& body) {
  auto t0 = std::chrono::steady_clock::now();
  Criterion c{id, name, true, ""};
  body(c);
  auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1fs", dt);
  c.detail = c.detail.empty() ? std::string(buf)
                              : c.detail + " [" + buf + "]";
  return c;
}

}  // namespace detail

// 1: ATTR heads, MaxMinD elections, MOCA memberships, and MaxMinD gateway
// tables all match brute-force oracles on 30 small topologies.
inline Criterion criterion_oracle_equivalence() {
  return detail::timed(1, "oracle-equivalence", [](Criterion& c) {
    for (std::uint64_t seed = 1; seed <= 30 && c.pass; ++seed) {
      TopologySpec ts{TopologyKind::FixedDensity, 60, 8.0, 0.0, 20.0, seed, ""};
      Topology topo = build_topology(ts);

      {  // ATTR election vs local-minimum oracle (orphans are JD fallback).
        FormationOptions opt;
        opt.algorithm = "lca";
        opt.params.k = 2;
        opt.seed = seed;
        Formation f = run_formation(topo, opt);
        std::map<NodeId, std::uint32_t> attrs;
        for (const auto& n : topo.nodes()) attrs[n.id] = n.id;
        auto want = oracle::attr_heads(topo, attrs, 2);
        auto got = f.heads(false);
        if (got != want) {
          c.pass = false;
          c.detail = "attr heads mismatch at seed " + std::to_string(seed);
          return;
        }
      }

      {  // MaxMinD elections and head gateway tables.
        FormationOptions opt;
        opt.algorithm = "maxmind";
        opt.params.d = 2;
        opt.seed = seed;
        Formation f = run_formation(topo, opt);
        auto want = oracle::maxmind_elected(topo, 2);
        std::map<NodeId, std::vector<ClusterId>> mem;
        for (auto& [id, head] : want) mem[id] = {head};
        auto cut = oracle::edge_cut(topo, mem);
        for (auto& [id, cc] : f.by_id) {
          if (cc->state().cluster != want.at(id)) {
            c.pass = false;
            c.detail = "maxmind election mismatch at seed " +
                       std::to_string(seed) + " node " + std::to_string(id);
            return;
          }
          if (cc->state().role == Role::HEAD) {
            auto* it = dynamic_cast<MaxMindIt*>(&cc->it_module());
            std::set<ClusterId> want_adj;
            if (auto ci = cut.find(id); ci != cut.end()) want_adj = ci->second;
            if (!it || it->adjacent_clusters() != want_adj) {
              c.pass = false;
              c.detail = "maxmind gateway table mismatch at seed " +
                         std::to_string(seed) + " head " + std::to_string(id);
              return;
            }
          }
        }
      }

      {  // MOCA memberships vs k-ball oracle.
        FormationOptions opt;
        opt.algorithm = "moca";
        opt.params.p = 0.25;
        opt.params.k = 2;
        opt.seed = seed;
        Formation f = run_formation(topo, opt);
        auto heads = oracle::prob_heads(topo, seed, 0.25);
        auto want = oracle::moca_memberships(topo, heads, 2);
        for (auto& [id, cc] : f.by_id) {
          auto got = cc->it_module().memberships(*cc);
          std::sort(got.begin(), got.end());
          const auto& w = want.at(id);
          if (w.empty()) {  // uncovered: must have self-promoted
            if (!cc->is_orphan() || got != std::vector<ClusterId>{id}) {
              c.pass = false;
              c.detail = "moca orphan mismatch at seed " +
                         std::to_string(seed) + " node " + std::to_string(id);
              return;
            }
          } else if (got != w) {
            c.pass = false;
            c.detail = "moca membership mismatch at seed " +
                       std::to_string(seed) + " node " + std::to_string(id);
            return;
          }
        }
      }
    }
  });
}

// 2: MaxMinD scaling on a fixed 200x200 world: d-hop domination, the size
// identity, and head counts growing with N.
inline Criterion criterion_maxmind_scale() {
  return detail::timed(2, "maxmind-scale", [](Criterion& c) {
    const std::vector<std::uint32_t> sizes{100, 200, 300, 400, 500, 600};
    std::vector<double> mean_ch;
    for (std::uint32_t n : sizes) {
      double ch_sum = 0.0;
      for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        TopologySpec ts{TopologyKind::FixedDiameter, n, 0.0, 200.0, 20.0,
                        seed, ""};
        Topology topo = build_topology(ts);
        FormationOptions opt;
        opt.algorithm = "maxmind";
        opt.params.d = 2;
        opt.seed = seed;
        Formation f = run_formation(topo, opt);
        if (!f.last.quiescent) {
          c.pass = false;
          c.detail = "no quiescence at N=" + std::to_string(n);
          return;
        }
        auto heads = f.heads();
        ch_sum += static_cast<double>(heads.size());
        std::map<NodeId, std::map<NodeId, unsigned>> ball;
        for (NodeId h : heads) ball[h] = oracle::bfs_distances(*f.topo, h, 2);
        std::uint64_t members = 0;
        for (auto& [id, cc] : f.by_id) {
          ClusterId h = cc->state().cluster;
          auto bi = ball.find(static_cast<NodeId>(h));
          if (bi == ball.end() || !bi->second.count(id)) {
            c.pass = false;
            c.detail = "node " + std::to_string(id) + " beyond d hops at N=" +
                       std::to_string(n) + " seed " + std::to_string(seed);
            return;
          }
          ++members;
        }
        // ch_count x avg_cluster_size == N (no overlap, no stragglers)
        double avg = static_cast<double>(members) / heads.size();
        if (std::fabs(heads.size() * avg - static_cast<double>(n)) > 1e-9) {
          c.pass = false;
          c.detail = "size identity broken at N=" + std::to_string(n);
          return;
        }
      }
      mean_ch.push_back(ch_sum / 20.0);
    }
    std::string curve;
    for (std::size_t i = 0; i < mean_ch.size(); ++i) {
      if (i) curve += " ";
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.2f", mean_ch[i]);
      curve += buf;
    }
    for (std::size_t i = 1; i < mean_ch.size(); ++i) {
      if (!(mean_ch[i] > mean_ch[i - 1])) {
        c.pass = false;
        c.detail = "mean ch_count not strictly increasing between N=" +
                   std::to_string(sizes[i - 1]) + " and N=" +
                   std::to_string(sizes[i]) + "; means over N {100..600}: " +
                   curve + " (head count saturates once the graph is" +
                   " connected: floodmax balls span about 2 hops, so a" +
                   " 200x200 world fits only ~34 winners at range 20)";
        return;
      }
    }
    c.detail = "means over N {100..600}: " + curve;
  });
}

// 3: MOCA coverage is monotone in p per seed, and saturates at p=0.5, k=2.
inline Criterion criterion_moca_coverage() {
  return detail::timed(3, "moca-coverage", [](Criterion& c) {
    const std::vector<double> ps{0.05, 0.1,  0.15, 0.2,  0.25,
                                 0.3,  0.35, 0.4,  0.45, 0.5};
    double cov_final = 0.0;
    int cov_final_n = 0;
    for (unsigned k = 2; k <= 4 && c.pass; ++k) {
      for (std::uint64_t seed = 1; seed <= 2 && c.pass; ++seed) {
        double prev = -1.0;
        for (double p : ps) {
          ExperimentConfig cfg;
          cfg.algorithm = "moca";
          cfg.params.p = p;
          cfg.params.k = k;
          cfg.topology = {TopologyKind::FixedDensity, 400, 9.0, 0.0, 20.0,
                          1,       ""};
          MetricsRecord r = run_experiment(cfg, seed);
          if (r.coverage_pct < prev - 1e-9) {
            c.pass = false;
            c.detail = "coverage decreased at k=" + std::to_string(k) +
                       " seed=" + std::to_string(seed) +
                       " p=" + std::to_string(p);
            return;
          }
          prev = r.coverage_pct;
          if (k == 2 && p == 0.5) {
            cov_final += r.coverage_pct;
            ++cov_final_n;
          }
        }
      }
    }
    if (c.pass && cov_final / cov_final_n < 99.0) {
      c.pass = false;
      c.detail = "coverage at p=0.5,k=2 below 99%";
    }
  });
}

// 4: decision rounds do not scale with N: PROB decides instantly, ATTR in k
// rounds, MaxMinD in 2d rounds, at every network size.
inline Criterion criterion_chd_round_scaling() {
  return detail::timed(4, "chd-round-scaling", [](Criterion& c) {
    const std::vector<std::uint32_t> sizes{10, 100, 1000, 10000};
    struct Case {
      const char* label;
      ExperimentConfig cfg;
      std::uint64_t want;
    };
    std::vector<Case> cases;
    {
      ExperimentConfig prob;
      prob.algorithm = "custom";
      prob.chd = "prob";
      prob.jd = "bfs-lca";
      prob.it = "norm";
      prob.params.p = 0.15;
      prob.params.k = 2;
      cases.push_back({"prob", prob, 0});
      ExperimentConfig attr;
      attr.algorithm = "lca";
      attr.params.k = 2;
      cases.push_back({"attr", attr, 2});
      ExperimentConfig mmd;
      mmd.algorithm = "maxmind";
      mmd.params.d = 2;
      cases.push_back({"maxmind", mmd, 4});
    }
    for (auto& cs : cases) {
      for (std::uint32_t n : sizes) {
        ExperimentConfig cfg = cs.cfg;
        cfg.topology = {TopologyKind::FixedDensity, n, 8.0, 0.0, 20.0, 1, ""};
        MetricsRecord r = run_experiment(cfg, 1);
        if (r.chd_rounds != cs.want) {
          c.pass = false;
          c.detail = std::string(cs.label) + " decision rounds " +
                     std::to_string(r.chd_rounds) + " != " +
                     std::to_string(cs.want) + " at N=" + std::to_string(n);
          return;
        }
      }
    }
  });
}

// 5: single-hop 10-node testbed: full formation stays within 80 messages for
// both join disciplines.
inline Criterion criterion_message_budget() {
  return detail::timed(5, "message-budget", [](Criterion& c) {
    std::vector<Topology::Node> nodes;
    for (std::uint32_t i = 1; i <= 10; ++i) {
      nodes.push_back({i, static_cast<double>(i), 0.0});
    }
    Topology topo = Topology::from_nodes(20.0, nodes);
    auto check = [&](const FormationOptions& opt, const char* label) {
      Formation f = run_formation(topo, opt);
      if (!f.last.quiescent || !f.all_complete()) {
        c.pass = false;
        c.detail = std::string(label) + " did not complete";
        return;
      }
      std::uint64_t total = f.sim->total_sent();
      if (total > 80) {
        c.pass = false;
        c.detail = std::string(label) + " used " + std::to_string(total) +
                   " messages (> 80)";
      }
    };
    FormationOptions bfs;
    bfs.algorithm = "lca";
    bfs.params.k = 1;
    bfs.seed = 7;
    check(bfs, "bfs");
    if (!c.pass) return;
    FormationOptions dfs;
    dfs.algorithm = "custom";
    dfs.chd = "attr";
    dfs.jd = "dfs";
    dfs.it = "norm";
    dfs.params.k = 1;
    dfs.seed = 7;
    check(dfs, "dfs");
  });
}

// 6: LEACH rotation: on a single-hop network, every node heads exactly once
// per 5-formation cycle, for 3 full cycles.
inline Criterion criterion_leach_rotation() {
  return detail::timed(6, "leach-rotation", [](Criterion& c) {
    std::vector<Topology::Node> nodes;
    for (std::uint32_t i = 0; i < 100; ++i) {
      nodes.push_back({i + 1, 1.5 * (i % 10), 1.5 * (i / 10)});
    }
    Topology topo = Topology::from_nodes(20.0, nodes);
    FormationOptions opt;
    opt.algorithm = "leach";
    opt.params.P_desired = 0.2;
    opt.params.t = 12;
    opt.seed = 11;
    opt.run = false;
    Formation f = make_formation(std::move(topo), opt);
    std::map<NodeId, std::array<int, 3>> formed;
    for (auto& [id, cc] : f.by_id) {
      formed[id] = {0, 0, 0};
      CoreComponent* self = cc;
      auto* slot = &formed[id];
      cc->register_changed_callback(
          [self, slot](ClusterEvent e, NodeId, ClusterId) {
            if (e == ClusterEvent::CLUSTER_FORMED) {
              std::uint32_t block = self->epoch() / 5;
              if (block < 3) ++(*slot)[block];
            }
          });
    }
    f.sim->start();
    for (int r = 0; r < 179; ++r) f.sim->step_round();
    for (auto& [id, blocks] : formed) {
      for (int b = 0; b < 3; ++b) {
        if (blocks[b] != 1) {
          c.pass = false;
          c.detail = "node " + std::to_string(id) + " headed " +
                     std::to_string(blocks[b]) + " times in cycle " +
                     std::to_string(b);
          return;
        }
      }
    }
  });
}

// 7: identical config and seed give byte-identical CSV and identical trace
// hashes across two separate process runs of the CLI.
inline Criterion criterion_determinism(const std::string& cli_path) {
  return detail::timed(7, "determinism", [&](Criterion& c) {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "clusterkit_accept";
    fs::create_directories(dir);
    fs::path cfg = dir / "seven.cfg";
    fs::path csv = dir / "seven.csv";
    {
      std::ofstream out(cfg);
      out << "[topology]\nkind = density\nnodes = 50\ndensity = 8\n\n"
          << "[algorithm]\nname = lca\nk = 2\n\n"
          << "[output]\ncsv = " << csv.string() << "\nseeds = 1,2,3\n";
    }
    auto invoke = [&](const fs::path& log) {
      std::string cmd = cli_path + " run --config " + cfg.string() + " > " +
                        log.string() + " 2>&1";
      return std::system(cmd.c_str());
    };
    auto slurp = [](const fs::path& p) {
      std::ifstream in(p, std::ios::binary);
      std::stringstream ss;
      ss << in.rdbuf();
      return ss.str();
    };
    auto traces = [](const std::string& text) {
      std::vector<std::string> out;
      std::istringstream in(text);
      std::string line;
      while (std::getline(in, line)) {
        if (line.find("trace=0x") != std::string::npos) out.push_back(line);
      }
      return out;
    };
    fs::path log1 = dir / "run1.log", log2 = dir / "run2.log";
    if (invoke(log1) != 0) {
      c.pass = false;
      c.detail = "first cli invocation failed; see " + log1.string();
      return;
    }
    std::string csv1 = slurp(csv);
    if (invoke(log2) != 0) {
      c.pass = false;
      c.detail = "second cli invocation failed; see " + log2.string();
      return;
    }
    std::string csv2 = slurp(csv);
    if (csv1.empty() || csv1 != csv2) {
      c.pass = false;
      c.detail = "csv bytes differ between invocations";
      return;
    }
    auto t1 = traces(slurp(log1)), t2 = traces(slurp(log2));
    if (t1.empty() || t1 != t2) {
      c.pass = false;
      c.detail = "trace hashes differ between invocations";
    }
  });
}

// 8: the cluster apps run unchanged over all five presets, and DFS group-key
// establishment is order-invariant.
inline Criterion criterion_cross_layer(std::uint64_t* io_seed_out = nullptr) {
  return detail::timed(8, "cross-layer", [&](Criterion& c) {
    // A connected 200-node topology (first seed whose graph is one piece).
    std::uint64_t seed = 0;
    Topology topo;
    for (std::uint64_t s = 1; s <= 60; ++s) {
      TopologySpec ts{TopologyKind::FixedDensity, 200, 10.0, 0.0, 20.0, s, ""};
      Topology t = build_topology(ts);
      if (t.largest_component_fraction() == 1.0) {
        seed = s;
        topo = std::move(t);
        break;
      }
    }
    if (seed == 0) {
      c.pass = false;
      c.detail = "no connected topology found";
      return;
    }
    if (io_seed_out) *io_seed_out = seed;

    struct Preset {
      const char* name;
      ChdParams params;
    };
    ChdParams base;
    base.k = 2;
    base.p = 0.25;
    base.d = 2;
    std::vector<Preset> presets{{"lca", base},
                                {"leach", base},
                                {"tcca", base},
                                {"moca", base},
                                {"maxmind", base}};
    for (auto& pr : presets) {
      FormationOptions opt;
      opt.algorithm = pr.name;
      opt.params = pr.params;
      opt.seed = seed;
      Formation f = run_formation(topo, opt);
      if (!f.last.quiescent) {
        c.pass = false;
        c.detail = std::string(pr.name) + ": no quiescence";
        return;
      }
      ClusterView view = f.view();
      ClusterRadio radio(view);
      Rng pick(424242);
      const auto& ns = f.topo->nodes();
      for (int i = 0; i < 40; ++i) {
        NodeId src = ns[pick.next_u32(static_cast<std::uint32_t>(ns.size()))].id;
        NodeId dst = ns[pick.next_u32(static_cast<std::uint32_t>(ns.size()))].id;
        RouteOutcome out = radio.inter_route(src, dst);
        if (!out.ok() ||
            !oracle::path_valid(*f.topo, out.route.path, src, dst)) {
          c.pass = false;
          c.detail = std::string(pr.name) + ": route " + std::to_string(src) +
                     "->" + std::to_string(dst) + " failed";
          return;
        }
      }
    }

    // GKE order invariance: same ten ids, two layouts, two protocol seeds.
    SumCombiner sum;
    const std::uint64_t gke_seed = 777;
    auto run_gke = [&](const std::vector<NodeId>& ids_by_pos,
                       std::uint64_t pseed, GroupKey& out) {
      std::vector<Topology::Node> nodes;
      for (std::size_t j = 0; j < ids_by_pos.size(); ++j) {
        nodes.push_back({ids_by_pos[j], 15.0 * j, 0.0});
      }
      FormationOptions opt;
      opt.algorithm = "custom";
      opt.chd = "attr";
      opt.jd = "dfs";
      opt.it = "norm";
      opt.params.k = 9;
      opt.seed = pseed;
      opt.run = false;
      Formation f = make_formation(Topology::from_nodes(20.0, nodes), opt);
      std::vector<std::unique_ptr<GroupKeyApp>> apps;
      for (auto& cc : f.agents) {
        apps.push_back(std::make_unique<GroupKeyApp>(*cc, gke_seed, sum));
      }
      f.sim->start();
      f.last = f.sim->run(round_cap(f.agents[0]->params()));
      for (std::size_t i = 0; i < f.agents.size(); ++i) {
        if (f.agents[i]->state().role == Role::HEAD) {
          out = apps[i]->key();
          return f.last.quiescent;
        }
      }
      return false;
    };
    GroupKey ka, kb;
    bool oka = run_gke({1, 2, 3, 4, 5, 6, 7, 8, 9, 10}, 101, ka);
    bool okb = run_gke({4, 9, 1, 7, 10, 3, 6, 2, 8, 5}, 202, kb);
    std::uint64_t want = 0;
    for (NodeId id = 1; id <= 10; ++id) want += node_secret(gke_seed, id);
    if (!oka || !okb || !ka.ready || !kb.ready || ka.contributors != 10 ||
        kb.contributors != 10 || ka.value != kb.value || ka.value != want) {
      c.pass = false;
      c.detail = "group keys disagree across permuted runs";
    }
  });
}

// 9: the codec survives random bytes, and whatever it accepts re-encodes to
// the identical octets.
inline Criterion criterion_codec_robustness() {
  return detail::timed(9, "codec-robustness", [](Criterion& c) {
    Rng fuzz(2024);
    for (int i = 0; i < 100000; ++i) {
      std::size_t len = fuzz.next_u32(81);
      Bytes data(len);
      for (auto& b : data) b = static_cast<std::uint8_t>(fuzz.next_u32(256));
      if (!data.empty() && (i % 2) == 0) {
        data[0] = static_cast<std::uint8_t>(1 + fuzz.next_u32(8));
      }
      auto m = decode_message(data);
      if (m) {
        Bytes again = encode_message(*m);
        if (again != data) {
          c.pass = false;
          c.detail = "re-encode mismatch at fuzz case " + std::to_string(i);
          return;
        }
      }
    }
    for (int i = 0; i < 10000; ++i) {
      WireMessage m;
      m.type = static_cast<MsgType>(1 + fuzz.next_u32(8));
      m.sender = fuzz.next_u32(0xFFFFFFFF);
      m.cluster = fuzz.next_u32(0xFFFFFFFF);
      m.hops = static_cast<std::uint8_t>(fuzz.next_u32(256));
      m.payload.resize(fuzz.next_u32(kMaxPayload + 1));
      for (auto& b : m.payload) {
        b = static_cast<std::uint8_t>(fuzz.next_u32(256));
      }
      Bytes wire = encode_message(m);
      auto back = decode_message(wire);
      if (!back || encode_message(*back) != wire) {
        c.pass = false;
        c.detail = "round-trip failure at case " + std::to_string(i);
        return;
      }
    }
  });
}

inline std::vector<Criterion> run_criteria(const std::string& cli_path) {
  std::vector<Criterion> results;
  results.push_back(criterion_oracle_equivalence());
  results.push_back(criterion_maxmind_scale());
  results.push_back(criterion_moca_coverage());
  results.push_back(criterion_chd_round_scaling());
  results.push_back(criterion_message_budget());
  results.push_back(criterion_leach_rotation());
  results.push_back(criterion_determinism(cli_path));
  results.push_back(criterion_cross_layer());
  results.push_back(criterion_codec_robustness());
  return results;
}

inline bool print_results(const std::vector<Criterion>& results,
                          std::ostream& out) {
  bool all = true;
  for (const auto& r : results) {
    out << (r.pass ? "[PASS] " : "[FAIL] ") << r.id << " " << r.name;
    if (!r.detail.empty()) out << " (" << r.detail << ")";
    out << "\n";
    all = all && r.pass;
  }
  out << (all ? "acceptance: all criteria passed\n"
              : "acceptance: FAILURES present\n");
  return all;
}

inline bool run_acceptance(std::ostream& out, const std::string& cli_path) {
  return print_results(run_criteria(cli_path), out);
}

}  // namespace clusterkit::acceptance
