#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "clusterkit/core.hpp"
#include "clusterkit/exp/config.hpp"
#include "clusterkit/exp/metrics.hpp"
#include "clusterkit/presets.hpp"
#include "clusterkit/sim.hpp"
#include "clusterkit/topology.hpp"

namespace clusterkit {

// Hard stop for a single formation; generous against every composition's
// worst-case completion and small enough to flag livelock quickly.
inline std::uint64_t round_cap(const ChdParams& p) {
  return 10ull * (2ull * p.k + 2ull) + 2ull * p.d;
}

inline Composition make_for(const ExperimentConfig& cfg) {
  if (cfg.algorithm == "custom") {
    if (cfg.chd.empty() || cfg.jd.empty() || cfg.it.empty()) {
      throw std::runtime_error("custom algorithm needs chd, jd and it names");
    }
    return make_custom(cfg.chd, cfg.jd, cfg.it, cfg.params);
  }
  return make_composition(cfg.algorithm, cfg.params);
}

inline NodeEnv env_for(const ExperimentConfig& cfg, std::uint64_t seed,
                       NodeId id) {
  NodeEnv env;
  Rng st = Rng::node_stream(seed, id, RngPurpose::Energy);
  double e = st.next_double();
  std::uint32_t a = st.next_u32(0x7FFFFFFF);
  env.energy = cfg.energy_random ? e : cfg.energy_value;
  if (cfg.attribute_random) {
    env.attribute = a;
    env.attribute_set = true;
  }
  return env;
}

// Runs one seeded formation to quiescence (or the cap) and distills metrics
// from the final node states. Deterministic: everything downstream of
// (config, seed) is fixed, including the trace hash.
inline MetricsRecord run_experiment(const ExperimentConfig& cfg,
                                    std::uint64_t seed,
                                    std::ostream* diag = nullptr) {
  TopologySpec tspec = cfg.topology;
  tspec.seed = seed;
  Topology topo = build_topology(tspec);

  Simulator sim(topo, seed, cfg.loss);
  std::vector<std::unique_ptr<CoreComponent>> agents;
  agents.reserve(topo.size());
  ChdParams eff{};
  for (const auto& n : topo.nodes()) {
    Composition comp = make_for(cfg);
    eff = comp.params;
    agents.push_back(
        std::make_unique<CoreComponent>(std::move(comp), env_for(cfg, seed, n.id)));
    sim.attach(n.id, agents.back().get());
  }
  sim.start();
  RoundReport rep = sim.run(round_cap(eff));

  MetricsRecord r;
  r.algorithm = cfg.algorithm == "custom"
                    ? cfg.chd + "+" + cfg.jd + "+" + cfg.it
                    : cfg.algorithm;
  r.seed = seed;
  r.node_count = static_cast<std::uint32_t>(topo.size());
  r.density = cfg.topology.kind == TopologyKind::FixedDensity
                  ? cfg.topology.target_density
                  : topo.mean_degree();
  r.k = eff.k;
  r.d = eff.d;
  r.p = cfg.algorithm == "leach" ? eff.P_desired : eff.p;
  r.rounds = rep.round;
  r.quiesced = rep.quiescent;
  r.giant_fraction = topo.largest_component_fraction();
  r.trace_hash = sim.trace_hash();

  std::map<ClusterId, std::uint32_t> sizes;
  std::size_t covered = 0;
  std::size_t membership_sum = 0;
  for (const auto& cc : agents) {
    const auto& st = cc->state();
    if (st.role == Role::HEAD) ++r.ch_count;
    if (cc->is_orphan()) ++r.orphan_count;
    if (st.role != Role::UNCLUSTERED && !cc->is_orphan()) ++covered;
    auto ms = cc->it_module().memberships(*cc);
    membership_sum += ms.size();
    for (ClusterId c : ms) ++sizes[c];
    if (auto dr = cc->decision_round(); dr && *dr > r.chd_rounds) {
      r.chd_rounds = *dr;
    }
  }
  std::uint64_t size_sum = 0;
  for (auto& [c, s] : sizes) size_sum += s;
  const double n = static_cast<double>(topo.size());
  r.avg_cluster_size =
      r.ch_count ? static_cast<double>(size_sum) / r.ch_count : 0.0;
  r.coverage_pct = n > 0 ? 100.0 * static_cast<double>(covered) / n : 0.0;
  r.overlap_degree = n > 0 ? static_cast<double>(membership_sum) / n : 0.0;

  r.msgs_join_req = sim.sent(MsgType::JOIN_REQUEST);
  r.msgs_join_acc = sim.sent(MsgType::JOIN_ACCEPT);
  r.msgs_join_deny = sim.sent(MsgType::JOIN_DENY);
  r.msgs_attr = sim.sent(MsgType::ATTRIBUTE);
  r.msgs_resume = sim.sent(MsgType::RESUME);
  r.msgs_convergecast = sim.sent(MsgType::CONVERGECAST);
  r.msgs_hello = sim.sent(MsgType::NEIGHBOR_HELLO);

  if (!rep.quiescent && diag) {
    *diag << "warning: " << r.algorithm << " seed=" << seed
          << " did not quiesce by round " << rep.round
          << " (cap); recording state as-is\n";
  }
  return r;
}

inline std::vector<MetricsRecord> run_all(const ExperimentConfig& cfg,
                                          std::ostream* diag = nullptr) {
  std::vector<MetricsRecord> out;
  for (std::uint64_t s : cfg.effective_seeds()) {
    out.push_back(run_experiment(cfg, s, diag));
  }
  return out;
}

inline void apply_axis(ExperimentConfig& cfg, const std::string& axis,
                       double value) {
  if (axis == "node_count") {
    cfg.topology.node_count = static_cast<std::uint32_t>(value);
  } else if (axis == "density") {
    cfg.topology.target_density = value;
  } else if (axis == "p") {
    cfg.params.p = value;
  } else if (axis == "k") {
    cfg.params.k = static_cast<unsigned>(value);
  } else if (axis == "d") {
    cfg.params.d = static_cast<unsigned>(value);
  } else {
    throw std::runtime_error("unknown sweep axis: " + axis);
  }
}

struct SweepResult {
  std::string axis;
  std::vector<double> values;
  std::size_t seeds_per_value = 0;
  std::vector<MetricsRecord> records;  // ordered by (value index, seed index)
};

// Sweeps one axis over the given values, every seed at every point. Points
// run on a small worker pool (each simulation is isolated); the result order
// is fixed by task index, so output never depends on scheduling.
inline SweepResult sweep(const ExperimentConfig& base, const std::string& axis,
                         const std::vector<double>& values,
                         std::ostream* diag = nullptr) {
  SweepResult res;
  res.axis = axis;
  res.values = values;
  auto seeds = base.effective_seeds();
  res.seeds_per_value = seeds.size();

  struct Task {
    ExperimentConfig cfg;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (double v : values) {
    ExperimentConfig cfg = base;
    apply_axis(cfg, axis, v);
    for (std::uint64_t s : seeds) tasks.push_back({cfg, s});
  }
  res.records.resize(tasks.size());

  unsigned workers = std::thread::hardware_concurrency();
  if (workers == 0) workers = 1;
  workers = std::min<unsigned>(workers, 4);
  workers = std::min<std::size_t>(workers, tasks.size());

  std::atomic<std::size_t> next{0};
  auto body = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) break;
      res.records[i] = run_experiment(tasks[i].cfg, tasks[i].seed, nullptr);
    }
  };
  if (workers <= 1) {
    body();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();
  }
  if (diag) {
    for (const auto& r : res.records) {
      if (!r.quiesced) {
        *diag << "warning: " << r.algorithm << " seed=" << r.seed
              << " did not quiesce by round " << r.rounds << " (cap)\n";
      }
    }
  }
  return res;
}

struct SummaryRow {
  double value = 0.0;
  double mean = 0.0;
  double stddev = 0.0;
};

inline double metric_value(const MetricsRecord& r, const std::string& name) {
  if (name == "ch_count") return r.ch_count;
  if (name == "avg_cluster_size") return r.avg_cluster_size;
  if (name == "coverage_pct") return r.coverage_pct;
  if (name == "overlap_degree") return r.overlap_degree;
  if (name == "orphan_count") return r.orphan_count;
  if (name == "rounds") return static_cast<double>(r.rounds);
  if (name == "msgs_total") return static_cast<double>(r.msgs_total());
  throw std::runtime_error("unknown metric: " + name);
}

// Mean and sample stddev of one metric per sweep value.
inline std::vector<SummaryRow> summarize(const SweepResult& sw,
                                         const std::string& metric) {
  std::vector<SummaryRow> rows;
  for (std::size_t vi = 0; vi < sw.values.size(); ++vi) {
    SummaryRow row;
    row.value = sw.values[vi];
    const std::size_t base = vi * sw.seeds_per_value;
    double sum = 0.0;
    for (std::size_t s = 0; s < sw.seeds_per_value; ++s) {
      sum += metric_value(sw.records[base + s], metric);
    }
    const double n = static_cast<double>(sw.seeds_per_value);
    row.mean = n > 0 ? sum / n : 0.0;
    double var = 0.0;
    for (std::size_t s = 0; s < sw.seeds_per_value; ++s) {
      double dv = metric_value(sw.records[base + s], metric) - row.mean;
      var += dv * dv;
    }
    row.stddev = sw.seeds_per_value > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;
    rows.push_back(row);
  }
  return rows;
}

// Sibling file to the main CSV: per-value mean and stddev for the headline
// metrics. Kept separate so the main header stays frozen.
inline void emit_summary_csv(const SweepResult& sw, const std::string& path) {
  static const char* metrics[] = {"ch_count",       "avg_cluster_size",
                                  "coverage_pct",   "overlap_degree",
                                  "orphan_count",   "rounds",
                                  "msgs_total"};
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write csv file: " + path);
  out << "axis,value";
  for (const char* m : metrics) out << "," << m << "_mean," << m << "_stddev";
  out << "\n";
  std::vector<std::vector<SummaryRow>> all;
  for (const char* m : metrics) all.push_back(summarize(sw, m));
  for (std::size_t vi = 0; vi < sw.values.size(); ++vi) {
    out << sw.axis << ',' << detail::num_str(sw.values[vi]);
    for (auto& rows : all) {
      out << ',' << detail::num_str(rows[vi].mean) << ','
          << detail::num_str(rows[vi].stddev);
    }
    out << "\n";
  }
}

}  // namespace clusterkit
