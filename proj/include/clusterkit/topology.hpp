#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "clusterkit/rng.hpp"
#include "clusterkit/types.hpp"

namespace clusterkit {

// Unit-disk graphs over a square region. Two nodes are adjacent iff their
// Euclidean distance is <= comm_range. Positions come from per-node RNG
// streams, so topologies are reproducible from (spec, seed) alone and adding
// nodes never moves existing ones.

enum class TopologyKind : std::uint8_t {
  FixedDensity,   // world side derived from target mean degree
  FixedDiameter,  // world side given explicitly
  FromFile,
};

struct TopologySpec {
  TopologyKind kind = TopologyKind::FixedDensity;
  std::uint32_t node_count = 0;
  double target_density = 0.0;  // expected neighbors per node (FixedDensity)
  double world_side = 0.0;      // region side length (FixedDiameter)
  double comm_range = 20.0;
  std::uint64_t seed = 1;
  std::string file;  // FromFile
};

// side = sqrt(pi r^2 N / density): keeps N * pi r^2 / side^2 == density.
inline double world_side_for_density(std::uint32_t n, double range,
                                     double density) {
  constexpr double pi = 3.14159265358979323846;
  return std::sqrt(pi * range * range * static_cast<double>(n) / density);
}

class Topology {
 public:
  struct Node {
    NodeId id;
    double x;
    double y;
  };

  Topology() = default;

  static Topology from_nodes(double comm_range, std::vector<Node> nodes,
                             double world_side = 0.0) {
    Topology t;
    t.range_ = comm_range;
    t.side_ = world_side;
    std::sort(nodes.begin(), nodes.end(),
              [](const Node& a, const Node& b) { return a.id < b.id; });
    t.nodes_ = std::move(nodes);
    for (std::size_t i = 0; i < t.nodes_.size(); ++i) {
      if (i > 0 && t.nodes_[i].id == t.nodes_[i - 1].id)
        throw std::runtime_error("duplicate node id");
      t.index_[t.nodes_[i].id] = i;
    }
    t.build_adjacency();
    return t;
  }

  static Topology generate(const TopologySpec& spec) {
    if (spec.kind == TopologyKind::FromFile) return load(spec.file);
    double side = spec.kind == TopologyKind::FixedDensity
                      ? world_side_for_density(spec.node_count, spec.comm_range,
                                               spec.target_density)
                      : spec.world_side;
    std::vector<Node> nodes;
    nodes.reserve(spec.node_count);
    for (std::uint32_t i = 1; i <= spec.node_count; ++i) {
      Rng r = Rng::node_stream(spec.seed, i, RngPurpose::Position);
      double x = r.next_double() * side;
      double y = r.next_double() * side;
      nodes.push_back({i, x, y});
    }
    return from_nodes(spec.comm_range, std::move(nodes), side);
  }

  // Topology files: one `# range <r>` line, then `<id> <x> <y>` per node.
  // Doubles are written shortest-round-trip so load(save(t)) is exact.
  static Topology load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open topology file: " + path);
    std::string line;
    double range = -1.0;
    std::vector<Node> nodes;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      if (line[0] == '#') {
        std::istringstream hs(line.substr(1));
        std::string key;
        hs >> key;
        if (key == "range") hs >> range;
        continue;
      }
      std::istringstream ls(line);
      Node n{};
      if (!(ls >> n.id >> n.x >> n.y))
        throw std::runtime_error("bad topology line: " + line);
      nodes.push_back(n);
    }
    if (range < 0.0) throw std::runtime_error("topology file missing range");
    return from_nodes(range, std::move(nodes));
  }

  void save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write topology file: " + path);
    out << "# range " << fmt_double(range_) << "\n";
    for (const Node& n : nodes_)
      out << n.id << " " << fmt_double(n.x) << " " << fmt_double(n.y) << "\n";
  }

  std::size_t size() const { return nodes_.size(); }
  double comm_range() const { return range_; }
  double world_side() const { return side_; }
  const std::vector<Node>& nodes() const { return nodes_; }

  bool contains(NodeId id) const { return index_.count(id) != 0; }

  const Node& node(NodeId id) const { return nodes_[index_.at(id)]; }

  const std::vector<NodeId>& neighbors(NodeId id) const {
    return adj_[index_.at(id)];
  }

  std::size_t degree(NodeId id) const { return neighbors(id).size(); }

  double mean_degree() const {
    if (nodes_.empty()) return 0.0;
    std::size_t total = 0;
    for (const auto& a : adj_) total += a.size();
    return static_cast<double>(total) / static_cast<double>(nodes_.size());
  }

  double distance(NodeId a, NodeId b) const {
    const Node& na = node(a);
    const Node& nb = node(b);
    return std::hypot(na.x - nb.x, na.y - nb.y);
  }

  double largest_component_fraction() const {
    if (nodes_.empty()) return 0.0;
    std::vector<char> seen(nodes_.size(), 0);
    std::size_t best = 0;
    std::vector<std::size_t> stack;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (seen[i]) continue;
      std::size_t count = 0;
      stack.push_back(i);
      seen[i] = 1;
      while (!stack.empty()) {
        std::size_t cur = stack.back();
        stack.pop_back();
        ++count;
        for (NodeId nb : adj_[cur]) {
          std::size_t j = index_.at(nb);
          if (!seen[j]) {
            seen[j] = 1;
            stack.push_back(j);
          }
        }
      }
      best = std::max(best, count);
    }
    return static_cast<double>(best) / static_cast<double>(nodes_.size());
  }

 private:
  static std::string fmt_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
  }

  void build_adjacency() {
    adj_.assign(nodes_.size(), {});
    if (nodes_.empty() || range_ <= 0.0) return;
    // Bucket nodes into range-sized cells; neighbors live within one cell ring.
    const double cell = range_;
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> grid;
    auto key = [cell](double x, double y) {
      auto cx = static_cast<std::int64_t>(std::floor(x / cell));
      auto cy = static_cast<std::int64_t>(std::floor(y / cell));
      return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(cx)) << 32) |
             static_cast<std::uint64_t>(static_cast<std::uint32_t>(cy));
    };
    grid.reserve(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      grid[key(nodes_[i].x, nodes_[i].y)].push_back(i);
    const double r2 = range_ * range_;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const Node& a = nodes_[i];
      auto cx = static_cast<std::int64_t>(std::floor(a.x / cell));
      auto cy = static_cast<std::int64_t>(std::floor(a.y / cell));
      for (std::int64_t dx = -1; dx <= 1; ++dx) {
        for (std::int64_t dy = -1; dy <= 1; ++dy) {
          auto k = (static_cast<std::uint64_t>(
                        static_cast<std::uint32_t>(cx + dx))
                    << 32) |
                   static_cast<std::uint64_t>(static_cast<std::uint32_t>(cy + dy));
          auto it = grid.find(k);
          if (it == grid.end()) continue;
          for (std::size_t j : it->second) {
            if (j == i) continue;
            const Node& b = nodes_[j];
            const double ddx = a.x - b.x;
            const double ddy = a.y - b.y;
            if (ddx * ddx + ddy * ddy <= r2) adj_[i].push_back(b.id);
          }
        }
      }
      std::sort(adj_[i].begin(), adj_[i].end());
    }
  }

  std::vector<Node> nodes_;
  std::unordered_map<NodeId, std::size_t> index_;
  std::vector<std::vector<NodeId>> adj_;
  double range_ = 0.0;
  double side_ = 0.0;
};

inline Topology build_topology(const TopologySpec& spec) {
  return Topology::generate(spec);
}

// All nodes within graph distance <= k of `from`, excluding `from` itself.
inline std::vector<NodeId> k_hop_neighbors(const Topology& t, NodeId from,
                                           unsigned k) {
  std::vector<NodeId> out;
  if (k == 0 || !t.contains(from)) return out;
  std::unordered_map<NodeId, unsigned> dist;
  dist[from] = 0;
  std::vector<NodeId> frontier{from};
  for (unsigned depth = 1; depth <= k && !frontier.empty(); ++depth) {
    std::vector<NodeId> next;
    for (NodeId u : frontier) {
      for (NodeId v : t.neighbors(u)) {
        if (dist.count(v)) continue;
        dist[v] = depth;
        next.push_back(v);
        out.push_back(v);
      }
    }
    frontier = std::move(next);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace clusterkit
