#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "clusterkit/rng.hpp"
#include "clusterkit/topology.hpp"
#include "clusterkit/types.hpp"
#include "clusterkit/wire.hpp"

namespace clusterkit {

// Deterministic round-based network simulator.
//
// A message sent in round r is delivered in round r+1; within a round,
// deliveries happen first (ordered by sender id, then enqueue sequence) and
// timers fire second (ordered by node id, then arming sequence). Unicast
// reaches the destination only if it is a radio neighbor; broadcast reaches
// all neighbors. Loss is drawn per copy from the sender's radio stream, in
// ascending receiver order, so results depend only on (topology, seed, loss).
//
// Trace: one line per transmission, `round=<n> type=<t> from=<id> to=<id|*>
// dropped=<0|1>` (for broadcasts, dropped=1 means no copy survived), plus any
// event lines noted by agents. Lines feed an FNV-1a 64 running hash whether
// or not a sink is attached.

struct RoundReport {
  std::uint64_t round = 0;
  std::size_t delivered = 0;
  std::size_t dropped = 0;
  std::size_t timers_fired = 0;
  bool quiescent = false;
};

struct Delivery {
  NodeId from = 0;
  bool broadcast = false;
  double rssi = 0.0;  // proxy: negated link distance
};

class Simulator;

class NodeApi {
 public:
  NodeApi(Simulator& sim, NodeId self) : sim_(sim), self_(self) {}

  NodeId self() const { return self_; }
  const std::vector<NodeId>& neighbors() const;
  std::uint64_t round() const;
  Rng& rng();
  void send(NodeId dest, const Bytes& data);
  void broadcast(const Bytes& data);
  void set_timer(std::uint32_t delay, std::uint64_t token);
  void note_event(ClusterEvent kind, NodeId node, ClusterId cluster);

 private:
  Simulator& sim_;
  NodeId self_;
};

class NodeAgent {
 public:
  virtual ~NodeAgent() = default;
  virtual void on_start(NodeApi& api) = 0;
  virtual void on_message(NodeApi& api, const Bytes& data,
                          const Delivery& meta) = 0;
  virtual void on_timer(NodeApi& api, std::uint64_t token) = 0;
};

class Simulator {
 public:
  Simulator(const Topology& topo, std::uint64_t seed, double loss = 0.0)
      : topo_(topo), seed_(seed), loss_(loss) {}

  void attach(NodeId id, NodeAgent* agent) {
    Slot slot{agent, Rng::node_stream(seed_, id, RngPurpose::Protocol),
              Rng::node_stream(seed_, id, RngPurpose::Radio), nullptr};
    // Each node gets one api object for the simulator's whole lifetime, so
    // agents may hold the reference across callbacks.
    slot.api = std::make_unique<NodeApi>(*this, id);
    slots_[id] = std::move(slot);
    order_.push_back(id);
    std::sort(order_.begin(), order_.end());
  }

  // Runs on_start for every node in ascending id order, at the current round.
  void start() {
    for (NodeId id : order_) {
      Slot& s = slots_.at(id);
      s.agent->on_start(*s.api);
    }
  }

  RoundReport step_round() {
    ++round_;
    RoundReport rep;
    rep.round = round_;

    auto mit = inbox_.find(round_);
    if (mit != inbox_.end()) {
      std::vector<Copy> copies = std::move(mit->second);
      inbox_.erase(mit);
      std::stable_sort(copies.begin(), copies.end(),
                       [](const Copy& a, const Copy& b) {
                         if (a.from != b.from) return a.from < b.from;
                         return a.seq < b.seq;
                       });
      for (const Copy& c : copies) {
        if (c.dropped) {
          ++rep.dropped;
          ++total_dropped_;
          continue;
        }
        ++rep.delivered;
        ++total_delivered_;
        auto it = slots_.find(c.to);
        if (it == slots_.end()) continue;
        Delivery meta{c.from, c.was_broadcast, -topo_.distance(c.from, c.to)};
        it->second.agent->on_message(*it->second.api, c.data, meta);
      }
    }

    std::vector<PendingTimer> due;
    for (auto it = timers_.begin();
         it != timers_.end() && it->first <= round_;) {
      for (auto& t : it->second) due.push_back(t);
      it = timers_.erase(it);
    }
    std::stable_sort(due.begin(), due.end(),
                     [](const PendingTimer& a, const PendingTimer& b) {
                       if (a.node != b.node) return a.node < b.node;
                       return a.seq < b.seq;
                     });
    for (const PendingTimer& t : due) {
      ++rep.timers_fired;
      auto it = slots_.find(t.node);
      if (it == slots_.end()) continue;
      it->second.agent->on_timer(*it->second.api, t.token);
    }

    rep.quiescent = inbox_.empty() && timers_.empty();
    return rep;
  }

  // Steps until quiescent or the cap is hit; returns the report of the last
  // round executed.
  RoundReport run(std::uint64_t max_rounds) {
    RoundReport rep;
    rep.round = round_;
    rep.quiescent = inbox_.empty() && timers_.empty();
    while (!rep.quiescent && round_ < max_rounds) rep = step_round();
    return rep;
  }

  std::uint64_t round() const { return round_; }
  const Topology& topology() const { return topo_; }
  double loss() const { return loss_; }

  std::uint64_t sent(MsgType t) const {
    return sent_by_type_[static_cast<std::size_t>(t)];
  }
  std::uint64_t total_sent() const {
    std::uint64_t s = 0;
    for (auto v : sent_by_type_) s += v;
    return s;
  }
  std::uint64_t total_delivered() const { return total_delivered_; }
  std::uint64_t total_dropped() const { return total_dropped_; }

  void set_trace_sink(std::ostream* sink) { trace_sink_ = sink; }
  std::uint64_t trace_hash() const { return trace_hash_; }
  std::uint64_t trace_lines() const { return trace_lines_; }

  void note_event(ClusterEvent kind, NodeId node, ClusterId cluster) {
    std::string line = "event=";
    line += to_string(kind);
    line += " node=" + std::to_string(node);
    line += " cluster=";
    line += (cluster == kNoCluster) ? "none" : std::to_string(cluster);
    line += " round=" + std::to_string(round_);
    trace_line(line);
  }

 private:
  friend class NodeApi;

  struct Slot {
    NodeAgent* agent = nullptr;
    Rng protocol_rng;
    Rng radio_rng;
    std::unique_ptr<NodeApi> api;
  };
  struct Copy {
    NodeId from;
    NodeId to;
    bool was_broadcast;
    bool dropped;
    std::uint64_t seq;
    Bytes data;
  };
  struct PendingTimer {
    NodeId node;
    std::uint64_t token;
    std::uint64_t seq;
  };

  void count_send(const Bytes& data) {
    std::size_t idx = 0;
    if (!data.empty() && data[0] >= 0x01 && data[0] <= 0x08) idx = data[0];
    ++sent_by_type_[idx];
  }

  void do_send(NodeId from, NodeId dest, const Bytes& data) {
    count_send(data);
    bool dropped = true;
    const auto& nb = topo_.neighbors(from);
    if (std::binary_search(nb.begin(), nb.end(), dest)) {
      dropped = loss_ > 0.0 && slots_.at(from).radio_rng.next_double() < loss_;
      inbox_[round_ + 1].push_back(
          Copy{from, dest, false, dropped, ++seq_, data});
    }
    trace_send(data, from, std::to_string(dest), dropped);
  }

  void do_broadcast(NodeId from, const Bytes& data) {
    count_send(data);
    bool all_dropped = true;
    for (NodeId dest : topo_.neighbors(from)) {
      bool dropped =
          loss_ > 0.0 && slots_.at(from).radio_rng.next_double() < loss_;
      if (!dropped) all_dropped = false;
      inbox_[round_ + 1].push_back(
          Copy{from, dest, true, dropped, ++seq_, data});
    }
    trace_send(data, from, "*", all_dropped);
  }

  void do_set_timer(NodeId node, std::uint32_t delay, std::uint64_t token) {
    timers_[round_ + delay].push_back(PendingTimer{node, token, ++seq_});
  }

  void trace_send(const Bytes& data, NodeId from, const std::string& to,
                  bool dropped) {
    const char* type = "UNKNOWN";
    if (!data.empty() && data[0] >= 0x01 && data[0] <= 0x08)
      type = to_string(static_cast<MsgType>(data[0]));
    std::string line = "round=" + std::to_string(round_) + " type=" + type +
                       " from=" + std::to_string(from) + " to=" + to +
                       " dropped=" + (dropped ? "1" : "0");
    trace_line(line);
  }

  void trace_line(const std::string& line) {
    for (unsigned char c : line) {
      trace_hash_ ^= c;
      trace_hash_ *= 0x100000001B3ull;
    }
    trace_hash_ ^= '\n';
    trace_hash_ *= 0x100000001B3ull;
    ++trace_lines_;
    if (trace_sink_) *trace_sink_ << line << "\n";
  }

  const Topology& topo_;
  std::uint64_t seed_;
  double loss_;
  std::uint64_t round_ = 0;
  std::uint64_t seq_ = 0;
  std::unordered_map<NodeId, Slot> slots_;
  std::vector<NodeId> order_;
  std::map<std::uint64_t, std::vector<Copy>> inbox_;
  std::map<std::uint64_t, std::vector<PendingTimer>> timers_;
  std::array<std::uint64_t, 9> sent_by_type_{};
  std::uint64_t total_delivered_ = 0;
  std::uint64_t total_dropped_ = 0;
  std::ostream* trace_sink_ = nullptr;
  std::uint64_t trace_hash_ = 0xCBF29CE484222325ull;  // FNV-1a offset basis
  std::uint64_t trace_lines_ = 0;
};

inline const std::vector<NodeId>& NodeApi::neighbors() const {
  return sim_.topology().neighbors(self_);
}
inline std::uint64_t NodeApi::round() const { return sim_.round(); }
inline Rng& NodeApi::rng() { return sim_.slots_.at(self_).protocol_rng; }
inline void NodeApi::send(NodeId dest, const Bytes& data) {
  sim_.do_send(self_, dest, data);
}
inline void NodeApi::broadcast(const Bytes& data) {
  sim_.do_broadcast(self_, data);
}
inline void NodeApi::set_timer(std::uint32_t delay, std::uint64_t token) {
  sim_.do_set_timer(self_, delay, token);
}
inline void NodeApi::note_event(ClusterEvent kind, NodeId node,
                                ClusterId cluster) {
  sim_.note_event(kind, node, cluster);
}

}  // namespace clusterkit
