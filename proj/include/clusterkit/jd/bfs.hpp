#pragma once

#include <cstdint>
#include <map>
#include <set>

#include "clusterkit/core.hpp"

namespace clusterkit {

// Expanding-ring join. Heads broadcast a recruit wave; undecided nodes
// buffer offers, pick the best two rounds after the first one heard, then
// acknowledge, extend the wave if depth remains, and deny the losers.
// Subclasses supply the scoring rule.
class BfsJd : public JdModule {
 public:
  void reset() override {
    cands_.clear();
    decided_ = false;
    deadline_armed_ = false;
  }

  void on_head_start(CoreComponent& cc) override {
    decided_ = true;
    cc.bcast_request(cc.self(), 1, depth_left(1), head_metric(cc));
  }

  void on_request(CoreComponent& cc, const WireMessage& m,
                  const JoinRequestPayload& p, const Delivery& d) override {
    if (cc.state().role == Role::HEAD) {
      if (p.origin_head != cc.self()) cc.send_deny(m.sender);
      return;
    }
    if (decided_) {
      if (p.origin_head != cc.state().cluster) cc.send_deny(m.sender);
      return;
    }
    Candidate c{p.origin_head, m.sender, m.hops, p.metric_q16, d.rssi,
                cc.round()};
    auto [it, fresh] = cands_.try_emplace(c.origin, c);
    if (!fresh && score(cc, c) > score(cc, it->second)) it->second = c;
    if (!deadline_armed_) {
      deadline_armed_ = true;
      cc.jd_timer(2);
    }
  }

  void on_timer(CoreComponent& cc, std::uint64_t) override { decide(cc); }

 protected:
  virtual double score(CoreComponent& cc, const Candidate& c) const = 0;
  virtual std::int32_t head_metric(CoreComponent&) const { return 0; }

  std::uint8_t depth_left(std::uint8_t hops) const {
    return static_cast<std::uint8_t>(params_.k > hops ? params_.k - hops : 0);
  }

  void decide(CoreComponent& cc) {
    if (decided_ || cands_.empty()) return;
    decided_ = true;
    const Candidate* best = nullptr;
    double best_score = 0.0;
    for (auto& [origin, c] : cands_) {
      double s = score(cc, c);
      // Ties go to the lower head id; the map iterates origins ascending.
      if (!best || s > best_score) {
        best = &c;
        best_score = s;
      }
    }
    cc.adopt(best->origin, best->via, best->hops);
    cc.bcast_accept(best->origin, best->via, best->hops);
    if (best->hops < params_.k) {
      cc.bcast_request(best->origin,
                       static_cast<std::uint8_t>(best->hops + 1),
                       depth_left(static_cast<std::uint8_t>(best->hops + 1)),
                       best->metric_q16);
    }
    std::set<NodeId> losers;
    for (auto& [origin, c] : cands_) {
      if (origin != best->origin) losers.insert(c.via);
    }
    losers.erase(best->via);
    for (NodeId v : losers) cc.send_deny(v);
  }

  std::map<ClusterId, Candidate> cands_;
  bool decided_ = false;
  bool deadline_armed_ = false;
};

// Fewest hops, ties to the lower head id.
class LcaJd : public BfsJd {
 public:
  const char* name() const override { return "bfs-lca"; }

 protected:
  double score(CoreComponent&, const Candidate& c) const override {
    return -static_cast<double>(c.hops);
  }
};

// Strongest signal, ties to the lower head id.
class LeachJd : public BfsJd {
 public:
  const char* name() const override { return "bfs-leach"; }

 protected:
  double score(CoreComponent&, const Candidate& c) const override {
    return c.rssi;
  }
};

// Head energy per hop, ties to the lower head id.
class TccaJd : public BfsJd {
 public:
  const char* name() const override { return "bfs-tcca"; }

 protected:
  double score(CoreComponent&, const Candidate& c) const override {
    return from_q16(c.metric_q16) / static_cast<double>(c.hops);
  }

  std::int32_t head_metric(CoreComponent& cc) const override {
    return to_q16(cc.energy());
  }
};

}  // namespace clusterkit
