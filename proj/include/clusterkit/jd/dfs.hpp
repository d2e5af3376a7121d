#pragma once

#include <cstdint>

#include "clusterkit/core.hpp"

namespace clusterkit {

// Depth-first join: a single control token walks the cluster. The holder
// invites its lowest unexamined neighbor; an accept moves the token to the
// joiner, a deny keeps it, and an exhausted holder resumes its parent.
// Joining transfers control, so invites are deferred acceptances of work.
class DfsJd : public JdModule {
 public:
  const char* name() const override { return "dfs"; }

  void reset() override {
    decided_ = false;
    pending_ = kBroadcast;
    pending_gen_ = 0;
  }

  void on_head_start(CoreComponent& cc) override {
    decided_ = true;
    continue_traversal(cc);
  }

  void on_request(CoreComponent& cc, const WireMessage& m,
                  const JoinRequestPayload& p, const Delivery&) override {
    if (decided_ || cc.state().role == Role::HEAD) {
      cc.send_deny(m.sender);
      return;
    }
    decided_ = true;
    cc.adopt(p.origin_head, m.sender, m.hops);
    cc.bcast_accept(p.origin_head, m.sender, m.hops);
    continue_traversal(cc);
  }

  void on_accept(CoreComponent& cc, const WireMessage& m,
                 const JoinAcceptPayload& ja, const Delivery&) override {
    if (ja.joiner != pending_) return;
    pending_ = kBroadcast;
    if (m.cluster == cc.state().cluster) return;  // control moved to the joiner
    continue_traversal(cc);  // invitee joined elsewhere; keep walking
  }

  void on_deny(CoreComponent& cc, const WireMessage& m,
               const Delivery&) override {
    if (m.sender != pending_) return;
    pending_ = kBroadcast;
    continue_traversal(cc);
  }

  void on_resume(CoreComponent& cc, const WireMessage& m,
                 const Delivery&) override {
    if (!decided_ || m.cluster != cc.state().cluster) return;
    continue_traversal(cc);
  }

  void on_timer(CoreComponent& cc, std::uint64_t gen) override {
    // Reply never came back; treat the silence as a refusal.
    if (pending_ == kBroadcast || gen != pending_gen_) return;
    pending_ = kBroadcast;
    continue_traversal(cc);
  }

 private:
  void continue_traversal(CoreComponent& cc) {
    const ClusterState& st = cc.state();
    if (st.role != Role::HEAD && st.hops >= params_.k) {
      cc.send_resume(st.parent);
      return;
    }
    NodeId next = cc.it_module().next_neighbor(cc);
    if (next == kBroadcast) {
      if (st.role == Role::HEAD) {
        cc.complete_formation();
      } else {
        cc.send_resume(st.parent);
      }
      return;
    }
    pending_ = next;
    ++pending_gen_;
    std::uint8_t hops = static_cast<std::uint8_t>(st.hops + 1);
    std::uint8_t ttl =
        static_cast<std::uint8_t>(params_.k > hops ? params_.k - hops : 0);
    cc.send_request(next, st.cluster, hops, ttl, 0);
    cc.jd_timer(4, pending_gen_);
  }

  bool decided_ = false;
  NodeId pending_ = kBroadcast;
  std::uint64_t pending_gen_ = 0;
};

}  // namespace clusterkit
