#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "clusterkit/contracts.hpp"
#include "clusterkit/params.hpp"
#include "clusterkit/sim.hpp"
#include "clusterkit/types.hpp"
#include "clusterkit/wire.hpp"

namespace clusterkit {

// Current clustering state of one node.
struct ClusterState {
  Role role = Role::UNCLUSTERED;
  ClusterId cluster = kNoCluster;
  NodeId parent = kBroadcast;
  std::uint8_t hops = 0;
};

using EventCallback =
    std::function<void(ClusterEvent, NodeId subject, ClusterId cluster)>;
using RouteHandler =
    std::function<void(const WireMessage&, const Delivery&)>;

// Clustering core: owns the node state machine, wire dispatch, epochs,
// the quiet/orphan timeout, and JOIN_ACCEPT forwarding. Protocol policy
// lives in the attached CHD/JD/IT modules.
class CoreComponent : public NodeAgent {
  enum TimerKind : std::uint64_t {
    kTimerQuiet = 1,
    kTimerRecluster = 2,
    kTimerChd = 3,
    kTimerJd = 4,
    kTimerIt = 5,
  };

 public:
  CoreComponent(Composition comp, NodeEnv env = {})
      : comp_(std::move(comp)), env_(env) {}

  // NodeAgent ------------------------------------------------------------
  void on_start(NodeApi& api) override {
    api_ = &api;
    comp_.chd->set_parameters(comp_.params);
    comp_.jd->set_parameters(comp_.params);
    comp_.it->set_parameters(comp_.params);
    if (comp_.params.t > 0) {
      api_->set_timer(comp_.params.t, token(kTimerRecluster, 0));
    }
    start_formation();
  }

  void on_message(NodeApi& api, const std::vector<std::uint8_t>& data,
                  const Delivery& d) override {
    api_ = &api;
    if (data.empty() || data[0] < 0x01 || data[0] > 0x08) {
      ++unknown_type_drops_;
      return;
    }
    auto m = decode_message(data);
    if (!m) {
      ++decode_errors_;
      return;
    }
    dispatch(*m, d);
  }

  void on_timer(NodeApi& api, std::uint64_t t) override {
    api_ = &api;
    std::uint64_t data = t >> 8;
    switch (t & 0xFF) {
      case kTimerQuiet:
        if (data == quiet_gen_) handle_quiet();
        break;
      case kTimerRecluster:
        start_formation();
        api_->set_timer(comp_.params.t, token(kTimerRecluster, 0));
        break;
      case kTimerChd:
        comp_.chd->on_timer(*this, data);
        break;
      case kTimerJd:
        comp_.jd->on_timer(*this, data);
        break;
      case kTimerIt:
        comp_.it->on_timer(*this, data);
        break;
      default:
        break;
    }
  }

  // Identity and environment ----------------------------------------------
  NodeId self() const { return api_->self(); }
  const std::vector<NodeId>& neighbors() const { return api_->neighbors(); }
  std::uint64_t round() const { return api_->round(); }
  Rng& rng() { return api_->rng(); }
  const ClusterState& state() const { return state_; }
  const ChdParams& params() const { return comp_.params; }
  NodeEnv& env() { return env_; }
  double energy() const { return env_.energy; }
  std::uint32_t attribute() const {
    return env_.attribute_set ? env_.attribute : self();
  }
  std::uint32_t epoch() const { return epoch_; }
  std::uint8_t epoch_byte() const {
    return static_cast<std::uint8_t>(epoch_ & 0xFF);
  }
  bool formation_complete() const { return formation_complete_; }
  bool is_orphan() const { return orphan_; }
  std::optional<std::uint64_t> decision_round() const { return decision_round_; }
  unsigned quiet_timeout() const { return 2 * comp_.radius + 2; }

  ChdModule& chd_module() { return *comp_.chd; }
  JdModule& jd_module() { return *comp_.jd; }
  ItModule& it_module() { return *comp_.it; }
  const ItModule& it_module() const { return *comp_.it; }
  MembershipTable& table() { return comp_.it->table(); }
  const MembershipTable& table() const { return comp_.it->table(); }
  const Composition& composition() const { return comp_; }

  // Role transitions (called by CHD/JD modules) ----------------------------
  void declare_head() {
    record_decision();
    ClusterId prev = state_.cluster;
    state_.role = Role::HEAD;
    state_.cluster = self();
    state_.parent = kBroadcast;
    state_.hops = 0;
    fire_event(ClusterEvent::CLUSTER_FORMED, self(), state_.cluster);
    note_ownership_change(prev);
    comp_.it->on_self_changed(*this);
    activity();
    comp_.jd->on_head_start(*this);
  }

  void declare_non_head() { record_decision(); }

  void adopt(ClusterId cluster, NodeId parent, std::uint8_t hops) {
    ClusterId prev = state_.cluster;
    state_.role = Role::MEMBER;
    state_.cluster = cluster;
    state_.parent = parent;
    state_.hops = hops;
    fire_event(ClusterEvent::JOINED_CLUSTER, self(), cluster);
    note_ownership_change(prev);
    comp_.it->on_self_changed(*this);
    // The head belongs to its own cluster; classify it now if adjacent.
    observe_neighbor(static_cast<NodeId>(cluster), cluster);
    activity();
  }

  // Members with foreign neighbors serve as gateways.
  void mark_gateway() {
    if (state_.role == Role::MEMBER) state_.role = Role::GATEWAY;
  }

  // Any formation-level progress: postpones the quiet timeout.
  void activity() {
    if (formation_complete_) return;
    ++quiet_gen_;
    api_->set_timer(quiet_timeout(), token(kTimerQuiet, quiet_gen_));
  }

  void complete_formation() {
    if (formation_complete_) return;
    formation_complete_ = true;
    fire_event(ClusterEvent::FORMATION_COMPLETE, self(), state_.cluster);
    bcast_hello();
    comp_.it->on_complete(*this);
  }

  // Wire emission helpers ---------------------------------------------------
  void bcast_request(ClusterId origin, std::uint8_t hops, std::uint8_t ttl,
                     std::int32_t metric_q16) {
    JoinRequestPayload p{origin, ttl, metric_q16, epoch_byte()};
    api_->broadcast(encode_message(
        {MsgType::JOIN_REQUEST, self(), origin, hops, p.encode()}));
  }

  void send_request(NodeId dest, ClusterId origin, std::uint8_t hops,
                    std::uint8_t ttl, std::int32_t metric_q16) {
    JoinRequestPayload p{origin, ttl, metric_q16, epoch_byte()};
    api_->send(dest, encode_message(
                         {MsgType::JOIN_REQUEST, self(), origin, hops, p.encode()}));
  }

  void bcast_accept(ClusterId cluster, NodeId parent, std::uint8_t hops) {
    JoinAcceptPayload p{self(), parent, other_heads_for(cluster), epoch_byte()};
    api_->broadcast(encode_message(
        {MsgType::JOIN_ACCEPT, self(), cluster, hops, p.encode()}));
  }

  void send_deny(NodeId dest) {
    EpochOnlyPayload p{epoch_byte()};
    api_->send(dest, encode_message({MsgType::JOIN_DENY, self(), state_.cluster,
                                     state_.hops, p.encode()}));
  }

  void send_resume(NodeId dest) {
    EpochOnlyPayload p{epoch_byte()};
    api_->send(dest, encode_message({MsgType::RESUME, self(), state_.cluster,
                                     state_.hops, p.encode()}));
  }

  void bcast_hello() {
    EpochOnlyPayload p{epoch_byte()};
    api_->broadcast(encode_message({MsgType::NEIGHBOR_HELLO, self(),
                                    state_.cluster, state_.hops, p.encode()}));
  }

  void bcast_attribute(std::uint32_t value, NodeId owner, std::uint8_t hops,
                       std::uint8_t ttl) {
    AttributeFloodPayload p{value, ttl, epoch_byte()};
    api_->broadcast(
        encode_message({MsgType::ATTRIBUTE, self(), owner, hops, p.encode()}));
  }

  void bcast_maxmin(NodeId winner) {
    MaxMinFloodPayload p{winner, epoch_byte()};
    api_->broadcast(encode_message(
        {MsgType::ATTRIBUTE, self(), kNoCluster, 0, p.encode()}));
  }

  void send_convergecast(NodeId dest, ClusterId target,
                         const std::vector<ClusterId>& clusters) {
    ConvergecastPayload p{clusters, epoch_byte()};
    api_->send(dest, encode_message({MsgType::CONVERGECAST, self(), target,
                                     state_.hops, p.encode()}));
  }

  void send_route(NodeId dest, ClusterId target_cluster, std::uint16_t seq) {
    RoutePayload p{target_cluster, seq};
    api_->send(dest, encode_message(
                         {MsgType::ROUTE, self(), state_.cluster, 0, p.encode()}));
  }

  // Module timers; data travels in the upper 56 bits of the token.
  void chd_timer(std::uint32_t delay, std::uint64_t data = 0) {
    api_->set_timer(delay, token(kTimerChd, data));
  }
  void jd_timer(std::uint32_t delay, std::uint64_t data = 0) {
    api_->set_timer(delay, token(kTimerJd, data));
  }
  void it_timer(std::uint32_t delay, std::uint64_t data = 0) {
    api_->set_timer(delay, token(kTimerIt, data));
  }

  // Neighbor classification entry point.
  void observe_neighbor(NodeId who, ClusterId cluster) {
    if (who == self() || cluster == kNoCluster) return;
    if (!std::binary_search(neighbors().begin(), neighbors().end(), who)) return;
    comp_.it->note_neighbor(*this, who, cluster);
  }

  // Events ------------------------------------------------------------------
  int register_changed_callback(EventCallback cb) {
    callbacks_.push_back(std::move(cb));
    return static_cast<int>(callbacks_.size()) - 1;
  }

  void fire_event(ClusterEvent e, NodeId subject, ClusterId cluster) {
    if (api_) api_->note_event(e, subject, cluster);
    for (auto& cb : callbacks_) cb(e, subject, cluster);
  }

  void set_route_handler(RouteHandler h) { route_handler_ = std::move(h); }

  // Diagnostics ---------------------------------------------------------------
  std::uint64_t stale_epoch_drops() const { return stale_epoch_drops_; }
  std::uint64_t decode_errors() const { return decode_errors_; }
  std::uint64_t unknown_type_drops() const { return unknown_type_drops_; }

 private:
  static std::uint64_t token(TimerKind k, std::uint64_t data) {
    return (data << 8) | static_cast<std::uint64_t>(k);
  }

  void record_decision() {
    if (!decision_round_) decision_round_ = round();
  }

  void note_ownership_change(ClusterId prev) {
    // First adoption of an epoch compares against last epoch's owner, so a
    // re-elected head does not read as a change.
    if (prev == kNoCluster) prev = prev_epoch_cluster_;
    if (epoch_ > 0 && prev != kNoCluster && prev != state_.cluster) {
      fire_event(ClusterEvent::CLUSTER_HEAD_CHANGED, self(), state_.cluster);
    }
  }

  void start_formation() {
    if (started_) ++epoch_;
    started_ = true;
    prev_epoch_cluster_ = state_.cluster;
    state_ = ClusterState{};
    formation_complete_ = false;
    orphan_ = false;
    decision_round_.reset();
    comp_.chd->reset();
    comp_.jd->reset();
    comp_.it->reset();
    comp_.it->on_formation_start(*this);
    activity();
    comp_.chd->start(*this);
  }

  void handle_quiet() {
    if (formation_complete_) return;
    if (state_.role == Role::UNCLUSTERED) {
      // Nobody recruited this node: it becomes a non-recruiting singleton.
      orphan_ = true;
      ClusterId prev = state_.cluster;
      state_.role = Role::HEAD;
      state_.cluster = self();
      state_.parent = kBroadcast;
      state_.hops = 0;
      fire_event(ClusterEvent::CLUSTER_FORMED, self(), state_.cluster);
      note_ownership_change(prev);
      comp_.it->on_self_changed(*this);
    }
    complete_formation();
  }

  bool epoch_ok(std::uint8_t wire_epoch) {
    if (wire_epoch == epoch_byte()) return true;
    ++stale_epoch_drops_;
    return false;
  }

  std::vector<ClusterId> other_heads_for(ClusterId cluster) const {
    std::vector<ClusterId> out;
    for (ClusterId c : comp_.it->memberships(*this)) {
      if (c != cluster && out.size() < kMaxAcceptExtension) out.push_back(c);
    }
    return out;
  }

  void dispatch(const WireMessage& m, const Delivery& d) {
    switch (m.type) {
      case MsgType::NEIGHBOR_HELLO: {
        auto p = EpochOnlyPayload::decode(m.payload);
        if (!p) { ++decode_errors_; return; }
        if (!epoch_ok(p->epoch)) return;
        observe_neighbor(m.sender, m.cluster);
        comp_.it->on_hello(*this, m, d);
        break;
      }
      case MsgType::JOIN_REQUEST: {
        auto p = JoinRequestPayload::decode(m.payload);
        if (!p) { ++decode_errors_; return; }
        if (!epoch_ok(p->epoch)) return;
        // Relays are not necessarily members of the flooded cluster, so only
        // the recruiting head itself is safe to classify here.
        if (m.sender == p->origin_head) observe_neighbor(m.sender, p->origin_head);
        activity();
        comp_.jd->on_request(*this, m, *p, d);
        break;
      }
      case MsgType::JOIN_ACCEPT: {
        auto p = JoinAcceptPayload::decode(m.payload);
        if (!p) { ++decode_errors_; return; }
        if (!epoch_ok(p->epoch)) return;
        handle_accept(m, *p, d);
        break;
      }
      case MsgType::JOIN_DENY: {
        auto p = EpochOnlyPayload::decode(m.payload);
        if (!p) { ++decode_errors_; return; }
        if (!epoch_ok(p->epoch)) return;
        observe_neighbor(m.sender, m.cluster);
        activity();
        comp_.jd->on_deny(*this, m, d);
        break;
      }
      case MsgType::ATTRIBUTE: {
        // Two schemas share the type: champion floods carry the owner id in
        // the cluster field, MaxMin floods use the no-cluster marker.
        if (m.cluster == kNoCluster) {
          auto p = MaxMinFloodPayload::decode(m.payload);
          if (!p) { ++decode_errors_; return; }
          if (!epoch_ok(p->epoch)) return;
          activity();
          comp_.chd->on_maxmin(*this, m, *p, d);
        } else {
          auto p = AttributeFloodPayload::decode(m.payload);
          if (!p) { ++decode_errors_; return; }
          if (!epoch_ok(p->epoch)) return;
          activity();
          comp_.chd->on_attribute(*this, m, *p, d);
        }
        break;
      }
      case MsgType::RESUME: {
        auto p = EpochOnlyPayload::decode(m.payload);
        if (!p) { ++decode_errors_; return; }
        if (!epoch_ok(p->epoch)) return;
        observe_neighbor(m.sender, m.cluster);
        activity();
        comp_.jd->on_resume(*this, m, d);
        break;
      }
      case MsgType::CONVERGECAST: {
        auto p = ConvergecastPayload::decode(m.payload);
        if (!p) { ++decode_errors_; return; }
        if (!epoch_ok(p->epoch)) return;
        comp_.it->on_convergecast(*this, m, *p, d);
        break;
      }
      case MsgType::ROUTE: {
        if (route_handler_) route_handler_(m, d);
        break;
      }
    }
  }

  void handle_accept(const WireMessage& m, const JoinAcceptPayload& ja,
                     const Delivery& d) {
    observe_neighbor(m.sender, m.cluster);
    if (ja.joiner != m.sender) observe_neighbor(ja.joiner, m.cluster);
    activity();
    if (ja.parent == self()) {
      if (m.sender == ja.joiner) table().children.insert(ja.joiner);
      if (state_.role == Role::HEAD && m.cluster == self()) {
        if (table().members.insert(ja.joiner).second) {
          fire_event(ClusterEvent::NODE_JOINED, ja.joiner, m.cluster);
        }
      } else {
        NodeId up = comp_.it->parent_for(*this, m.cluster);
        if (up != kBroadcast) {
          JoinAcceptPayload fwd{ja.joiner, up, ja.other_heads, ja.epoch};
          api_->send(up, encode_message({MsgType::JOIN_ACCEPT, self(),
                                         m.cluster, m.hops, fwd.encode()}));
        } else {
          ++forward_drops_;
        }
      }
    }
    comp_.jd->on_accept(*this, m, ja, d);
  }

  Composition comp_;
  NodeEnv env_;
  NodeApi* api_ = nullptr;
  ClusterState state_;
  std::uint32_t epoch_ = 0;
  bool started_ = false;
  ClusterId prev_epoch_cluster_ = kNoCluster;
  bool formation_complete_ = false;
  bool orphan_ = false;
  std::optional<std::uint64_t> decision_round_;
  std::uint64_t quiet_gen_ = 0;
  std::vector<EventCallback> callbacks_;
  RouteHandler route_handler_;
  std::uint64_t stale_epoch_drops_ = 0;
  std::uint64_t decode_errors_ = 0;
  std::uint64_t unknown_type_drops_ = 0;
  std::uint64_t forward_drops_ = 0;
};

// Default IT behaviors live here so modules can stay small.
inline void ItModule::on_formation_start(CoreComponent& cc) {
  for (NodeId n : cc.neighbors()) table_.unexamined.insert(n);
}

inline NodeId ItModule::next_neighbor(CoreComponent& cc) {
  for (NodeId n : cc.neighbors()) {
    if (table_.unexamined.count(n)) {
      table_.unexamined.erase(n);
      return n;
    }
  }
  return kBroadcast;
}

inline bool member_like(Role r) {
  return r == Role::MEMBER || r == Role::GATEWAY;
}

inline NodeId ItModule::parent_for(const CoreComponent& cc,
                                   ClusterId cluster) const {
  if (cc.state().role == Role::HEAD && cluster == cc.self()) return cc.self();
  if (member_like(cc.state().role) && cluster == cc.state().cluster) {
    return cc.state().parent;
  }
  return kBroadcast;
}

inline std::vector<ClusterId> ItModule::memberships(
    const CoreComponent& cc) const {
  if (cc.state().cluster == kNoCluster) return {};
  return {cc.state().cluster};
}

inline std::map<ClusterId, NodeId> ItModule::uplinks(
    const CoreComponent& cc) const {
  std::map<ClusterId, NodeId> out;
  for (ClusterId c : memberships(cc)) out.emplace(c, parent_for(cc, c));
  return out;
}

}  // namespace clusterkit
