#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "clusterkit/params.hpp"
#include "clusterkit/sim.hpp"
#include "clusterkit/types.hpp"
#include "clusterkit/wire.hpp"

namespace clusterkit {

class CoreComponent;

// A join offer a node has heard and may still act on.
struct Candidate {
  ClusterId origin = kNoCluster;  // recruiting head
  NodeId via = kBroadcast;        // transmitter to attach under
  std::uint8_t hops = 0;          // distance to the head if adopted via `via`
  std::int32_t metric_q16 = 0;    // head-supplied metric, Q16.16
  double rssi = 0.0;              // signal strength of the offer
  std::uint64_t heard_round = 0;
};

// Outcome of evaluating buffered candidates.
struct JoinDecision {
  enum class Verdict : std::uint8_t { ACCEPT, DENY, DEFER };
  Verdict verdict = Verdict::DENY;
  Candidate chosen;   // valid when verdict == ACCEPT
  double score = 0.0;
};

// Neighbor bookkeeping owned by the interconnection module.
struct MembershipTable {
  std::set<NodeId> cluster_neighbors;      // same cluster as self
  std::set<NodeId> non_cluster_neighbors;  // classified, different cluster
  std::set<NodeId> unexamined;             // adjacent, cluster unknown
  std::set<NodeId> children;               // members attached under self
  std::set<NodeId> members;                // heads only: joined node ids
  std::map<NodeId, ClusterId> known;       // last classification per neighbor

  void clear() {
    cluster_neighbors.clear();
    non_cluster_neighbors.clear();
    unexamined.clear();
    children.clear();
    members.clear();
    known.clear();
  }
};

// Cluster head decision: picks which nodes declare themselves heads.
class ChdModule {
 public:
  virtual ~ChdModule() = default;
  virtual const char* name() const = 0;
  virtual void set_parameters(const ChdParams& p) { params_ = p; }
  virtual void reset() {}
  // Round zero of a formation epoch. Must eventually call declare_head()
  // or declare_non_head() on the core.
  virtual void start(CoreComponent& cc) = 0;
  virtual void on_attribute(CoreComponent&, const WireMessage&,
                            const AttributeFloodPayload&, const Delivery&) {}
  virtual void on_maxmin(CoreComponent&, const WireMessage&,
                         const MaxMinFloodPayload&, const Delivery&) {}
  virtual void on_timer(CoreComponent&, std::uint64_t) {}

 protected:
  ChdParams params_;
};

// Join decision: grows clusters around declared heads.
class JdModule {
 public:
  virtual ~JdModule() = default;
  virtual const char* name() const = 0;
  virtual void set_parameters(const ChdParams& p) { params_ = p; }
  virtual void reset() {}
  // Called once on the node that just declared itself head.
  virtual void on_head_start(CoreComponent&) {}
  virtual void on_request(CoreComponent&, const WireMessage&,
                          const JoinRequestPayload&, const Delivery&) {}
  virtual void on_accept(CoreComponent&, const WireMessage&,
                         const JoinAcceptPayload&, const Delivery&) {}
  virtual void on_deny(CoreComponent&, const WireMessage&, const Delivery&) {}
  virtual void on_resume(CoreComponent&, const WireMessage&, const Delivery&) {}
  virtual void on_timer(CoreComponent&, std::uint64_t) {}

 protected:
  ChdParams params_;
};

// Interconnection: classifies neighbors and exposes cross-cluster structure.
class ItModule {
 public:
  virtual ~ItModule() = default;
  virtual const char* name() const = 0;
  virtual void set_parameters(const ChdParams& p) { params_ = p; }
  virtual void reset() { table_.clear(); }
  // A fresh epoch begins; seeds the unexamined set with all neighbors.
  virtual void on_formation_start(CoreComponent& cc);
  // A neighbor was observed to belong to a cluster.
  virtual void note_neighbor(CoreComponent& cc, NodeId who, ClusterId cluster) = 0;
  // The local node changed role or cluster; reclassify everything.
  virtual void on_self_changed(CoreComponent& cc) = 0;
  virtual void on_hello(CoreComponent&, const WireMessage&, const Delivery&) {}
  virtual void on_convergecast(CoreComponent&, const WireMessage&,
                               const ConvergecastPayload&, const Delivery&) {}
  virtual void on_timer(CoreComponent&, std::uint64_t) {}
  // Local formation just finished; hellos from neighbors follow shortly.
  virtual void on_complete(CoreComponent&) {}
  // Next unexamined neighbor, ascending id; each id yielded at most once
  // per epoch. kBroadcast when exhausted.
  virtual NodeId next_neighbor(CoreComponent& cc);
  // Parent to route through when sending toward `cluster`'s head;
  // kBroadcast if this node has no attachment in that cluster.
  virtual NodeId parent_for(const CoreComponent& cc, ClusterId cluster) const;
  // All clusters this node belongs to (overlap-aware modules return many).
  virtual std::vector<ClusterId> memberships(const CoreComponent& cc) const;
  // Every cluster this node can route toward, membership or not, with the
  // next hop for each. Pure relays (points held without joining) show up
  // here and nowhere else.
  virtual std::map<ClusterId, NodeId> uplinks(const CoreComponent& cc) const;
  // Every (neighbor, cluster) classification this node has witnessed.
  virtual std::map<NodeId, std::vector<ClusterId>> observations() const {
    std::map<NodeId, std::vector<ClusterId>> out;
    for (auto& [who, cl] : table_.known) out[who].push_back(cl);
    return out;
  }

  MembershipTable& table() { return table_; }
  const MembershipTable& table() const { return table_; }

 protected:
  ChdParams params_;
  MembershipTable table_;
};

// One head-decision + join + interconnection triple, ready to attach.
struct Composition {
  std::string name;
  std::unique_ptr<ChdModule> chd;
  std::unique_ptr<JdModule> jd;
  std::unique_ptr<ItModule> it;
  ChdParams params;
  unsigned radius = 1;  // max(k, d): scales the quiet timeout
};

}  // namespace clusterkit
