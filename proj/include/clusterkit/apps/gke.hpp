#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "clusterkit/apps/radio.hpp"
#include "clusterkit/core.hpp"
#include "clusterkit/rng.hpp"

namespace clusterkit {

struct GroupKey {
  std::uint64_t value = 0;
  std::uint32_t contributors = 0;
  bool ready = false;
};

// Folds per-node secrets into a group key. Implementations must be
// commutative and associative in contribute() so the fold is independent of
// join order.
class KeyCombiner {
 public:
  virtual ~KeyCombiner() = default;
  virtual std::uint64_t init() const = 0;
  virtual std::uint64_t contribute(std::uint64_t acc,
                                   std::uint64_t secret) const = 0;
  virtual std::uint64_t finalize(std::uint64_t acc,
                                 std::uint32_t contributors) const = 0;
};

class SumCombiner : public KeyCombiner {
 public:
  std::uint64_t init() const override { return 0; }
  std::uint64_t contribute(std::uint64_t acc,
                           std::uint64_t secret) const override {
    return acc + secret;  // wraps mod 2^64
  }
  std::uint64_t finalize(std::uint64_t acc, std::uint32_t) const override {
    return acc;
  }
};

inline std::uint64_t node_secret(std::uint64_t secret_seed, NodeId node) {
  return Rng::node_stream(secret_seed, node, RngPurpose::Secret).next_u64();
}

// Group key establishment rider. Attach one to each node's core component;
// whichever nodes end up heads fold the secrets of their joiners as
// NODE_JOINED events fire, then seal the key at FORMATION_COMPLETE. DFS join
// serializes the joins, so the fold at the head sees every member exactly
// once.
class GroupKeyApp {
 public:
  GroupKeyApp(CoreComponent& cc, std::uint64_t secret_seed,
              const KeyCombiner& combiner)
      : cc_(&cc), seed_(secret_seed), combiner_(&combiner) {
    cc.register_changed_callback([this](ClusterEvent e, NodeId subject,
                                        ClusterId) { on_event(e, subject); });
  }

  const GroupKey& key() const { return key_; }

  // Harness-side distribution: every node of the head's cluster receives the
  // sealed key (in a deployment it would travel down the tree links).
  std::map<NodeId, GroupKey> distribute(const ClusterView& view) const {
    std::map<NodeId, GroupKey> out;
    if (!key_.ready) return out;
    for (NodeId n : view.members_of(cc_->state().cluster)) out[n] = key_;
    return out;
  }

 private:
  void on_event(ClusterEvent e, NodeId subject) {
    switch (e) {
      case ClusterEvent::CLUSTER_FORMED:
        acc_ = combiner_->contribute(combiner_->init(),
                                     node_secret(seed_, cc_->self()));
        count_ = 1;
        key_ = {};
        break;
      case ClusterEvent::NODE_JOINED:
        acc_ = combiner_->contribute(acc_, node_secret(seed_, subject));
        ++count_;
        break;
      case ClusterEvent::FORMATION_COMPLETE:
        if (cc_->state().role == Role::HEAD && count_ > 0) {
          key_.value = combiner_->finalize(acc_, count_);
          key_.contributors = count_;
          key_.ready = true;
        }
        break;
      default:
        break;
    }
  }

  CoreComponent* cc_;
  std::uint64_t seed_;
  const KeyCombiner* combiner_;
  std::uint64_t acc_ = 0;
  std::uint32_t count_ = 0;
  GroupKey key_;
};

}  // namespace clusterkit
