#pragma once

#include <cstdint>
#include <string>

namespace clusterkit {

using NodeId = std::uint32_t;
using ClusterId = std::uint32_t;

// Sentinel destination for radio broadcasts and "no cluster yet".
inline constexpr NodeId kBroadcast = 0xFFFFFFFFu;
inline constexpr ClusterId kNoCluster = 0xFFFFFFFFu;

enum class Role : std::uint8_t {
  UNCLUSTERED,
  HEAD,
  MEMBER,
  GATEWAY,
};

inline const char* to_string(Role r) {
  switch (r) {
    case Role::UNCLUSTERED: return "UNCLUSTERED";
    case Role::HEAD: return "HEAD";
    case Role::MEMBER: return "MEMBER";
    case Role::GATEWAY: return "GATEWAY";
  }
  return "?";
}

enum class ClusterEvent : std::uint8_t {
  CLUSTER_FORMED,
  JOINED_CLUSTER,
  NODE_JOINED,
  CLUSTER_HEAD_CHANGED,
  NEIGHBOR_OTHER_CLUSTER,
  FORMATION_COMPLETE,
};

inline const char* to_string(ClusterEvent e) {
  switch (e) {
    case ClusterEvent::CLUSTER_FORMED: return "CLUSTER_FORMED";
    case ClusterEvent::JOINED_CLUSTER: return "JOINED_CLUSTER";
    case ClusterEvent::NODE_JOINED: return "NODE_JOINED";
    case ClusterEvent::CLUSTER_HEAD_CHANGED: return "CLUSTER_HEAD_CHANGED";
    case ClusterEvent::NEIGHBOR_OTHER_CLUSTER: return "NEIGHBOR_OTHER_CLUSTER";
    case ClusterEvent::FORMATION_COMPLETE: return "FORMATION_COMPLETE";
  }
  return "?";
}

}  // namespace clusterkit
