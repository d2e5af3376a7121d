#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "clusterkit/types.hpp"

namespace clusterkit {

// Wire format, big-endian throughout:
//   byte 0      message type
//   bytes 1-4   sender id
//   bytes 5-8   cluster id
//   byte 9      hop count
//   byte 10     payload length L (0..64)
//   bytes 11..  payload, exactly L bytes
// decode() accepts a buffer iff it is exactly 11+L bytes with a known type;
// anything accepted re-encodes to the identical bytes.

enum class MsgType : std::uint8_t {
  NEIGHBOR_HELLO = 0x01,
  JOIN_REQUEST = 0x02,
  JOIN_ACCEPT = 0x03,
  JOIN_DENY = 0x04,
  ATTRIBUTE = 0x05,
  RESUME = 0x06,
  CONVERGECAST = 0x07,
  ROUTE = 0x08,
};

inline constexpr std::size_t kHeaderSize = 11;
inline constexpr std::size_t kMaxPayload = 64;

inline const char* to_string(MsgType t) {
  switch (t) {
    case MsgType::NEIGHBOR_HELLO: return "NEIGHBOR_HELLO";
    case MsgType::JOIN_REQUEST: return "JOIN_REQUEST";
    case MsgType::JOIN_ACCEPT: return "JOIN_ACCEPT";
    case MsgType::JOIN_DENY: return "JOIN_DENY";
    case MsgType::ATTRIBUTE: return "ATTRIBUTE";
    case MsgType::RESUME: return "RESUME";
    case MsgType::CONVERGECAST: return "CONVERGECAST";
    case MsgType::ROUTE: return "ROUTE";
  }
  return "?";
}

using Bytes = std::vector<std::uint8_t>;

struct WireMessage {
  MsgType type = MsgType::NEIGHBOR_HELLO;
  NodeId sender = 0;
  ClusterId cluster = 0;
  std::uint8_t hops = 0;
  Bytes payload;

  bool operator==(const WireMessage&) const = default;
};

namespace detail {

inline void put_u32(Bytes& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

inline void put_u16(Bytes& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

inline std::uint32_t get_u32(const std::uint8_t* p) {
  return (static_cast<std::uint32_t>(p[0]) << 24) |
         (static_cast<std::uint32_t>(p[1]) << 16) |
         (static_cast<std::uint32_t>(p[2]) << 8) |
         static_cast<std::uint32_t>(p[3]);
}

inline std::uint16_t get_u16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>((static_cast<std::uint16_t>(p[0]) << 8) |
                                    static_cast<std::uint16_t>(p[1]));
}

}  // namespace detail

inline Bytes encode_message(const WireMessage& m) {
  Bytes out;
  out.reserve(kHeaderSize + m.payload.size());
  out.push_back(static_cast<std::uint8_t>(m.type));
  detail::put_u32(out, m.sender);
  detail::put_u32(out, m.cluster);
  out.push_back(m.hops);
  out.push_back(static_cast<std::uint8_t>(m.payload.size()));
  out.insert(out.end(), m.payload.begin(), m.payload.end());
  return out;
}

inline std::optional<WireMessage> decode_message(const Bytes& buf) {
  if (buf.size() < kHeaderSize) return std::nullopt;
  const std::uint8_t t = buf[0];
  if (t < 0x01 || t > 0x08) return std::nullopt;
  const std::size_t len = buf[10];
  if (len > kMaxPayload) return std::nullopt;
  if (buf.size() != kHeaderSize + len) return std::nullopt;
  WireMessage m;
  m.type = static_cast<MsgType>(t);
  m.sender = detail::get_u32(buf.data() + 1);
  m.cluster = detail::get_u32(buf.data() + 5);
  m.hops = buf[9];
  m.payload.assign(buf.begin() + kHeaderSize, buf.end());
  return m;
}

// Link metrics travel as Q16.16 fixed point so payloads stay byte-stable.
inline std::int32_t to_q16(double v) {
  double scaled = v * 65536.0;
  if (scaled >= 2147483647.0) return 2147483647;
  if (scaled <= -2147483648.0) return -2147483648;
  return static_cast<std::int32_t>(scaled >= 0 ? scaled + 0.5 : scaled - 0.5);
}

inline double from_q16(std::int32_t v) { return static_cast<double>(v) / 65536.0; }

// ---- payload schemas ----------------------------------------------------
// Formation payloads end with one epoch byte (epoch mod 256); stale copies
// from a previous formation are dropped on sight. ROUTE is the exception:
// its payload is exactly target(4) + seq(2).

struct JoinRequestPayload {
  NodeId origin_head = 0;
  std::uint8_t ttl = 0;
  std::int32_t metric_q16 = 0;
  std::uint8_t epoch = 0;

  Bytes encode() const {
    Bytes out;
    detail::put_u32(out, origin_head);
    out.push_back(ttl);
    detail::put_u32(out, static_cast<std::uint32_t>(metric_q16));
    out.push_back(epoch);
    return out;
  }
  static std::optional<JoinRequestPayload> decode(const Bytes& p) {
    if (p.size() != 10) return std::nullopt;
    JoinRequestPayload r;
    r.origin_head = detail::get_u32(p.data());
    r.ttl = p[4];
    r.metric_q16 = static_cast<std::int32_t>(detail::get_u32(p.data() + 5));
    r.epoch = p[9];
    return r;
  }
};

inline constexpr std::size_t kMaxAcceptExtension = 13;

struct JoinAcceptPayload {
  NodeId joiner = 0;
  NodeId parent = 0;  // next hop toward the head; forwarding rewrites it
  std::vector<ClusterId> other_heads;  // overlap gossip, capped
  std::uint8_t epoch = 0;

  Bytes encode() const {
    Bytes out;
    detail::put_u32(out, joiner);
    detail::put_u32(out, parent);
    const std::size_t n =
        other_heads.size() > kMaxAcceptExtension ? kMaxAcceptExtension
                                                 : other_heads.size();
    out.push_back(static_cast<std::uint8_t>(n));
    for (std::size_t i = 0; i < n; ++i) detail::put_u32(out, other_heads[i]);
    out.push_back(epoch);
    return out;
  }
  static std::optional<JoinAcceptPayload> decode(const Bytes& p) {
    if (p.size() < 10) return std::nullopt;
    JoinAcceptPayload r;
    r.joiner = detail::get_u32(p.data());
    r.parent = detail::get_u32(p.data() + 4);
    const std::size_t n = p[8];
    if (n > kMaxAcceptExtension || p.size() != 10 + 4 * n) return std::nullopt;
    for (std::size_t i = 0; i < n; ++i)
      r.other_heads.push_back(detail::get_u32(p.data() + 9 + 4 * i));
    r.epoch = p.back();
    return r;
  }
};

struct EpochOnlyPayload {  // JOIN_DENY, RESUME, NEIGHBOR_HELLO
  std::uint8_t epoch = 0;

  Bytes encode() const { return Bytes{epoch}; }
  static std::optional<EpochOnlyPayload> decode(const Bytes& p) {
    if (p.size() != 1) return std::nullopt;
    return EpochOnlyPayload{p[0]};
  }
};

// ATTRIBUTE carries either an attribute flood step (value + remaining ttl)
// or a MaxMin flood step (a bare node id); the composition knows which.
struct AttributeFloodPayload {
  std::uint32_t value = 0;
  std::uint8_t ttl = 0;
  std::uint8_t epoch = 0;

  Bytes encode() const {
    Bytes out;
    detail::put_u32(out, value);
    out.push_back(ttl);
    out.push_back(epoch);
    return out;
  }
  static std::optional<AttributeFloodPayload> decode(const Bytes& p) {
    if (p.size() != 6) return std::nullopt;
    AttributeFloodPayload r;
    r.value = detail::get_u32(p.data());
    r.ttl = p[4];
    r.epoch = p[5];
    return r;
  }
};

struct MaxMinFloodPayload {
  NodeId id = 0;
  std::uint8_t epoch = 0;

  Bytes encode() const {
    Bytes out;
    detail::put_u32(out, id);
    out.push_back(epoch);
    return out;
  }
  static std::optional<MaxMinFloodPayload> decode(const Bytes& p) {
    if (p.size() != 5) return std::nullopt;
    MaxMinFloodPayload r;
    r.id = detail::get_u32(p.data());
    r.epoch = p[4];
    return r;
  }
};

inline constexpr std::size_t kMaxConvergecastIds = 14;

struct ConvergecastPayload {
  std::vector<ClusterId> clusters;
  std::uint8_t epoch = 0;

  Bytes encode() const {
    Bytes out;
    const std::size_t n = clusters.size() > kMaxConvergecastIds
                              ? kMaxConvergecastIds
                              : clusters.size();
    out.push_back(static_cast<std::uint8_t>(n));
    for (std::size_t i = 0; i < n; ++i) detail::put_u32(out, clusters[i]);
    out.push_back(epoch);
    return out;
  }
  static std::optional<ConvergecastPayload> decode(const Bytes& p) {
    if (p.size() < 2) return std::nullopt;
    const std::size_t n = p[0];
    if (n > kMaxConvergecastIds || p.size() != 2 + 4 * n) return std::nullopt;
    ConvergecastPayload r;
    for (std::size_t i = 0; i < n; ++i)
      r.clusters.push_back(detail::get_u32(p.data() + 1 + 4 * i));
    r.epoch = p.back();
    return r;
  }
};

struct RoutePayload {
  ClusterId target_cluster = 0;
  std::uint16_t seq = 0;

  Bytes encode() const {
    Bytes out;
    detail::put_u32(out, target_cluster);
    detail::put_u16(out, seq);
    return out;
  }
  static std::optional<RoutePayload> decode(const Bytes& p) {
    if (p.size() != 6) return std::nullopt;
    RoutePayload r;
    r.target_cluster = detail::get_u32(p.data());
    r.seq = detail::get_u16(p.data() + 4);
    return r;
  }
};

}  // namespace clusterkit
