#pragma once

#include <cstdint>

namespace clusterkit {

// Counter-based splitmix64. Every consumer owns an independent stream derived
// from (root seed, node id, purpose), so adding nodes or reordering draws in
// one stream never perturbs another. Doubles are built from the high 53 bits,
// which keeps results bit-identical across platforms.

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

enum class RngPurpose : std::uint32_t {
  Position = 1,
  Protocol = 2,
  Radio = 3,
  Energy = 4,
  Secret = 5,
};

class Rng {
 public:
  Rng() : state_(0) {}
  explicit Rng(std::uint64_t seed) : state_(splitmix64(seed)) {}

  static Rng node_stream(std::uint64_t root, std::uint32_t node,
                         RngPurpose purpose) {
    std::uint64_t s = splitmix64(root ^ (0xA5A5A5A500000000ull |
                                         static_cast<std::uint64_t>(purpose)));
    s = splitmix64(s ^ (static_cast<std::uint64_t>(node) * 0x9E3779B97F4A7C15ull + 1));
    return Rng(s);
  }

  std::uint64_t next_u64() { return splitmix64(state_ += 0x9E3779B97F4A7C15ull); }

  // Uniform in [0, 1).
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform in [0, n). Multiply-shift; bias is far below anything we measure.
  std::uint32_t next_u32(std::uint32_t n) {
    return static_cast<std::uint32_t>(
        (static_cast<unsigned __int128>(next_u64() >> 32) * n) >> 32);
  }

 private:
  std::uint64_t state_;
};

}  // namespace clusterkit
