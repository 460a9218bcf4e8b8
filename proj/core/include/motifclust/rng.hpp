#pragma once

#include <array>
#include <cstdint>

namespace motifclust {

// Philox4x64 with 10 rounds: a stateless counter-based block cipher turning a
// 256-bit counter and 128-bit key into 256 bits of output.  Identical streams
// can be opened at arbitrary (key, counter) coordinates with no seeding cost,
// which is what makes per-edge / per-restart substreams cheap and makes every
// result independent of thread scheduling.
namespace philox {

using Counter = std::array<std::uint64_t, 4>;
using Key = std::array<std::uint64_t, 2>;

Counter block(const Counter& counter, const Key& key);

}  // namespace philox

// Well-known stream domains.  Different domains with the same seed never
// collide because the domain is part of the cipher key.
namespace rng_domain {
inline constexpr std::uint64_t kEdgeSampling = 1;   // substream per node pair
inline constexpr std::uint64_t kKMeans = 2;         // substream per restart
inline constexpr std::uint64_t kLabelShuffle = 3;
inline constexpr std::uint64_t kTestData = 100;     // scratch streams in tests
}  // namespace rng_domain

// A deterministic random stream addressed by (seed, domain, s0, s1).  The
// pair (s0, s1) selects a substream, e.g. the node pair an edge draw belongs
// to; draws from distinct substreams are independent regardless of the order
// in which the substreams are consumed.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t domain, std::uint64_t s0 = 0,
            std::uint64_t s1 = 0)
      : key_{seed, domain}, counter_{0, 0, s0, s1} {}

  // Next raw 64-bit draw.
  std::uint64_t next_u64();

  // Uniform double in [0, 1), 53-bit resolution.
  double next_uniform();

  // Uniform double in (0, 1); safe to pass through log().
  double next_uniform_open();

  // Standard normal via Box-Muller (two uniforms per pair, second cached).
  double next_normal();

  // Uniform integer in [0, bound) without modulo bias (bound >= 1).
  std::uint64_t next_below(std::uint64_t bound);

 private:
  void refill();

  philox::Key key_;
  philox::Counter counter_;  // words 0..1 advance per block, 2..3 = substream
  philox::Counter buffer_{};
  int buffer_pos_ = 4;  // 4 = empty
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace motifclust
