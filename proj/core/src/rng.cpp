#include "motifclust/rng.hpp"

#include <cmath>
#include <numbers>

namespace motifclust {

namespace philox {

namespace {

constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi,
                    std::uint64_t& lo) {
  const unsigned __int128 product =
      static_cast<unsigned __int128>(a) * static_cast<unsigned __int128>(b);
  hi = static_cast<std::uint64_t>(product >> 64);
  lo = static_cast<std::uint64_t>(product);
}

inline Counter round_once(const Counter& c, const Key& k) {
  std::uint64_t hi0, lo0, hi1, lo1;
  mulhilo(kMul0, c[0], hi0, lo0);
  mulhilo(kMul1, c[2], hi1, lo1);
  return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

}  // namespace

Counter block(const Counter& counter, const Key& key) {
  Counter c = counter;
  Key k = key;
  for (int r = 0; r < 10; ++r) {
    c = round_once(c, k);
    k[0] += kWeyl0;
    k[1] += kWeyl1;
  }
  return c;
}

}  // namespace philox

void RngStream::refill() {
  buffer_ = philox::block(counter_, key_);
  buffer_pos_ = 0;
  // Advance the 128-bit block index (words 0..1); words 2..3 stay reserved
  // for the substream id, so each substream has 2^128 blocks of headroom.
  if (++counter_[0] == 0) ++counter_[1];
}

std::uint64_t RngStream::next_u64() {
  if (buffer_pos_ >= 4) refill();
  return buffer_[static_cast<std::size_t>(buffer_pos_++)];
}

double RngStream::next_uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::next_uniform_open() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::next_normal() {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  const double u1 = next_uniform_open();
  const double u2 = next_uniform_open();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_normal_ = radius * std::sin(angle);
  has_cached_normal_ = true;
  return radius * std::cos(angle);
}

std::uint64_t RngStream::next_below(std::uint64_t bound) {
  // Rejection sampling on the top of the range keeps the draw exactly
  // uniform; the expected number of retries is < 2 for any bound.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t draw;
  do {
    draw = next_u64();
  } while (draw >= limit);
  return draw % bound;
}

}  // namespace motifclust
