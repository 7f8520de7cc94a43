// Splittable counter-based random streams (Philox4x32-10, Salmon et al.,
// SC'11).  A stream is addressed by (seed, stream id, element id); distinct
// elements never share a cipher block, so any partitioning of elements
// reproduces the serial draw sequence exactly.

#pragma once

#include <array>
#include <cstdint>

#include "faswpcn/specfun.hpp"

namespace faswpcn::rng {

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Deterministic sub-seed derivation for independent consumers.
inline uint64_t derive_seed(uint64_t seed, uint64_t salt) {
  return splitmix64(seed ^ splitmix64(salt));
}

struct Philox4x32 {
  static constexpr uint32_t kM0 = 0xD2511F53u;
  static constexpr uint32_t kM1 = 0xCD9E8D57u;
  static constexpr uint32_t kW0 = 0x9E3779B9u;
  static constexpr uint32_t kW1 = 0xBB67AE85u;

  static std::array<uint32_t, 4> block(std::array<uint32_t, 4> c,
                                       std::array<uint32_t, 2> k) {
    for (int round = 0; round < 10; ++round) {
      const uint64_t p0 = uint64_t(kM0) * c[0];
      const uint64_t p1 = uint64_t(kM1) * c[2];
      c = {uint32_t(p1 >> 32) ^ c[1] ^ k[0], uint32_t(p1),
           uint32_t(p0 >> 32) ^ c[3] ^ k[1], uint32_t(p0)};
      k[0] += kW0;
      k[1] += kW1;
    }
    return c;
  }
};

class Stream {
 public:
  Stream(uint64_t seed, uint64_t stream_id, uint64_t element = 0)
      : element_(element), block_(0), pos_(2) {
    const uint64_t k = derive_seed(seed, stream_id);
    key_ = {uint32_t(k), uint32_t(k >> 32)};
  }

  /// Uniform draw strictly inside (0, 1).
  double uniform01() {
    if (pos_ == 2) refill();
    const uint64_t v =
        (uint64_t(buf_[2 * pos_]) << 32) | uint64_t(buf_[2 * pos_ + 1]);
    ++pos_;
    return (double(v >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal draw by inverse-CDF transform.
  double normal() { return specfun::std_normal_quantile(uniform01()); }

 private:
  void refill() {
    buf_ = Philox4x32::block({uint32_t(block_), uint32_t(block_ >> 32),
                              uint32_t(element_), uint32_t(element_ >> 32)},
                             key_);
    ++block_;
    pos_ = 0;
  }

  std::array<uint32_t, 2> key_;
  uint64_t element_;
  uint64_t block_;
  std::array<uint32_t, 4> buf_{};
  int pos_;
};

}  // namespace faswpcn::rng
