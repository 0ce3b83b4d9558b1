#pragma once

#include <cstdint>
#include <vector>

namespace augward {

// SplitMix64 stream (Steele, Lea & Flood 2014). All draws are integer-only,
// so identical seeds give identical streams on every platform. Streams are
// split by key rather than by sequential draws: child(k) derives an
// independent stream from (state, k) without consuming draws from the
// parent, which keeps per-task draws stable no matter which tasks run.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(mix_seed(seed)) {}

  uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [0, n), unbiased via rejection.
  uint64_t uniform(uint64_t n) {
    if (n == 0) return 0;
    const uint64_t threshold = -n % n;  // 2^64 mod n
    for (;;) {
      uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

  int uniform_int(int n) { return static_cast<int>(uniform(static_cast<uint64_t>(n))); }

  // Independent child stream keyed off the current state without advancing it.
  Rng child(uint64_t key) const {
    Rng r(0);
    r.state_ = mix_seed(state_ ^ (0xD1B54A32D192ED03ULL * (key + 1)));
    return r;
  }

  Rng child(uint64_t k1, uint64_t k2) const { return child(k1).child(k2); }
  Rng child(uint64_t k1, uint64_t k2, uint64_t k3) const { return child(k1).child(k2).child(k3); }

  // In-place Fisher-Yates.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = uniform(i);
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  static uint64_t mix_seed(uint64_t s) {
    s = (s ^ (s >> 33)) * 0xFF51AFD7ED558CCDULL;
    s = (s ^ (s >> 33)) * 0xC4CEB9FE1A85EC53ULL;
    return s ^ (s >> 33);
  }

  uint64_t state_;
};

// Stream tags so purpose-specific child streams never collide.
namespace rng_tag {
constexpr uint64_t init = 1;
constexpr uint64_t shuffle = 2;
constexpr uint64_t augment = 3;
constexpr uint64_t dropout = 4;
constexpr uint64_t fgw_restart = 5;
constexpr uint64_t synthetic = 6;
constexpr uint64_t split = 7;
constexpr uint64_t analysis = 8;
}  // namespace rng_tag

}  // namespace augward
