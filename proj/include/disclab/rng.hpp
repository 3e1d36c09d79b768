#pragma once

#include <cmath>
#include <cstdint>

namespace disclab {

// Counter-based pseudo-random generator: output i of a stream is the
// SplitMix64 finalizer applied to key + i * golden-ratio increment. Pure
// 64-bit integer arithmetic, so sequences are identical on every platform.
// Substreams derive a fresh key by hashing (key, index); independent trials
// can therefore share one master seed without coordinating draw counts.
//
// Normal variates use the Marsaglia polar method. That choice is fixed:
// changing it would silently change every seeded run.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : key_(mix(seed ^ kKeySalt)) {}

  // Stream that is statistically independent of this one and of other
  // indices. Derivations may be chained.
  Rng substream(std::uint64_t index) const {
    return Rng(mix(key_ ^ mix(index + kStreamSalt)), raw_key_tag{});
  }

  std::uint64_t next_u64() { return mix(key_ + ++counter_ * kGolden); }

  // Uniform in [0, 1) with 53 random mantissa bits.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, bound). Rejection sampling keeps it unbiased.
  std::uint64_t uniform_below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  // Standard normal (polar method, one spare cached per pair).
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    have_spare_ = true;
    return u * f;
  }

 private:
  struct raw_key_tag {};
  Rng(std::uint64_t key, raw_key_tag) : key_(key) {}

  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
  }

  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
  static constexpr std::uint64_t kKeySalt = 0x6A09E667F3BCC908ull;
  static constexpr std::uint64_t kStreamSalt = 0xBB67AE8584CAA73Bull;

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Stable 64-bit seed for a (base, a, b) triple; used to hand child
// components their own reproducible streams.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a,
                                 std::uint64_t b = 0) {
  Rng r = Rng(base).substream(a).substream(b);
  return r.next_u64();
}

}  // namespace disclab
