#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace rcc {

/// Small deterministic PRNG (SplitMix64) with named substream derivation.
///
/// All randomness in the library flows from one master seed. Independent
/// streams are derived by hashing (seed, purpose, ids) so that results do
/// not depend on the order in which unrelated components consume draws.
class Rng {
 public:
  Rng() : state_(0x9e3779b97f4a7c15ULL) {}
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1).
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [lo, hi] inclusive.
  int uniform_int(int lo, int hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(next_u64() % span);
  }

  /// Standard normal via Marsaglia polar method (spare cached in the state).
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = uniform(-1.0, 1.0);
      v = uniform(-1.0, 1.0);
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    have_spare_ = true;
    return u * m;
  }

  std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

namespace detail {
inline std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}
}  // namespace detail

/// Derives a substream from (seed, purpose, id0, id1). Stable across runs.
inline Rng derive_stream(std::uint64_t seed, std::string_view purpose,
                         std::uint64_t id0 = 0, std::uint64_t id1 = 0) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  h = detail::fnv1a(h, &seed, sizeof(seed));
  h = detail::fnv1a(h, purpose.data(), purpose.size());
  h = detail::fnv1a(h, &id0, sizeof(id0));
  h = detail::fnv1a(h, &id1, sizeof(id1));
  Rng r(h);
  r.next_u64();  // scramble away from the raw hash
  return r;
}

}  // namespace rcc
