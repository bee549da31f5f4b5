#pragma once

// Seeded 64-bit generator (splitmix64 update) used for all synthesized
// data: the same seed yields the same stream of doubles bit-for-bit, so
// synthesized fields are reproducible across runs and thread counts.

#include <cstdint>
#include <cmath>

namespace qbe {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1)
  double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

  // uniform in [-1, 1)
  double next_symmetric() { return 2.0 * next_double() - 1.0; }

  // standard normal (Box-Muller; consumes two uniforms per pair)
  double next_gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = next_symmetric();
      v = next_symmetric();
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    have_spare_ = true;
    return u * f;
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace qbe
