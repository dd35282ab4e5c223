#pragma once

#include <cmath>
#include <cstdint>

namespace relspec {

// Small deterministic generator (splitmix64). Distributions from the standard
// library are implementation defined, which would break the bit-identical
// reproducibility contract, so the few transforms needed live here.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // uniform in [a, b)
  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  // standard normal, Box-Muller without caching so the stream is position independent
  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  // +1 or -1 with equal probability
  double rademacher() { return (next_u64() & 1ULL) ? 1.0 : -1.0; }

private:
  std::uint64_t state_;
};

}  // namespace relspec
