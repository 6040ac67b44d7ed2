#pragma once

#include <cstdint>

#include "cde/complex.hpp"

namespace cde {

/// splitmix64: tiny deterministic generator for the seeded diagnostics.
/// Output stream depends only on the seed, not on the platform's <random>.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1) with 53 random bits.
  Real uniform() { return Real(next() >> 11) / Real(9007199254740992.0); }

  Real uniform(const Real& lo, const Real& hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform on the disk |z| <= radius.
  Cplx disk(const Real& radius) {
    Real r = radius * sqrt(uniform());
    Real th = uniform() * 2 * pi_value();
    return polar(r, th);
  }

 private:
  std::uint64_t state_;
};

}  // namespace cde
