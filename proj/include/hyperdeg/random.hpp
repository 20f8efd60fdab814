#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "hyperdeg/types.hpp"

namespace hyperdeg {

// Seeded generator with platform-independent real-valued draws. The standard
// distributions are implementation-defined, which would make reports differ
// between standard libraries, so the conversions are done here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller (one value per call, second discarded).
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  Vector uniform_vector(const Vector& lo, const Vector& hi) {
    Vector v(lo.size());
    for (Eigen::Index i = 0; i < lo.size(); ++i) v(i) = uniform(lo(i), hi(i));
    return v;
  }

  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace hyperdeg
