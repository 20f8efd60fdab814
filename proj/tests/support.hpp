#pragma once

// Hand-rolled generators shared by the property tests. They draw from their
// own seeded stream so that test inputs never depend on library sampling.

#include <cmath>
#include <cstdint>
#include <vector>

#include "hyperdeg/systems.hpp"

namespace testsupport {

using hyperdeg::Matrix;
using hyperdeg::Vector;

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : state_(seed * 0x9E3779B97F4A7C15ull + 1) {}

  // splitmix64
  std::uint64_t bits() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  double uniform() { return static_cast<double>(bits() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int integer(int lo, int hi) { return lo + static_cast<int>(bits() % static_cast<std::uint64_t>(hi - lo + 1)); }

  Vector in_box(const hyperdeg::Box& box) {
    Vector v(box.lower.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = uniform(box.lower(i), box.upper(i));
    return v;
  }

  // Admissible state of the system's box (rejection).
  Vector state(const hyperdeg::SystemSpec& sys) {
    for (;;) {
      Vector u = in_box(sys.box());
      if (sys.admissible(u)) return u;
    }
  }

  Vector unit(int m) {
    for (;;) {
      Vector v(m);
      for (int j = 0; j < m; ++j) v(j) = uniform(-1.0, 1.0);
      const double r = v.norm();
      if (r > 0.1 && r <= 1.0) return v / r;
    }
  }

  hyperdeg::Direction direction(int m) { return hyperdeg::Direction(unit(m)); }

  // Well-conditioned invertible matrix: identity plus a bounded perturbation.
  Matrix invertible(int n, double spread = 0.5) {
    for (;;) {
      Matrix a = Matrix::Identity(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) += uniform(-spread, spread);
      Eigen::JacobiSVD<Matrix> svd(a);
      const auto& s = svd.singularValues();
      if (s(s.size() - 1) > 0.2 && s(0) / s(s.size() - 1) < 10.0) return a;
    }
  }

 private:
  std::uint64_t state_;
};

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b))); }

}  // namespace testsupport
