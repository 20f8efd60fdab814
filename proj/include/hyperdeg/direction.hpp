#pragma once

#include <cmath>

#include "hyperdeg/types.hpp"

namespace hyperdeg {

// A point of the unit sphere S^{m-1}: the wave-normal direction xi.
class Direction {
 public:
  static constexpr double kTolerance = 1e-12;

  // Throws InvalidParameters unless |xi| = 1 within kTolerance.
  explicit Direction(Vector xi) : xi_(std::move(xi)) {
    if (xi_.size() == 0 || !std::isfinite(xi_.norm()) || std::abs(xi_.norm() - 1.0) > kTolerance) {
      throw InvalidParameters("direction must be a unit vector");
    }
  }

  static Direction normalized(const Vector& v) {
    const double n = v.norm();
    if (!(n > 0.0) || !std::isfinite(n)) throw InvalidParameters("cannot normalize a zero direction");
    return Direction(v / n);
  }

  static Direction axis(int m, int j) { return Direction(Vector::Unit(m, j)); }

  const Vector& vector() const { return xi_; }
  int dimension() const { return static_cast<int>(xi_.size()); }
  double operator()(int j) const { return xi_(j); }
  Direction operator-() const { return Direction(-xi_); }

 private:
  Vector xi_;
};

}  // namespace hyperdeg
