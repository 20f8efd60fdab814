#include <cmath>
#include <numbers>

#include "hyperdeg/classify.hpp"

namespace hyperdeg {

void SamplingPlan::validate() const {
  if (grid_per_axis < 2) throw InvalidParameters("grid_per_axis must be >= 2");
  if (random_states < 0 || random_directions < 0 || direction_grid < 0) {
    throw InvalidParameters("sample counts must be non-negative");
  }
  if (!(eps_zero > 0.0) || !(eps_zero < eps_nonzero)) {
    throw InvalidParameters("tolerances must satisfy 0 < eps_zero < eps_nonzero");
  }
  if (max_grid_states < 1 || max_rejections < 1) throw InvalidParameters("sampling limits must be positive");
  if (!(error_warning_rate >= 0.0)) throw InvalidParameters("error_warning_rate must be >= 0");
}

std::vector<Vector> direction_grid(int m, int count) {
  std::vector<Vector> dirs;
  if (m < 1) throw InvalidParameters("direction dimension must be positive");
  if (m == 1) {
    dirs.push_back(Vector::Constant(1, 1.0));
    dirs.push_back(Vector::Constant(1, -1.0));
    return dirs;
  }
  if (m == 2) {
    for (int k = 0; k < count; ++k) {
      const double theta = 2.0 * std::numbers::pi * k / count;
      dirs.push_back((Vector(2) << std::cos(theta), std::sin(theta)).finished());
    }
    return dirs;
  }
  if (m == 3) {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < count; ++k) {
      const double z = 1.0 - (2.0 * k + 1.0) / count;
      const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
      dirs.push_back((Vector(3) << rho * std::cos(golden * k), rho * std::sin(golden * k), z).finished());
    }
    return dirs;
  }
  Rng rng(0x5eed0fd1ec7ull + static_cast<std::uint64_t>(m));
  for (int k = 0; k < count; ++k) {
    Vector v(m);
    do {
      for (int j = 0; j < m; ++j) v(j) = rng.normal();
    } while (v.norm() < 1e-3);
    dirs.push_back(v / v.norm());
  }
  return dirs;
}

SampleSet build_samples(const SystemSpec& sys, const SamplingPlan& plan) {
  plan.validate();
  const int n = sys.n_unknowns();
  const int m = sys.m_space();
  SampleSet set;
  set.box = plan.state_box ? *plan.state_box : sys.box();
  if (set.box.dimension() != n) throw InvalidParameters("sampling box has wrong dimension");
  if ((set.box.upper - set.box.lower).minCoeff() < 0.0) throw InvalidParameters("sampling box has lower > upper");

  double grid_count = std::pow(static_cast<double>(plan.grid_per_axis), n);
  set.grid_skipped = grid_count > plan.max_grid_states;
  if (!set.grid_skipped) {
    const int total = static_cast<int>(grid_count);
    for (int flat = 0; flat < total; ++flat) {
      Vector u(n);
      int rest = flat;
      for (int i = 0; i < n; ++i) {
        const int k = rest % plan.grid_per_axis;
        rest /= plan.grid_per_axis;
        u(i) = set.box.lower(i) + (set.box.upper(i) - set.box.lower(i)) * k / (plan.grid_per_axis - 1);
      }
      if (sys.admissible(u)) {
        set.states.push_back(u);
        set.on_grid.push_back(true);
        ++set.grid_states;
      } else {
        ++set.rejected;
      }
    }
  }

  Rng rng(plan.seed);
  for (int s = 0; s < plan.random_states; ++s) {
    for (int attempt = 0; attempt < plan.max_rejections; ++attempt) {
      Vector u = rng.uniform_vector(set.box.lower, set.box.upper);
      if (sys.admissible(u)) {
        set.states.push_back(std::move(u));
        set.on_grid.push_back(false);
        ++set.random_states;
        break;
      }
      ++set.rejected;
    }
  }

  const std::vector<Vector> grid_dirs = direction_grid(m, plan.direction_grid);
  for (const Vector& u : set.states) {
    for (const Vector& xi : grid_dirs) set.points.push_back({u, xi});
    for (int k = 0; k < plan.random_directions; ++k) {
      Vector xi(m);
      if (m == 1) {
        xi(0) = rng.uniform() < 0.5 ? -1.0 : 1.0;
      } else {
        do {
          for (int j = 0; j < m; ++j) xi(j) = rng.normal();
        } while (xi.norm() < 1e-3);
        xi /= xi.norm();
      }
      set.points.push_back({u, xi});
    }
  }
  if (set.points.empty()) throw InvalidParameters("sampling plan produced no admissible samples");
  return set;
}

}  // namespace hyperdeg
