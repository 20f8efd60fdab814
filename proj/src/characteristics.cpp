#include <algorithm>
#include <cmath>
#include <limits>

#include "hyperdeg/planewave.hpp"

namespace hyperdeg {

double ScalarLaw::speed(double r) const {
  double s = 0.0;
  for (std::size_t j = 0; j < fluxes.size(); ++j) s += xi(static_cast<Eigen::Index>(j)) * fluxes[j].derivative()(r);
  return s;
}

double ScalarLaw::speed_derivative(double r) const {
  double s = 0.0;
  for (std::size_t j = 0; j < fluxes.size(); ++j) {
    s += xi(static_cast<Eigen::Index>(j)) * fluxes[j].derivative().derivative()(r);
  }
  return s;
}

ScalarLaw rotational_modulus_law(const std::vector<Polynomial1>& profiles, const Vector& xi) {
  if (profiles.empty() || static_cast<Eigen::Index>(profiles.size()) != xi.size()) {
    throw InvalidParameters("one profile per space direction is required");
  }
  ScalarLaw law;
  law.xi = xi;
  for (const auto& f : profiles) law.fluxes.push_back(f.shifted_up());
  return law;
}

namespace {

double wrap(double s, double length) { return s - length * std::floor(s / length); }

// Root of s + t lambda(r0(s)) = x, bracketed by the extreme speeds. The map is
// increasing before the crossing time, so bisection is safe.
double foot(const ScalarLaw& law, const std::function<double(double)>& r0, double length, double t, double x,
            double speed_lo, double speed_hi) {
  const auto residual = [&](double s) { return s + t * law.speed(r0(wrap(s, length))) - x; };
  const double pad = 1e-9 * (1.0 + std::abs(t) * (std::abs(speed_lo) + std::abs(speed_hi)));
  double lo = x - t * speed_hi - pad;
  double hi = x - t * speed_lo + pad;
  for (int k = 0; k < 60 && residual(lo) > 0.0; ++k) lo -= (hi - lo);
  for (int k = 0; k < 60 && residual(hi) < 0.0; ++k) hi += (hi - lo);
  for (int it = 0; it < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(x)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (residual(mid) > 0.0) hi = mid;
    else lo = mid;
  }
  return 0.5 * (lo + hi);
}

struct SpeedRange {
  double lo = 0.0;
  double hi = 0.0;
};

SpeedRange speed_range(const ScalarLaw& law, const std::vector<double>& r_values) {
  SpeedRange sr{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (double r : r_values) {
    const double c = law.speed(r);
    sr.lo = std::min(sr.lo, c);
    sr.hi = std::max(sr.hi, c);
  }
  return sr;
}

}  // namespace

CharacteristicsResult scalar_characteristics(const ScalarLaw& law, const std::function<double(double)>& r0,
                                             double length, int cells, double t,
                                             const CharacteristicsOptions& opts) {
  if (!(length > 0.0) || cells < 1 || !(t >= 0.0)) throw InvalidParameters("characteristics: invalid grid or time");
  if (opts.dense_samples < 16) throw InvalidParameters("characteristics: too few dense samples");
  CharacteristicsResult res;
  const int dense = opts.dense_samples;
  const double ds = length / dense;

  std::vector<double> r_dense(dense);
  for (int k = 0; k < dense; ++k) r_dense[k] = r0(k * ds);

  // d/ds lambda(r0(s)) by central differences of the composed map.
  const double h = std::cbrt(std::numeric_limits<double>::epsilon()) * std::max(1.0, length);
  const auto slope = [&](double s) {
    return (law.speed(r0(wrap(s + h, length))) - law.speed(r0(wrap(s - h, length)))) / (2.0 * h);
  };
  int best = 0;
  double best_value = std::numeric_limits<double>::infinity();
  for (int k = 0; k < dense; ++k) {
    const double q = slope(k * ds);
    if (q < best_value) {
      best_value = q;
      best = k;
    }
  }
  // Golden-section refinement around the best dense sample.
  double a = (best - 1) * ds, b = (best + 1) * ds;
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - ratio * (b - a), d = a + ratio * (b - a);
  double fc = slope(c), fd = slope(d);
  for (int it = 0; it < 80; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - ratio * (b - a);
      fc = slope(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + ratio * (b - a);
      fd = slope(d);
    }
  }
  const double refined = std::min(fc, fd);
  if (refined < best_value) {
    best_value = refined;
    res.argmin = wrap(fc < fd ? c : d, length);
  } else {
    res.argmin = best * ds;
  }
  res.min_speed_gradient = best_value;
  // Slopes within the rounding noise of the difference quotient count as flat,
  // so a constant r0 does not report a huge but finite crossing time.
  double speed_scale = 1.0;
  for (double r : r_dense) speed_scale = std::max(speed_scale, std::abs(law.speed(r)));
  const double noise = 64.0 * std::numeric_limits<double>::epsilon() * speed_scale / (2.0 * h);
  res.crossing_time = best_value < -noise ? -1.0 / best_value : std::numeric_limits<double>::infinity();

  // Foot map monotonicity on the dense grid, including the periodic wrap.
  std::vector<double> x(dense);
  for (int k = 0; k < dense; ++k) x[k] = k * ds + t * law.speed(r_dense[k]);
  res.injective = true;
  for (int k = 0; k < dense && res.injective; ++k) {
    const double next = k + 1 < dense ? x[k + 1] : x[0] + length;
    res.injective = next - x[k] > 0.0;
  }

  // Nonlinearity over the sampled range of r0.
  const auto [rmin, rmax] = std::minmax_element(r_dense.begin(), r_dense.end());
  res.genuinely_nonlinear = true;
  for (int k = 0; k < opts.range_samples; ++k) {
    const double r = opts.range_samples == 1 ? *rmin : *rmin + (*rmax - *rmin) * k / (opts.range_samples - 1);
    double total = 0.0;
    for (const auto& g : law.fluxes) total += std::abs(g.derivative().derivative()(r));
    if (!(total > opts.nonlinearity_floor)) {
      res.genuinely_nonlinear = false;
      break;
    }
  }

  res.grid = cell_centres(length, cells);
  if (res.injective) {
    const SpeedRange sr = speed_range(law, r_dense);
    std::vector<double> prof(cells);
    for (int i = 0; i < cells; ++i) {
      prof[i] = r0(wrap(foot(law, r0, length, t, res.grid[i], sr.lo, sr.hi), length));
    }
    res.profile = std::move(prof);
  }
  return res;
}

SplitSolution rotational_split_solve(const RotationalParams& params, const Vector& xi, const ProfileFn& u0,
                                     double length, int cells, double t, int rk_steps) {
  if (rk_steps < 1) throw InvalidParameters("split solve: rk_steps must be positive");
  const ScalarLaw law = rotational_modulus_law(params.profiles, xi);
  const auto r0 = [&](double s) { return u0(s).norm(); };
  const auto s0 = [&](double s) -> Vector {
    const Vector u = u0(s);
    return u / u.norm();
  };

  CharacteristicsOptions opts;
  double rmin = std::numeric_limits<double>::infinity();
  std::vector<double> r_dense(opts.dense_samples);
  for (int k = 0; k < opts.dense_samples; ++k) {
    r_dense[k] = r0(k * length / opts.dense_samples);
    rmin = std::min(rmin, r_dense[k]);
  }
  if (!(rmin > 0.0)) throw DomainError("split solve: |u0| must stay positive");
  if (u0(0.0).size() != params.n) throw InvalidParameters("split solve: profile has wrong dimension");

  const CharacteristicsResult ch = scalar_characteristics(law, r0, length, cells, t, opts);
  if (!(t < ch.crossing_time) || !ch.injective || !ch.profile) {
    throw DomainError("split solve: requested time is past the characteristic crossing time");
  }

  const SpeedRange sr = speed_range(law, r_dense);
  const auto modulus = [&](double tau, double x) {
    if (tau <= 0.0) return r0(wrap(x, length));
    return r0(wrap(foot(law, r0, length, tau, x, sr.lo, sr.hi), length));
  };
  const auto transport = [&](double r) {
    double c = 0.0;
    for (std::size_t j = 0; j < params.profiles.size(); ++j) c += xi(static_cast<Eigen::Index>(j)) * params.profiles[j](r);
    return c;
  };

  SplitSolution sol;
  sol.grid = ch.grid;
  sol.modulus = *ch.profile;
  sol.crossing_time = ch.crossing_time;
  const double dtau = t / rk_steps;
  for (int i = 0; i < cells; ++i) {
    double x = sol.grid[i];
    double tau = t;
    if (t > 0.0) {
      for (int k = 0; k < rk_steps; ++k) {
        const double k1 = transport(modulus(tau, x));
        const double k2 = transport(modulus(tau - 0.5 * dtau, x - 0.5 * dtau * k1));
        const double k3 = transport(modulus(tau - 0.5 * dtau, x - 0.5 * dtau * k2));
        const double k4 = transport(modulus(tau - dtau, x - dtau * k3));
        x -= dtau * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
        tau -= dtau;
      }
    }
    const Vector s = s0(wrap(x, length));
    sol.unit.push_back(s);
    sol.values.push_back(sol.modulus[i] * s);
  }
  return sol;
}

SplitComparison compare_split_direct(const RotationalParams& params, const Vector& xi, const ProfileFn& u0,
                                     double length, int cells, double t) {
  SplitComparison cmp;
  cmp.cells = cells;
  cmp.cell_width = length / cells;
  cmp.time = t;
  cmp.split = rotational_split_solve(params, xi, u0, length, cells, t);

  PlaneWaveProblem p{.system = make_rotational(params),
                     .xi = Direction::normalized(xi),
                     .initial = u0,
                     .length = length,
                     .cells = cells,
                     .cfl = 0.45,
                     .t_end = t,
                     .blowup_threshold = std::numeric_limits<double>::infinity(),
                     .snapshot_times = {},
                     .stop_at_blowup = false,
                     .max_steps = 5'000'000};
  cmp.direct = evolve(p);
  if (cmp.direct.status != EvolutionStatus::CompletedSmooth) {
    throw DomainError(std::string("split comparison: direct evolution ended with ") + to_string(cmp.direct.status));
  }
  for (int i = 0; i < cells; ++i) {
    cmp.sup_gap = std::max(cmp.sup_gap, (cmp.split.values[i] - cmp.direct.final_values[i]).cwiseAbs().maxCoeff());
    cmp.modulus_residual = std::max(cmp.modulus_residual, std::abs(cmp.split.values[i].norm() - cmp.split.modulus[i]));
  }
  return cmp;
}

}  // namespace hyperdeg
