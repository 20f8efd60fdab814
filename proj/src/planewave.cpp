#include "hyperdeg/planewave.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hyperdeg {

Vector ReducedSystem::flux(const Vector& w) const {
  const auto f = sys_.flux(w);
  Vector g = Vector::Zero(sys_.n_unknowns());
  for (int j = 0; j < sys_.m_space(); ++j) g += xi_(j) * f[j];
  return g;
}

ReducedSystem reduce(const SystemSpec& sys, const Direction& xi) {
  if (xi.dimension() != sys.m_space()) throw InvalidParameters("direction has wrong dimension");
  return ReducedSystem(sys, xi);
}

ProfileShape parse_profile_shape(std::string_view name) {
  if (name == "sine") return ProfileShape::Sine;
  if (name == "tanh-step") return ProfileShape::TanhStep;
  if (name == "bump") return ProfileShape::Bump;
  throw InvalidParameters("unknown profile '" + std::string(name) + "' (expected sine, tanh-step or bump)");
}

const char* to_string(ProfileShape shape) {
  switch (shape) {
    case ProfileShape::Sine: return "sine";
    case ProfileShape::TanhStep: return "tanh-step";
    case ProfileShape::Bump: return "bump";
  }
  return "unknown";
}

double profile_shape(ProfileShape shape, double s) {
  switch (shape) {
    case ProfileShape::Sine: return -std::sin(s);
    case ProfileShape::TanhStep: return std::tanh(4.0 * std::sin(s));
    case ProfileShape::Bump: {
      const double d = s - std::numbers::pi;
      return std::exp(-4.0 * d * d);
    }
  }
  return 0.0;
}

ProfileFn make_profile(ProfileShape shape, double amplitude, Vector base, Vector direction) {
  if (base.size() != direction.size()) throw InvalidParameters("profile base and direction sizes differ");
  return [=](double s) -> Vector { return base + (amplitude * profile_shape(shape, s)) * direction; };
}

const char* to_string(EvolutionStatus s) {
  switch (s) {
    case EvolutionStatus::CompletedSmooth: return "CompletedSmooth";
    case EvolutionStatus::BlowupDetected: return "BlowupDetected";
    case EvolutionStatus::CFLViolation: return "CFLViolation";
    case EvolutionStatus::DomainExit: return "DomainExit";
  }
  return "unknown";
}

std::vector<double> cell_centres(double length, int cells) {
  std::vector<double> x(cells);
  const double ds = length / cells;
  for (int i = 0; i < cells; ++i) x[i] = (i + 0.5) * ds;
  return x;
}

double gradient_sup(const std::vector<Vector>& w, double ds) {
  double g = 0.0;
  const std::size_t n = w.size();
  for (std::size_t i = 0; i < n; ++i) {
    g = std::max(g, (w[(i + 1) % n] - w[i]).cwiseAbs().maxCoeff());
  }
  return g / ds;
}

namespace {

Vector cell_mean(const std::vector<Vector>& w) {
  Vector m = Vector::Zero(w.front().size());
  for (const auto& v : w) m += v;
  return m / static_cast<double>(w.size());
}

double oscillation(const std::vector<Vector>& w) {
  Vector lo = w.front(), hi = w.front();
  for (const auto& v : w) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  return (hi - lo).maxCoeff();
}

struct Cell {
  double speed = 0.0;  // spectral radius of A(w, xi)
  Matrix plus;         // A^+ (upwind only)
  Matrix minus;        // A^-
};

}  // namespace

EvolutionResult evolve(const PlaneWaveProblem& p) {
  if (p.cells < 16) throw InvalidParameters("evolve: at least 16 cells are required");
  if (!(p.cfl > 0.0 && p.cfl < 1.0)) throw InvalidParameters("evolve: cfl must lie in (0, 1)");
  if (!(p.t_end > 0.0) || !std::isfinite(p.t_end)) throw InvalidParameters("evolve: t_end must be positive");
  if (!(p.length > 0.0)) throw InvalidParameters("evolve: length must be positive");
  if (!p.initial) throw InvalidParameters("evolve: no initial profile");

  const ReducedSystem red = reduce(p.system, p.xi);
  const SystemSpec& sys = p.system;
  const int n = p.cells;
  const double ds = p.length / n;

  EvolutionResult res;
  res.scheme = red.conservative() ? "rusanov" : "upwind";
  res.cell_width = ds;
  res.grid = cell_centres(p.length, n);
  std::vector<Vector> w(n);
  for (int i = 0; i < n; ++i) {
    w[i] = p.initial(res.grid[i]);
    if (!sys.admissible(w[i])) {
      throw DomainError("evolve: initial profile leaves the admissible domain at s = " + std::to_string(res.grid[i]));
    }
  }

  res.initial_gradient = gradient_sup(w, ds);
  if (p.blowup_threshold) {
    res.threshold = *p.blowup_threshold;
  } else if (res.initial_gradient > 0.0) {
    res.threshold = std::min(1e3 * res.initial_gradient, 0.125 * oscillation(w) / ds);
  } else {
    res.threshold = std::numeric_limits<double>::infinity();
  }

  std::vector<double> pending = p.snapshot_times;
  std::sort(pending.begin(), pending.end());
  std::erase_if(pending, [&](double s) { return s < 0.0 || s > p.t_end; });
  std::size_t next_snap = 0;
  const auto take_snapshots = [&](double t) {
    while (next_snap < pending.size() && pending[next_snap] <= t + 1e-12 * std::max(1.0, t)) {
      res.snapshots.push_back({pending[next_snap], w});
      ++next_snap;
    }
  };

  const Vector mean0 = cell_mean(w);
  double t = 0.0;
  double g_prev = res.initial_gradient;
  res.gradient_series.emplace_back(0.0, g_prev);
  if (red.conservative()) res.conservation_series.emplace_back(0.0, 0.0);
  take_snapshots(0.0);

  std::vector<Cell> cells(n);
  const auto analyse = [&](const std::vector<Vector>& state) {
    for (int i = 0; i < n; ++i) {
      const Matrix a = red.coefficient(state[i]);
      if (red.conservative()) {
        cells[i].speed = spectrum(a).cwiseAbs().maxCoeff();
      } else {
        const EigenDecomposition d = eigen(a);
        cells[i].speed = d.values.cwiseAbs().maxCoeff();
        const Vector lp = d.values.cwiseMax(0.0);
        const Vector lm = d.values.cwiseMin(0.0);
        cells[i].plus = d.right * lp.asDiagonal() * d.left;
        cells[i].minus = d.right * lm.asDiagonal() * d.left;
      }
    }
  };
  const auto finish = [&](EvolutionStatus status, std::string message) {
    res.status = status;
    res.message = std::move(message);
    res.final_time = t;
    res.final_values = w;
    return res;
  };

  std::vector<Vector> fluxes(red.conservative() ? n : 0);
  std::vector<Vector> next(n);
  const double t_tol = 1e-12 * std::max(1.0, p.t_end);
  try {
    analyse(w);
  } catch (const Error& e) {
    return finish(EvolutionStatus::DomainExit, std::string("reduced system is not hyperbolic: ") + e.what());
  }
  // `cells` always describes the current w.
  while (t < p.t_end - t_tol) {
    double smax = 0.0;
    for (const auto& c : cells) smax = std::max(smax, c.speed);
    if (!std::isfinite(smax)) return finish(EvolutionStatus::CFLViolation, "non-finite wave speed");
    double dt = smax > 0.0 ? p.cfl * ds / smax : p.t_end - t;
    dt = std::min(dt, p.t_end - t);
    if (next_snap < pending.size() && pending[next_snap] > t) dt = std::min(dt, pending[next_snap] - t);
    if (dt <= 1e-14 * std::max(1.0, p.t_end) || res.steps >= p.max_steps) {
      res.exit_time = t;
      return finish(EvolutionStatus::CFLViolation, "time step budget exhausted");
    }

    const double lambda = dt / ds;
    if (red.conservative()) {
      for (int i = 0; i < n; ++i) fluxes[i] = red.flux(w[i]);
      for (int i = 0; i < n; ++i) {
        const int l = (i + n - 1) % n, r = (i + 1) % n;
        const double a_right = std::max(cells[i].speed, cells[r].speed);
        const double a_left = std::max(cells[l].speed, cells[i].speed);
        const Vector f_right = 0.5 * (fluxes[i] + fluxes[r]) - 0.5 * a_right * (w[r] - w[i]);
        const Vector f_left = 0.5 * (fluxes[l] + fluxes[i]) - 0.5 * a_left * (w[i] - w[l]);
        next[i] = w[i] - lambda * (f_right - f_left);
      }
    } else {
      for (int i = 0; i < n; ++i) {
        const int l = (i + n - 1) % n, r = (i + 1) % n;
        next[i] = w[i] - lambda * (cells[i].plus * (w[i] - w[l]) + cells[i].minus * (w[r] - w[i]));
      }
    }

    for (int i = 0; i < n; ++i) {
      if (!sys.admissible(next[i])) {
        res.exit_time = t + dt;
        res.exit_cell = i;
        return finish(EvolutionStatus::DomainExit, "state left the admissible domain");
      }
    }
    w.swap(next);
    t += dt;
    ++res.steps;

    try {
      analyse(w);
      double s_new = 0.0;
      for (const auto& c : cells) s_new = std::max(s_new, c.speed);
      if (s_new * dt / ds > 1.0) {
        res.exit_time = t;
        return finish(EvolutionStatus::CFLViolation, "wave speed grew past the step budget");
      }
    } catch (const Error& e) {
      return finish(EvolutionStatus::DomainExit, std::string("reduced system lost hyperbolicity: ") + e.what());
    }

    const double g = gradient_sup(w, ds);
    res.gradient_series.emplace_back(t, g);
    if (red.conservative()) {
      res.conservation_series.emplace_back(t, (cell_mean(w) - mean0).cwiseAbs().maxCoeff());
    }
    take_snapshots(t);
    if (!res.blowup_time && g >= res.threshold && g_prev < res.threshold) {
      const double t_prev = t - dt;
      res.blowup_time = t_prev + (res.threshold - g_prev) / (g - g_prev) * dt;
      if (p.stop_at_blowup) return finish(EvolutionStatus::BlowupDetected, "gradient threshold crossed");
    }
    g_prev = g;
  }
  return finish(res.blowup_time ? EvolutionStatus::BlowupDetected : EvolutionStatus::CompletedSmooth,
                res.blowup_time ? "gradient threshold crossed" : "reached t_end");
}

BlowupConfirmation confirm_blowup(const PlaneWaveProblem& problem) {
  BlowupConfirmation c;
  c.coarse = evolve(problem);
  PlaneWaveProblem fine = problem;
  fine.cells = 2 * problem.cells;
  c.fine = evolve(fine);
  if (c.coarse.blowup_time && c.fine.blowup_time) {
    c.relative_difference = std::abs(*c.fine.blowup_time - *c.coarse.blowup_time) / *c.coarse.blowup_time;
    c.confirmed = c.relative_difference <= 0.25;
  }
  return c;
}

}  // namespace hyperdeg
