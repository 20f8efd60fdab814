#pragma once

#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "hyperdeg/spectral.hpp"

namespace hyperdeg {

// The system restricted to plane waves u(t, x) = w(t, x . xi):
// w_t + A(w, xi) w_s = 0, with flux g(w) = sum_j xi_j f_j(w) when conservative.
class ReducedSystem {
 public:
  ReducedSystem(SystemSpec sys, Direction xi) : sys_(std::move(sys)), xi_(std::move(xi)) {}

  const SystemSpec& system() const { return sys_; }
  const Direction& direction() const { return xi_; }
  bool conservative() const { return sys_.conservative(); }
  int n_unknowns() const { return sys_.n_unknowns(); }

  Matrix coefficient(const Vector& w) const { return assemble(sys_, w, xi_); }
  Vector flux(const Vector& w) const;

 private:
  SystemSpec sys_;
  Direction xi_;
};

ReducedSystem reduce(const SystemSpec& sys, const Direction& xi);

using ProfileFn = std::function<Vector(double)>;

enum class ProfileShape { Sine, TanhStep, Bump };

ProfileShape parse_profile_shape(std::string_view name);
const char* to_string(ProfileShape shape);

// Scalar shape on [0, 2 pi): sine -> -sin(s); tanh-step -> tanh(4 sin s);
// bump -> exp(-4 (s - pi)^2). Each is periodic (the bump to below 1e-17).
double profile_shape(ProfileShape shape, double s);

// base + amplitude * shape(s) * direction.
ProfileFn make_profile(ProfileShape shape, double amplitude, Vector base, Vector direction);

struct PlaneWaveProblem {
  SystemSpec system;
  Direction xi;
  ProfileFn initial;
  double length = 2.0 * std::numbers::pi;
  int cells = 256;
  double cfl = 0.45;
  double t_end = 1.0;
  // Gradient-sup threshold; default min(1e3 * G0, 0.125 * osc(w0) / ds).
  std::optional<double> blowup_threshold;
  std::vector<double> snapshot_times;
  bool stop_at_blowup = true;
  long max_steps = 5'000'000;
};

enum class EvolutionStatus { CompletedSmooth, BlowupDetected, CFLViolation, DomainExit };

const char* to_string(EvolutionStatus s);

struct Snapshot {
  double time = 0.0;
  std::vector<Vector> values;  // one per cell
};

struct EvolutionResult {
  EvolutionStatus status = EvolutionStatus::CompletedSmooth;
  std::string scheme;          // rusanov | upwind
  double final_time = 0.0;
  long steps = 0;
  double cell_width = 0.0;
  double initial_gradient = 0.0;
  double threshold = 0.0;
  std::optional<double> blowup_time;
  std::optional<double> exit_time;  // DomainExit / CFLViolation
  std::optional<int> exit_cell;
  std::string message;
  std::vector<double> grid;    // cell centres
  std::vector<Snapshot> snapshots;
  std::vector<std::pair<double, double>> gradient_series;      // (t, sup |dw/ds|)
  std::vector<std::pair<double, double>> conservation_series;  // (t, max_k |mean_k(t) - mean_k(0)|)
  std::vector<Vector> final_values;
};

// Cell centres (i + 1/2) ds of the periodic grid.
std::vector<double> cell_centres(double length, int cells);

// Discrete gradient sup max_i |w_{i+1} - w_i|_inf / ds on the periodic grid.
double gradient_sup(const std::vector<Vector>& w, double ds);

// First-order evolution: Rusanov (local Lax-Friedrichs) on g for conservative
// systems, upwind on A^+- = R Lambda^+- L otherwise. Periodic boundaries.
EvolutionResult evolve(const PlaneWaveProblem& problem);

struct BlowupConfirmation {
  EvolutionResult coarse;
  EvolutionResult fine;  // 2 * cells
  bool confirmed = false;
  double relative_difference = 0.0;  // |t_b(2N) - t_b(N)| / t_b(N)
};

// Reruns at twice the resolution; confirmed when both runs detect blowup and
// the times differ by at most 25 %.
BlowupConfirmation confirm_blowup(const PlaneWaveProblem& problem);

// Scalar law r_t + sum_j g_j(r)_{x_j} = 0 restricted to plane waves along xi:
// r_t + lambda(r) r_s = 0 with lambda(r) = sum_j xi_j g_j'(r).
struct ScalarLaw {
  std::vector<Polynomial1> fluxes;
  Vector xi;

  double speed(double r) const;
  double speed_derivative(double r) const;
};

// The law for the modulus r = |u| of the rotational system: g_j(r) = r f_j(r).
ScalarLaw rotational_modulus_law(const std::vector<Polynomial1>& profiles, const Vector& xi);

struct CharacteristicsResult {
  // -1 / min_s d/ds lambda(r0(s)); infinity when the minimum is >= 0.
  double crossing_time = 0.0;
  double min_speed_gradient = 0.0;
  double argmin = 0.0;
  // Foot map s -> s + t lambda(r0(s)) strictly increasing on the dense grid.
  bool injective = true;
  std::vector<double> grid;
  std::optional<std::vector<double>> profile;  // r(t, grid), when injective
  // sum_j |g_j''(r)| > 0 at every sampled r in the range of r0.
  bool genuinely_nonlinear = false;
};

struct CharacteristicsOptions {
  int dense_samples = 4096;  // foot-map and minimum search resolution
  int range_samples = 257;   // r-range sampling for the nonlinearity test
  double nonlinearity_floor = 1e-12;
};

// Solves the scalar law by characteristics on [0, length) at time t, sampling
// the solution at `cells` cell centres.
CharacteristicsResult scalar_characteristics(const ScalarLaw& law, const std::function<double(double)>& r0,
                                             double length, int cells, double t,
                                             const CharacteristicsOptions& opts = {});

struct SplitSolution {
  std::vector<double> grid;
  std::vector<Vector> values;    // u = r s
  std::vector<double> modulus;   // r
  std::vector<Vector> unit;      // s
  double crossing_time = 0.0;
};

// Rotational system along xi by the split r = |u|, s = u / |u|: r from
// characteristics, s transported with speed sum_j f_j(r) xi_j (traced back by
// RK4). Requires |u0| > 0 and t below the crossing time.
SplitSolution rotational_split_solve(const RotationalParams& params, const Vector& xi, const ProfileFn& u0,
                                     double length, int cells, double t, int rk_steps = 64);

struct SplitComparison {
  int cells = 0;
  double cell_width = 0.0;
  double time = 0.0;
  SplitSolution split;
  EvolutionResult direct;
  double sup_gap = 0.0;          // max_i |u_split - u_direct|_inf
  double modulus_residual = 0.0; // max_i ||u_split| - r|, round-off by construction
};

// Split solution against `evolve` on the original system at the same grid.
SplitComparison compare_split_direct(const RotationalParams& params, const Vector& xi, const ProfileFn& u0,
                                     double length, int cells, double t);

}  // namespace hyperdeg
