#pragma once

#include <complex>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hyperdeg/direction.hpp"
#include "hyperdeg/polynomial.hpp"
#include "hyperdeg/random.hpp"
#include "hyperdeg/types.hpp"

namespace hyperdeg {

// Axis-aligned box of states. Samplers draw from it; the admissibility
// predicate of the system is what evaluations enforce.
struct Box {
  Vector lower;
  Vector upper;

  int dimension() const { return static_cast<int>(lower.size()); }
  Vector center() const { return 0.5 * (lower + upper); }
  bool contains(const Vector& u) const;
};

// Polytropic ideal gas, state (rho, u, v, p); dp/drho at constant entropy is
// gamma * p / rho.
struct GasDynamicsParams {
  double gamma = 1.4;
};

// Relativistic torus in R^{1+dim}; state U = (u, v, w) in R^{3*dim}, two
// parameter directions (alpha, beta).
struct TorusParams {
  int dim = 2;
};

// Lax system driven by f(U) = sum_k coefficients[k] U^k with U = u + i v.
struct LaxParams {
  std::vector<std::complex<double>> coefficients{0.0, 0.0, 1.0};
};

// Rotationally invariant system u_t + sum_j (f_j(|u|) u)_{x_j} = 0 with one
// profile f_j(r) per space variable.
struct RotationalParams {
  int n = 2;
  std::vector<Polynomial1> profiles{Polynomial1({0.0, 1.0})};
};

// u_t + sum_j M_j u_{x_j} = 0.
struct LinearParams {
  std::vector<Matrix> matrices;
};

// Scalar law w_t + sum_j g_j(w)_{x_j} = 0 with polynomial fluxes.
struct ScalarParams {
  std::vector<Polynomial1> fluxes{Polynomial1({0.0, 0.0, 0.5})};
};

// User-defined conservative system: flux[j][k] is the k-th component of f_j.
struct PolynomialFluxParams {
  int n = 0;
  int m = 0;
  std::vector<std::vector<Polynomial>> flux;
  std::optional<Box> box;
};

using SystemParams = std::variant<GasDynamicsParams, TorusParams, LaxParams, RotationalParams,
                                  LinearParams, ScalarParams, PolynomialFluxParams>;

// One closed-form eigenpair. `field` names the characteristic family; pairs
// sharing a field form one constant-multiplicity eigenvalue. `vector` is the
// representative the formulas fix, when they fix one.
struct AnalyticEigenpair {
  double value = 0.0;
  std::optional<Vector> vector;
  std::string field;
};

using FluxFn = std::function<std::vector<Vector>(const Vector&)>;
using JacobianFn = std::function<Matrix(const Vector&, int)>;
using JacobianDerivativeFn = std::function<Matrix(const Vector&, int, const Vector&)>;
using AdmissibleFn = std::function<bool(const Vector&)>;
using AnalyticEigenFn = std::function<std::vector<AnalyticEigenpair>(const Vector&, const Direction&)>;

// A quasilinear hyperbolic system u_t + sum_j A_j(u) u_{x_j} = 0.
//
// Values are immutable after construction and cheap to copy; all evaluation
// methods are const and safe to call concurrently.
class SystemSpec {
 public:
  struct Definition {
    std::string name;
    std::string description;
    int n_unknowns = 0;
    int m_space = 0;
    bool conservative = false;
    FluxFn flux;                                // present iff conservative
    JacobianFn jacobian;                        // (u, j) -> A_j(u), j zero-based
    JacobianDerivativeFn jacobian_derivative;   // exact d/dt A_j(u + t d) if known
    Box box;
    AdmissibleFn admissible;                    // optional; box membership is not required
    AnalyticEigenFn analytic_eigen;             // optional
    SystemParams params;
  };

  explicit SystemSpec(Definition definition);

  const std::string& name() const { return def_->name; }
  const std::string& description() const { return def_->description; }
  int n_unknowns() const { return def_->n_unknowns; }
  int m_space() const { return def_->m_space; }
  bool conservative() const { return def_->conservative; }
  const Box& box() const { return def_->box; }
  const SystemParams& params() const { return def_->params; }

  bool admissible(const Vector& u) const;
  // Throws DomainError when u has the wrong size or is not admissible.
  void require_admissible(const Vector& u) const;

  Matrix jacobian(const Vector& u, int j) const;
  std::vector<Vector> flux(const Vector& u) const;

  // Directional derivative of A_j along `direction`: exact when the system
  // supplies it, central differences of the matrix entries otherwise.
  Matrix jacobian_derivative(const Vector& u, int j, const Vector& direction) const;
  bool has_exact_jacobian_derivative() const { return static_cast<bool>(def_->jacobian_derivative); }

  bool has_analytic_eigen() const { return static_cast<bool>(def_->analytic_eigen); }
  std::vector<AnalyticEigenpair> analytic_eigen(const Vector& u, const Direction& xi) const;

 private:
  std::shared_ptr<const Definition> def_;
};

// Coefficients of the first-order torus system, computed from U = (u, v, w).
struct TorusCoefficients {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
  double e = 0.0;
  double p = 0.0;
};

TorusCoefficients torus_coefficients(const Vector& state, int dim);

SystemSpec make_gas2d(const GasDynamicsParams& params = {});
SystemSpec make_torus(const TorusParams& params = {});
SystemSpec make_lax(const LaxParams& params = {});
SystemSpec make_rotational(const RotationalParams& params = {});
SystemSpec make_linear(const LinearParams& params);
SystemSpec make_scalar(const ScalarParams& params = {});
SystemSpec make_polynomial_system(const PolynomialFluxParams& params, std::string name = "custom");

// Builds a catalog system by name. Accepted names: gas2d, torus, lax,
// rotational, linear, scalar, scalar-burgers, custom. The params alternative
// must match the family; throws InvalidParameters otherwise.
SystemSpec builtin(std::string_view name, const SystemParams& params);
// Same with the family's default parameters (not available for linear/custom).
SystemSpec builtin(std::string_view name);

struct CatalogEntry {
  std::string name;
  int n_unknowns = 0;
  int m_space = 0;
  bool conservative = false;
  std::string parameters;
  std::string description;
  Box box;
};

std::vector<CatalogEntry> catalog();

// The same system written in unknowns u~ with u = M u~ + q.
SystemSpec transform_unknowns(const SystemSpec& system, const Matrix& m, const Vector& q);

// Lax system flux polynomials: x-flux (a, -b), y-flux (b, a) with
// f(U)/2 = a + i b.
PolynomialFluxParams lax_flux(const LaxParams& params);

// Random two-unknown test systems. Linear: symmetric matrices with entries in
// [-2, 2]. Quadratic: gradients of random cubic potentials, so every A(u, xi)
// is symmetric; at least one second-derivative coefficient has magnitude
// >= 0.5.
PolynomialFluxParams random_linear_flux(Rng& rng, int m);
PolynomialFluxParams random_quadratic_flux(Rng& rng, int m);

// System definition documents (JSON):
//   { "n": 2, "m": 1,
//     "flux": [ [ [ {"coeff": 0.5, "exponents": [2, 0]} ], [ ... ] ] ],
//     "box": { "lower": [...], "upper": [...] } }      // box optional
// flux[j][k] is the term list of component k of f_j.
PolynomialFluxParams read_polynomial_system(std::istream& in);
PolynomialFluxParams parse_polynomial_system(std::string_view text);

}  // namespace hyperdeg
