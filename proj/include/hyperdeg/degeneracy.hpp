#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "hyperdeg/spectral.hpp"

namespace hyperdeg {

struct DerivativeOptions {
  // Base step h = step_scale * max(1, |u|); along r the parameter step is h / |r|.
  double step_scale = std::cbrt(std::numeric_limits<double>::epsilon());
  // Half-step comparison: |D(h) - D(h/2)| <= richardson_rel * max(1, |D(h)|).
  double richardson_rel = 1e-7;
  // |r(u +- h r) - r(u)| > jump_rel * |r(u)| is a representative jump.
  double jump_rel = 0.1;
  EigenTolerances eigen;
};

// Base finite-difference step at u.
double base_step(const Vector& u, const DerivativeOptions& opts = {});

struct GnEstimate {
  double value = 0.0;
  std::string method;         // perturbation-formula | finite-difference
  std::string lambda_source;  // analytic | numeric | cluster-mean (finite-difference only)
  std::optional<double> check;
  std::string check_method;
  double step = 0.0;
};

// grad_u lambda_i . r_i at (u, xi) for the eigenvalue at sorted position `field`,
// using the representative convention of fix_representative. Simple fields use
// the perturbation identity l_i (D_r A) r_i, checked against a difference
// quotient of lambda; clusters difference the analytic lambda (checked against
// the numerical cluster mean) or, without analytic data, the cluster mean
// (checked against the trace identity).
GnEstimate lambda_directional_derivative(const SystemSpec& sys, const Vector& u, const Direction& xi, int field,
                                         const DerivativeOptions& opts = {});
GnEstimate lambda_directional_derivative(const SystemSpec& sys, const EigenDecomposition& base, const Vector& u,
                                         const Direction& xi, int field, const DerivativeOptions& opts = {});

struct SelfDerivative {
  Vector value;       // (r(u + t r) - r(u - t r)) / 2t
  Vector half_step;   // same with t / 2
  Vector representative;
  Representative kind = Representative::Normalized;
  double step = 0.0;  // t
  double projective_defect = 0.0;
};

// {grad r_ik . r_i}_k by central differences along u +- t r_i, t = h / |r_i|.
// Throws RepresentativeJump or StepError.
SelfDerivative eigenvector_self_derivative(const SystemSpec& sys, const Vector& u, const Direction& xi, int field,
                                           const DerivativeOptions& opts = {});
SelfDerivative eigenvector_self_derivative(const SystemSpec& sys, const EigenDecomposition& base, const Vector& u,
                                           const Direction& xi, int field, const DerivativeOptions& opts = {});

// |(I - P) D_r r| / |r|^2 with P the projector onto r, or onto the whole
// eigenspace when r is a numerical cluster basis vector.
double projective_defect(const SystemSpec& sys, const Vector& u, const Direction& xi, int field,
                         const DerivativeOptions& opts = {});

struct FieldIndicators {
  Vector u;
  Vector xi;
  int field_index = 0;  // sorted position
  std::string field;    // analytic label, empty for numerical systems
  int cluster_size = 1;
  std::vector<int> cluster;  // positions sharing the eigenvalue
  double eigenvalue = 0.0;
  Representative representative = Representative::Normalized;

  std::optional<double> gn_value;
  std::string gn_method;
  std::string gn_lambda_source;
  std::optional<double> gn_check;
  std::string gn_check_method;
  bool gn_agrees = true;

  std::optional<Vector> cld_values;
  std::optional<Vector> cld_half_step;
  std::optional<double> projective_defect;
  double step = 0.0;

  // One entry per failed sub-indicator, "<ErrorKind>: message".
  std::vector<std::string> errors;

  bool indeterminate() const { return !errors.empty(); }
};

// Agreement tolerance between the two gn routes for step h.
double gn_agreement_tolerance(double h);

FieldIndicators indicators(const SystemSpec& sys, const Vector& u, const Direction& xi, int field,
                           const DerivativeOptions& opts = {});
// One record per sorted position, sharing one decomposition. Errors of the
// base decomposition propagate; per-field failures are recorded in `errors`.
std::vector<FieldIndicators> indicators_all(const SystemSpec& sys, const Vector& u, const Direction& xi,
                                            const DerivativeOptions& opts = {});

// Name of the error class, for tallies ("RepresentativeJump", ...).
std::string error_kind(const std::exception& e);

}  // namespace hyperdeg
