#include "hyperdeg/degeneracy.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace hyperdeg {

namespace {

enum class LambdaSource { Analytic, Numeric, ClusterMean };

const char* source_name(LambdaSource s) {
  switch (s) {
    case LambdaSource::Analytic: return "analytic";
    case LambdaSource::Numeric: return "numeric";
    case LambdaSource::ClusterMean: return "cluster-mean";
  }
  return "unknown";
}

const AnalyticEigenpair& matching_pair(const std::vector<AnalyticEigenpair>& pairs, const EigenDecomposition& base,
                                       int field) {
  const auto& pair = pairs.at(base.analytic_index[field]);
  if (pair.field != base.field[field]) throw RepresentativeJump("analytic field labels changed across the stencil");
  return pair;
}

bool same_layout(const EigenDecomposition& a, const EigenDecomposition& b) {
  if (a.groups.size() != b.groups.size()) return false;
  for (std::size_t g = 0; g < a.groups.size(); ++g) {
    if (a.groups[g] != b.groups[g]) return false;
  }
  return true;
}

double eval_lambda(const SystemSpec& sys, const EigenDecomposition& base, int field, const Vector& state,
                   const Direction& xi, LambdaSource source, const DerivativeOptions& opts) {
  if (source == LambdaSource::Analytic) return matching_pair(sys.analytic_eigen(state, xi), base, field).value;

  const Vector values = spectrum(assemble(sys, state, xi), opts.eigen);
  const double threshold = opts.eigen.group * std::max(1.0, values.cwiseAbs().maxCoeff());
  const auto& group = base.groups[base.group_of[field]];
  const int lo = source == LambdaSource::Numeric ? field : *std::min_element(group.begin(), group.end());
  const int hi = source == LambdaSource::Numeric ? field : *std::max_element(group.begin(), group.end());
  const bool separated = (lo == 0 || values(lo) - values(lo - 1) > threshold) &&
                         (hi == values.size() - 1 || values(hi + 1) - values(hi) > threshold);
  if (source == LambdaSource::Numeric) {
    if (!separated) throw RepresentativeJump("simple eigenvalue became clustered across the stencil");
    return values(field);
  }
  if (!separated) throw Indeterminate("eigenvalue cluster could not be matched across the stencil");
  double mean = 0.0;
  for (int i = lo; i <= hi; ++i) mean += values(i);
  return mean / (hi - lo + 1);
}

Vector eval_vector(const SystemSpec& sys, const EigenDecomposition& base, int field, const Vector& state,
                   const Direction& xi, const DerivativeOptions& opts) {
  switch (base.kind[field]) {
    case Representative::Analytic: {
      const auto pairs = sys.analytic_eigen(state, xi);
      const auto& pair = matching_pair(pairs, base, field);
      if (!pair.vector) throw RepresentativeJump("analytic representative disappeared across the stencil");
      return *pair.vector;
    }
    case Representative::Normalized: {
      const EigenDecomposition d = decompose(sys, state, xi, nullptr, opts.eigen);
      if (!same_layout(d, base) || d.kind[field] != Representative::Normalized) {
        throw RepresentativeJump("eigenvalue multiplicity changed across the stencil");
      }
      return d.right.col(field);
    }
    case Representative::ClusterBasis:
    case Representative::Aligned: {
      const EigenDecomposition d = decompose(sys, state, xi, &base, opts.eigen);
      if (!same_layout(d, base) || d.kind[field] != Representative::Aligned) {
        throw RepresentativeJump("eigenspace dimension changed across the stencil");
      }
      return d.right.col(field);
    }
  }
  throw Indeterminate("unknown representative kind");
}

double central(const std::function<double(double)>& phi, double t) { return (phi(t) - phi(-t)) / (2.0 * t); }

// Central difference with the half-step comparison; returns the full-step value.
double checked_central(const std::function<double(double)>& phi, double t, const DerivativeOptions& opts) {
  const double d1 = central(phi, t);
  const double d2 = central(phi, 0.5 * t);
  if (!std::isfinite(d1) || !std::isfinite(d2) ||
      std::abs(d1 - d2) > opts.richardson_rel * std::max(1.0, std::abs(d1))) {
    throw StepError("half-step comparison failed: " + std::to_string(d1) + " vs " + std::to_string(d2));
  }
  return d1;
}

Matrix directional_a_derivative(const SystemSpec& sys, const Vector& u, const Direction& xi, const Vector& r) {
  Matrix d = Matrix::Zero(sys.n_unknowns(), sys.n_unknowns());
  for (int j = 0; j < sys.m_space(); ++j) {
    if (xi(j) != 0.0) d += xi(j) * sys.jacobian_derivative(u, j, r);
  }
  return d;
}

}  // namespace

double base_step(const Vector& u, const DerivativeOptions& opts) {
  return opts.step_scale * std::max(1.0, u.norm());
}

double gn_agreement_tolerance(double h) { return std::max(1e-6, 1e2 * h * h); }

GnEstimate lambda_directional_derivative(const SystemSpec& sys, const Vector& u, const Direction& xi, int field,
                                         const DerivativeOptions& opts) {
  return lambda_directional_derivative(sys, decompose(sys, u, xi, nullptr, opts.eigen), u, xi, field, opts);
}

GnEstimate lambda_directional_derivative(const SystemSpec& sys, const EigenDecomposition& base, const Vector& u,
                                         const Direction& xi, int field, const DerivativeOptions& opts) {
  if (field < 0 || field >= base.size()) throw InvalidParameters("field index out of range");
  const Vector r = base.right.col(field);
  const double t = base_step(u, opts) / r.norm();
  const bool analytic_lambda = base.has_analytic();
  const auto along = [&](LambdaSource src) {
    return [&, src](double s) { return eval_lambda(sys, base, field, u + s * r, xi, src, opts); };
  };

  GnEstimate est;
  est.step = t;
  if (base.simple(field)) {
    est.method = "perturbation-formula";
    est.value = base.left.row(field) * directional_a_derivative(sys, u, xi, r) * r;
    const LambdaSource src = analytic_lambda ? LambdaSource::Analytic : LambdaSource::Numeric;
    try {
      est.check = checked_central(along(src), t, opts);
      est.check_method = std::string("finite-difference/") + source_name(src);
    } catch (const Error& e) {
      est.check_method = std::string("failed: ") + e.what();
    }
    return est;
  }

  est.method = "finite-difference";
  if (analytic_lambda) {
    est.lambda_source = source_name(LambdaSource::Analytic);
    est.value = checked_central(along(LambdaSource::Analytic), t, opts);
    try {
      est.check = checked_central(along(LambdaSource::ClusterMean), t, opts);
      est.check_method = "finite-difference/cluster-mean";
    } catch (const Error& e) {
      est.check_method = std::string("failed: ") + e.what();
    }
    return est;
  }

  est.lambda_source = source_name(LambdaSource::ClusterMean);
  est.value = checked_central(along(LambdaSource::ClusterMean), t, opts);
  // d/dt of the cluster mean is tr(L_g (D_r A) R_g) / k.
  const auto& group = base.groups[base.group_of[field]];
  const Matrix da = directional_a_derivative(sys, u, xi, r);
  double trace = 0.0;
  for (int i : group) trace += base.left.row(i) * da * base.right.col(i);
  est.check = trace / static_cast<double>(group.size());
  est.check_method = "perturbation-formula/cluster-trace";
  return est;
}

SelfDerivative eigenvector_self_derivative(const SystemSpec& sys, const Vector& u, const Direction& xi, int field,
                                           const DerivativeOptions& opts) {
  return eigenvector_self_derivative(sys, decompose(sys, u, xi, nullptr, opts.eigen), u, xi, field, opts);
}

SelfDerivative eigenvector_self_derivative(const SystemSpec& sys, const EigenDecomposition& base, const Vector& u,
                                           const Direction& xi, int field, const DerivativeOptions& opts) {
  if (field < 0 || field >= base.size()) throw InvalidParameters("field index out of range");
  SelfDerivative out;
  out.representative = base.right.col(field);
  out.kind = base.kind[field];
  const Vector& r = out.representative;
  const double rn = r.norm();
  const double t = base_step(u, opts) / rn;
  out.step = t;

  const auto at = [&](double s) {
    Vector v = eval_vector(sys, base, field, u + s * r, xi, opts);
    if ((v - r).norm() > opts.jump_rel * rn) {
      throw RepresentativeJump("eigenvector representative jumped across the stencil");
    }
    return v;
  };
  out.value = (at(t) - at(-t)) / (2.0 * t);
  out.half_step = (at(0.5 * t) - at(-0.5 * t)) / t;
  const double scale = std::max(1.0, out.value.cwiseAbs().maxCoeff());
  if (!out.value.allFinite() || (out.value - out.half_step).cwiseAbs().maxCoeff() > opts.richardson_rel * scale) {
    throw StepError("half-step comparison failed for the eigenvector derivative");
  }

  // Orthogonal part of D_r r, relative to |r|^2.
  Vector orth;
  if (out.kind == Representative::ClusterBasis || out.kind == Representative::Aligned) {
    const auto& group = base.groups[base.group_of[field]];
    Matrix span(base.size(), static_cast<Eigen::Index>(group.size()));
    for (std::size_t c = 0; c < group.size(); ++c) span.col(static_cast<Eigen::Index>(c)) = base.right.col(group[c]);
    Eigen::HouseholderQR<Matrix> qr(span);
    const Matrix q = qr.householderQ() * Matrix::Identity(span.rows(), span.cols());
    orth = out.value - q * (q.transpose() * out.value);
  } else {
    orth = out.value - (r.dot(out.value) / (rn * rn)) * r;
  }
  out.projective_defect = orth.norm() / (rn * rn);
  return out;
}

double projective_defect(const SystemSpec& sys, const Vector& u, const Direction& xi, int field,
                         const DerivativeOptions& opts) {
  return eigenvector_self_derivative(sys, u, xi, field, opts).projective_defect;
}

std::string error_kind(const std::exception& e) {
  if (dynamic_cast<const InvalidParameters*>(&e)) return "InvalidParameters";
  if (dynamic_cast<const DomainError*>(&e)) return "DomainError";
  if (dynamic_cast<const UnsupportedOperation*>(&e)) return "UnsupportedOperation";
  if (dynamic_cast<const NotHyperbolic*>(&e)) return "NotHyperbolic";
  if (dynamic_cast<const IncompleteEigenbasis*>(&e)) return "IncompleteEigenbasis";
  if (dynamic_cast<const InconsistentRepresentative*>(&e)) return "InconsistentRepresentative";
  if (dynamic_cast<const RepresentativeJump*>(&e)) return "RepresentativeJump";
  if (dynamic_cast<const StepError*>(&e)) return "StepError";
  if (dynamic_cast<const Indeterminate*>(&e)) return "Indeterminate";
  if (dynamic_cast<const ParseError*>(&e)) return "ParseError";
  return "Error";
}

namespace {

FieldIndicators evaluate_field(const SystemSpec& sys, const EigenDecomposition& base, const Vector& u,
                               const Direction& xi, int field, const DerivativeOptions& opts) {
  FieldIndicators fi;
  fi.u = u;
  fi.xi = xi.vector();
  fi.field_index = field;
  fi.field = base.has_analytic() ? base.field[field] : std::string();
  fi.cluster = base.groups[base.group_of[field]];
  fi.cluster_size = static_cast<int>(fi.cluster.size());
  fi.eigenvalue = base.values(field);
  fi.representative = base.kind[field];
  fi.step = base_step(u, opts);

  try {
    const GnEstimate gn = lambda_directional_derivative(sys, base, u, xi, field, opts);
    fi.gn_value = gn.value;
    fi.gn_method = gn.method;
    fi.gn_lambda_source = gn.lambda_source;
    fi.gn_check = gn.check;
    fi.gn_check_method = gn.check_method;
    if (gn.check) fi.gn_agrees = std::abs(gn.value - *gn.check) <= gn_agreement_tolerance(fi.step);
  } catch (const Error& e) {
    fi.errors.push_back(error_kind(e) + ": " + e.what());
  }
  try {
    const SelfDerivative sd = eigenvector_self_derivative(sys, base, u, xi, field, opts);
    fi.cld_values = sd.value;
    fi.cld_half_step = sd.half_step;
    fi.projective_defect = sd.projective_defect;
  } catch (const Error& e) {
    fi.errors.push_back(error_kind(e) + ": " + e.what());
  }
  return fi;
}

}  // namespace

FieldIndicators indicators(const SystemSpec& sys, const Vector& u, const Direction& xi, int field,
                           const DerivativeOptions& opts) {
  const EigenDecomposition base = decompose(sys, u, xi, nullptr, opts.eigen);
  if (field < 0 || field >= base.size()) throw InvalidParameters("field index out of range");
  return evaluate_field(sys, base, u, xi, field, opts);
}

std::vector<FieldIndicators> indicators_all(const SystemSpec& sys, const Vector& u, const Direction& xi,
                                            const DerivativeOptions& opts) {
  const EigenDecomposition base = decompose(sys, u, xi, nullptr, opts.eigen);
  std::vector<FieldIndicators> out;
  out.reserve(base.size());
  for (int i = 0; i < base.size(); ++i) out.push_back(evaluate_field(sys, base, u, xi, i, opts));
  return out;
}

}  // namespace hyperdeg
