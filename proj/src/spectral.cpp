#include "hyperdeg/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hyperdeg {

namespace {

double spectral_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

// Unit length, largest-magnitude component positive. Components within
// kTieBand of the largest count as tied and the lowest index wins, so exact
// ties (symmetric states) do not flip the sign inside a difference stencil.
constexpr double kTieBand = 1e-3;

void normalize_simple(Eigen::Ref<Vector> r) {
  r.normalize();
  const double largest = r.cwiseAbs().maxCoeff();
  Eigen::Index arg = 0;
  while (std::abs(r(arg)) < (1.0 - kTieBand) * largest) ++arg;
  if (r(arg) < 0.0) r = -r;
}

Vector sorted_real_spectrum(const Matrix& a, double norm, const EigenTolerances& tol) {
  if (a.rows() != a.cols() || a.rows() == 0) throw InvalidParameters("eigen: matrix must be square and non-empty");
  if (!a.allFinite()) throw NotHyperbolic("eigen: matrix has non-finite entries");
  Eigen::EigenSolver<Matrix> solver(a, false);
  if (solver.info() != Eigen::Success) throw NotHyperbolic("eigen: eigenvalue iteration did not converge");
  const auto& ev = solver.eigenvalues();
  Vector values(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (std::abs(ev(i).imag()) > tol.imag * norm) {
      throw NotHyperbolic("eigen: eigenvalue with imaginary part " + std::to_string(ev(i).imag()));
    }
    values(i) = ev(i).real();
  }
  std::sort(values.begin(), values.end());
  return values;
}

void check_completeness(const Matrix& right, const EigenTolerances& tol) {
  Matrix normalized = right;
  for (Eigen::Index j = 0; j < normalized.cols(); ++j) {
    const double len = normalized.col(j).norm();
    if (!(len > 0.0)) throw IncompleteEigenbasis("eigen: zero eigenvector");
    normalized.col(j) /= len;
  }
  const double det = std::abs(normalized.determinant());
  if (!(det > tol.complete)) {
    throw IncompleteEigenbasis("eigen: right eigenvectors are not a basis (|det| = " + std::to_string(det) + ")");
  }
}

Matrix inverse_of(const Matrix& right) {
  Eigen::FullPivLU<Matrix> lu(right);
  if (!lu.isInvertible()) throw IncompleteEigenbasis("eigen: right eigenvector matrix is singular");
  return lu.inverse();
}

// Rotates the orthonormal columns q onto the span nearest to p.
Matrix procrustes(const Matrix& q, const Matrix& p) {
  Eigen::JacobiSVD<Matrix> svd(q.transpose() * p, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return q * svd.matrixU() * svd.matrixV().transpose();
}

}  // namespace

const char* to_string(Representative kind) {
  switch (kind) {
    case Representative::Normalized: return "normalized";
    case Representative::ClusterBasis: return "cluster-basis";
    case Representative::Aligned: return "aligned";
    case Representative::Analytic: return "analytic";
  }
  return "unknown";
}

Matrix assemble(const SystemSpec& sys, const Vector& u, const Direction& xi) {
  if (xi.dimension() != sys.m_space()) throw InvalidParameters("direction has wrong dimension");
  Matrix a = Matrix::Zero(sys.n_unknowns(), sys.n_unknowns());
  for (int j = 0; j < sys.m_space(); ++j) {
    if (xi(j) != 0.0) a += xi(j) * sys.jacobian(u, j);
  }
  return a;
}

Vector spectrum(const Matrix& a, const EigenTolerances& tol) {
  return sorted_real_spectrum(a, spectral_norm(a), tol);
}

EigenDecomposition eigen(const Matrix& a, const EigenTolerances& tol) {
  EigenDecomposition d;
  d.matrix = a;
  d.matrix_norm = spectral_norm(a);
  d.values = sorted_real_spectrum(a, d.matrix_norm, tol);
  const int n = d.size();

  const double radius = d.values.cwiseAbs().maxCoeff();
  const double threshold = tol.group * std::max(1.0, radius);
  d.group_of.assign(n, 0);
  d.groups.push_back({0});
  for (int i = 1; i < n; ++i) {
    if (d.values(i) - d.values(i - 1) > threshold) d.groups.emplace_back();
    d.groups.back().push_back(i);
    d.group_of[i] = static_cast<int>(d.groups.size()) - 1;
  }

  d.right.resize(n, n);
  d.kind.assign(n, Representative::Normalized);
  std::vector<double> means;
  for (const auto& g : d.groups) {
    const int k = static_cast<int>(g.size());
    double mu = 0.0;
    for (int i : g) mu += d.values(i);
    mu /= k;
    means.push_back(mu);
    const Matrix shifted = a - mu * Matrix::Identity(n, n);
    Eigen::JacobiSVD<Matrix> svd(shifted, Eigen::ComputeFullV);
    const Matrix basis = svd.matrixV().rightCols(k);
    const double resid = (shifted * basis).colwise().norm().maxCoeff();
    if (resid > tol.residual * d.matrix_norm) {
      throw IncompleteEigenbasis("eigen: eigenvalue " + std::to_string(mu) + " of algebraic multiplicity " +
                                 std::to_string(k) + " lacks a full eigenspace");
    }
    for (int c = 0; c < k; ++c) d.right.col(g[c]) = basis.col(c);
    if (k == 1) {
      normalize_simple(d.right.col(g[0]));
    } else {
      for (int i : g) d.kind[i] = Representative::ClusterBasis;
    }
  }
  for (std::size_t c = 1; c < means.size(); ++c) d.min_gap = std::min(d.min_gap, means[c] - means[c - 1]);

  check_completeness(d.right, tol);
  d.left = inverse_of(d.right);
  return d;
}

EigenDecomposition fix_representative(EigenDecomposition d, const SystemSpec& sys, const Vector& u,
                                      const Direction& xi, const EigenDecomposition* previous,
                                      const EigenTolerances& tol) {
  const int n = d.size();
  if (n != sys.n_unknowns()) throw InvalidParameters("decomposition does not match the system");
  const std::vector<std::vector<int>> numeric_groups = d.groups;
  bool changed = false;

  if (sys.has_analytic_eigen()) {
    const auto pairs = sys.analytic_eigen(u, xi);
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return pairs[x].value < pairs[y].value; });
    const double scale = std::max(1.0, d.matrix_norm);
    d.field.resize(n);
    d.analytic_index.resize(n);
    for (int p = 0; p < n; ++p) {
      const auto& pair = pairs[order[p]];
      if (std::abs(pair.value - d.values(p)) > tol.residual * scale) {
        throw InconsistentRepresentative(sys.name() + ": analytic eigenvalue " + std::to_string(pair.value) +
                                         " does not match numerical " + std::to_string(d.values(p)));
      }
      d.field[p] = pair.field;
      d.analytic_index[p] = order[p];
      if (pair.vector) {
        const Vector& r = *pair.vector;
        if (r.size() != n || !r.allFinite() || !(r.norm() > 0.0)) {
          throw InconsistentRepresentative(sys.name() + ": analytic eigenvector for field '" + pair.field +
                                           "' is degenerate");
        }
        const double resid = (d.matrix * r - pair.value * r).norm();
        if (resid > tol.residual * d.matrix_norm * r.norm()) {
          throw InconsistentRepresentative(sys.name() + ": analytic eigenvector for field '" + pair.field +
                                           "' fails the residual check");
        }
        d.right.col(p) = r;
        d.kind[p] = Representative::Analytic;
      }
    }
    // Groups follow field labels, in order of first appearance.
    std::vector<std::string> labels;
    d.groups.clear();
    for (int p = 0; p < n; ++p) {
      auto it = std::find(labels.begin(), labels.end(), d.field[p]);
      if (it == labels.end()) {
        labels.push_back(d.field[p]);
        d.groups.emplace_back();
        it = labels.end() - 1;
      }
      const int g = static_cast<int>(it - labels.begin());
      d.groups[g].push_back(p);
      d.group_of[p] = g;
    }
    d.min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t g = 0; g < d.groups.size(); ++g) {
      for (std::size_t h = g + 1; h < d.groups.size(); ++h) {
        d.min_gap = std::min(d.min_gap, std::abs(d.values(d.groups[g][0]) - d.values(d.groups[h][0])));
      }
    }
    changed = true;
  }

  if (previous != nullptr) {
    if (previous->size() != n) throw RepresentativeJump("continuation context has a different size");
    for (const auto& g : numeric_groups) {
      std::vector<int> cols;
      for (int i : g) {
        if (d.kind[i] == Representative::ClusterBasis) cols.push_back(i);
      }
      if (cols.size() < 2) continue;
      const int k = static_cast<int>(cols.size());
      Matrix q(n, k), p(n, k);
      for (int c = 0; c < k; ++c) {
        const Representative prev_kind = previous->kind[cols[c]];
        if (prev_kind != Representative::ClusterBasis && prev_kind != Representative::Aligned) {
          throw RepresentativeJump("cluster structure changed across the continuation step");
        }
        q.col(c) = d.right.col(cols[c]);
        p.col(c) = previous->right.col(cols[c]);
      }
      const int pg = previous->group_of[cols[0]];
      if (static_cast<int>(previous->groups[pg].size()) < k) {
        throw RepresentativeJump("cluster structure changed across the continuation step");
      }
      const Matrix aligned = procrustes(q, p);
      for (int c = 0; c < k; ++c) {
        d.right.col(cols[c]) = aligned.col(c);
        d.kind[cols[c]] = Representative::Aligned;
      }
      changed = true;
    }
  }

  if (changed) {
    check_completeness(d.right, tol);
    d.left = inverse_of(d.right);
  }
  return d;
}

EigenDecomposition decompose(const SystemSpec& sys, const Vector& u, const Direction& xi,
                             const EigenDecomposition* previous, const EigenTolerances& tol) {
  return fix_representative(eigen(assemble(sys, u, xi), tol), sys, u, xi, previous, tol);
}

}  // namespace hyperdeg
