#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "hyperdeg/direction.hpp"
#include "hyperdeg/systems.hpp"

namespace hyperdeg {

// Relative tolerances of the eigensolver. Each scales with the matrix:
// grouping with max(1, spectral radius), the others with ||A||.
struct EigenTolerances {
  double group = 1e-7;     // eigenvalues closer than this share a cluster
  double imag = 1e-8;      // |Im lambda| allowed before NotHyperbolic
  double residual = 1e-6;  // ||A r - lambda r|| / (||A|| ||r||)
  double complete = 1e-8;  // |det| of the column-normalized right matrix
};

// How a right eigenvector column was chosen.
enum class Representative {
  Normalized,    // simple eigenvalue, unit length, largest component positive
  ClusterBasis,  // orthonormal basis of a numerical eigenspace
  Aligned,       // cluster basis rotated onto a previous decomposition
  Analytic,      // closed-form vector supplied by the system
};

const char* to_string(Representative kind);

struct EigenDecomposition {
  Matrix matrix;                     // A(u, xi)
  double matrix_norm = 0.0;          // spectral norm of A
  Vector values;                     // ascending
  std::vector<std::vector<int>> groups;
  std::vector<int> group_of;         // position -> index into groups
  Matrix right;                      // columns r_i
  Matrix left;                       // rows l_i, left * right = I
  double min_gap = std::numeric_limits<double>::infinity();  // between clusters
  std::vector<Representative> kind;
  // Filled when the system supplies analytic data: field label per position
  // and the index of the analytic pair assigned to that position.
  std::vector<std::string> field;
  std::vector<int> analytic_index;

  int size() const { return static_cast<int>(values.size()); }
  bool simple(int i) const { return groups[group_of[i]].size() == 1; }
  bool has_analytic() const { return !field.empty(); }
};

// A(u, xi) = sum_j xi_j A_j(u).
Matrix assemble(const SystemSpec& sys, const Vector& u, const Direction& xi);

// Real eigendecomposition with clusters. Throws NotHyperbolic or
// IncompleteEigenbasis.
EigenDecomposition eigen(const Matrix& a, const EigenTolerances& tol = {});

// Sorted real eigenvalues only; throws NotHyperbolic.
Vector spectrum(const Matrix& a, const EigenTolerances& tol = {});

// Applies the representative convention. With analytic data, every closed-form
// vector replaces the numerical one after a residual check and the groups
// follow the field labels. Numerical clusters are rotated onto `previous`
// when given (orthogonal Procrustes); the cluster layout must then match or
// RepresentativeJump is thrown.
EigenDecomposition fix_representative(EigenDecomposition decomp, const SystemSpec& sys, const Vector& u,
                                      const Direction& xi, const EigenDecomposition* previous = nullptr,
                                      const EigenTolerances& tol = {});

// assemble + eigen + fix_representative.
EigenDecomposition decompose(const SystemSpec& sys, const Vector& u, const Direction& xi,
                             const EigenDecomposition* previous = nullptr, const EigenTolerances& tol = {});

}  // namespace hyperdeg
