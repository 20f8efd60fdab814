#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace hyperdeg {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Base of every error the library raises. The CLI maps the subclasses onto
// exit codes, so keep the hierarchy flat and meaningful.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unknown system name or parameters outside their valid range.
class InvalidParameters : public Error {
 public:
  using Error::Error;
};

// State outside the admissible set, or with the wrong dimension.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Operation not defined for this kind of system (e.g. flux of a
// nonconservative system, theorem check with n != 2).
class UnsupportedOperation : public Error {
 public:
  using Error::Error;
};

class NotHyperbolic : public Error {
 public:
  using Error::Error;
};

class IncompleteEigenbasis : public Error {
 public:
  using Error::Error;
};

// An analytic eigenvector failed its residual check: the closed form and the
// Jacobians disagree, which points at a transcription bug.
class InconsistentRepresentative : public Error {
 public:
  using Error::Error;
};

// Eigenvector representative changed discontinuously across a finite
// difference stencil (sign flip, component swap, cluster split).
class RepresentativeJump : public Error {
 public:
  using Error::Error;
};

// Half-step Richardson comparison disagreed.
class StepError : public Error {
 public:
  using Error::Error;
};

// The quantity cannot be determined (e.g. clustered eigenvalue without
// analytic data whose cluster could not be matched across a stencil).
class Indeterminate : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace hyperdeg
