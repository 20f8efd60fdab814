#pragma once

#include <complex>
#include <string>
#include <string_view>
#include <vector>

#include "hyperdeg/types.hpp"

namespace hyperdeg {

// One monomial coeff * x_1^e_1 * ... * x_n^e_n.
struct Term {
  double coeff = 0.0;
  std::vector<int> exponents;
};

// Multivariate polynomial with real coefficients. Like terms are merged on
// insertion and zero terms dropped, so two equal polynomials built in the same
// order have identical term lists.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(int variables);
  Polynomial(int variables, const std::vector<Term>& terms);

  int variables() const { return variables_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const;

  void add_term(double coeff, const std::vector<int>& exponents);

  double operator()(const Vector& x) const;
  Polynomial derivative(int var) const;

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator*=(double scale);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator*(Polynomial a, double s) { return a *= s; }
  friend Polynomial operator*(double s, Polynomial a) { return a *= s; }
  Polynomial operator-() const { return *this * -1.0; }

 private:
  int variables_ = 0;
  std::vector<Term> terms_;
};

// Univariate polynomial sum_k coeffs[k] x^k.
class Polynomial1 {
 public:
  Polynomial1() = default;
  explicit Polynomial1(std::vector<double> coeffs);

  const std::vector<double>& coeffs() const { return coeffs_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }

  double operator()(double x) const;
  Polynomial1 derivative() const;
  // x * p(x)
  Polynomial1 shifted_up() const;

  std::string to_string(std::string_view variable) const;

 private:
  std::vector<double> coeffs_;
};

// Parses sums of terms like "3*x^2", "x^2/2", "-0.5x", "4" into coefficients
// indexed by power. A coefficient may carry an "i" suffix ("2i*U^3"); the real
// variant rejects those.
std::vector<std::complex<double>> parse_complex_polynomial(std::string_view text,
                                                           std::string_view variable);
Polynomial1 parse_polynomial1(std::string_view text, std::string_view variable);

}  // namespace hyperdeg
