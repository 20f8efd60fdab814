#include "hyperdeg/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

namespace hyperdeg {

namespace {

double int_power(double x, int e) {
  double r = 1.0;
  for (int k = 0; k < e; ++k) r *= x;
  return r;
}

}  // namespace

Polynomial::Polynomial(int variables) : variables_(variables) {
  if (variables < 1) throw InvalidParameters("polynomial needs at least one variable");
}

Polynomial::Polynomial(int variables, const std::vector<Term>& terms) : Polynomial(variables) {
  for (const auto& t : terms) add_term(t.coeff, t.exponents);
}

int Polynomial::degree() const {
  int d = 0;
  for (const auto& t : terms_) {
    int s = 0;
    for (int e : t.exponents) s += e;
    d = std::max(d, s);
  }
  return d;
}

void Polynomial::add_term(double coeff, const std::vector<int>& exponents) {
  if (static_cast<int>(exponents.size()) != variables_) {
    throw InvalidParameters("term has " + std::to_string(exponents.size()) +
                            " exponents, polynomial has " + std::to_string(variables_) +
                            " variables");
  }
  for (int e : exponents) {
    if (e < 0) throw InvalidParameters("negative exponent in polynomial term");
  }
  if (!std::isfinite(coeff)) throw InvalidParameters("non-finite polynomial coefficient");
  if (coeff == 0.0) return;
  auto it = std::find_if(terms_.begin(), terms_.end(),
                         [&](const Term& t) { return t.exponents == exponents; });
  if (it == terms_.end()) {
    terms_.push_back({coeff, exponents});
    return;
  }
  it->coeff += coeff;
  if (it->coeff == 0.0) terms_.erase(it);
}

double Polynomial::operator()(const Vector& x) const {
  double sum = 0.0;
  for (const auto& t : terms_) {
    double v = t.coeff;
    for (int k = 0; k < variables_; ++k) v *= int_power(x(k), t.exponents[k]);
    sum += v;
  }
  return sum;
}

Polynomial Polynomial::derivative(int var) const {
  Polynomial d(variables_);
  for (const auto& t : terms_) {
    const int e = t.exponents[var];
    if (e == 0) continue;
    auto exps = t.exponents;
    exps[var] = e - 1;
    d.add_term(t.coeff * e, exps);
  }
  return d;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  if (variables_ == 0) variables_ = other.variables_;
  for (const auto& t : other.terms_) add_term(t.coeff, t.exponents);
  return *this;
}

Polynomial& Polynomial::operator*=(double scale) {
  if (scale == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.coeff *= scale;
  return *this;
}

Polynomial1::Polynomial1(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
}

double Polynomial1::operator()(double x) const {
  double v = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) v = v * x + *it;
  return v;
}

Polynomial1 Polynomial1::derivative() const {
  std::vector<double> d;
  for (std::size_t k = 1; k < coeffs_.size(); ++k) d.push_back(coeffs_[k] * static_cast<double>(k));
  return Polynomial1(std::move(d));
}

Polynomial1 Polynomial1::shifted_up() const {
  if (coeffs_.empty()) return {};
  std::vector<double> c(coeffs_.size() + 1, 0.0);
  std::copy(coeffs_.begin(), coeffs_.end(), c.begin() + 1);
  return Polynomial1(std::move(c));
}

std::string Polynomial1::to_string(std::string_view variable) const {
  if (coeffs_.empty()) return "0";
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    const double c = coeffs_[k];
    if (c == 0.0) continue;
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    first = false;
    const double a = std::abs(c);
    if (k == 0) {
      os << a;
      continue;
    }
    if (a != 1.0) os << a << "*";
    os << variable;
    if (k > 1) os << "^" << k;
  }
  return os.str();
}

namespace {

class TermParser {
 public:
  TermParser(std::string_view text, std::string_view variable)
      : text_(text), variable_(variable) {}

  std::vector<std::complex<double>> parse() {
    std::vector<std::complex<double>> coeffs;
    skip_space();
    if (pos_ == text_.size()) fail("empty polynomial");
    bool first = true;
    while (pos_ < text_.size()) {
      double sign = 1.0;
      if (peek() == '+' || peek() == '-') {
        sign = peek() == '-' ? -1.0 : 1.0;
        ++pos_;
        skip_space();
      } else if (!first) {
        fail("expected '+' or '-'");
      }
      first = false;
      auto [coeff, power] = term();
      coeff *= sign;
      if (coeffs.size() <= static_cast<std::size_t>(power)) coeffs.resize(power + 1, 0.0);
      coeffs[power] += coeff;
      skip_space();
    }
    return coeffs;
  }

 private:
  std::pair<std::complex<double>, int> term() {
    std::complex<double> coeff = 1.0;
    int power = 0;
    bool have_number = false;
    if (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.') {
      coeff = number();
      have_number = true;
      if (peek() == 'i') {
        coeff = std::complex<double>(0.0, coeff.real());
        ++pos_;
      }
      skip_space();
      if (peek() == '*') {
        ++pos_;
        skip_space();
      }
    } else if (peek() == 'i' && !starts_with_variable()) {
      coeff = std::complex<double>(0.0, 1.0);
      ++pos_;
      have_number = true;
      skip_space();
      if (peek() == '*') {
        ++pos_;
        skip_space();
      }
    }
    if (starts_with_variable()) {
      pos_ += variable_.size();
      power = 1;
      skip_space();
      if (peek() == '^') {
        ++pos_;
        skip_space();
        const double p = number();
        if (p < 0 || p != std::floor(p) || p > 64) fail("exponent must be a small non-negative integer");
        power = static_cast<int>(p);
      }
    } else if (!have_number) {
      fail("expected a number or '" + std::string(variable_) + "'");
    }
    skip_space();
    while (peek() == '/') {
      ++pos_;
      skip_space();
      const double d = number();
      if (d == 0.0) fail("division by zero");
      coeff /= d;
      skip_space();
    }
    return {coeff, power};
  }

  double number() {
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr == begin) fail("expected a number");
    pos_ += static_cast<std::size_t>(ptr - begin);
    return value;
  }

  bool starts_with_variable() const { return text_.substr(pos_, variable_.size()) == variable_; }
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("cannot parse polynomial '" + std::string(text_) + "' at position " +
                     std::to_string(pos_) + ": " + what);
  }

  std::string_view text_;
  std::string_view variable_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::complex<double>> parse_complex_polynomial(std::string_view text,
                                                           std::string_view variable) {
  return TermParser(text, variable).parse();
}

Polynomial1 parse_polynomial1(std::string_view text, std::string_view variable) {
  const auto c = parse_complex_polynomial(text, variable);
  std::vector<double> real;
  for (const auto& z : c) {
    if (z.imag() != 0.0) throw ParseError("imaginary coefficient in real polynomial '" + std::string(text) + "'");
    real.push_back(z.real());
  }
  return Polynomial1(std::move(real));
}

}  // namespace hyperdeg
