#include <doctest.h>

#include "hyperdeg/polynomial.hpp"
#include "support.hpp"

using namespace hyperdeg;

TEST_CASE("multivariate evaluation and term merging") {
  Polynomial p(2);
  p.add_term(0.5, {2, 0});
  p.add_term(-0.5, {0, 2});
  p.add_term(0.25, {2, 0});
  CHECK(p.terms().size() == 2);
  CHECK(p.degree() == 2);
  CHECK(p((Vector(2) << 2.0, 1.0).finished()) == doctest::Approx(0.75 * 4.0 - 0.5));

  p.add_term(-0.75, {2, 0});
  CHECK(p.terms().size() == 1);
  CHECK_FALSE(p.is_zero());
}

TEST_CASE("partial derivatives match central differences") {
  testsupport::Gen gen(11);
  Polynomial p(3);
  p.add_term(1.5, {3, 1, 0});
  p.add_term(-2.0, {0, 2, 2});
  p.add_term(0.7, {1, 0, 1});
  p.add_term(4.0, {0, 0, 0});
  for (int trial = 0; trial < 50; ++trial) {
    Vector x(3);
    for (int i = 0; i < 3; ++i) x(i) = gen.uniform(-2.0, 2.0);
    for (int var = 0; var < 3; ++var) {
      const double h = 1e-5;
      Vector xp = x, xm = x;
      xp(var) += h;
      xm(var) -= h;
      const double fd = (p(xp) - p(xm)) / (2.0 * h);
      CHECK(p.derivative(var)(x) == doctest::Approx(fd).epsilon(1e-7));
    }
  }
}

TEST_CASE("constant polynomial differentiates to zero") {
  Polynomial p(2);
  p.add_term(3.0, {0, 0});
  CHECK(p.derivative(0).is_zero());
  CHECK(p.derivative(1).is_zero());
}

TEST_CASE("invalid terms are rejected") {
  Polynomial p(2);
  CHECK_THROWS_AS(p.add_term(1.0, {1}), InvalidParameters);
  CHECK_THROWS_AS(p.add_term(1.0, {-1, 0}), InvalidParameters);
  CHECK_THROWS_AS(Polynomial(0), InvalidParameters);
}

TEST_CASE("univariate helpers") {
  const Polynomial1 f({1.0, 2.0, 3.0});  // 1 + 2x + 3x^2
  CHECK(f(2.0) == doctest::Approx(17.0));
  CHECK(f.derivative()(2.0) == doctest::Approx(14.0));
  CHECK(f.derivative().derivative()(5.0) == doctest::Approx(6.0));
  const Polynomial1 g = f.shifted_up();  // x + 2x^2 + 3x^3
  CHECK(g.degree() == 3);
  CHECK(g(2.0) == doctest::Approx(2.0 * 17.0));
}

TEST_CASE("parsing real polynomials") {
  CHECK(parse_polynomial1("x^2/2", "x").coeffs().at(2) == doctest::Approx(0.5));
  const Polynomial1 p = parse_polynomial1("3*x^2 - 0.5x + 4", "x");
  CHECK(p(1.0) == doctest::Approx(6.5));
  CHECK(parse_polynomial1("r", "r")(3.0) == doctest::Approx(3.0));
  CHECK(parse_polynomial1("1", "r")(3.0) == doctest::Approx(1.0));
  CHECK(parse_polynomial1("r^2", "r")(3.0) == doctest::Approx(9.0));
  CHECK_THROWS_AS(parse_polynomial1("2i*x", "x"), ParseError);
  CHECK_THROWS_AS(parse_polynomial1("x^^2", "x"), ParseError);
  CHECK_THROWS_AS(parse_polynomial1("y^2", "x"), ParseError);
}

TEST_CASE("parsing complex polynomials") {
  const auto c = parse_complex_polynomial("U^2 + 2i*U^3", "U");
  REQUIRE(c.size() == 4);
  CHECK(c[2] == std::complex<double>(1.0, 0.0));
  CHECK(c[3] == std::complex<double>(0.0, 2.0));
}

TEST_CASE("printing round-trips through the parser") {
  const Polynomial1 f({0.0, -1.5, 0.0, 2.0});
  const Polynomial1 g = parse_polynomial1(f.to_string("r"), "r");
  for (double x : {-1.0, 0.3, 2.0}) CHECK(g(x) == doctest::Approx(f(x)));
}
