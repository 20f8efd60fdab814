#include <doctest.h>

#include <cmath>

#include "hyperdeg/spectral.hpp"
#include "support.hpp"

using namespace hyperdeg;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

void check_contracts(const EigenDecomposition& d, const EigenTolerances& tol = {}) {
  const int n = d.size();
  for (int i = 1; i < n; ++i) CHECK(d.values(i - 1) <= d.values(i));
  for (int i = 0; i < n; ++i) {
    const Vector r = d.right.col(i);
    CHECK((d.matrix * r - d.values(i) * r).norm() <= tol.residual * std::max(1.0, d.matrix_norm) * r.norm());
  }
  CHECK((d.left * d.right - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-9);
  for (const auto& g : d.groups) {
    if (g.size() < 2 || d.kind[g[0]] == Representative::Analytic) continue;
    Matrix q(n, static_cast<Eigen::Index>(g.size()));
    for (std::size_t c = 0; c < g.size(); ++c) q.col(static_cast<Eigen::Index>(c)) = d.right.col(g[c]);
    CHECK((q.transpose() * q - Matrix::Identity(q.cols(), q.cols())).cwiseAbs().maxCoeff() < 1e-10);
  }
}

SystemSpec identity_system() { return make_linear(LinearParams{{Matrix::Identity(2, 2)}}); }

}  // namespace

TEST_CASE("assemble along an axis returns that Jacobian") {
  testsupport::Gen gen(1);
  const SystemSpec s = make_gas2d();
  for (int t = 0; t < 10; ++t) {
    const Vector u = gen.state(s);
    for (int j = 0; j < 2; ++j) CHECK(assemble(s, u, Direction::axis(2, j)) == s.jacobian(u, j));
  }
  CHECK_THROWS_AS(assemble(s, gen.state(s), Direction::axis(3, 0)), InvalidParameters);
}

TEST_CASE("lax assemble at (1, 0) along (0, 1)") {
  const Matrix a = assemble(make_lax(), vec({1.0, 0.0}), Direction::axis(2, 1));
  CHECK((a - (Matrix(2, 2) << 0, 1, 1, 0).finished()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("gas2d rest-state spectrum") {
  const EigenDecomposition d = eigen(assemble(make_gas2d({1.4}), vec({1.0, 0.0, 0.0, 1.0}), Direction::axis(2, 0)));
  const double c = std::sqrt(1.4);
  CHECK(std::abs(d.values(0) + c) < 1e-10);
  CHECK(std::abs(d.values(1)) < 1e-10);
  CHECK(std::abs(d.values(2)) < 1e-10);
  CHECK(std::abs(d.values(3) - c) < 1e-10);
  CHECK(d.groups.size() == 3);
  CHECK(d.groups[1].size() == 2);
  check_contracts(d);
}

TEST_CASE("identity: one cluster with an orthonormal basis") {
  const EigenDecomposition d = eigen(Matrix::Identity(2, 2));
  CHECK(d.values(0) == doctest::Approx(1.0));
  CHECK(d.values(1) == doctest::Approx(1.0));
  REQUIRE(d.groups.size() == 1);
  CHECK(d.groups[0].size() == 2);
  CHECK(d.kind[0] == Representative::ClusterBasis);
  check_contracts(d);
}

TEST_CASE("defective and complex spectra are rejected") {
  CHECK_THROWS_AS(eigen((Matrix(2, 2) << 0, 1, 0, 0).finished()), IncompleteEigenbasis);
  CHECK_THROWS_AS(eigen((Matrix(2, 2) << 0, -1, 1, 0).finished()), NotHyperbolic);
  CHECK_THROWS_AS(spectrum((Matrix(2, 2) << 0, -1, 1, 0).finished()), NotHyperbolic);
  CHECK_THROWS_AS(eigen(Matrix(2, 3)), InvalidParameters);
}

TEST_CASE("simple numerical eigenvectors are unit with a positive largest component") {
  testsupport::Gen gen(2);
  for (int t = 0; t < 100; ++t) {
    Matrix a(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) a(i, j) = gen.uniform(-1.0, 1.0);
    a = (a + a.transpose()).eval();
    const EigenDecomposition d = eigen(a);
    for (int i = 0; i < 3; ++i) {
      if (!d.simple(i)) continue;
      const Vector r = d.right.col(i);
      CHECK(r.norm() == doctest::Approx(1.0));
      Eigen::Index arg;
      r.cwiseAbs().maxCoeff(&arg);
      // Ties within the band resolve to the lowest index; generic samples have none.
      CHECK(r(arg) > 0.0);
    }
    check_contracts(d);
  }
}

TEST_CASE("gas2d analytic eigenvalues on 500 random samples") {
  testsupport::Gen gen(3);
  const double gamma = 1.4;
  const SystemSpec s = make_gas2d({gamma});
  for (int t = 0; t < 500; ++t) {
    const Vector u = gen.state(s);
    const Direction xi = gen.direction(2);
    const double q = u(1) * xi(0) + u(2) * xi(1);
    const double c = std::sqrt(gamma * u(3) / u(0));
    const Vector values = eigen(assemble(s, u, xi)).values;
    const double expected[4] = {q - c, q, q, q + c};
    for (int i = 0; i < 4; ++i) CHECK(testsupport::rel_diff(values(i), expected[i]) < 1e-9);
  }
}

TEST_CASE("torus spectrum has three values of multiplicity k") {
  testsupport::Gen gen(4);
  for (int k : {2, 3}) {
    const SystemSpec s = make_torus({k});
    for (int t = 0; t < 100; ++t) {
      const Vector u = gen.state(s);
      const Direction xi = gen.direction(2);
      const EigenDecomposition d = decompose(s, u, xi);
      REQUIRE(d.groups.size() == 3);
      for (const auto& g : d.groups) CHECK(static_cast<int>(g.size()) == k);
      check_contracts(d);
      const TorusCoefficients c = torus_coefficients(u, k);
      const double x1 = xi(0), x2 = xi(1);
      const double disc = (c.b * c.b - c.a * c.e) * x1 * x1 + 2.0 * (c.b * c.c - c.a * c.d) * x1 * x2 +
                          (c.c * c.c - c.a * c.p) * x2 * x2;
      const double lp = (c.b * x1 + c.c * x2 + std::sqrt(disc)) / c.a;
      const double lm = (c.b * x1 + c.c * x2 - std::sqrt(disc)) / c.a;
      const Vector num = eigen(assemble(s, u, xi)).values;
      std::vector<double> expected(3 * k);
      for (int i = 0; i < k; ++i) {
        expected[i] = lp;  // a < 0, so the "+" root is the smallest
        expected[k + i] = 0.0;
        expected[2 * k + i] = lm;
      }
      std::sort(expected.begin(), expected.end());
      for (int i = 0; i < 3 * k; ++i) CHECK(testsupport::rel_diff(num(i), expected[i]) < 1e-9);
    }
  }
}

TEST_CASE("rotational spectrum: sum f_j xi_j (n-1 times) and sum (r f_j)' xi_j") {
  testsupport::Gen gen(5);
  const std::vector<Polynomial1> profiles{parse_polynomial1("r^2", "r"), parse_polynomial1("1 + r", "r")};
  for (int n : {2, 3, 4}) {
    const SystemSpec s = make_rotational(RotationalParams{n, profiles});
    for (int t = 0; t < 50; ++t) {
      const Vector u = gen.state(s);
      const Direction xi = gen.direction(2);
      const double r = u.norm();
      const double lam = r * r * xi(0) + (1.0 + r) * xi(1);
      const double mu = 3.0 * r * r * xi(0) + (1.0 + 2.0 * r) * xi(1);
      const EigenDecomposition d = decompose(s, u, xi);
      check_contracts(d);
      int lam_count = 0;
      for (int i = 0; i < n; ++i) {
        if (d.field[i] == "lambda") {
          ++lam_count;
          CHECK(testsupport::rel_diff(d.values(i), lam) < 1e-9);
          CHECK(std::abs(d.right.col(i).dot(u)) < 1e-12 * r);
        } else {
          CHECK(testsupport::rel_diff(d.values(i), mu) < 1e-9);
          CHECK((d.right.col(i) - u / r).norm() < 1e-12);
        }
      }
      CHECK(lam_count == n - 1);
    }
  }
}

TEST_CASE("lax spectrum is +-|U|") {
  testsupport::Gen gen(6);
  const SystemSpec s = make_lax();
  for (int t = 0; t < 200; ++t) {
    const Vector u = gen.state(s);
    const Vector values = eigen(assemble(s, u, gen.direction(2))).values;
    CHECK(testsupport::rel_diff(values(0), -u.norm()) < 1e-9);
    CHECK(testsupport::rel_diff(values(1), u.norm()) < 1e-9);
  }
}

TEST_CASE("gas2d contact representatives come from the closed form") {
  testsupport::Gen gen(7);
  const SystemSpec s = make_gas2d();
  const Vector u = gen.state(s);
  const Direction xi = gen.direction(2);
  const EigenDecomposition d = decompose(s, u, xi);
  CHECK(d.field[1] == "contact");
  CHECK(d.field[2] == "contact");
  CHECK(d.kind[1] == Representative::Analytic);
  CHECK(d.right.col(1) == vec({1.0, 0.0, 0.0, 0.0}));
  CHECK(d.right.col(2) == vec({0.0, -xi(1), xi(0), 0.0}));
  CHECK(d.kind[0] == Representative::Normalized);
  CHECK(d.groups.size() == 3);
  check_contracts(d);
}

TEST_CASE("torus zero-field representative") {
  Vector u = Vector::Zero(6);
  u(2) = 1.0;
  u(5) = 1.0;
  const Direction xi = Direction::normalized(vec({0.6, 0.8}));
  const EigenDecomposition d = decompose(make_torus({2}), u, xi);
  const TorusCoefficients c = torus_coefficients(u, 2);
  int zero = 0;
  for (int i = 0; i < 6; ++i) {
    if (d.field[i] != "zero") continue;
    const int e = d.analytic_index[i] - 4;  // pairs: 2 lambda-, 2 lambda+, then zero
    Vector expected = Vector::Zero(6);
    expected(2 + e) = xi(1) * c.p;
    expected(4 + e) = -(c.e * xi(0) + 2.0 * xi(1) * c.d);
    CHECK((d.right.col(i) - expected).norm() < 1e-15);
    ++zero;
  }
  CHECK(zero == 2);
}

TEST_CASE("xi -> -xi reverses the spectrum and keeps the eigenspaces") {
  testsupport::Gen gen(8);
  for (const auto& s : {make_gas2d(), make_lax(), make_torus({2})}) {
    CAPTURE(s.name());
    for (int t = 0; t < 30; ++t) {
      const Vector u = gen.state(s);
      const Direction xi = gen.direction(2);
      const EigenDecomposition a = decompose(s, u, xi);
      const EigenDecomposition b = decompose(s, u, -xi);
      const int n = a.size();
      for (int i = 0; i < n; ++i) CHECK(testsupport::rel_diff(a.values(i), -b.values(n - 1 - i)) < 1e-9);
      // Each eigenspace of a is invariant for the matrix of b with the negated eigenvalue.
      for (int i = 0; i < n; ++i) {
        const Vector r = a.right.col(i);
        CHECK((b.matrix * r + a.values(i) * r).norm() < 1e-8 * std::max(1.0, a.matrix_norm) * r.norm());
      }
    }
  }
}

TEST_CASE("numerical clusters align to a previous basis") {
  const SystemSpec s = identity_system();
  const Vector u = vec({0.1, 0.2});
  const Direction xi = Direction::axis(1, 0);
  EigenDecomposition prev = decompose(s, u, xi);
  const double th = 0.5;
  prev.right = (Matrix(2, 2) << std::cos(th), -std::sin(th), std::sin(th), std::cos(th)).finished();
  const EigenDecomposition d = decompose(s, u, xi, &prev);
  CHECK(d.kind[0] == Representative::Aligned);
  CHECK((d.right - prev.right).cwiseAbs().maxCoeff() < 1e-12);
  check_contracts(d);

  EigenDecomposition wrong = eigen((Matrix(2, 2) << 1, 0, 0, 2).finished());
  CHECK_THROWS_AS(decompose(s, u, xi, &wrong), RepresentativeJump);
}

TEST_CASE("a wrong closed form is reported as an inconsistency") {
  SystemSpec::Definition d;
  d.name = "broken";
  d.n_unknowns = 2;
  d.m_space = 1;
  d.jacobian = [](const Vector&, int) -> Matrix { return (Matrix(2, 2) << 0, 1, 1, 0).finished(); };
  d.box = Box{Vector::Constant(2, -1.0), Vector::Constant(2, 1.0)};
  d.analytic_eigen = [](const Vector&, const Direction&) {
    return std::vector<AnalyticEigenpair>{{-1.0, Vector(vec({1.0, 1.0})), "a"}, {1.0, Vector(vec({1.0, 1.0})), "b"}};
  };
  const SystemSpec s(d);
  CHECK_THROWS_AS(decompose(s, vec({0.0, 0.0}), Direction::axis(1, 0)), InconsistentRepresentative);

  d.analytic_eigen = [](const Vector&, const Direction&) {
    return std::vector<AnalyticEigenpair>{{-2.0, std::nullopt, "a"}, {1.0, std::nullopt, "b"}};
  };
  CHECK_THROWS_AS(decompose(SystemSpec(d), vec({0.0, 0.0}), Direction::axis(1, 0)), InconsistentRepresentative);
}

TEST_CASE("direction validation") {
  CHECK_THROWS_AS(Direction(vec({1.0, 1.0})), InvalidParameters);
  CHECK_THROWS_AS(Direction::normalized(vec({0.0, 0.0})), InvalidParameters);
  CHECK(Direction::normalized(vec({3.0, 4.0}))(1) == doctest::Approx(0.8));
}
