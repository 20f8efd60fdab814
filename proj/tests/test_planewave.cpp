#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hyperdeg/planewave.hpp"
#include "support.hpp"

using namespace hyperdeg;

namespace {

constexpr double kPi = std::numbers::pi;

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

PlaneWaveProblem problem(SystemSpec sys, Direction xi, ProfileFn initial, int cells, double t_end) {
  return PlaneWaveProblem{
      .system = std::move(sys),
      .xi = std::move(xi),
      .initial = std::move(initial),
      .length = 2.0 * kPi,
      .cells = cells,
      .cfl = 0.45,
      .t_end = t_end,
      .blowup_threshold = std::nullopt,
      .snapshot_times = {},
      .stop_at_blowup = true,
      .max_steps = 5'000'000,
  };
}

}  // namespace

TEST_CASE("reduction along an axis of a one-dimensional system is the system itself") {
  testsupport::Gen gen(41);
  const SystemSpec s = make_scalar();
  const ReducedSystem r = reduce(s, Direction::axis(1, 0));
  for (int t = 0; t < 20; ++t) {
    const Vector w = gen.state(s);
    CHECK(r.coefficient(w) == s.jacobian(w, 0));
    CHECK(r.flux(w) == s.flux(w)[0]);
  }
}

TEST_CASE("reduced lax flux is sum xi_j f_j") {
  testsupport::Gen gen(42);
  const SystemSpec s = make_lax();
  for (int t = 0; t < 20; ++t) {
    const Vector w = gen.state(s);
    const Direction xi = gen.direction(2);
    const auto f = s.flux(w);
    CHECK((reduce(s, xi).flux(w) - (xi(0) * f[0] + xi(1) * f[1])).norm() < 1e-14);
  }
}

TEST_CASE("gas2d along (0, 1) is the x-reduction with velocities swapped") {
  testsupport::Gen gen(43);
  const SystemSpec s = make_gas2d();
  Matrix swap = Matrix::Identity(4, 4);
  swap(1, 1) = swap(2, 2) = 0.0;
  swap(1, 2) = swap(2, 1) = 1.0;
  for (int t = 0; t < 20; ++t) {
    const Vector w = gen.state(s);
    const Matrix ay = reduce(s, Direction::axis(2, 1)).coefficient(w);
    const Matrix ax = reduce(s, Direction::axis(2, 0)).coefficient(swap * w);
    CHECK((ay - swap * ax * swap).cwiseAbs().maxCoeff() < 1e-14);
  }
  CHECK_THROWS_AS(reduce(s, Direction::axis(3, 0)), InvalidParameters);
}

TEST_CASE("profiles") {
  CHECK(profile_shape(ProfileShape::Sine, kPi / 2) == doctest::Approx(-1.0));
  CHECK(profile_shape(ProfileShape::Bump, kPi) == doctest::Approx(1.0));
  CHECK(std::abs(profile_shape(ProfileShape::Bump, 0.0)) < 1e-17);
  CHECK(profile_shape(ProfileShape::TanhStep, kPi / 2) == doctest::Approx(std::tanh(4.0)));
  CHECK(parse_profile_shape("tanh-step") == ProfileShape::TanhStep);
  CHECK_THROWS_AS(parse_profile_shape("square"), InvalidParameters);
  const ProfileFn f = make_profile(ProfileShape::Sine, 2.0, vec({1.0, 0.0}), vec({0.0, 1.0}));
  CHECK((f(kPi / 2) - vec({1.0, -2.0})).norm() < 1e-15);
}

TEST_CASE("grid helpers") {
  const auto c = cell_centres(1.0, 4);
  CHECK(c == std::vector<double>{0.125, 0.375, 0.625, 0.875});
  const std::vector<Vector> w{vec({0.0}), vec({1.0}), vec({3.0}), vec({1.0})};
  CHECK(gradient_sup(w, 0.5) == doctest::Approx(4.0));
}

TEST_CASE("burgers sine breaks near t = 1") {
  const SystemSpec s = builtin("scalar-burgers");
  PlaneWaveProblem p =
      problem(s, Direction::axis(1, 0), make_profile(ProfileShape::Sine, 1.0, s.box().center(), vec({1.0})), 256, 2.0);
  const BlowupConfirmation c = confirm_blowup(p);
  REQUIRE(c.coarse.status == EvolutionStatus::BlowupDetected);
  REQUIRE(c.fine.status == EvolutionStatus::BlowupDetected);
  CHECK(c.confirmed);
  CHECK(c.relative_difference <= 0.25);
  // Characteristics cross at exactly 1; the threshold trips a little earlier.
  CHECK(*c.fine.blowup_time > 0.8);
  CHECK(*c.fine.blowup_time < 1.05);
  CHECK(c.coarse.scheme == "rusanov");
}

TEST_CASE("linear plane waves stay smooth and do not steepen") {
  const SystemSpec s = make_linear(LinearParams{{(Matrix(2, 2) << 0, 1, 1, 0).finished()}});
  const PlaneWaveProblem p = problem(s, Direction::axis(1, 0),
                                     make_profile(ProfileShape::Sine, 1.0, vec({0.0, 0.0}), vec({1.0, 0.5})), 128, 5.0);
  const EvolutionResult r = evolve(p);
  CHECK(r.status == EvolutionStatus::CompletedSmooth);
  CHECK(r.final_time == doctest::Approx(5.0));
  for (const auto& [t, g] : r.gradient_series) CHECK(g <= r.initial_gradient * (1.0 + 1e-12));
}

TEST_CASE("the conservative scheme preserves cell averages") {
  for (const SystemSpec& s : {make_lax(), builtin("scalar-burgers")}) {
    CAPTURE(s.name());
    const int n = s.n_unknowns();
    const Direction xi = Direction::axis(s.m_space(), 0);
    Vector base = s.box().center();
    if (s.name() == "lax") base = vec({1.0, 0.5});
    const PlaneWaveProblem p =
        problem(s, xi, make_profile(ProfileShape::Bump, 0.3, base, Vector::Ones(n) / std::sqrt(double(n))), 128, 0.5);
    const EvolutionResult r = evolve(p);
    CHECK(r.scheme == "rusanov");
    REQUIRE_FALSE(r.conservation_series.empty());
    for (const auto& [t, drift] : r.conservation_series) CHECK(drift <= 1e-12 * std::max(1.0, double(r.steps)));
  }
}

TEST_CASE("snapshots are taken at the requested times") {
  const SystemSpec s = builtin("scalar-burgers");
  PlaneWaveProblem p = problem(s, Direction::axis(1, 0), make_profile(ProfileShape::Sine, 0.5, vec({0.0}), vec({1.0})),
                               64, 0.5);
  p.snapshot_times = {0.0, 0.25, 0.5};
  const EvolutionResult r = evolve(p);
  REQUIRE(r.snapshots.size() == 3);
  for (std::size_t k = 0; k < 3; ++k) CHECK(r.snapshots[k].time == doctest::Approx(p.snapshot_times[k]));
  CHECK(r.snapshots[0].values.size() == 64);
}

TEST_CASE("leaving the admissible set stops the run") {
  // Constant-coefficient exchange between components; w2 grows from 0 to |cos s sin t|.
  SystemSpec::Definition d;
  d.name = "exchange";
  d.n_unknowns = 2;
  d.m_space = 1;
  d.jacobian = [](const Vector&, int) -> Matrix { return (Matrix(2, 2) << 0, 1, 1, 0).finished(); };
  d.box = Box{Vector::Constant(2, -1.0), Vector::Constant(2, 1.0)};
  d.admissible = [](const Vector& w) { return std::abs(w(1)) < 0.5; };
  const SystemSpec s(d);
  const EvolutionResult r =
      evolve(problem(s, Direction::axis(1, 0), make_profile(ProfileShape::Sine, 1.0, vec({0.0, 0.0}), vec({1.0, 0.0})),
                     128, 2.0));
  CHECK(r.scheme == "upwind");
  REQUIRE(r.status == EvolutionStatus::DomainExit);
  REQUIRE(r.exit_time.has_value());
  CHECK(*r.exit_time == doctest::Approx(kPi / 6.0).epsilon(0.1));

  const ProfileFn outside = make_profile(ProfileShape::Sine, 1.0, vec({0.0, 0.0}), vec({0.0, 1.0}));
  CHECK_THROWS_AS(evolve(problem(s, Direction::axis(1, 0), outside, 128, 1.0)), DomainError);
}

TEST_CASE("evolve validates its parameters") {
  const SystemSpec s = builtin("scalar-burgers");
  PlaneWaveProblem p = problem(s, Direction::axis(1, 0), make_profile(ProfileShape::Sine, 1.0, vec({0.0}), vec({1.0})),
                               8, 1.0);
  CHECK_THROWS_AS(evolve(p), InvalidParameters);
  p.cells = 64;
  p.cfl = 1.5;
  CHECK_THROWS_AS(evolve(p), InvalidParameters);
}

TEST_CASE("characteristics: crossing time of the modulus law") {
  const Vector xi = vec({1.0});
  auto r0 = [](double s) { return 2.0 - std::sin(s); };

  SUBCASE("f = r") {
    const ScalarLaw law = rotational_modulus_law({parse_polynomial1("r", "r")}, xi);
    CHECK(law.speed(3.0) == doctest::Approx(6.0));
    const auto c = scalar_characteristics(law, r0, 2.0 * kPi, 64, 0.25);
    CHECK(c.crossing_time == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(std::min(c.argmin, 2.0 * kPi - c.argmin) < 1e-4);  // the minimum is flat to order sqrt(eps)
    CHECK(c.genuinely_nonlinear);
    CHECK(c.injective);
    REQUIRE(c.profile.has_value());
    // Each sample satisfies r = r0(s - t lambda(r)).
    for (std::size_t i = 0; i < c.grid.size(); ++i) {
      const double r = (*c.profile)[i];
      CHECK(r == doctest::Approx(r0(c.grid[i] - 0.25 * law.speed(r))).epsilon(1e-10));
    }
    CHECK_FALSE(scalar_characteristics(law, r0, 2.0 * kPi, 64, 0.75).injective);
  }
  SUBCASE("f = r^2") {
    const auto c = scalar_characteristics(rotational_modulus_law({parse_polynomial1("r^2", "r")}, xi), r0, 2.0 * kPi,
                                          64, 0.01);
    CHECK(c.genuinely_nonlinear);
    CHECK(std::isfinite(c.crossing_time));
  }
  SUBCASE("f = 1") {
    const auto c = scalar_characteristics(rotational_modulus_law({parse_polynomial1("1", "r")}, xi), r0, 2.0 * kPi,
                                          64, 10.0);
    CHECK_FALSE(c.genuinely_nonlinear);
    CHECK(std::isinf(c.crossing_time));
    CHECK(c.injective);
  }
}

TEST_CASE("split solution keeps |u| = r and respects constant moduli") {
  const RotationalParams params{2, {parse_polynomial1("r", "r")}};
  const Vector xi = vec({1.0});

  SUBCASE("constant modulus") {
    auto u0 = [](double s) { return vec({std::cos(s), std::sin(s)}); };
    const SplitSolution sol = rotational_split_solve(params, xi, u0, 2.0 * kPi, 64, 1.0);
    CHECK(std::isinf(sol.crossing_time));
    for (std::size_t i = 0; i < sol.grid.size(); ++i) {
      CHECK(sol.values[i].norm() == doctest::Approx(1.0).epsilon(1e-12));
      // Pure transport at unit speed.
      CHECK((sol.values[i] - u0(sol.grid[i] - 1.0)).norm() < 1e-9);
    }
  }
  SUBCASE("varying modulus") {
    auto u0 = [](double s) -> Vector { return (2.0 - std::sin(s)) * vec({std::cos(s), std::sin(s)}); };
    const SplitSolution sol = rotational_split_solve(params, xi, u0, 2.0 * kPi, 64, 0.25);
    CHECK(sol.crossing_time == doctest::Approx(0.5).epsilon(1e-9));
    for (std::size_t i = 0; i < sol.grid.size(); ++i) {
      CHECK(std::abs(sol.values[i].norm() - sol.modulus[i]) < 1e-13);
      CHECK(sol.unit[i].norm() == doctest::Approx(1.0).epsilon(1e-13));
    }
    CHECK_THROWS_AS(rotational_split_solve(params, xi, u0, 2.0 * kPi, 64, 0.6), DomainError);
  }
  SUBCASE("vanishing modulus is rejected") {
    auto u0 = [](double s) -> Vector { return std::sin(s) * vec({1.0, 0.0}); };
    CHECK_THROWS_AS(rotational_split_solve(params, xi, u0, 2.0 * kPi, 64, 0.1), DomainError);
  }
}

TEST_CASE("split and direct solutions approach each other under refinement") {
  const RotationalParams params{2, {parse_polynomial1("r", "r")}};
  auto u0 = [](double s) -> Vector { return (2.0 - std::sin(s)) * vec({std::cos(s), std::sin(s)}); };
  const SplitComparison coarse = compare_split_direct(params, vec({1.0}), u0, 2.0 * kPi, 128, 0.2);
  const SplitComparison fine = compare_split_direct(params, vec({1.0}), u0, 2.0 * kPi, 256, 0.2);
  CHECK(coarse.modulus_residual < 1e-12);
  CHECK(fine.sup_gap < coarse.sup_gap);
  CHECK(coarse.direct.status == EvolutionStatus::CompletedSmooth);
}
