#include <algorithm>
#include <cmath>
#include <sstream>

#include "hyperdeg/systems.hpp"

namespace hyperdeg {

namespace {

Box uniform_box(int n, double lo, double hi) {
  return Box{Vector::Constant(n, lo), Vector::Constant(n, hi)};
}

// ---------------------------------------------------------------------------
// Gas dynamics, primitive form on (rho, u, v, p).

SystemSpec gas2d_system(const GasDynamicsParams& params) {
  const double gamma = params.gamma;
  if (!(gamma > 1.0) || !std::isfinite(gamma)) throw InvalidParameters("gas2d: gamma must be > 1");

  SystemSpec::Definition d;
  d.name = "gas2d";
  d.description = "two-dimensional polytropic gas dynamics in primitive variables (rho, u, v, p)";
  d.n_unknowns = 4;
  d.m_space = 2;
  d.conservative = false;
  d.params = params;
  d.box = Box{(Vector(4) << 0.5, -1.0, -1.0, 0.5).finished(), (Vector(4) << 2.0, 1.0, 1.0, 2.0).finished()};
  d.admissible = [](const Vector& s) { return s(0) > 0.0 && s(3) > 0.0; };

  // The pressure row carries rho * dp/drho = gamma * p.
  d.jacobian = [gamma](const Vector& s, int j) -> Matrix {
    const double rho = s(0), u = s(1), v = s(2), p = s(3);
    Matrix a = Matrix::Zero(4, 4);
    const double adv = j == 0 ? u : v;
    a.diagonal().setConstant(adv);
    const int vel = 1 + j;
    a(0, vel) = rho;
    a(vel, 3) = 1.0 / rho;
    a(3, vel) = gamma * p;
    return a;
  };

  d.analytic_eigen = [gamma](const Vector& s, const Direction& xi) {
    const double rho = s(0), u = s(1), v = s(2), p = s(3);
    const double x1 = xi(0), x2 = xi(1);
    const double q = u * x1 + v * x2;
    const double c = std::sqrt(gamma * p / rho) * std::hypot(x1, x2);
    std::vector<AnalyticEigenpair> pairs;
    pairs.push_back({q - c, std::nullopt, "acoustic-"});
    pairs.push_back({q, Vector((Vector(4) << 1.0, 0.0, 0.0, 0.0).finished()), "contact"});
    pairs.push_back({q, Vector((Vector(4) << 0.0, -x2, x1, 0.0).finished()), "contact"});
    pairs.push_back({q + c, std::nullopt, "acoustic+"});
    return pairs;
  };
  return SystemSpec(std::move(d));
}

// ---------------------------------------------------------------------------
// Relativistic torus, first-order form with A_0 inverted.

SystemSpec torus_system(const TorusParams& params) {
  const int k = params.dim;
  if (k < 2) throw InvalidParameters("torus: ambient dimension must be >= 2");

  SystemSpec::Definition d;
  d.name = "torus";
  d.description = "relativistic torus (timelike extremal 3-manifold) in R^{1+" + std::to_string(k) +
                  "}, state (x_t, x_alpha, x_beta)";
  d.n_unknowns = 3 * k;
  d.m_space = 2;
  d.conservative = false;
  d.params = params;

  Vector center = Vector::Zero(3 * k);
  center(k) = 1.0;          // v = e_1
  center(2 * k + 1) = 1.0;  // w = e_2
  d.box = Box{center.array() - 0.3, center.array() + 0.3};
  d.admissible = [k](const Vector& s) { return torus_coefficients(s, k).a < -1e-6; };

  d.jacobian = [k](const Vector& s, int j) -> Matrix {
    const TorusCoefficients t = torus_coefficients(s, k);
    const Matrix id = Matrix::Identity(k, k);
    Matrix a = Matrix::Zero(3 * k, 3 * k);
    if (j == 0) {
      a.block(0, 0, k, k) = (2.0 * t.b / t.a) * id;
      a.block(0, k, k, k) = (t.e / t.a) * id;
      a.block(k, 0, k, k) = -id;
    } else {
      a.block(0, 0, k, k) = (2.0 * t.c / t.a) * id;
      a.block(0, k, k, k) = (2.0 * t.d / t.a) * id;
      a.block(0, 2 * k, k, k) = (t.p / t.a) * id;
      a.block(2 * k, 0, k, k) = -id;
    }
    return a;
  };

  d.analytic_eigen = [k](const Vector& s, const Direction& xi) {
    const TorusCoefficients t = torus_coefficients(s, k);
    const double x1 = xi(0), x2 = xi(1);
    const double disc = (t.b * t.b - t.a * t.e) * x1 * x1 + 2.0 * (t.b * t.c - t.a * t.d) * x1 * x2 +
                        (t.c * t.c - t.a * t.p) * x2 * x2;
    if (disc < 0.0) throw NotHyperbolic("torus: negative discriminant");
    const double root = std::sqrt(disc);
    const double lam_minus = (t.b * x1 + t.c * x2 - root) / t.a;
    const double lam_plus = (t.b * x1 + t.c * x2 + root) / t.a;

    std::vector<AnalyticEigenpair> pairs;
    auto acoustic = [&](double lam, const char* field) {
      for (int i = 0; i < k; ++i) {
        Vector r = Vector::Zero(3 * k);
        r(i) = -lam;
        r(k + i) = x1;
        r(2 * k + i) = x2;
        pairs.push_back({lam, r, field});
      }
    };
    acoustic(lam_minus, "lambda-");
    acoustic(lam_plus, "lambda+");
    for (int i = 0; i < k; ++i) {
      Vector r = Vector::Zero(3 * k);
      r(k + i) = x2 * t.p;
      r(2 * k + i) = -(t.e * x1 + 2.0 * x2 * t.d);
      pairs.push_back({0.0, r, "zero"});
    }
    return pairs;
  };
  return SystemSpec(std::move(d));
}

// ---------------------------------------------------------------------------
// Polynomial-flux conservative systems (lax, scalar, custom, random tests).

struct PolynomialTables {
  int n = 0;
  int m = 0;
  std::vector<std::vector<Polynomial>> flux;                              // [j][k]
  std::vector<std::vector<std::vector<Polynomial>>> first;                // [j][k][l]
  std::vector<std::vector<std::vector<std::vector<Polynomial>>>> second;  // [j][k][l][q]
};

std::shared_ptr<const PolynomialTables> build_tables(const PolynomialFluxParams& p) {
  if (p.n < 1 || p.m < 1) throw InvalidParameters("polynomial system needs n >= 1 and m >= 1");
  if (static_cast<int>(p.flux.size()) != p.m) throw InvalidParameters("polynomial system: flux must have m entries");
  auto t = std::make_shared<PolynomialTables>();
  t->n = p.n;
  t->m = p.m;
  t->flux = p.flux;
  for (const auto& fj : p.flux) {
    if (static_cast<int>(fj.size()) != p.n) throw InvalidParameters("polynomial system: each f_j needs n components");
    std::vector<std::vector<Polynomial>> dj;
    std::vector<std::vector<std::vector<Polynomial>>> sj;
    for (const auto& fjk : fj) {
      if (fjk.variables() != p.n && !fjk.is_zero()) {
        throw InvalidParameters("polynomial system: flux component has wrong number of variables");
      }
      const Polynomial comp = fjk.variables() == p.n ? fjk : Polynomial(p.n);
      std::vector<Polynomial> dk;
      std::vector<std::vector<Polynomial>> sk;
      for (int l = 0; l < p.n; ++l) {
        Polynomial dl = comp.derivative(l);
        std::vector<Polynomial> sl;
        for (int q = 0; q < p.n; ++q) sl.push_back(dl.derivative(q));
        dk.push_back(std::move(dl));
        sk.push_back(std::move(sl));
      }
      dj.push_back(std::move(dk));
      sj.push_back(std::move(sk));
    }
    t->first.push_back(std::move(dj));
    t->second.push_back(std::move(sj));
  }
  return t;
}

SystemSpec polynomial_system(const PolynomialFluxParams& p, std::string name, std::string description,
                             SystemParams params, Box box, AdmissibleFn admissible = {}) {
  auto t = build_tables(p);
  SystemSpec::Definition d;
  d.name = std::move(name);
  d.description = std::move(description);
  d.n_unknowns = p.n;
  d.m_space = p.m;
  d.conservative = true;
  d.params = std::move(params);
  d.box = std::move(box);
  d.admissible = std::move(admissible);
  d.flux = [t](const Vector& u) {
    std::vector<Vector> f;
    for (int j = 0; j < t->m; ++j) {
      Vector fj(t->n);
      for (int k = 0; k < t->n; ++k) fj(k) = t->flux[j][k](u);
      f.push_back(std::move(fj));
    }
    return f;
  };
  d.jacobian = [t](const Vector& u, int j) -> Matrix {
    Matrix a(t->n, t->n);
    for (int k = 0; k < t->n; ++k) {
      for (int l = 0; l < t->n; ++l) a(k, l) = t->first[j][k][l](u);
    }
    return a;
  };
  d.jacobian_derivative = [t](const Vector& u, int j, const Vector& dir) -> Matrix {
    Matrix a = Matrix::Zero(t->n, t->n);
    for (int k = 0; k < t->n; ++k) {
      for (int l = 0; l < t->n; ++l) {
        double s = 0.0;
        for (int q = 0; q < t->n; ++q) {
          if (dir(q) != 0.0) s += t->second[j][k][l][q](u) * dir(q);
        }
        a(k, l) = s;
      }
    }
    return a;
  };
  return SystemSpec(std::move(d));
}

// ---------------------------------------------------------------------------
// Rotationally invariant system u_t + sum_j (f_j(|u|) u)_{x_j} = 0.

struct RotationalProfiles {
  std::vector<Polynomial1> f, df, ddf;
};

// Orthonormal basis of u-perp: columns 0..n-2 of the Householder reflection
// taking e_n to -u/|u|. Smooth away from u/|u| = -e_n; for n = 2 the first
// column reduces to (s_2, -s_1).
Matrix perpendicular_basis(const Vector& s) {
  const int n = static_cast<int>(s.size());
  Vector v = s;
  v(n - 1) += 1.0;
  const double vv = v.squaredNorm();
  if (vv < 1e-24) throw DomainError("rotational: representative undefined at u/|u| = -e_n");
  Matrix h = Matrix::Identity(n, n) - (2.0 / vv) * v * v.transpose();
  return h.leftCols(n - 1);
}

SystemSpec rotational_system(const RotationalParams& params) {
  const int n = params.n;
  const int m = static_cast<int>(params.profiles.size());
  if (n < 1) throw InvalidParameters("rotational: n must be >= 1");
  if (m < 1) throw InvalidParameters("rotational: at least one profile f_j is required");
  auto prof = std::make_shared<RotationalProfiles>();
  for (const auto& f : params.profiles) {
    prof->f.push_back(f);
    prof->df.push_back(f.derivative());
    prof->ddf.push_back(f.derivative().derivative());
  }

  SystemSpec::Definition d;
  d.name = "rotational";
  std::ostringstream desc;
  desc << "rotationally invariant conservation law u_t + sum_j (f_j(|u|) u)_{x_j} = 0, n = " << n << ", ";
  for (int j = 0; j < m; ++j) desc << (j ? ", " : "") << "f_" << j + 1 << "(r) = " << params.profiles[j].to_string("r");
  d.description = desc.str();
  d.n_unknowns = n;
  d.m_space = m;
  d.conservative = true;
  d.params = params;
  Vector lo = Vector::Constant(n, -1.0), hi = Vector::Constant(n, 1.0);
  lo(n - 1) = 0.5;
  hi(n - 1) = 2.0;
  d.box = Box{lo, hi};
  d.admissible = [](const Vector& u) { return u.norm() > 0.0; };

  d.flux = [prof](const Vector& u) {
    const double r = u.norm();
    std::vector<Vector> f;
    for (const auto& fj : prof->f) f.push_back(fj(r) * u);
    return f;
  };
  d.jacobian = [prof, n](const Vector& u, int j) -> Matrix {
    const double r = u.norm();
    Matrix a = (prof->df[j](r) / r) * (u * u.transpose());
    a.diagonal().array() += prof->f[j](r);
    (void)n;
    return a;
  };
  d.jacobian_derivative = [prof, n](const Vector& u, int j, const Vector& dir) -> Matrix {
    const double r = u.norm();
    const double dr = u.dot(dir) / r;
    const double f1 = prof->df[j](r), f2 = prof->ddf[j](r);
    const double g = f1 / r;
    const double dg = (f2 * r - f1) / (r * r);
    Matrix a = dg * dr * (u * u.transpose()) + g * (dir * u.transpose() + u * dir.transpose());
    a.diagonal().array() += f1 * dr;
    (void)n;
    return a;
  };
  d.analytic_eigen = [prof, n, m](const Vector& u, const Direction& xi) {
    const double r = u.norm();
    double lam = 0.0, mu = 0.0;
    for (int j = 0; j < m; ++j) {
      lam += prof->f[j](r) * xi(j);
      mu += (prof->f[j](r) + r * prof->df[j](r)) * xi(j);
    }
    const Vector s = u / r;
    std::vector<AnalyticEigenpair> pairs;
    if (n > 1) {
      const Matrix perp = perpendicular_basis(s);
      for (int i = 0; i < n - 1; ++i) pairs.push_back({lam, Vector(perp.col(i)), "lambda"});
    }
    pairs.push_back({mu, s, "mu"});
    return pairs;
  };
  return SystemSpec(std::move(d));
}

// ---------------------------------------------------------------------------

SystemSpec linear_system(const LinearParams& params) {
  if (params.matrices.empty()) throw InvalidParameters("linear: at least one matrix is required");
  const auto n = params.matrices.front().rows();
  for (const auto& mj : params.matrices) {
    if (mj.rows() != n || mj.cols() != n || n < 1) throw InvalidParameters("linear: matrices must be square and equal-sized");
    if (!mj.allFinite()) throw InvalidParameters("linear: non-finite matrix entry");
  }
  auto mats = std::make_shared<const std::vector<Matrix>>(params.matrices);
  SystemSpec::Definition d;
  d.name = "linear";
  d.description = "constant-coefficient system u_t + sum_j M_j u_{x_j} = 0";
  d.n_unknowns = static_cast<int>(n);
  d.m_space = static_cast<int>(params.matrices.size());
  d.conservative = true;
  d.params = params;
  d.box = uniform_box(static_cast<int>(n), -1.0, 1.0);
  d.flux = [mats](const Vector& u) {
    std::vector<Vector> f;
    for (const auto& mj : *mats) f.push_back(mj * u);
    return f;
  };
  d.jacobian = [mats](const Vector&, int j) -> Matrix { return (*mats)[j]; };
  d.jacobian_derivative = [mats](const Vector&, int j, const Vector&) -> Matrix {
    return Matrix::Zero((*mats)[j].rows(), (*mats)[j].cols());
  };
  return SystemSpec(std::move(d));
}

SystemSpec scalar_system(const ScalarParams& params, std::string name) {
  if (params.fluxes.empty()) throw InvalidParameters("scalar: at least one flux is required");
  PolynomialFluxParams p;
  p.n = 1;
  p.m = static_cast<int>(params.fluxes.size());
  std::ostringstream desc;
  desc << "scalar conservation law w_t + sum_j g_j(w)_{x_j} = 0, ";
  for (int j = 0; j < p.m; ++j) {
    Polynomial poly(1);
    const auto& c = params.fluxes[j].coeffs();
    for (std::size_t k = 0; k < c.size(); ++k) poly.add_term(c[k], {static_cast<int>(k)});
    p.flux.push_back({poly});
    desc << (j ? ", " : "") << "g_" << j + 1 << "(w) = " << params.fluxes[j].to_string("w");
  }
  return polynomial_system(p, std::move(name), desc.str(), params, uniform_box(1, -1.0, 1.0));
}

// Real and imaginary parts of (u + i v)^k as polynomials in (u, v).
std::pair<Polynomial, Polynomial> complex_power(int k) {
  Polynomial re(2), im(2);
  double binom = 1.0;
  for (int j = 0; j <= k; ++j) {
    // term C(k, j) u^{k-j} (i v)^j
    const std::vector<int> exps{k - j, j};
    switch (j % 4) {
      case 0: re.add_term(binom, exps); break;
      case 1: im.add_term(binom, exps); break;
      case 2: re.add_term(-binom, exps); break;
      case 3: im.add_term(-binom, exps); break;
    }
    binom = binom * (k - j) / (j + 1);
  }
  return {re, im};
}

std::string lax_description(const LaxParams& params) {
  std::ostringstream os;
  os.precision(17);
  os << "Lax system from f(U) = ";
  bool first = true;
  for (std::size_t k = 0; k < params.coefficients.size(); ++k) {
    const auto c = params.coefficients[k];
    if (c == std::complex<double>(0.0, 0.0)) continue;
    if (!first) os << " + ";
    first = false;
    if (c.imag() == 0.0) os << c.real();
    else os << "(" << c.real() << (c.imag() < 0 ? "" : "+") << c.imag() << "i)";
    if (k > 0) os << "*U^" << k;
  }
  if (first) os << "0";
  os << ", U = u + iv";
  return os.str();
}

}  // namespace

TorusCoefficients torus_coefficients(const Vector& s, int k) {
  const auto u = s.segment(0, k), v = s.segment(k, k), w = s.segment(2 * k, k);
  const double uv = u.dot(v), uw = u.dot(w), vw = v.dot(w);
  const double uu = u.squaredNorm(), vv = v.squaredNorm(), ww = w.squaredNorm();
  TorusCoefficients t;
  t.a = vw * vw - vv * ww;
  t.b = uv * ww - uw * vw;
  t.d = vw * (uu - 1.0) - uv * uw;
  t.c = uw * vv - uv * vw;
  t.e = uw * uw - ww * (uu - 1.0);
  t.p = uv * uv - vv * (uu - 1.0);
  return t;
}

PolynomialFluxParams lax_flux(const LaxParams& params) {
  Polynomial a(2), b(2);
  for (std::size_t k = 0; k < params.coefficients.size(); ++k) {
    const auto c = params.coefficients[k];
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw InvalidParameters("lax: non-finite coefficient");
    if (c == std::complex<double>(0.0, 0.0)) continue;
    auto [re, im] = complex_power(static_cast<int>(k));
    // f/2 = a + i b with c * (re + i im) = (c_r re - c_i im) + i (c_r im + c_i re)
    a += 0.5 * (c.real() * re + (-c.imag()) * im);
    b += 0.5 * (c.real() * im + c.imag() * re);
  }
  PolynomialFluxParams p;
  p.n = 2;
  p.m = 2;
  p.flux = {{a, -b}, {b, a}};
  return p;
}

SystemSpec make_gas2d(const GasDynamicsParams& params) { return gas2d_system(params); }
SystemSpec make_torus(const TorusParams& params) { return torus_system(params); }

SystemSpec make_lax(const LaxParams& params) {
  if (params.coefficients.size() < 2) throw InvalidParameters("lax: f must be non-constant");
  bool nonconstant = false;
  for (std::size_t k = 1; k < params.coefficients.size(); ++k) {
    nonconstant = nonconstant || params.coefficients[k] != std::complex<double>(0.0, 0.0);
  }
  if (!nonconstant) throw InvalidParameters("lax: f must be non-constant");
  // The origin is excluded: for f = U^2 both eigenvalues meet there.
  return polynomial_system(lax_flux(params), "lax", lax_description(params), params,
                           Box{(Vector(2) << -2.0, -2.0).finished(), (Vector(2) << 2.0, 2.0).finished()},
                           [](const Vector& u) { return u.norm() >= 0.25; });
}

SystemSpec make_rotational(const RotationalParams& params) { return rotational_system(params); }
SystemSpec make_linear(const LinearParams& params) { return linear_system(params); }
SystemSpec make_scalar(const ScalarParams& params) { return scalar_system(params, "scalar"); }

SystemSpec make_polynomial_system(const PolynomialFluxParams& params, std::string name) {
  Box box = params.box ? *params.box : uniform_box(params.n, -1.0, 1.0);
  return polynomial_system(params, std::move(name), "user-defined polynomial flux system", params, std::move(box));
}

SystemSpec builtin(std::string_view name, const SystemParams& params) {
  auto expect = [&](auto* tag) -> const auto& {
    using T = std::remove_pointer_t<decltype(tag)>;
    if (!std::holds_alternative<T>(params)) {
      throw InvalidParameters("parameters do not match system family '" + std::string(name) + "'");
    }
    return std::get<T>(params);
  };
  if (name == "gas2d") return make_gas2d(expect(static_cast<GasDynamicsParams*>(nullptr)));
  if (name == "torus") return make_torus(expect(static_cast<TorusParams*>(nullptr)));
  if (name == "lax") return make_lax(expect(static_cast<LaxParams*>(nullptr)));
  if (name == "rotational") return make_rotational(expect(static_cast<RotationalParams*>(nullptr)));
  if (name == "linear") return make_linear(expect(static_cast<LinearParams*>(nullptr)));
  if (name == "scalar") return make_scalar(expect(static_cast<ScalarParams*>(nullptr)));
  if (name == "scalar-burgers") {
    return scalar_system(expect(static_cast<ScalarParams*>(nullptr)), "scalar-burgers");
  }
  if (name == "custom") return make_polynomial_system(expect(static_cast<PolynomialFluxParams*>(nullptr)));
  throw InvalidParameters("unknown system '" + std::string(name) + "'");
}

SystemSpec builtin(std::string_view name) {
  if (name == "gas2d") return make_gas2d();
  if (name == "torus") return make_torus();
  if (name == "lax") return make_lax();
  if (name == "rotational") return make_rotational();
  if (name == "linear") return make_linear(LinearParams{{(Matrix(2, 2) << 0.0, 1.0, 1.0, 0.0).finished()}});
  if (name == "scalar") return make_scalar();
  if (name == "scalar-burgers") return scalar_system(ScalarParams{}, "scalar-burgers");
  if (name == "custom") throw InvalidParameters("custom systems need a definition file");
  throw InvalidParameters("unknown system '" + std::string(name) + "'");
}

std::vector<CatalogEntry> catalog() {
  std::vector<CatalogEntry> out;
  auto add = [&](const std::string& name, const std::string& parameters) {
    const SystemSpec s = builtin(name);
    out.push_back({name, s.n_unknowns(), s.m_space(), s.conservative(), parameters, s.description(), s.box()});
  };
  add("gas2d", "gamma (default 1.4)");
  add("torus", "torus-dim k >= 2, unknowns 3k (default 2)");
  add("lax", "flux-poly f(U) (default U^2)");
  add("rotational", "n (default 2), profiles f_j(r) (default r)");
  add("linear", "matrices M_j (default [[0,1],[1,0]])");
  add("scalar", "fluxes g_j(w) (default w^2/2)");
  add("scalar-burgers", "none (g(w) = w^2/2)");
  return out;
}

PolynomialFluxParams random_linear_flux(Rng& rng, int m) {
  PolynomialFluxParams p;
  p.n = 2;
  p.m = m;
  for (int j = 0; j < m; ++j) {
    const double a = rng.uniform(-2.0, 2.0), b = rng.uniform(-2.0, 2.0), d = rng.uniform(-2.0, 2.0);
    Polynomial f0(2), f1(2);
    f0.add_term(a, {1, 0});
    f0.add_term(b, {0, 1});
    f1.add_term(b, {1, 0});
    f1.add_term(d, {0, 1});
    p.flux.push_back({f0, f1});
  }
  p.box = uniform_box(2, -1.0, 1.0);
  return p;
}

PolynomialFluxParams random_quadratic_flux(Rng& rng, int m) {
  struct Potential {
    double c30, c21, c12, c03, c20, c11, c02;
  };
  std::vector<Potential> pots;
  double largest = 0.0;
  for (int j = 0; j < m; ++j) {
    Potential q{};
    q.c30 = rng.uniform(-1.0, 1.0);
    q.c21 = rng.uniform(-1.0, 1.0);
    q.c12 = rng.uniform(-1.0, 1.0);
    q.c03 = rng.uniform(-1.0, 1.0);
    q.c20 = rng.uniform(-1.0, 1.0);
    q.c11 = rng.uniform(-1.0, 1.0);
    q.c02 = rng.uniform(-1.0, 1.0);
    largest = std::max({largest, 6.0 * std::abs(q.c30), 2.0 * std::abs(q.c21), 2.0 * std::abs(q.c12),
                        6.0 * std::abs(q.c03)});
    pots.push_back(q);
  }
  // Second derivatives of the flux are third derivatives of the potential.
  const double scale = largest < 0.5 ? 0.5 / largest * (1.0 + 1e-9) : 1.0;
  PolynomialFluxParams p;
  p.n = 2;
  p.m = m;
  for (auto q : pots) {
    q.c30 *= scale;
    q.c21 *= scale;
    q.c12 *= scale;
    q.c03 *= scale;
    // f = grad(phi), phi = c30 u^3 + c21 u^2 v + c12 u v^2 + c03 v^3 + c20 u^2 + c11 u v + c02 v^2
    Polynomial f0(2), f1(2);
    f0.add_term(3.0 * q.c30, {2, 0});
    f0.add_term(2.0 * q.c21, {1, 1});
    f0.add_term(q.c12, {0, 2});
    f0.add_term(2.0 * q.c20, {1, 0});
    f0.add_term(q.c11, {0, 1});
    f1.add_term(q.c21, {2, 0});
    f1.add_term(2.0 * q.c12, {1, 1});
    f1.add_term(3.0 * q.c03, {0, 2});
    f1.add_term(q.c11, {1, 0});
    f1.add_term(2.0 * q.c02, {0, 1});
    p.flux.push_back({f0, f1});
  }
  p.box = uniform_box(2, -1.0, 1.0);
  return p;
}

}  // namespace hyperdeg
