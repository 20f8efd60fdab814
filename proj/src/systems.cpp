#include "hyperdeg/systems.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace hyperdeg {

bool Box::contains(const Vector& u) const {
  if (u.size() != lower.size()) return false;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (u(i) < lower(i) || u(i) > upper(i)) return false;
  }
  return true;
}

SystemSpec::SystemSpec(Definition definition) {
  auto& d = definition;
  if (d.n_unknowns < 1 || d.m_space < 1) throw InvalidParameters("system dimensions must be positive");
  if (!d.jacobian) throw InvalidParameters("system '" + d.name + "' has no Jacobian provider");
  if (d.conservative != static_cast<bool>(d.flux)) {
    throw InvalidParameters("system '" + d.name + "': flux must be present iff conservative");
  }
  if (d.box.lower.size() != d.n_unknowns || d.box.upper.size() != d.n_unknowns) {
    throw InvalidParameters("system '" + d.name + "': domain box has wrong dimension");
  }
  if ((d.box.upper - d.box.lower).minCoeff() < 0.0) {
    throw InvalidParameters("system '" + d.name + "': domain box has lower > upper");
  }
  def_ = std::make_shared<const Definition>(std::move(definition));
}

bool SystemSpec::admissible(const Vector& u) const {
  if (u.size() != def_->n_unknowns || !u.allFinite()) return false;
  return !def_->admissible || def_->admissible(u);
}

void SystemSpec::require_admissible(const Vector& u) const {
  if (u.size() != def_->n_unknowns) {
    throw DomainError(def_->name + ": state has " + std::to_string(u.size()) + " components, expected " +
                      std::to_string(def_->n_unknowns));
  }
  if (!admissible(u)) throw DomainError(def_->name + ": state outside the admissible domain");
}

Matrix SystemSpec::jacobian(const Vector& u, int j) const {
  if (j < 0 || j >= def_->m_space) throw InvalidParameters("space index out of range");
  require_admissible(u);
  Matrix a = def_->jacobian(u, j);
  if (a.rows() != def_->n_unknowns || a.cols() != def_->n_unknowns) {
    throw InconsistentRepresentative(def_->name + ": Jacobian provider returned a matrix of the wrong shape");
  }
  return a;
}

std::vector<Vector> SystemSpec::flux(const Vector& u) const {
  if (!def_->conservative) throw UnsupportedOperation(def_->name + " is not in conservation form");
  require_admissible(u);
  return def_->flux(u);
}

Matrix SystemSpec::jacobian_derivative(const Vector& u, int j, const Vector& direction) const {
  if (def_->jacobian_derivative) {
    require_admissible(u);
    return def_->jacobian_derivative(u, j, direction);
  }
  const double len = direction.norm();
  if (len == 0.0) return Matrix::Zero(def_->n_unknowns, def_->n_unknowns);
  const double h = std::cbrt(std::numeric_limits<double>::epsilon()) * std::max(1.0, u.norm()) / len;
  return (jacobian(u + h * direction, j) - jacobian(u - h * direction, j)) / (2.0 * h);
}

std::vector<AnalyticEigenpair> SystemSpec::analytic_eigen(const Vector& u, const Direction& xi) const {
  if (!def_->analytic_eigen) throw UnsupportedOperation(def_->name + " has no analytic eigen data");
  if (xi.dimension() != def_->m_space) throw InvalidParameters("direction has wrong dimension");
  require_admissible(u);
  auto pairs = def_->analytic_eigen(u, xi);
  if (static_cast<int>(pairs.size()) != def_->n_unknowns) {
    throw InconsistentRepresentative(def_->name + ": analytic eigen data has the wrong number of pairs");
  }
  return pairs;
}

SystemSpec transform_unknowns(const SystemSpec& system, const Matrix& m, const Vector& q) {
  const int n = system.n_unknowns();
  if (m.rows() != n || m.cols() != n || q.size() != n) {
    throw InvalidParameters("affine change of unknowns has wrong dimensions");
  }
  Eigen::FullPivLU<Matrix> lu(m);
  if (!lu.isInvertible()) throw InvalidParameters("affine change of unknowns is singular");
  const Matrix m_inv = lu.inverse();

  auto to_original = [m, q](const Vector& v) -> Vector { return m * v + q; };

  SystemSpec::Definition d;
  d.name = system.name() + "~affine";
  d.description = system.description() + " (affinely transformed unknowns)";
  d.n_unknowns = n;
  d.m_space = system.m_space();
  d.conservative = system.conservative();
  d.params = system.params();
  if (system.conservative()) {
    d.flux = [system, m_inv, to_original](const Vector& v) {
      auto f = system.flux(to_original(v));
      for (auto& fj : f) fj = m_inv * fj;
      return f;
    };
  }
  d.jacobian = [system, m, m_inv, to_original](const Vector& v, int j) -> Matrix {
    return m_inv * system.jacobian(to_original(v), j) * m;
  };
  if (system.has_exact_jacobian_derivative()) {
    d.jacobian_derivative = [system, m, m_inv, to_original](const Vector& v, int j, const Vector& dir) -> Matrix {
      return m_inv * system.jacobian_derivative(to_original(v), j, m * dir) * m;
    };
  }
  d.admissible = [system, to_original](const Vector& v) { return system.admissible(to_original(v)); };
  if (system.has_analytic_eigen()) {
    d.analytic_eigen = [system, m_inv, to_original](const Vector& v, const Direction& xi) {
      auto pairs = system.analytic_eigen(to_original(v), xi);
      for (auto& p : pairs) {
        if (p.vector) p.vector = Vector(m_inv * *p.vector);
      }
      return pairs;
    };
  }

  // Bounding box of the preimage of the original box corners.
  const Box& box = system.box();
  Vector lo = Vector::Constant(n, std::numeric_limits<double>::infinity());
  Vector hi = Vector::Constant(n, -std::numeric_limits<double>::infinity());
  if (n <= 16) {
    for (unsigned long mask = 0; mask < (1ul << n); ++mask) {
      Vector corner(n);
      for (int i = 0; i < n; ++i) corner(i) = (mask >> i) & 1ul ? box.upper(i) : box.lower(i);
      const Vector pre = m_inv * (corner - q);
      lo = lo.cwiseMin(pre);
      hi = hi.cwiseMax(pre);
    }
  } else {
    const Vector c = m_inv * (box.center() - q);
    lo = c.array() - 1.0;
    hi = c.array() + 1.0;
  }
  d.box = Box{lo, hi};
  return SystemSpec(std::move(d));
}

namespace {

PolynomialFluxParams polynomial_system_from_json(const nlohmann::json& doc) {
  static const std::vector<std::string> allowed = {"n", "m", "flux", "box"};
  if (!doc.is_object()) throw ParseError("system definition must be an object");
  for (const auto& [key, value] : doc.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ParseError("unknown key '" + key + "' in system definition");
    }
  }
  PolynomialFluxParams p;
  try {
    p.n = doc.at("n").get<int>();
    p.m = doc.at("m").get<int>();
    if (p.n < 1 || p.m < 1) throw ParseError("n and m must be positive");
    const auto& flux = doc.at("flux");
    if (!flux.is_array() || static_cast<int>(flux.size()) != p.m) {
      throw ParseError("flux must list one entry per space variable");
    }
    for (const auto& fj : flux) {
      if (!fj.is_array() || static_cast<int>(fj.size()) != p.n) {
        throw ParseError("each flux entry must list one term list per unknown");
      }
      std::vector<Polynomial> comps;
      for (const auto& terms : fj) {
        Polynomial poly(p.n);
        for (const auto& t : terms) {
          for (const auto& [key, value] : t.items()) {
            if (key != "coeff" && key != "exponents") throw ParseError("unknown key '" + key + "' in term");
          }
          const auto exps = t.at("exponents").get<std::vector<int>>();
          if (static_cast<int>(exps.size()) != p.n) throw ParseError("term exponents must have length n");
          poly.add_term(t.at("coeff").get<double>(), exps);
        }
        comps.push_back(std::move(poly));
      }
      p.flux.push_back(std::move(comps));
    }
    if (doc.contains("box")) {
      const auto& b = doc.at("box");
      for (const auto& [key, value] : b.items()) {
        if (key != "lower" && key != "upper") throw ParseError("unknown key '" + key + "' in box");
      }
      const auto lo = b.at("lower").get<std::vector<double>>();
      const auto hi = b.at("upper").get<std::vector<double>>();
      if (static_cast<int>(lo.size()) != p.n || static_cast<int>(hi.size()) != p.n) {
        throw ParseError("box bounds must have length n");
      }
      p.box = Box{Eigen::Map<const Vector>(lo.data(), p.n), Eigen::Map<const Vector>(hi.data(), p.n)};
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed system definition: ") + e.what());
  }
  return p;
}

}  // namespace

PolynomialFluxParams parse_polynomial_system(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("system definition is not valid JSON: ") + e.what());
  }
  return polynomial_system_from_json(doc);
}

PolynomialFluxParams read_polynomial_system(std::istream& in) {
  std::ostringstream os;
  os << in.rdbuf();
  return parse_polynomial_system(os.str());
}

}  // namespace hyperdeg
