#include "hyperdeg/classify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ranges>

#include "hyperdeg/parallel.hpp"

namespace hyperdeg {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::GenuinelyNonlinear: return "GenuinelyNonlinear";
    case Verdict::LinearlyDegenerate: return "LinearlyDegenerate";
    case Verdict::CompletelyLinearlyDegenerate: return "CompletelyLinearlyDegenerate";
    case Verdict::Mixed: return "Mixed";
    case Verdict::Indeterminate: return "Indeterminate";
  }
  return "unknown";
}

const char* to_string(JacobianCaseLabel c) {
  switch (c) {
    case JacobianCaseLabel::I: return "I";
    case JacobianCaseLabel::II: return "II";
    case JacobianCaseLabel::IIPrime: return "II'";
    case JacobianCaseLabel::III: return "III";
    case JacobianCaseLabel::IV: return "IV";
    case JacobianCaseLabel::Boundary: return "boundary";
  }
  return "unknown";
}

const char* to_string(CldStatus s) {
  switch (s) {
    case CldStatus::Holds: return "holds";
    case CldStatus::Fails: return "fails";
    case CldStatus::Indeterminate: return "indeterminate";
  }
  return "unknown";
}

bool ClassificationReport::all_decisive() const {
  return std::none_of(fields.begin(), fields.end(), [](const FieldReport& f) {
    return f.verdict == Verdict::Indeterminate || f.verdict == Verdict::Mixed;
  });
}

Verdict decide(const FieldReport& f) {
  if (f.gn_zero > 0 && f.gn_nonzero > 0) return Verdict::Mixed;
  const int gn_total = f.gn_zero + f.gn_nonzero + f.gn_dead_zone;
  if (gn_total == 0 || f.gn_errors > 0) return Verdict::Indeterminate;
  if (f.gn_nonzero == gn_total) return Verdict::GenuinelyNonlinear;
  if (f.gn_zero == gn_total) {
    if (f.cld_errors == 0 && f.cld_zero == f.evaluations) return Verdict::CompletelyLinearlyDegenerate;
    return Verdict::LinearlyDegenerate;
  }
  return Verdict::Indeterminate;
}

namespace {

struct SampleResult {
  std::vector<FieldIndicators> fields;
  std::optional<std::string> error_kind;
  std::string error;
};

void update_max(Witness& w, double value, const FieldIndicators& fi) {
  if (!w.present() || value > w.value) w = Witness{value, fi.u, fi.xi, fi.field_index};
}

void update_min(Witness& w, double value, const FieldIndicators& fi) {
  if (!w.present() || value < w.value) w = Witness{value, fi.u, fi.xi, fi.field_index};
}

int find_root(std::vector<int>& parent, int x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

std::string position_name(const std::vector<int>& positions) {
  if (positions.size() == 1) return "lambda_" + std::to_string(positions[0] + 1);
  return "lambda_" + std::to_string(positions.front() + 1) + "..lambda_" + std::to_string(positions.back() + 1);
}

}  // namespace

ClassificationReport classify_system(const SystemSpec& sys, const SamplingPlan& plan) {
  const SampleSet set = build_samples(sys, plan);
  const int n = sys.n_unknowns();

  std::vector<SampleResult> results(set.points.size());
  parallel_for(set.points.size(), plan.threads, [&](std::size_t i) {
    const SamplePoint& p = set.points[i];
    try {
      results[i].fields = indicators_all(sys, p.u, Direction::normalized(p.xi), plan.derivatives);
    } catch (const Error& e) {
      results[i].error_kind = error_kind(e);
      results[i].error = e.what();
    }
  });

  ClassificationReport report;
  report.system = sys.name();
  report.description = sys.description();
  report.n_unknowns = n;
  report.m_space = sys.m_space();
  report.plan = plan;
  report.box = set.box;
  report.states = static_cast<int>(set.states.size());
  report.grid_states = set.grid_states;
  report.random_states = set.random_states;
  report.rejected_states = set.rejected;
  report.grid_skipped = set.grid_skipped;
  report.samples = static_cast<int>(set.points.size());

  // Field identity: analytic labels, or positions linked by shared clusters.
  std::vector<std::string> key_of_position(n);
  std::vector<std::string> keys;
  const bool analytic = sys.has_analytic_eigen();
  if (analytic) {
    for (const auto& r : results) {
      for (const auto& fi : r.fields) {
        if (std::find(keys.begin(), keys.end(), fi.field) == keys.end()) keys.push_back(fi.field);
      }
    }
  } else {
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    for (const auto& r : results) {
      for (const auto& fi : r.fields) {
        for (int p : fi.cluster) parent[find_root(parent, p)] = find_root(parent, fi.field_index);
      }
    }
    std::vector<std::vector<int>> members(n);
    for (int p = 0; p < n; ++p) members[find_root(parent, p)].push_back(p);
    for (int p = 0; p < n; ++p) {
      const auto& mem = members[find_root(parent, p)];
      key_of_position[p] = position_name(mem);
      if (std::find(keys.begin(), keys.end(), key_of_position[p]) == keys.end()) keys.push_back(key_of_position[p]);
    }
  }

  report.fields.resize(keys.size());
  for (std::size_t k = 0; k < keys.size(); ++k) report.fields[k].name = keys[k];
  const auto field_of = [&](const FieldIndicators& fi) -> FieldReport& {
    const std::string& key = analytic ? fi.field : key_of_position[fi.field_index];
    const auto it = std::find(keys.begin(), keys.end(), key);
    return report.fields[static_cast<std::size_t>(it - keys.begin())];
  };

  for (const auto& r : results) {
    if (r.error_kind) {
      ++report.sample_errors;
      ++report.sample_error_kinds[*r.error_kind];
      for (auto& f : report.fields) {
        ++f.evaluations;
        ++f.errors;
        ++f.gn_errors;
        ++f.cld_errors;
        ++f.error_kinds[*r.error_kind];
        if (!f.first_error) f.first_error = *r.error_kind + ": " + r.error;
      }
      continue;
    }
    for (const auto& fi : r.fields) {
      FieldReport& f = field_of(fi);
      ++f.evaluations;
      if (std::find(f.positions.begin(), f.positions.end(), fi.field_index) == f.positions.end()) {
        f.positions.push_back(fi.field_index);
      }
      ++f.representatives[to_string(fi.representative)];
      if (!fi.errors.empty()) {
        ++f.errors;
        for (const auto& e : fi.errors) ++f.error_kinds[e.substr(0, e.find(':'))];
        if (!f.first_error) f.first_error = fi.errors.front();
      }
      if (fi.gn_value) {
        const double g = std::abs(*fi.gn_value);
        if (g <= plan.eps_zero) ++f.gn_zero;
        else if (g >= plan.eps_nonzero) ++f.gn_nonzero;
        else ++f.gn_dead_zone;
        update_max(f.max_gn, g, fi);
        update_min(f.min_gn, g, fi);
        ++f.gn_methods[fi.gn_lambda_source.empty() ? fi.gn_method : fi.gn_method + "/" + fi.gn_lambda_source];
        if (fi.gn_check) {
          f.max_gn_check_difference = std::max(f.max_gn_check_difference, std::abs(*fi.gn_value - *fi.gn_check));
          if (!fi.gn_agrees) ++f.gn_disagreements;
        }
      } else {
        ++f.gn_errors;
      }
      if (fi.cld_values) {
        const double c = fi.cld_values->cwiseAbs().maxCoeff();
        if (c <= plan.eps_zero) ++f.cld_zero;
        else if (c >= plan.eps_nonzero) ++f.cld_nonzero;
        update_max(f.max_cld, c, fi);
        update_max(f.max_defect, *fi.projective_defect, fi);
      } else {
        ++f.cld_errors;
      }
    }
  }

  int errored = 0;
  for (auto& f : report.fields) {
    std::sort(f.positions.begin(), f.positions.end());
    f.verdict = decide(f);
    if (f.cld_nonzero > 0) f.cld_status = "nonzero";
    else if (f.cld_errors == 0 && f.cld_zero == f.evaluations) f.cld_status = "zero";
    else f.cld_status = "undecided";
    errored = std::max(errored, f.errors);
  }
  report.error_warning = report.samples > 0 && errored > plan.error_warning_rate * report.samples;
  report.notes.push_back("verdicts hold on the sampled set only; they are not proofs");
  if (report.error_warning) report.notes.push_back("more than the allowed fraction of samples failed to evaluate");
  return report;
}

JacobianCase jacobian_case(const Matrix& m, double tol) {
  if (m.rows() != 2 || m.cols() != 2) throw UnsupportedOperation("case detection needs a 2x2 Jacobian");
  JacobianCase jc;
  jc.a = m(0, 0);
  jc.b = m(0, 1);
  jc.c = m(1, 0);
  jc.d = m(1, 1);
  jc.discriminant = (jc.a - jc.d) * (jc.a - jc.d) + 4.0 * jc.b * jc.c;
  if (jc.discriminant < -tol) {
    throw NotHyperbolic("negative discriminant " + std::to_string(jc.discriminant));
  }
  const double root = std::sqrt(std::max(0.0, jc.discriminant));
  jc.lambda1 = 0.5 * (jc.a + jc.d - root);
  jc.lambda2 = 0.5 * (jc.a + jc.d + root);
  const bool b_zero = std::abs(jc.b) <= tol;
  const bool c_zero = std::abs(jc.c) <= tol;
  const bool separated = jc.discriminant > tol;
  if (separated && !b_zero && !c_zero) jc.label = JacobianCaseLabel::I;
  else if (separated && b_zero && !c_zero) jc.label = JacobianCaseLabel::II;
  else if (separated && c_zero && !b_zero) jc.label = JacobianCaseLabel::IIPrime;
  else if (b_zero && c_zero && std::abs(jc.a - jc.d) > tol) jc.label = JacobianCaseLabel::III;
  else if (std::abs(jc.discriminant) <= tol) jc.label = JacobianCaseLabel::IV;
  else jc.label = JacobianCaseLabel::Boundary;
  return jc;
}

JacobianCase jacobian_case(const SystemSpec& sys, const Vector& u, int j, double tol) {
  return jacobian_case(sys.jacobian(u, j), tol);
}

namespace {

void require_theorem_scope(const SystemSpec& sys) {
  if (!sys.conservative()) throw UnsupportedOperation(sys.name() + ": theorem check needs a conservative system");
  if (sys.n_unknowns() != 2) throw UnsupportedOperation(sys.name() + ": theorem check needs exactly two unknowns");
}

}  // namespace

TheoremVerdict verify_linearity_theorem(const SystemSpec& sys, const SamplingPlan& plan) {
  require_theorem_scope(sys);
  TheoremVerdict tv;
  tv.classification = classify_system(sys, plan);
  const auto& fields = tv.classification.fields;

  const bool all_cld = !fields.empty() && std::all_of(fields.begin(), fields.end(), [](const FieldReport& f) {
    return f.verdict == Verdict::CompletelyLinearlyDegenerate;
  });
  const bool counterevidence = std::any_of(fields.begin(), fields.end(), [](const FieldReport& f) {
    return f.gn_nonzero > 0 || f.cld_nonzero > 0;
  });
  tv.cld = all_cld ? CldStatus::Holds : counterevidence ? CldStatus::Fails : CldStatus::Indeterminate;
  tv.cld_holds = tv.cld == CldStatus::Holds;

  const SampleSet set = build_samples(sys, plan);
  tv.reference_state = set.states.front();
  std::vector<Matrix> reference;
  for (int j = 0; j < sys.m_space(); ++j) reference.push_back(sys.jacobian(tv.reference_state, j));
  for (const Vector& u : set.states) {
    for (int j = 0; j < sys.m_space(); ++j) {
      tv.jacobian_variation =
          std::max(tv.jacobian_variation, (sys.jacobian(u, j) - reference[j]).cwiseAbs().maxCoeff());
    }
  }
  tv.jacobian_constant = tv.jacobian_variation <= plan.eps_zero;
  tv.consistent_with_theorem = (tv.cld == CldStatus::Holds && tv.jacobian_constant) ||
                               (tv.cld == CldStatus::Fails && !tv.jacobian_constant);

  // Case labels per state and space index, with isolated zeros of b or c
  // relabelled when a half-spacing neighbour is in Case I.
  const Vector spacing = (set.box.upper - set.box.lower) / (plan.grid_per_axis - 1);
  const double tol = plan.eps_zero;
  const auto label_at = [&](const Vector& u, int j) -> std::optional<JacobianCaseLabel> {
    try {
      return jacobian_case(sys, u, j, tol).label;
    } catch (const NotHyperbolic&) {
      return std::nullopt;
    }
  };
  for (const int j : std::views::iota(0, sys.m_space())) {
    for (const Vector& u : set.states) {
      ++tv.case_samples;
      auto label = label_at(u, j);
      if (!label) {
        ++tv.case_histogram["not-hyperbolic"];
        continue;
      }
      if (*label != JacobianCaseLabel::I && *label != JacobianCaseLabel::Boundary) {
        bool near_case_one = false;
        for (int k = 0; k < 2 && !near_case_one; ++k) {
          for (const double sign : {-0.5, 0.5}) {
            Vector v = u;
            v(k) += sign * spacing(k);
            if (!sys.admissible(v)) continue;
            if (label_at(v, j) == JacobianCaseLabel::I) {
              near_case_one = true;
              break;
            }
          }
        }
        if (near_case_one) {
          label = JacobianCaseLabel::Boundary;
          ++tv.refined_to_boundary;
        }
      }
      ++tv.case_histogram[to_string(*label)];
    }
  }
  if (tv.case_histogram["IV"] == tv.case_samples) {
    tv.notes.push_back("every sampled Jacobian is in Case IV (repeated eigenvalue); the complete linear degeneracy "
                       "check relies on the Case III reduction there");
  }
  std::erase_if(tv.case_histogram, [](const auto& kv) { return kv.second == 0; });
  tv.notes.push_back("verdicts hold on the sampled set only; they are not proofs");
  return tv;
}

MixedPartialsReport verify_mixed_partials(const SystemSpec& sys, const SamplingPlan& plan) {
  require_theorem_scope(sys);
  const SampleSet set = build_samples(sys, plan);
  MixedPartialsReport rep;
  rep.worst_state = set.states.front();
  for (const Vector& u : set.states) {
    const double h = base_step(u, plan.derivatives);
    rep.step = std::max(rep.step, h);
    const Vector eu = Vector::Unit(2, 0) * h;
    const Vector ev = Vector::Unit(2, 1) * h;
    if (!sys.admissible(u + eu) || !sys.admissible(u - eu) || !sys.admissible(u + ev) || !sys.admissible(u - ev)) {
      continue;
    }
    for (int j = 0; j < sys.m_space(); ++j) {
      const Matrix du = (sys.jacobian(u + eu, j) - sys.jacobian(u - eu, j)) / (2.0 * h);
      const Matrix dv = (sys.jacobian(u + ev, j) - sys.jacobian(u - ev, j)) / (2.0 * h);
      // a_v - b_u and c_v - d_u with A = [[a, b], [c, d]].
      const double asym = std::max(std::abs(dv(0, 0) - du(0, 1)), std::abs(dv(1, 0) - du(1, 1)));
      ++rep.evaluations;
      if (asym > rep.max_asymmetry) {
        rep.max_asymmetry = asym;
        rep.worst_state = u;
      }
    }
  }
  rep.tolerance = 10.0 * rep.step * rep.step;
  rep.within_tolerance = rep.max_asymmetry <= rep.tolerance;
  return rep;
}

}  // namespace hyperdeg
