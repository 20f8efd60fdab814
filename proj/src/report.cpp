#include "hyperdeg/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>

namespace hyperdeg {

namespace {

std::string format_real(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  std::string s = buf;
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

void write(const Document& d, int indent, std::string& out) {
  const std::string pad(2 * (indent + 1), ' ');
  const std::string close(2 * indent, ' ');
  switch (d.type()) {
    case Document::value_t::object: {
      if (d.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, value] : d.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad + Document(key).dump() + ": ";
        write(value, indent + 1, out);
      }
      out += "\n" + close + "}";
      return;
    }
    case Document::value_t::array: {
      if (d.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line; vectors are the common case.
      const bool flat = std::none_of(d.begin(), d.end(), [](const Document& e) { return e.is_structured(); });
      out += flat ? "[" : "[\n";
      bool first = true;
      for (const auto& e : d) {
        if (!first) out += flat ? ", " : ",\n";
        first = false;
        if (!flat) out += pad;
        write(e, indent + 1, out);
      }
      out += flat ? "]" : "\n" + close + "]";
      return;
    }
    case Document::value_t::number_float:
      out += format_real(d.get<double>());
      return;
    default:
      out += d.dump();
      return;
  }
}

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

Document optional_real(const std::optional<double>& x) { return x ? Document(*x) : Document(nullptr); }

Document to_json(const Witness& w) {
  if (!w.present()) return nullptr;
  return {{"value", w.value}, {"u", hyperdeg::to_json(w.u)}, {"xi", hyperdeg::to_json(w.xi)}, {"position", w.field_index}};
}

Document to_json(const std::map<std::string, int>& m) {
  Document d = Document::object();
  for (const auto& [k, v] : m) d[k] = v;
  return d;
}

Document to_json(const std::vector<std::string>& v) {
  Document d = Document::array();
  for (const auto& s : v) d.push_back(s);
  return d;
}

}  // namespace

std::string dump(const Document& doc) {
  std::string out;
  write(doc, 0, out);
  out += "\n";
  return out;
}

Document envelope(std::string_view command, Document body) {
  Document d;
  d["schema_version"] = kSchemaVersion;
  d["tool"] = {{"name", "hyperdeg"}, {"version", std::string(kToolVersion)}};
  d["command"] = std::string(command);
  d["generated_at"] = utc_now();
  d["body"] = std::move(body);
  return d;
}

Document strip_timestamp(Document doc) {
  doc.erase("generated_at");
  return doc;
}

Document to_json(const Vector& v) {
  Document d = Document::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) d.push_back(v(i));
  return d;
}

Document to_json(const Box& box) { return {{"lower", to_json(box.lower)}, {"upper", to_json(box.upper)}}; }

Document to_json(const std::vector<CatalogEntry>& entries) {
  Document d = Document::array();
  for (const auto& e : entries) {
    d.push_back({{"name", e.name},
                 {"n", e.n_unknowns},
                 {"m", e.m_space},
                 {"conservative", e.conservative},
                 {"parameters", e.parameters},
                 {"description", e.description},
                 {"box", to_json(e.box)}});
  }
  return d;
}

Document to_json(const SamplingPlan& plan) {
  const DerivativeOptions& o = plan.derivatives;
  return {{"grid_per_axis", plan.grid_per_axis},
          {"random_states", plan.random_states},
          {"random_directions", plan.random_directions},
          {"direction_grid", plan.direction_grid},
          {"seed", plan.seed},
          {"max_grid_states", plan.max_grid_states},
          {"max_rejections", plan.max_rejections},
          {"tolerances",
           {{"eps_zero", plan.eps_zero},
            {"eps_nonzero", plan.eps_nonzero},
            {"error_warning_rate", plan.error_warning_rate},
            {"step_scale", o.step_scale},
            {"richardson_rel", o.richardson_rel},
            {"jump_rel", o.jump_rel},
            {"eigen_group", o.eigen.group},
            {"eigen_imag", o.eigen.imag},
            {"eigen_residual", o.eigen.residual},
            {"eigen_complete", o.eigen.complete}}}};
}

Document to_json(const ClassificationReport& r) {
  Document fields = Document::array();
  for (const auto& f : r.fields) {
    Document positions = Document::array();
    for (int p : f.positions) positions.push_back(p);
    fields.push_back({{"name", f.name},
                      {"positions", positions},
                      {"verdict", to_string(f.verdict)},
                      {"cld_status", f.cld_status},
                      {"counts",
                       {{"evaluations", f.evaluations},
                        {"errors", f.errors},
                        {"gn_errors", f.gn_errors},
                        {"cld_errors", f.cld_errors},
                        {"gn_zero", f.gn_zero},
                        {"gn_nonzero", f.gn_nonzero},
                        {"gn_dead_zone", f.gn_dead_zone},
                        {"cld_zero", f.cld_zero},
                        {"cld_nonzero", f.cld_nonzero},
                        {"gn_disagreements", f.gn_disagreements}}},
                      {"max_gn_check_difference", f.max_gn_check_difference},
                      {"witnesses",
                       {{"max_gn", to_json(f.max_gn)},
                        {"min_gn", to_json(f.min_gn)},
                        {"max_cld", to_json(f.max_cld)},
                        {"max_projective_defect", to_json(f.max_defect)}}},
                      {"gn_methods", to_json(f.gn_methods)},
                      {"representatives", to_json(f.representatives)},
                      {"error_kinds", to_json(f.error_kinds)},
                      {"first_error", f.first_error ? Document(*f.first_error) : Document(nullptr)}});
  }
  return {{"system", {{"name", r.system}, {"description", r.description}, {"n", r.n_unknowns}, {"m", r.m_space}}},
          {"plan", to_json(r.plan)},
          {"box", to_json(r.box)},
          {"sampling",
           {{"states", r.states},
            {"grid_states", r.grid_states},
            {"random_states", r.random_states},
            {"rejected_states", r.rejected_states},
            {"grid_skipped", r.grid_skipped},
            {"samples", r.samples},
            {"sample_errors", r.sample_errors},
            {"sample_error_kinds", to_json(r.sample_error_kinds)}}},
          {"fields", fields},
          {"all_decisive", r.all_decisive()},
          {"error_warning", r.error_warning},
          {"notes", to_json(r.notes)}};
}

Document to_json(const TheoremVerdict& v) {
  return {{"classification", to_json(v.classification)},
          {"cld", to_string(v.cld)},
          {"cld_holds", v.cld_holds},
          {"jacobian_constant", v.jacobian_constant},
          {"jacobian_variation", v.jacobian_variation},
          {"reference_state", to_json(v.reference_state)},
          {"consistent_with_theorem", v.consistent_with_theorem},
          {"case_histogram", to_json(v.case_histogram)},
          {"case_samples", v.case_samples},
          {"refined_to_boundary", v.refined_to_boundary},
          {"notes", to_json(v.notes)}};
}

Document to_json(const MixedPartialsReport& r) {
  return {{"max_asymmetry", r.max_asymmetry},
          {"step", r.step},
          {"tolerance", r.tolerance},
          {"evaluations", r.evaluations},
          {"within_tolerance", r.within_tolerance},
          {"worst_state", to_json(r.worst_state)}};
}

Document to_json(const EvolutionResult& r) {
  double max_conservation = 0.0;
  for (const auto& [t, e] : r.conservation_series) max_conservation = std::max(max_conservation, e);
  double max_gradient = 0.0;
  for (const auto& [t, g] : r.gradient_series) max_gradient = std::max(max_gradient, g);
  Document snaps = Document::array();
  for (const auto& s : r.snapshots) snaps.push_back(s.time);
  return {{"status", to_string(r.status)},
          {"message", r.message},
          {"scheme", r.scheme},
          {"cells", static_cast<int>(r.grid.size())},
          {"cell_width", r.cell_width},
          {"final_time", r.final_time},
          {"steps", r.steps},
          {"initial_gradient", r.initial_gradient},
          {"max_gradient", max_gradient},
          {"threshold", r.threshold},
          {"blowup_time", optional_real(r.blowup_time)},
          {"exit_time", optional_real(r.exit_time)},
          {"exit_cell", r.exit_cell ? Document(*r.exit_cell) : Document(nullptr)},
          {"max_conservation_error", r.conservation_series.empty() ? Document(nullptr) : Document(max_conservation)},
          {"snapshot_times", snaps}};
}

Document to_json(const BlowupConfirmation& c) {
  return {{"confirmed", c.confirmed},
          {"relative_difference", c.relative_difference},
          {"coarse", to_json(c.coarse)},
          {"fine", to_json(c.fine)}};
}

Document to_json(const SplitComparison& c) {
  return {{"cells", c.cells},
          {"cell_width", c.cell_width},
          {"time", c.time},
          {"crossing_time", c.split.crossing_time},
          {"sup_gap", c.sup_gap},
          {"gap_over_cell_width", c.sup_gap / c.cell_width},
          {"modulus_residual", c.modulus_residual},
          {"direct", to_json(c.direct)}};
}

}  // namespace hyperdeg
