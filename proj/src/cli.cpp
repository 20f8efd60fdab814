#include "hyperdeg/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "hyperdeg/report.hpp"

namespace hyperdeg::cli {

namespace {

// ---------------------------------------------------------------------------
// Strict config reading

using Json = nlohmann::json;

void only_keys(const Json& obj, std::string_view where, std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) throw ParseError("config: '" + std::string(where) + "' must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ParseError("config: unknown key '" + key + "' in '" + std::string(where) + "'");
    }
  }
}

template <class T>
T get(const Json& obj, std::string_view where, const std::string& key) {
  try {
    return obj.at(key).get<T>();
  } catch (const Json::exception&) {
    throw ParseError("config: '" + std::string(where) + "." + key + "' has the wrong type");
  }
}

template <class T>
void read(const Json& obj, std::string_view where, const std::string& key, T& dst) {
  if (obj.contains(key)) dst = get<T>(obj, where, key);
}

template <class T>
void read(const Json& obj, std::string_view where, const std::string& key, std::optional<T>& dst) {
  if (obj.contains(key) && !obj.at(key).is_null()) dst = get<T>(obj, where, key);
}

Vector to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

// ---------------------------------------------------------------------------
// Formatting

std::string num(double x, int digits = 6) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

std::string vec(const Vector& v) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? ", " : "") + num(v(i), 4);
  return s + ")";
}

std::string short_verdict(Verdict v) {
  switch (v) {
    case Verdict::GenuinelyNonlinear: return "GN";
    case Verdict::LinearlyDegenerate: return "LD";
    case Verdict::CompletelyLinearlyDegenerate: return "CLD";
    case Verdict::Mixed: return "Mixed";
    case Verdict::Indeterminate: return "Indeterminate";
  }
  return "?";
}

Matrix parse_matrix(std::string_view text) {
  std::vector<std::vector<double>> rows;
  std::stringstream all{std::string(text)};
  std::string row;
  while (std::getline(all, row, ';')) {
    std::replace(row.begin(), row.end(), ',', ' ');
    std::stringstream rs(row);
    std::vector<double> entries;
    std::string tok;
    while (rs >> tok) {
      try {
        std::size_t used = 0;
        entries.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw ParseError("matrix: bad entry '" + tok + "'");
      }
    }
    if (!entries.empty()) rows.push_back(std::move(entries));
  }
  if (rows.empty()) throw ParseError("matrix: no rows in '" + std::string(text) + "'");
  const std::size_t n = rows.size();
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) throw ParseError("matrix: '" + std::string(text) + "' is not square");
    for (std::size_t j = 0; j < n; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

void write_document(const Document& doc, const std::optional<std::string>& path, bool to_stdout,
                    std::ostream& out) {
  const std::string text = dump(doc);
  if (to_stdout) out << text;
  if (path) {
    std::ofstream f(*path);
    if (!f) throw Error("cannot write '" + *path + "'");
    f << text;
  }
}

// ---------------------------------------------------------------------------
// Flags

// Flag values land in a RunConfig only when given, after the config file.
class Binder {
 public:
  explicit Binder(std::vector<std::function<void(RunConfig&)>>& appliers) : appliers_(appliers) {}

  template <class T, class Set>
  CLI::Option* option(CLI::App* app, const std::string& name, const std::string& help, Set set) {
    auto value = std::make_shared<T>();
    CLI::Option* o = app->add_option(name, *value, help);
    appliers_.push_back([o, value, set](RunConfig& c) {
      if (o->count() > 0) set(c, *value);
    });
    return o;
  }

  template <class Set>
  CLI::Option* flag(CLI::App* app, const std::string& name, const std::string& help, Set set) {
    CLI::Option* o = app->add_flag(name, help);
    appliers_.push_back([o, set](RunConfig& c) {
      if (o->count() > 0) set(c);
    });
    return o;
  }

 private:
  std::vector<std::function<void(RunConfig&)>>& appliers_;
};

void add_system_flags(CLI::App* app, Binder& b) {
  b.option<std::string>(app, "--system", "system name (see list-systems)",
                        [](RunConfig& c, const std::string& v) { c.system.name = v; });
  b.option<double>(app, "--gamma", "gas2d adiabatic exponent", [](RunConfig& c, double v) { c.system.gamma = v; });
  b.option<int>(app, "--torus-dim", "torus dimension k", [](RunConfig& c, int v) { c.system.torus_dim = v; });
  b.option<std::string>(app, "--flux-poly", "lax driving polynomial f(U), e.g. U^2",
                        [](RunConfig& c, const std::string& v) { c.system.flux_poly = v; });
  b.option<std::vector<std::string>>(app, "--matrix", "linear coefficient matrix \"a b; c d\" (one per x_j)",
                                     [](RunConfig& c, const std::vector<std::string>& v) { c.system.matrices = v; });
  for (int j = 1; j <= 3; ++j) {
    b.option<std::string>(app, "--f" + std::to_string(j), "rotational profile f_" + std::to_string(j) + "(r)",
                          [j](RunConfig& c, const std::string& v) {
                            if (static_cast<int>(c.system.profiles.size()) < j) c.system.profiles.resize(j);
                            c.system.profiles[j - 1] = v;
                          });
  }
  b.option<int>(app, "--n", "rotational number of unknowns", [](RunConfig& c, int v) { c.system.n = v; });
  b.option<std::vector<std::string>>(app, "--scalar-flux", "scalar flux g_j(w) (one per x_j)",
                                     [](RunConfig& c, const std::vector<std::string>& v) { c.system.scalar_flux = v; });
  b.option<std::string>(app, "--system-file", "polynomial system document (JSON)", [](RunConfig& c, const std::string& v) {
    c.system.file = v;
    if (c.system.name.empty()) c.system.name = "custom";
  });
}

void add_sampling_flags(CLI::App* app, Binder& b) {
  b.option<std::uint64_t>(app, "--seed", "sampling seed", [](RunConfig& c, std::uint64_t v) { c.sampling.seed = v; });
  b.option<int>(app, "--grid", "grid points per state axis", [](RunConfig& c, int v) { c.sampling.grid_per_axis = v; });
  b.option<int>(app, "--random-states", "random states", [](RunConfig& c, int v) { c.sampling.random_states = v; });
  b.option<int>(app, "--random-directions", "random directions per state",
                [](RunConfig& c, int v) { c.sampling.random_directions = v; });
  b.option<int>(app, "--direction-grid", "deterministic directions per state",
                [](RunConfig& c, int v) { c.sampling.direction_grid = v; });
  b.option<int>(app, "--max-grid-states", "skip the state grid above this many points",
                [](RunConfig& c, int v) { c.sampling.max_grid_states = v; });
  b.option<int>(app, "--threads", "worker threads (default: HYPERDEG_THREADS or hardware)",
                [](RunConfig& c, int v) { c.sampling.threads = v; });
  b.option<double>(app, "--eps-zero", "zero tolerance", [](RunConfig& c, double v) { c.sampling.eps_zero = v; });
  b.option<double>(app, "--eps-nonzero", "nonzero threshold", [](RunConfig& c, double v) { c.sampling.eps_nonzero = v; });
}

struct Common {
  std::string config_path;
  bool json = false;
};

void add_common_flags(CLI::App* app, Binder& b, Common& common) {
  app->add_option("--config", common.config_path, "strict JSON config document");
  app->add_flag("--json", common.json, "print the report document instead of the summary");
  b.option<std::string>(app, "--output", "write the report document to this file",
                        [](RunConfig& c, const std::string& v) { c.output = v; });
}

// ---------------------------------------------------------------------------
// Commands

int cmd_list_systems(bool json, const std::string& filter, std::ostream& out) {
  std::vector<CatalogEntry> entries = catalog();
  if (!filter.empty()) {
    if (filter != "conservative" && filter != "nonconservative") {
      throw ParseError("--filter must be conservative or nonconservative");
    }
    const bool want = filter == "conservative";
    std::erase_if(entries, [&](const CatalogEntry& e) { return e.conservative != want; });
  }
  if (json) {
    out << dump(envelope("list-systems", {{"systems", to_json(entries)}}));
    return kExitOk;
  }
  for (const auto& e : entries) {
    out << e.name << "  n=" << e.n_unknowns << " m=" << e.m_space
        << (e.conservative ? "  conservative" : "  quasilinear") << "\n"
        << "    " << e.description << "\n"
        << "    parameters: " << e.parameters << "\n"
        << "    box: lower " << vec(e.box.lower) << " upper " << vec(e.box.upper) << "\n";
  }
  return kExitOk;
}

void print_classification(const ClassificationReport& r, std::ostream& out) {
  out << "system " << r.system << " (n=" << r.n_unknowns << ", m=" << r.m_space << "): " << r.samples
      << " samples over " << r.states << " states, seed " << r.plan.seed << "\n";
  for (const auto& f : r.fields) {
    out << "  " << f.name << ": " << short_verdict(f.verdict) << "  gn zero/nonzero/dead " << f.gn_zero << "/"
        << f.gn_nonzero << "/" << f.gn_dead_zone << "  cld " << f.cld_status;
    if (f.max_gn.present()) out << "  max|gn| " << num(std::abs(f.max_gn.value));
    if (f.max_cld.present()) out << "  max|cld| " << num(f.max_cld.value);
    if (f.errors > 0) out << "  errors " << f.errors;
    out << "\n";
  }
  if (r.sample_errors > 0) out << "  samples failing decomposition: " << r.sample_errors << "\n";
  if (r.error_warning) out << "  warning: error rate above " << num(100.0 * r.plan.error_warning_rate) << "%\n";
  for (const auto& n : r.notes) out << "  note: " << n << "\n";
}

int cmd_analyze(const RunConfig& cfg, bool json, std::ostream& out) {
  const SystemSpec sys = build_system(cfg.system);
  const SamplingPlan plan = build_plan(cfg.sampling);
  const ClassificationReport report = classify_system(sys, plan);
  write_document(envelope("analyze", to_json(report)), cfg.output, json, out);
  if (!json) print_classification(report, out);
  return report.all_decisive() ? kExitOk : kExitUndecided;
}

SamplingPlan sweep_plan(const SamplingConfig& config) {
  SamplingConfig c = config;
  // Random sweeps run hundreds of systems, so the defaults are lighter.
  if (!c.random_states) c.random_states = 16;
  if (!c.direction_grid) c.direction_grid = 4;
  if (!c.random_directions) c.random_directions = 2;
  return build_plan(c);
}

int cmd_verify_random(const RunConfig& cfg, bool json, std::ostream& out) {
  const TheoremConfig& t = cfg.theorem;
  if (*t.random != "linear" && *t.random != "quadratic") throw ParseError("theorem.random must be linear or quadratic");
  if (t.count < 1 || t.max_m < 1) throw ParseError("theorem.count and theorem.max_m must be positive");
  if (!cfg.system.name.empty()) throw ParseError("random sweeps generate their own systems; drop --system");
  SamplingPlan plan = sweep_plan(cfg.sampling);
  const std::uint64_t seed = plan.seed;
  Rng rng(seed);
  Document instances = Document::array();
  int consistent = 0, cld = 0;
  for (int i = 0; i < t.count; ++i) {
    const int m = 1 + i % t.max_m;
    const PolynomialFluxParams p = *t.random == "linear" ? random_linear_flux(rng, m) : random_quadratic_flux(rng, m);
    const SystemSpec sys = make_polynomial_system(p, "random-" + *t.random + "-" + std::to_string(i));
    plan.seed = seed + 1 + static_cast<std::uint64_t>(i);
    const TheoremVerdict v = verify_linearity_theorem(sys, plan);
    consistent += v.consistent_with_theorem ? 1 : 0;
    cld += v.cld_holds ? 1 : 0;
    Document verdicts = Document::array();
    for (const auto& f : v.classification.fields) verdicts.push_back(to_string(f.verdict));
    instances.push_back({{"index", i},
                         {"m", m},
                         {"cld", to_string(v.cld)},
                         {"jacobian_constant", v.jacobian_constant},
                         {"jacobian_variation", v.jacobian_variation},
                         {"consistent_with_theorem", v.consistent_with_theorem},
                         {"verdicts", verdicts}});
  }
  Document body = {{"family", *t.random},
                   {"count", t.count},
                   {"seed", seed},
                   {"plan", to_json(plan)},
                   {"consistent", consistent},
                   {"cld_holds", cld},
                   {"instances", instances}};
  write_document(envelope("verify-theorem", std::move(body)), cfg.output, json, out);
  if (!json) {
    out << "random " << *t.random << " systems: " << consistent << "/" << t.count << " consistent, " << cld
        << " completely linearly degenerate\n";
  }
  return consistent == t.count ? kExitOk : kExitUndecided;
}

int cmd_verify_theorem(const RunConfig& cfg, bool json, std::ostream& out) {
  if (cfg.theorem.random) return cmd_verify_random(cfg, json, out);
  const SystemSpec sys = build_system(cfg.system);
  const SamplingPlan plan = build_plan(cfg.sampling);
  const TheoremVerdict v = verify_linearity_theorem(sys, plan);
  const MixedPartialsReport mp = verify_mixed_partials(sys, plan);
  Document body = to_json(v);
  body["mixed_partials"] = to_json(mp);
  write_document(envelope("verify-theorem", std::move(body)), cfg.output, json, out);
  if (!json) {
    print_classification(v.classification, out);
    out << "complete linear degeneracy: " << to_string(v.cld) << "\n"
        << "jacobian constant: " << (v.jacobian_constant ? "yes" : "no") << " (variation "
        << num(v.jacobian_variation) << ")\n"
        << "consistent with the linearity theorem: " << (v.consistent_with_theorem ? "yes" : "no") << "\n"
        << "cases over " << v.case_samples << " states:";
    for (const auto& [label, count] : v.case_histogram) out << " " << label << "=" << count;
    out << "\n"
        << "mixed partials: max asymmetry " << num(mp.max_asymmetry) << " (tolerance " << num(mp.tolerance) << ")\n";
    for (const auto& n : v.notes) out << "note: " << n << "\n";
  }
  return v.consistent_with_theorem ? kExitOk : kExitUndecided;
}

void write_columns(const std::filesystem::path& dir, const EvolutionResult& r) {
  std::filesystem::create_directories(dir);
  char buf[40];
  const auto put = [&](std::ostream& f, double x) {
    std::snprintf(buf, sizeof buf, "%.17g", x);
    f << buf;
  };
  for (std::size_t k = 0; k < r.snapshots.size(); ++k) {
    std::ofstream f(dir / ("snapshot_" + std::to_string(k) + ".dat"));
    f << "# t = ";
    put(f, r.snapshots[k].time);
    f << "\n# s w_1 .. w_n\n";
    for (std::size_t i = 0; i < r.grid.size(); ++i) {
      put(f, r.grid[i]);
      for (Eigen::Index c = 0; c < r.snapshots[k].values[i].size(); ++c) {
        f << ' ';
        put(f, r.snapshots[k].values[i](c));
      }
      f << "\n";
    }
  }
  std::ofstream g(dir / "gradient.dat");
  g << "# t sup|dw/ds|\n";
  for (const auto& [t, v] : r.gradient_series) {
    put(g, t);
    g << ' ';
    put(g, v);
    g << "\n";
  }
  if (!r.conservation_series.empty()) {
    std::ofstream c(dir / "conservation.dat");
    c << "# t max|mean(t) - mean(0)|\n";
    for (const auto& [t, v] : r.conservation_series) {
      put(c, t);
      c << ' ';
      put(c, v);
      c << "\n";
    }
  }
}

int cmd_simulate(const RunConfig& cfg, bool json, std::ostream& out) {
  const SimulateConfig& s = cfg.simulate;
  const SystemSpec sys = build_system(cfg.system);
  const int n = sys.n_unknowns(), m = sys.m_space();
  const ProfileShape shape = parse_profile_shape(s.profile);

  const Direction xi = s.xi.empty() ? Direction::axis(m, 0) : Direction::normalized(to_vector(s.xi));
  if (xi.dimension() != m) throw InvalidParameters("--xi needs " + std::to_string(m) + " components");
  const Vector base = s.base.empty() ? sys.box().center() : to_vector(s.base);
  if (base.size() != n) throw InvalidParameters("--base needs " + std::to_string(n) + " components");
  Vector direction;
  if (!s.direction.empty()) {
    direction = to_vector(s.direction);
  } else if (s.field) {
    const EigenDecomposition d = decompose(sys, base, xi);
    if (*s.field < 0 || *s.field >= n) throw InvalidParameters("--field out of range");
    direction = d.right.col(*s.field).normalized();
  } else {
    direction = Vector::Unit(n, 0);
  }
  if (direction.size() != n) throw InvalidParameters("--direction needs " + std::to_string(n) + " components");
  const ProfileFn initial = make_profile(shape, s.amplitude, base, direction);

  Document body;
  body["system"] = {{"name", sys.name()}, {"description", sys.description()}, {"n", n}, {"m", m}};
  body["xi"] = to_json(xi.vector());
  body["profile"] = {{"shape", to_string(shape)},
                     {"amplitude", s.amplitude},
                     {"base", to_json(base)},
                     {"direction", to_json(direction)}};

  if (s.split) {
    const auto* rp = std::get_if<RotationalParams>(&sys.params());
    if (rp == nullptr) throw InvalidParameters("--split needs the rotational system");
    const double length = 2.0 * std::numbers::pi;
    const ScalarLaw law = rotational_modulus_law(rp->profiles, xi.vector());
    const auto r0 = [&](double x) { return initial(x).norm(); };
    const double t_star = scalar_characteristics(law, r0, length, s.cells, 0.0).crossing_time;
    const double t = s.t_end ? *s.t_end : (std::isfinite(t_star) ? 0.5 * t_star : 1.0);
    const SplitComparison coarse = compare_split_direct(*rp, xi.vector(), initial, length, s.cells, t);
    const SplitComparison fine = compare_split_direct(*rp, xi.vector(), initial, length, 2 * s.cells, t);
    const double c = coarse.sup_gap / coarse.cell_width;
    const bool first_order = fine.sup_gap <= c * fine.cell_width;
    body["split"] = {{"time", t},
                     {"crossing_time", t_star},
                     {"coarse", to_json(coarse)},
                     {"fine", to_json(fine)},
                     {"constant", c},
                     {"gap_ratio", fine.sup_gap > 0.0 ? coarse.sup_gap / fine.sup_gap : 0.0},
                     {"within_first_order", first_order}};
    write_document(envelope("simulate", std::move(body)), cfg.output, json, out);
    if (!json) {
      out << "split vs direct at t = " << num(t) << " (crossing time " << num(t_star) << ")\n"
          << "  " << coarse.cells << " cells: sup gap " << num(coarse.sup_gap) << "\n"
          << "  " << fine.cells << " cells: sup gap " << num(fine.sup_gap) << "\n"
          << "  gap <= C ds with C from the coarse run: " << (first_order ? "yes" : "no") << "\n"
          << "  | |u| - r | residual " << num(std::max(coarse.modulus_residual, fine.modulus_residual)) << "\n";
    }
    return kExitOk;
  }

  PlaneWaveProblem p{.system = sys,
                     .xi = xi,
                     .initial = initial,
                     .length = 2.0 * std::numbers::pi,
                     .cells = s.cells,
                     .cfl = s.cfl,
                     .t_end = s.t_end.value_or(1.0),
                     .blowup_threshold = s.threshold,
                     .snapshot_times = s.times,
                     .stop_at_blowup = true,
                     .max_steps = 5'000'000};
  EvolutionResult result = evolve(p);
  body["problem"] = {{"length", p.length}, {"cells", p.cells}, {"cfl", p.cfl}, {"t_end", p.t_end}};
  body["result"] = to_json(result);
  std::optional<BlowupConfirmation> confirmation;
  if (result.status == EvolutionStatus::BlowupDetected && s.confirm) {
    confirmation = confirm_blowup(p);
    body["confirmation"] = to_json(*confirmation);
  }
  if (!s.output_dir.empty()) write_columns(s.output_dir, result);
  write_document(envelope("simulate", std::move(body)), cfg.output, json, out);
  if (!json) {
    out << "status " << to_string(result.status) << " at t = " << num(result.final_time) << " after " << result.steps
        << " steps (" << result.scheme << ", " << p.cells << " cells)\n"
        << "  initial gradient " << num(result.initial_gradient) << ", threshold " << num(result.threshold) << "\n";
    if (result.blowup_time) out << "  blowup time " << num(*result.blowup_time) << "\n";
    if (confirmation) {
      out << "  at " << 2 * p.cells << " cells: "
          << (confirmation->fine.blowup_time ? "blowup time " + num(*confirmation->fine.blowup_time)
                                             : std::string("no blowup"))
          << ", " << (confirmation->confirmed ? "confirmed" : "not confirmed") << "\n";
    }
    if (result.exit_time) out << "  stopped at t = " << num(*result.exit_time) << ": " << result.message << "\n";
  }
  const bool failed = result.status == EvolutionStatus::CFLViolation || result.status == EvolutionStatus::DomainExit;
  return failed ? kExitRuntime : kExitOk;
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  only_keys(doc, "config", {"format_version", "command", "system", "sampling", "theorem", "simulate", "output"});
  RunConfig c;
  read(doc, "config", "format_version", c.format_version);
  if (c.format_version != 1) throw ParseError("config: unsupported format_version");
  read(doc, "config", "command", c.command);
  read(doc, "config", "output", c.output);
  if (doc.contains("system")) {
    const Json& s = doc["system"];
    only_keys(s, "system", {"name", "gamma", "torus_dim", "flux_poly", "matrices", "profiles", "n", "scalar_flux", "file"});
    read(s, "system", "name", c.system.name);
    read(s, "system", "gamma", c.system.gamma);
    read(s, "system", "torus_dim", c.system.torus_dim);
    read(s, "system", "flux_poly", c.system.flux_poly);
    read(s, "system", "matrices", c.system.matrices);
    read(s, "system", "profiles", c.system.profiles);
    read(s, "system", "n", c.system.n);
    read(s, "system", "scalar_flux", c.system.scalar_flux);
    read(s, "system", "file", c.system.file);
  }
  if (doc.contains("sampling")) {
    const Json& s = doc["sampling"];
    only_keys(s, "sampling", {"seed", "grid_per_axis", "random_states", "random_directions", "direction_grid",
                              "max_grid_states", "threads", "eps_zero", "eps_nonzero", "box"});
    read(s, "sampling", "seed", c.sampling.seed);
    read(s, "sampling", "grid_per_axis", c.sampling.grid_per_axis);
    read(s, "sampling", "random_states", c.sampling.random_states);
    read(s, "sampling", "random_directions", c.sampling.random_directions);
    read(s, "sampling", "direction_grid", c.sampling.direction_grid);
    read(s, "sampling", "max_grid_states", c.sampling.max_grid_states);
    read(s, "sampling", "threads", c.sampling.threads);
    read(s, "sampling", "eps_zero", c.sampling.eps_zero);
    read(s, "sampling", "eps_nonzero", c.sampling.eps_nonzero);
    if (s.contains("box")) {
      const Json& b = s["box"];
      only_keys(b, "sampling.box", {"lower", "upper"});
      const auto lower = get<std::vector<double>>(b, "sampling.box", "lower");
      const auto upper = get<std::vector<double>>(b, "sampling.box", "upper");
      if (lower.size() != upper.size()) throw ParseError("config: box bounds differ in size");
      c.sampling.box = Box{to_vector(lower), to_vector(upper)};
    }
  }
  if (doc.contains("theorem")) {
    const Json& t = doc["theorem"];
    only_keys(t, "theorem", {"random", "count", "max_m"});
    read(t, "theorem", "random", c.theorem.random);
    read(t, "theorem", "count", c.theorem.count);
    read(t, "theorem", "max_m", c.theorem.max_m);
  }
  if (doc.contains("simulate")) {
    const Json& s = doc["simulate"];
    only_keys(s, "simulate", {"profile", "amplitude", "cells", "t_end", "cfl", "xi", "base", "direction", "field",
                              "times", "threshold", "output_dir", "split", "confirm"});
    read(s, "simulate", "profile", c.simulate.profile);
    read(s, "simulate", "amplitude", c.simulate.amplitude);
    read(s, "simulate", "cells", c.simulate.cells);
    read(s, "simulate", "t_end", c.simulate.t_end);
    read(s, "simulate", "cfl", c.simulate.cfl);
    read(s, "simulate", "xi", c.simulate.xi);
    read(s, "simulate", "base", c.simulate.base);
    read(s, "simulate", "direction", c.simulate.direction);
    read(s, "simulate", "field", c.simulate.field);
    read(s, "simulate", "times", c.simulate.times);
    read(s, "simulate", "threshold", c.simulate.threshold);
    read(s, "simulate", "output_dir", c.simulate.output_dir);
    read(s, "simulate", "split", c.simulate.split);
    read(s, "simulate", "confirm", c.simulate.confirm);
  }
  return c;
}

SystemSpec build_system(const SystemConfig& c) {
  const std::string& name = c.name;
  if (name.empty()) throw InvalidParameters("no system given (use --system)");
  // Parameters for another family are rejected rather than ignored.
  const auto allow = [&](bool gamma, bool torus, bool flux, bool matrices, bool rot, bool scalar, bool file) {
    const bool bad = (!gamma && c.gamma) || (!torus && c.torus_dim) || (!flux && c.flux_poly) ||
                     (!matrices && !c.matrices.empty()) || (!rot && (!c.profiles.empty() || c.n)) ||
                     (!scalar && !c.scalar_flux.empty()) || (!file && c.file);
    if (bad) throw InvalidParameters("parameters given that system '" + name + "' does not take");
  };
  if (name == "gas2d") {
    allow(true, false, false, false, false, false, false);
    GasDynamicsParams p;
    if (c.gamma) p.gamma = *c.gamma;
    return builtin(name, p);
  }
  if (name == "torus") {
    allow(false, true, false, false, false, false, false);
    TorusParams p;
    if (c.torus_dim) p.dim = *c.torus_dim;
    return builtin(name, p);
  }
  if (name == "lax") {
    allow(false, false, true, false, false, false, false);
    LaxParams p;
    if (c.flux_poly) p.coefficients = parse_complex_polynomial(*c.flux_poly, "U");
    return builtin(name, p);
  }
  if (name == "rotational") {
    allow(false, false, false, false, true, false, false);
    RotationalParams p;
    if (c.n) p.n = *c.n;
    if (!c.profiles.empty()) {
      p.profiles.clear();
      for (const auto& f : c.profiles) {
        if (f.empty()) throw InvalidParameters("rotational profiles must be given in order (--f1 before --f2)");
        p.profiles.push_back(parse_polynomial1(f, "r"));
      }
    }
    return builtin(name, p);
  }
  if (name == "linear") {
    allow(false, false, false, true, false, false, false);
    if (c.matrices.empty()) return builtin(name);
    LinearParams p;
    for (const auto& m : c.matrices) p.matrices.push_back(parse_matrix(m));
    return builtin(name, p);
  }
  if (name == "scalar" || name == "scalar-burgers") {
    allow(false, false, false, false, false, name == "scalar", false);
    if (c.scalar_flux.empty()) return builtin(name);
    ScalarParams p;
    p.fluxes.clear();
    for (const auto& g : c.scalar_flux) p.fluxes.push_back(parse_polynomial1(g, "w"));
    return builtin(name, p);
  }
  if (name == "custom") {
    allow(false, false, false, false, false, false, true);
    if (!c.file) throw InvalidParameters("custom systems need --system-file");
    std::ifstream f(*c.file);
    if (!f) throw InvalidParameters("cannot open '" + *c.file + "'");
    return builtin(name, read_polynomial_system(f));
  }
  throw InvalidParameters("unknown system '" + name + "'");
}

SamplingPlan build_plan(const SamplingConfig& c) {
  SamplingPlan p;
  if (c.seed) p.seed = *c.seed;
  if (c.grid_per_axis) p.grid_per_axis = *c.grid_per_axis;
  if (c.random_states) p.random_states = *c.random_states;
  if (c.random_directions) p.random_directions = *c.random_directions;
  if (c.direction_grid) p.direction_grid = *c.direction_grid;
  if (c.max_grid_states) p.max_grid_states = *c.max_grid_states;
  if (c.threads) p.threads = *c.threads;
  if (c.eps_zero) p.eps_zero = *c.eps_zero;
  if (c.eps_nonzero) p.eps_nonzero = *c.eps_nonzero;
  if (c.box) p.state_box = *c.box;
  p.validate();
  return p;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Characteristic-field analyzer for quasilinear hyperbolic systems", "hyperdeg"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));
  std::vector<std::function<void(RunConfig&)>> appliers;
  Binder binder(appliers);
  Common common;

  CLI::App* list = app.add_subcommand("list-systems", "print the builtin catalog");
  bool list_json = false;
  std::string filter;
  list->add_flag("--json", list_json, "print the catalog document");
  list->add_option("--filter", filter, "conservative | nonconservative");

  CLI::App* analyze = app.add_subcommand("analyze", "classify every characteristic field on sampled states");
  CLI::App* theorem = app.add_subcommand("verify-theorem", "check CLD <=> linear for two-unknown conservation laws");
  CLI::App* simulate = app.add_subcommand("simulate", "evolve a plane wave along xi");
  for (CLI::App* sub : {analyze, theorem, simulate}) {
    add_common_flags(sub, binder, common);
    add_system_flags(sub, binder);
  }
  for (CLI::App* sub : {analyze, theorem}) add_sampling_flags(sub, binder);

  binder.flag(theorem, "--random-quadratic", "sweep random quadratic fluxes",
              [](RunConfig& c) { c.theorem.random = "quadratic"; });
  binder.flag(theorem, "--random-linear", "sweep random linear fluxes", [](RunConfig& c) { c.theorem.random = "linear"; });
  binder.option<int>(theorem, "--count", "instances in a random sweep", [](RunConfig& c, int v) { c.theorem.count = v; });
  binder.option<int>(theorem, "--max-m", "largest space dimension in a random sweep",
                     [](RunConfig& c, int v) { c.theorem.max_m = v; });

  binder.option<std::string>(simulate, "--profile", "sine | tanh-step | bump",
                             [](RunConfig& c, const std::string& v) { c.simulate.profile = v; });
  binder.option<double>(simulate, "--amplitude", "profile amplitude", [](RunConfig& c, double v) { c.simulate.amplitude = v; });
  binder.option<int>(simulate, "--cells", "grid cells on [0, 2 pi)", [](RunConfig& c, int v) { c.simulate.cells = v; });
  binder.option<double>(simulate, "--t-end", "final time", [](RunConfig& c, double v) { c.simulate.t_end = v; });
  binder.option<double>(simulate, "--cfl", "CFL number in (0, 1)", [](RunConfig& c, double v) { c.simulate.cfl = v; });
  binder.option<std::vector<double>>(simulate, "--xi", "wave normal (normalized)",
                                     [](RunConfig& c, const std::vector<double>& v) { c.simulate.xi = v; });
  binder.option<std::vector<double>>(simulate, "--base", "profile base state",
                                     [](RunConfig& c, const std::vector<double>& v) { c.simulate.base = v; });
  binder.option<std::vector<double>>(simulate, "--direction", "profile direction in state space",
                                     [](RunConfig& c, const std::vector<double>& v) { c.simulate.direction = v; });
  binder.option<int>(simulate, "--field", "perturb along the eigenvector at this sorted position",
                     [](RunConfig& c, int v) { c.simulate.field = v; });
  binder.option<std::vector<double>>(simulate, "--times", "snapshot times",
                                     [](RunConfig& c, const std::vector<double>& v) { c.simulate.times = v; });
  binder.option<double>(simulate, "--threshold", "gradient blowup threshold",
                        [](RunConfig& c, double v) { c.simulate.threshold = v; });
  binder.option<std::string>(simulate, "--output-dir", "directory for columnar snapshot and gradient files",
                             [](RunConfig& c, const std::string& v) { c.simulate.output_dir = v; });
  binder.flag(simulate, "--split", "rotational system: split solution against direct evolution",
              [](RunConfig& c) { c.simulate.split = true; });
  binder.flag(simulate, "--no-confirm", "skip the double-resolution rerun", [](RunConfig& c) { c.simulate.confirm = false; });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (list->parsed()) return cmd_list_systems(list_json, filter, out);

    RunConfig cfg;
    const std::string command = analyze->parsed() ? "analyze" : theorem->parsed() ? "verify-theorem" : "simulate";
    try {
      if (!common.config_path.empty()) {
        std::ifstream f(common.config_path);
        if (!f) throw ParseError("cannot read config '" + common.config_path + "'");
        std::stringstream text;
        text << f.rdbuf();
        cfg = parse_config(text.str());
        if (!cfg.command.empty() && cfg.command != command) {
          throw ParseError("config is for '" + cfg.command + "', not '" + command + "'");
        }
      }
      for (const auto& apply : appliers) apply(cfg);
      cfg.command = command;
      // A missing system is a usage error; a bad one is a construction error.
      if (cfg.system.name.empty() && !(command == "verify-theorem" && cfg.theorem.random)) {
        throw ParseError("no system given (use --system)");
      }
    } catch (const Error& e) {
      err << "hyperdeg: " << e.what() << "\n";
      return kExitUsage;
    }

    std::optional<SystemSpec> probe;
    if (!(command == "verify-theorem" && cfg.theorem.random)) {
      try {
        probe = build_system(cfg.system);
      } catch (const Error& e) {
        err << "hyperdeg: " << e.what() << "\n";
        return kExitConstruction;
      }
    }
    try {
      if (cfg.theorem.random) sweep_plan(cfg.sampling);
      else build_plan(cfg.sampling);
    } catch (const Error& e) {
      err << "hyperdeg: " << e.what() << "\n";
      return kExitUsage;
    }

    if (command == "analyze") return cmd_analyze(cfg, common.json, out);
    if (command == "verify-theorem") return cmd_verify_theorem(cfg, common.json, out);
    return cmd_simulate(cfg, common.json, out);
  } catch (const ParseError& e) {
    err << "hyperdeg: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UnsupportedOperation& e) {
    err << "hyperdeg: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvalidParameters& e) {
    err << "hyperdeg: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "hyperdeg: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace hyperdeg::cli
