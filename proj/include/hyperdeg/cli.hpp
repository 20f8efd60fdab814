#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hyperdeg/classify.hpp"
#include "hyperdeg/systems.hpp"

namespace hyperdeg::cli {

// Exit-code contract; fixed for scripted use.
enum ExitCode : int {
  kExitOk = 0,
  kExitUndecided = 2,     // Indeterminate/Mixed verdict, or theorem inconsistency
  kExitUsage = 64,        // bad flags or config document
  kExitConstruction = 65, // system could not be built from its parameters
  kExitRuntime = 70,      // evaluation failure, CFL violation, domain exit
};

// Every field is optional in the config document; unset ones keep the
// defaults shown here, so {} is a valid config for every builtin.
struct SystemConfig {
  std::string name;                        // required unless a random theorem sweep runs
  std::optional<double> gamma;             // gas2d
  std::optional<int> torus_dim;            // torus
  std::optional<std::string> flux_poly;    // lax, f(U) such as "U^2"
  std::vector<std::string> matrices;       // linear, one "a b; c d" per space variable
  std::vector<std::string> profiles;       // rotational f_j(r)
  std::optional<int> n;                    // rotational
  std::vector<std::string> scalar_flux;    // scalar g_j(w)
  std::optional<std::string> file;         // custom polynomial system document
};

struct SamplingConfig {
  std::optional<std::uint64_t> seed;
  std::optional<int> grid_per_axis;
  std::optional<int> random_states;
  std::optional<int> random_directions;
  std::optional<int> direction_grid;
  std::optional<int> max_grid_states;
  std::optional<int> threads;
  std::optional<double> eps_zero;
  std::optional<double> eps_nonzero;
  std::optional<Box> box;
};

struct TheoremConfig {
  std::optional<std::string> random;  // "linear" | "quadratic"
  int count = 50;
  int max_m = 3;                      // instance i uses m = 1 + i % max_m
};

struct SimulateConfig {
  std::string profile = "sine";
  double amplitude = 1.0;
  int cells = 256;
  std::optional<double> t_end;        // 1; the split mode defaults to half the crossing time
  double cfl = 0.45;
  std::vector<double> xi;             // default e_1
  std::vector<double> base;           // default: box centre
  std::vector<double> direction;      // default: e_1, or the eigenvector of `field`
  std::optional<int> field;
  std::vector<double> times;
  std::optional<double> threshold;
  std::string output_dir;
  bool split = false;
  bool confirm = true;
};

struct RunConfig {
  std::string command;
  int format_version = 1;
  SystemConfig system;
  SamplingConfig sampling;
  TheoremConfig theorem;
  SimulateConfig simulate;
  std::optional<std::string> output;
};

// Strict config document: unknown keys, wrong types and a format_version
// other than 1 throw ParseError.
RunConfig parse_config(std::string_view text);

SystemSpec build_system(const SystemConfig& config);
SamplingPlan build_plan(const SamplingConfig& config);

// Entry point; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hyperdeg::cli
