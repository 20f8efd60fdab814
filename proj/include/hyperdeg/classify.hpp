#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hyperdeg/degeneracy.hpp"

namespace hyperdeg {

struct SamplingPlan {
  std::optional<Box> state_box;  // defaults to the system's box
  int grid_per_axis = 3;
  int random_states = 64;
  int random_directions = 4;
  int direction_grid = 8;
  std::uint64_t seed = 1;
  double eps_zero = 1e-6;
  double eps_nonzero = 1e-3;
  // The grid is skipped when grid_per_axis^n exceeds this.
  int max_grid_states = 4096;
  int max_rejections = 1000;  // per random state
  int threads = 0;            // 0: default_thread_count()
  double error_warning_rate = 0.01;
  DerivativeOptions derivatives;

  // Throws InvalidParameters.
  void validate() const;
};

struct SamplePoint {
  Vector u;
  Vector xi;
};

struct SampleSet {
  std::vector<Vector> states;
  std::vector<bool> on_grid;        // per state
  std::vector<SamplePoint> points;  // states x directions, state-major
  Box box;
  int grid_states = 0;
  int random_states = 0;
  int rejected = 0;
  bool grid_skipped = false;
};

// Grid states plus seeded random states of the box, rejection-filtered by the
// admissibility predicate; each state is paired with the grid directions and
// `random_directions` fresh random ones.
SampleSet build_samples(const SystemSpec& sys, const SamplingPlan& plan);

// Deterministic unit directions: +-1 for m = 1, evenly spaced angles for
// m = 2, a Fibonacci sphere for m = 3, normalized Gaussian draws from a fixed
// seed for m > 3.
std::vector<Vector> direction_grid(int m, int count);

enum class Verdict { GenuinelyNonlinear, LinearlyDegenerate, CompletelyLinearlyDegenerate, Mixed, Indeterminate };

const char* to_string(Verdict v);

struct Witness {
  double value = 0.0;
  Vector u;
  Vector xi;
  int field_index = -1;
  bool present() const { return field_index >= 0; }
};

struct FieldReport {
  std::string name;
  std::vector<int> positions;  // sorted positions seen for this field
  Verdict verdict = Verdict::Indeterminate;
  // Eigenvector self-derivative status: "zero", "nonzero" (decisive) or "undecided".
  std::string cld_status;
  int evaluations = 0;
  int errors = 0;     // evaluations with any failure
  int gn_errors = 0;  // no gn value
  int cld_errors = 0; // no cld values
  int gn_zero = 0;
  int gn_nonzero = 0;
  int gn_dead_zone = 0;
  int cld_zero = 0;
  int cld_nonzero = 0;
  int gn_disagreements = 0;
  double max_gn_check_difference = 0.0;
  Witness max_gn;       // argmax |gn|
  Witness min_gn;       // argmin |gn|
  Witness max_cld;      // argmax max_k |cld_k|
  Witness max_defect;   // argmax projective defect
  std::map<std::string, int> gn_methods;
  std::map<std::string, int> representatives;
  std::map<std::string, int> error_kinds;
  std::optional<std::string> first_error;
};

struct ClassificationReport {
  std::string system;
  std::string description;
  int n_unknowns = 0;
  int m_space = 0;
  SamplingPlan plan;
  Box box;
  int states = 0;
  int grid_states = 0;
  int random_states = 0;
  int rejected_states = 0;
  bool grid_skipped = false;
  int samples = 0;
  int sample_errors = 0;  // samples whose decomposition failed outright
  std::map<std::string, int> sample_error_kinds;
  std::vector<FieldReport> fields;
  bool error_warning = false;
  std::vector<std::string> notes;

  bool all_decisive() const;
};

ClassificationReport classify_system(const SystemSpec& sys, const SamplingPlan& plan = {});

// Aggregation rule applied to the tallies of one field.
Verdict decide(const FieldReport& field);

enum class JacobianCaseLabel { I, II, IIPrime, III, IV, Boundary };

const char* to_string(JacobianCaseLabel c);

struct JacobianCase {
  JacobianCaseLabel label = JacobianCaseLabel::Boundary;
  double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
  double discriminant = 0.0;
  double lambda1 = 0.0;  // (a + d - sqrt(disc)) / 2
  double lambda2 = 0.0;  // (a + d + sqrt(disc)) / 2
};

// Case of the 2x2 matrix [[a, b], [c, d]]; throws NotHyperbolic when the
// discriminant is below -tol.
JacobianCase jacobian_case(const Matrix& a, double tol);
JacobianCase jacobian_case(const SystemSpec& sys, const Vector& u, int j, double tol);

enum class CldStatus { Holds, Fails, Indeterminate };

const char* to_string(CldStatus s);

struct TheoremVerdict {
  ClassificationReport classification;
  CldStatus cld = CldStatus::Indeterminate;
  bool cld_holds = false;
  bool jacobian_constant = false;
  double jacobian_variation = 0.0;
  Vector reference_state;
  bool consistent_with_theorem = false;
  std::map<std::string, int> case_histogram;  // labels plus "not-hyperbolic"
  int case_samples = 0;
  int refined_to_boundary = 0;
  std::vector<std::string> notes;
};

// Both directions of "complete linear degeneracy iff linear" for conservative
// two-unknown systems. Throws UnsupportedOperation outside that scope.
TheoremVerdict verify_linearity_theorem(const SystemSpec& sys, const SamplingPlan& plan = {});

struct MixedPartialsReport {
  double max_asymmetry = 0.0;  // max |a_v - b_u|, |c_v - d_u|
  double step = 0.0;
  double tolerance = 0.0;      // 10 h^2
  int evaluations = 0;
  bool within_tolerance = true;
  Vector worst_state;
};

MixedPartialsReport verify_mixed_partials(const SystemSpec& sys, const SamplingPlan& plan = {});

}  // namespace hyperdeg
