#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cbdyn/harness/config.hpp"
#include "cbdyn/harness/csv.hpp"
#include "cbdyn/harness/rate_fit.hpp"

namespace cbdyn {

struct StudyOptions {
  int threads = 1;
  /// Overrides config.output_dir when set.
  std::optional<std::string> output_dir;
  /// Overrides config.seed when set.
  std::optional<std::uint64_t> seed;
  bool write_files = true;
};

/// Values at or below this are treated as exact zeros in rate fits.
inline constexpr double kExactZero = 1e-10;

struct RateSummary {
  std::optional<RateFit> fit;
  bool exact_zero = false;
  /// Why no fit is available (empty when `fit` is set).
  std::string note;
};

/// Fits the positive values above kExactZero; reports the exact-zero case
/// when every value is at or below it.
RateSummary summarise_rate(const std::vector<double>& epsilons, const std::vector<double>& values);

struct ResidualRow {
  double epsilon = 0.0;
  int interior_sites = 0;
  double residual = 0.0;
  std::string status;
  std::string skip_reason;
};

struct ResidualStudy {
  std::vector<ResidualRow> rows;
  RateSummary rate;
  CsvTable table{{}};
};

/// || -cellavg(f - y_tt) - div_{R,eps} DW(D_{R,eps} y_ref) ||_{l2_eps} at the
/// configured time, for every epsilon, and its rate.
ResidualStudy run_residual_study(const ScenarioConfig& config, const StudyOptions& options = {});

struct ConvergenceRow {
  double epsilon = 0.0;
  int interior_sites = 0;
  double dt = 0.0;
  int steps = 0;
  /// sup_t sqrt(E(t)), E the norm-energy of y - y_ref.
  double sup_energy_root = 0.0;
  /// sup_t of |v - v_ref|_l2 + |y - y_ref|_h1 + |y - y_ref|_l2.
  double sup_norm_sum = 0.0;
  double final_energy_root = 0.0;
  double g_dyn_norm = 0.0;
  double g_static_norm = 0.0;
  double min_lambda_atom = 0.0;
  std::string status;
  std::string skip_reason;
};

struct ConvergenceStudy {
  std::vector<ConvergenceRow> rows;
  RateSummary rate;
  CsvTable table{{}};
};

/// Integrates the atomistic problem with the theorem's data at every epsilon
/// and fits the rate of sup_t sqrt(E(t)). Writes the CSV first, then throws
/// StabilityPrecheckFailed if any epsilon failed the precheck, or
/// OutsideAdmissibleSet / NonFiniteState if an integration aborted.
ConvergenceStudy run_convergence_study(const ScenarioConfig& config, const StudyOptions& options = {});

struct StabilityMapRow {
  double stretch = 0.0;
  double shear = 0.0;
  double lambda_lh = 0.0;
  double lambda_atom = 0.0;
  std::optional<double> lambda_eps;
  Vec wavevector;
  bool limit_probe_won = false;
  bool sign_split = false;
  std::string status;
};

struct StabilityMap {
  std::vector<StabilityMapRow> rows;
  CsvTable table{{}};
};

/// Grid over A = stretch * I + shear * e_1 e_2^T (d >= 2; shear unused for d = 1).
StabilityMap run_stability_map(const ScenarioConfig& config, const StudyOptions& options = {});

struct GardingRow {
  double epsilon = 0.0;
  double lambda1 = 0.0;
  double lambda2_star = 0.0;
  double mu = 0.0;
  double min_lambda_atom = 0.0;
  double max_oscillation = 0.0;
  /// Outer iterations of the eigensolver (shifts or Lanczos steps).
  int eigen_steps = 0;
  std::string status;
  std::string skip_reason;
};

struct GardingStudy {
  std::vector<GardingRow> rows;
  CsvTable table{{}};
};

/// garding_verify for A_eps(x) = D^2 W(D y_ref(x, t*)) across the epsilons.
/// Writes the CSV, then throws HypothesisViolated if any epsilon violated a hypothesis.
GardingStudy run_garding_study(const ScenarioConfig& config, const StudyOptions& options = {});

struct SimulationResult {
  double epsilon = 0.0;
  std::string status;
  std::string message;
  CsvTable trajectory{{}};
  CsvTable diagnostics{{}};
};

/// One trajectory at the first configured epsilon. Throws the integration
/// error after writing the partial output.
SimulationResult run_simulation(const ScenarioConfig& config, const StudyOptions& options = {});

/// Column descriptions used by the CLI help.
std::string csv_column_help();

}  // namespace cbdyn
