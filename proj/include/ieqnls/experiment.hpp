#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ieqnls/dirk.hpp"

namespace ieqnls {

/// Settings shared by the run, longtime and converge drivers. Unset optional
/// fields fall back to the scenario defaults.
struct RunConfig {
  std::string scenario;                      ///< empty: command default
  std::string tableau;                       ///< empty: scenario default
  std::size_t n = 0;                         ///< 0: scenario default
  std::optional<double> dt;
  std::optional<double> t_end;
  std::optional<double> beta;
  std::vector<double> domain;                ///< empty: scenario default
  std::string output_dir = ".";
  std::size_t record_every = 0;              ///< 0: scenario default
  std::vector<double> snapshot_times;
  std::optional<double> tol;
  std::optional<std::size_t> max_iters;
  bool allow_nonconservative = false;

  // convergence study only
  std::vector<std::string> tableaux;
  std::vector<double> dts;
};

/// Applies one `key = value` setting. Keys mirror the RunConfig fields; list
/// values are comma separated. Throws ConfigError for unknown keys or bad values.
void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value);

/// Parses flat `key = value` text ('#' starts a comment) on top of `base`.
RunConfig parse_config_text(std::string_view text, RunConfig base = {});
RunConfig load_config_file(const std::string& path, RunConfig base = {});

/// Default output directory: $IEQNLS_OUTPUT_DIR when set, else ".".
std::string default_output_dir();

struct RunSummary {
  std::string scenario;
  std::string tableau;
  std::size_t steps = 0;
  std::size_t steps_completed = 0;
  bool success = true;
  std::string failure;
  double mass0 = 0.0;
  double energy0 = 0.0;
  double max_abs_mass_drift = 0.0;
  double max_abs_energy_drift = 0.0;
  double final_peak_amplitude = 0.0;
  double initial_peak_amplitude = 0.0;
  std::vector<double> final_peak_location;
  std::size_t max_stage_iterations = 0;
  double max_residual = 0.0;
  std::optional<double> l2_error;
  std::optional<double> linf_error;
};

/// Integrates one scenario and writes invariants.csv, final_profile.csv,
/// snapshot_<step>.csv, error.csv (when an exact solution exists) and
/// summary.json into cfg.output_dir. On a stage-solver failure the partial
/// files are flushed with a failure marker row and the SolverError is rethrown.
RunSummary run_experiment(const RunConfig& cfg, std::ostream* log = nullptr);

/// run_experiment on the long-time soliton, recording every 100 steps by default.
RunSummary run_longtime(RunConfig cfg, std::ostream* log = nullptr);

struct ConvergenceResult {
  std::string tableau;
  ConvergenceTable table;
  std::vector<double> pairwise;
  double fitted_order = 0.0;
};

/// Temporal convergence study against the exact soliton; writes convergence.csv.
/// Defaults: N = 256, T = 2^-5, dt in {2^-6 .. 2^-9}, domain [-7pi, 7pi].
std::vector<ConvergenceResult> run_convergence(RunConfig cfg, std::ostream* log = nullptr);

/// Human-readable tableau report; `name` may be "all".
std::string tableau_report(std::string_view name);

/// Scientific notation with 17 significant digits.
std::string format_real(double x);

}  // namespace ieqnls
