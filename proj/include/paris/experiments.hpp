#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "paris/models.hpp"

namespace paris {

enum class ExperimentKind { FigureA, FigureB, OracleHmm, OracleLgss, DgCheck };

std::string to_string(ExperimentKind kind);
/// Accepts "figure-a" as well as "FigureA" style names.
ExperimentKind parse_experiment_kind(const std::string& name);

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::FigureA;
  double theta = 5.0;
  double delta = 1.0;
  std::vector<double> eps_grid = {0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5};
  /// Skew precision used by figure-b.
  double eps_fixed = 0.1;
  std::size_t n = 50;
  std::size_t N = 200;
  std::size_t M = 2;
  std::size_t replicates = 60;
  std::uint64_t seed = 20240611;
  std::string output_path = "results.csv";
  LgssProposal proposal = LgssProposal::Optimal;
  /// "rejection" or "mh".
  std::string sampler = "rejection";
  std::size_t mh_steps = 5;
  /// Rejection-sampler cap. The OU models' bound is loose in the tails, where
  /// a single backward draw can need ~1e7 proposals.
  std::size_t max_trials = 100000000;
  /// Durham-Gallant bridge paths per estimate.
  std::size_t L = 1;
};

/// Defaults for each experiment (figure settings, oracle sizes).
ExperimentConfig default_config(ExperimentKind kind);

void validate(const ExperimentConfig& config);

/// Applies one `key = value` setting; keys are the ExperimentConfig field
/// names. Throws ConfigError on unknown keys or malformed values.
void apply_setting(ExperimentConfig& config, const std::string& key, const std::string& value);

/// Parses a flat `key = value` file ('#' starts a comment).
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path);

/// Builds a config from a file: defaults of its `experiment`, then its keys.
ExperimentConfig load_config(const std::filesystem::path& path);

struct ResultRow {
  std::string experiment;
  double eps = 0.0;
  std::size_t n = 0;
  std::size_t replicate = 0;
  std::string estimator;
  double estimate = 0.0;
  double oracle = 0.0;
  double error = 0.0;
  /// Minimum ESS over the run; NaN for rows not produced by a particle method.
  double ess_min = 0.0;
};

struct Check {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double threshold = 0.0;
};

struct ExperimentResult {
  std::string experiment;
  std::vector<ResultRow> rows;
  std::vector<Check> checks;

  bool passed() const;
};

struct OuDataset {
  std::vector<double> states;        ///< x_0..x_n
  std::vector<double> observations;  ///< y_1..y_n
};

/// OU path with exact transitions (x_0 ~ N(0, 1)) observed as
/// y = (1 - eps_true) phi(x) + N(0, 1).
OuDataset simulate_ou_dataset(double theta, double delta, double eps_true, std::size_t n,
                              std::uint64_t seed);

ExperimentResult run_figure_a(const ExperimentConfig& config);
ExperimentResult run_figure_b(const ExperimentConfig& config);
ExperimentResult run_oracle_hmm(const ExperimentConfig& config);
ExperimentResult run_oracle_lgss(const ExperimentConfig& config);
ExperimentResult run_dg_check(const ExperimentConfig& config);
ExperimentResult run_experiment(const ExperimentConfig& config);

/// CSV with header experiment,eps,n,replicate,estimator,estimate,oracle,error,ess_min;
/// numbers printed with 17 significant digits, LF line endings.
void write_csv(const std::filesystem::path& path, const std::vector<ResultRow>& rows);
std::string format_csv(const std::vector<ResultRow>& rows);

/// JSON summary of pass/fail checks with measured values.
void write_summary(const std::filesystem::path& path, const std::vector<ExperimentResult>& results);

}  // namespace paris
