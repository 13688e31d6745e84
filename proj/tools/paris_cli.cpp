// Command-line driver for the smoothing experiments.
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "paris/error.hpp"
#include "paris/experiments.hpp"

namespace {

const char* const kOverrideKeys[] = {"theta",    "delta",       "eps_grid", "eps_fixed", "n",
                                     "N",        "M",           "replicates", "seed",    "output_path",
                                     "proposal", "sampler",     "mh_steps", "max_trials", "L"};

struct Overrides {
  std::map<std::string, std::string> values;
  std::string config_path;
};

void add_overrides(CLI::App* cmd, Overrides& ov) {
  for (const char* key : kOverrideKeys) {
    cmd->add_option(std::string("--") + key, ov.values[key], std::string("override '") + key + "'");
  }
}

void apply_overrides(paris::ExperimentConfig& cfg, const CLI::App* cmd, const Overrides& ov) {
  for (const char* key : kOverrideKeys) {
    if (cmd->count(std::string("--") + key) > 0) paris::apply_setting(cfg, key, ov.values.at(key));
  }
}

paris::ExperimentConfig build_config(paris::ExperimentKind kind, const CLI::App* cmd,
                                     const Overrides& ov) {
  paris::ExperimentConfig cfg = paris::default_config(kind);
  if (!ov.config_path.empty()) {
    cfg = paris::load_config(ov.config_path);
    cfg.experiment = kind;
  }
  apply_overrides(cfg, cmd, ov);
  paris::validate(cfg);
  return cfg;
}

void print_result(const paris::ExperimentResult& result) {
  std::printf("%s: %s\n", result.experiment.c_str(), result.passed() ? "PASS" : "FAIL");
  for (const auto& c : result.checks) {
    std::printf("  [%s] %-40s value=%.6g threshold=%.6g\n", c.passed ? "ok" : "!!", c.name.c_str(),
                c.value, c.threshold);
  }
}

int run(const std::vector<paris::ExperimentConfig>& configs) {
  std::vector<paris::ExperimentResult> results;
  std::vector<paris::ResultRow> rows;
  for (const auto& cfg : configs) {
    results.push_back(paris::run_experiment(cfg));
    print_result(results.back());
    rows.insert(rows.end(), results.back().rows.begin(), results.back().rows.end());
  }
  const std::filesystem::path csv = configs.front().output_path;
  paris::write_csv(csv, rows);
  const auto summary = csv.parent_path() / "summary.json";
  paris::write_summary(summary, results);
  std::printf("wrote %s and %s\n", csv.string().c_str(), summary.string().c_str());
  for (const auto& r : results)
    if (!r.passed()) return 1;
  return 0;
}

void print_nested(const std::exception& e, int depth = 0) {
  std::cerr << std::string(2 * depth, ' ') << e.what() << '\n';
  try {
    std::rethrow_if_nested(e);
  } catch (const std::exception& inner) {
    print_nested(inner, depth + 1);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online pseudo-marginal PaRIS smoothing experiments"};
  app.require_subcommand(1);

  std::string run_path;
  Overrides run_ov;
  auto* run_cmd = app.add_subcommand("run", "Run the experiment described by a config file");
  run_cmd->add_option("config", run_path, "key = value config file")->required()->check(CLI::ExistingFile);
  add_overrides(run_cmd, run_ov);

  struct Named {
    const char* name;
    const char* help;
    std::vector<paris::ExperimentKind> kinds;
    Overrides ov;
    CLI::App* cmd = nullptr;
  };
  std::vector<Named> named = {
      {"figure-a", "Smoothing bias against the model skew eps", {paris::ExperimentKind::FigureA}, {}},
      {"figure-b", "Smoothing bias against the horizon n", {paris::ExperimentKind::FigureB}, {}},
      {"oracle-check", "PaRIS against the exact HMM and Kalman oracles",
       {paris::ExperimentKind::OracleHmm, paris::ExperimentKind::OracleLgss}, {}},
      {"dg-check", "Durham-Gallant estimator and pseudo-marginal PaRIS checks",
       {paris::ExperimentKind::DgCheck}, {}},
  };
  for (auto& entry : named) {
    entry.cmd = app.add_subcommand(entry.name, entry.help);
    entry.cmd->add_option("--config", entry.ov.config_path, "key = value config file")
        ->check(CLI::ExistingFile);
    add_overrides(entry.cmd, entry.ov);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    std::vector<paris::ExperimentConfig> configs;
    if (run_cmd->parsed()) {
      paris::ExperimentConfig cfg = paris::load_config(run_path);
      apply_overrides(cfg, run_cmd, run_ov);
      paris::validate(cfg);
      configs.push_back(cfg);
    }
    for (const auto& entry : named) {
      if (!entry.cmd->parsed()) continue;
      for (auto kind : entry.kinds) {
        auto cfg = build_config(kind, entry.cmd, entry.ov);
        // oracle-check writes both experiments to one CSV
        if (!configs.empty()) cfg.output_path = configs.front().output_path;
        configs.push_back(cfg);
      }
    }
    return run(configs);
  } catch (const paris::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error:\n";
    print_nested(e, 1);
    return 3;
  }
}
