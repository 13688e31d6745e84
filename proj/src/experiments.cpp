#include "paris/experiments.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "paris/error.hpp"
#include "paris/paris.hpp"
#include "paris/samplers.hpp"
#include "paris/stats.hpp"

namespace paris {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Seed tags keep data, grid points and replicates on disjoint streams.
constexpr std::uint64_t kDataTag = 0xDA7A;
constexpr std::uint64_t kInstanceTag = 0x1257;

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (trim(value.substr(used)).empty()) return v;
  } catch (...) {
  }
  throw ConfigError("config: '" + key + "' expects a number, got '" + value + "'");
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  if (!v.empty() && std::all_of(v.begin(), v.end(), [](unsigned char c) { return std::isdigit(c); })) {
    try {
      return std::stoull(v);
    } catch (...) {
    }
  }
  throw ConfigError("config: '" + key + "' expects a nonnegative integer, got '" + value + "'");
}

std::vector<double> parse_grid(const std::string& key, const std::string& value) {
  std::vector<double> grid;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) grid.push_back(parse_double(key, item));
  }
  return grid;
}

BackwardConfig backward_config(const ExperimentConfig& cfg, bool force_mh = false) {
  BackwardConfig b;
  b.samples = cfg.M;
  if (force_mh || cfg.sampler == "mh")
    b.sampler = IndependentMh{cfg.mh_steps};
  else
    b.sampler = RejectionSampling{cfg.max_trials};
  return b;
}

ParisConfig paris_config(const ExperimentConfig& cfg, Mode mode, bool force_mh = false) {
  ParisConfig p;
  p.particles = cfg.N;
  p.backward = backward_config(cfg, force_mh);
  p.mode = mode;
  // replicates are spread over threads; each replicate runs serially
  p.execution = Execution::Serial;
  return p;
}

struct ReplicateRun {
  std::vector<EstimateRecord> records;

  double final_estimate() const { return records.back().estimate; }
  double ess_min(std::size_t upto = std::numeric_limits<std::size_t>::max()) const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& r : records)
      if (r.time_index <= upto) m = std::min(m, r.ess);
    return m;
  }
};

std::vector<ReplicateRun> run_replicates(const PathModel& model, std::size_t steps,
                                         ParisConfig base, std::size_t replicates,
                                         std::uint64_t seed) {
  std::vector<ReplicateRun> runs(replicates);
  for_each_index(replicates, Execution::Parallel, [&](std::size_t r) {
    ParisConfig cfg = base;
    cfg.seed = derive_seed(seed, r);
    runs[r].records = run_online(model, steps, cfg);
  });
  return runs;
}

Check make_check(std::string name, bool passed, double value, double threshold) {
  return {std::move(name), passed, value, threshold};
}

// |mean(x) - target| / se(x), infinite when se vanishes but the gap does not.
double z_score(std::span<const double> xs, double target) {
  const double gap = std::abs(stats::mean(xs) - target);
  const double se = stats::standard_error(xs);
  if (se > 0.0) return gap / se;
  return gap == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

double min_ess(const std::vector<ResultRow>& rows) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& row : rows)
    if (!std::isnan(row.ess_min)) m = std::min(m, row.ess_min);
  return m;
}

}  // namespace

// --- configuration --------------------------------------------------------

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::FigureA: return "figure-a";
    case ExperimentKind::FigureB: return "figure-b";
    case ExperimentKind::OracleHmm: return "oracle-hmm";
    case ExperimentKind::OracleLgss: return "oracle-lgss";
    case ExperimentKind::DgCheck: return "dg-check";
  }
  return "unknown";
}

ExperimentKind parse_experiment_kind(const std::string& name) {
  std::string key = lower(trim(name));
  key.erase(std::remove(key.begin(), key.end(), '-'), key.end());
  key.erase(std::remove(key.begin(), key.end(), '_'), key.end());
  if (key == "figurea") return ExperimentKind::FigureA;
  if (key == "figureb") return ExperimentKind::FigureB;
  if (key == "oraclehmm") return ExperimentKind::OracleHmm;
  if (key == "oraclelgss") return ExperimentKind::OracleLgss;
  if (key == "dgcheck") return ExperimentKind::DgCheck;
  throw ConfigError("config: unknown experiment '" + name + "'");
}

ExperimentConfig default_config(ExperimentKind kind) {
  ExperimentConfig cfg;
  cfg.experiment = kind;
  switch (kind) {
    case ExperimentKind::OracleHmm:
      cfg.n = 20;
      cfg.N = 5000;
      cfg.replicates = 50;
      break;
    case ExperimentKind::DgCheck:
      cfg.sampler = "mh";
      break;
    default:
      break;
  }
  return cfg;
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.eps_grid.empty()) throw ConfigError("config: eps_grid must be nonempty");
  for (double e : cfg.eps_grid)
    if (!(e >= 0.0 && e <= 1.0)) throw ConfigError("config: eps_grid values must lie in [0, 1]");
  if (!(cfg.eps_fixed >= 0.0 && cfg.eps_fixed <= 1.0))
    throw ConfigError("config: eps_fixed must lie in [0, 1]");
  if (!(cfg.delta > 0.0)) throw ConfigError("config: delta must be positive");
  if (cfg.n == 0) throw ConfigError("config: n must be at least 1");
  if (cfg.N == 0) throw ConfigError("config: N must be at least 1");
  if (cfg.M == 0) throw ConfigError("config: M must be at least 1");
  if (cfg.replicates < 2) throw ConfigError("config: replicates must be at least 2");
  if (cfg.sampler != "rejection" && cfg.sampler != "mh")
    throw ConfigError("config: sampler must be 'rejection' or 'mh'");
  if (cfg.mh_steps == 0) throw ConfigError("config: mh_steps must be at least 1");
  if (cfg.max_trials == 0) throw ConfigError("config: max_trials must be at least 1");
  if (cfg.L == 0) throw ConfigError("config: L must be at least 1");
  if (cfg.output_path.empty()) throw ConfigError("config: output_path must be set");
}

void apply_setting(ExperimentConfig& cfg, const std::string& raw_key, const std::string& raw) {
  const std::string key = trim(raw_key);
  const std::string value = trim(raw);
  if (key == "experiment") cfg.experiment = parse_experiment_kind(value);
  else if (key == "theta") cfg.theta = parse_double(key, value);
  else if (key == "delta") cfg.delta = parse_double(key, value);
  else if (key == "eps_grid") cfg.eps_grid = parse_grid(key, value);
  else if (key == "eps_fixed") cfg.eps_fixed = parse_double(key, value);
  else if (key == "n") cfg.n = parse_unsigned(key, value);
  else if (key == "N") cfg.N = parse_unsigned(key, value);
  else if (key == "M") cfg.M = parse_unsigned(key, value);
  else if (key == "replicates") cfg.replicates = parse_unsigned(key, value);
  else if (key == "seed") cfg.seed = parse_unsigned(key, value);
  else if (key == "output_path") cfg.output_path = value;
  else if (key == "proposal") {
    const std::string v = lower(value);
    if (v == "optimal") cfg.proposal = LgssProposal::Optimal;
    else if (v == "bootstrap") cfg.proposal = LgssProposal::Bootstrap;
    else throw ConfigError("config: proposal must be 'optimal' or 'bootstrap'");
  } else if (key == "sampler") cfg.sampler = lower(value);
  else if (key == "mh_steps") cfg.mh_steps = parse_unsigned(key, value);
  else if (key == "max_trials") cfg.max_trials = parse_unsigned(key, value);
  else if (key == "L") cfg.L = parse_unsigned(key, value);
  else throw ConfigError("config: unknown key '" + key + "'");
}

std::map<std::string, std::string> read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path.string() + "'");
  std::map<std::string, std::string> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: " + path.string() + ":" + std::to_string(line_no) +
                        ": expected 'key = value'");
    entries[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return entries;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  const auto entries = read_config_file(path);
  const auto kind = entries.find("experiment");
  if (kind == entries.end()) throw ConfigError("config: file must set 'experiment'");
  ExperimentConfig cfg = default_config(parse_experiment_kind(kind->second));
  for (const auto& [key, value] : entries) apply_setting(cfg, key, value);
  return cfg;
}

bool ExperimentResult::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

// --- data -----------------------------------------------------------------

OuDataset simulate_ou_dataset(double theta, double delta, double eps_true, std::size_t n,
                              std::uint64_t seed) {
  if (n == 0) throw ConfigError("simulate: n must be at least 1");
  RngStream rng(seed, 0, 0, Channel::kData);
  OuDataset data;
  data.states.reserve(n + 1);
  data.observations.reserve(n);
  double x = rng.normal();
  data.states.push_back(x);
  for (std::size_t k = 1; k <= n; ++k) {
    const GaussianMoments step = ou_exact_transition(theta, delta, x);
    x = rng.normal(step.mean, std::sqrt(step.variance));
    data.states.push_back(x);
    data.observations.push_back((1.0 - eps_true) * clip_state(x) + rng.normal());
  }
  return data;
}

// --- experiments ----------------------------------------------------------

ExperimentResult run_figure_a(const ExperimentConfig& cfg) {
  validate(cfg);
  ExperimentResult result{"figure-a", {}, {}};
  const OuDataset data =
      simulate_ou_dataset(cfg.theta, cfg.delta, 0.0, cfg.n, derive_seed(cfg.seed, kDataTag));
  const double truth =
      kalman_smooth_additive(ou_observation_model(cfg.theta, cfg.delta, 0.0), data.observations).sum;

  std::vector<double> eps_values, bias_values;
  double worst_z = 0.0;
  bool zero_bias_ok = true;
  double zero_bias = 0.0;
  for (std::size_t g = 0; g < cfg.eps_grid.size(); ++g) {
    const double eps = cfg.eps_grid[g];
    const LgssSpec skew_spec = ou_observation_model(cfg.theta, cfg.delta, eps);
    const double skew = kalman_smooth_additive(skew_spec, data.observations).sum;
    const double bias = skew - truth;
    result.rows.push_back({"figure-a", eps, cfg.n, 0, "kalman", skew, truth, bias, kNaN});
    eps_values.push_back(eps);
    bias_values.push_back(std::abs(bias));
    if (eps == 0.0) {
      zero_bias = std::abs(bias);
      zero_bias_ok = zero_bias_ok && bias == 0.0;
    }

    const LgssPathModel model(skew_spec, data.observations, cfg.proposal);
    const auto runs = run_replicates(model, cfg.n, paris_config(cfg, Mode::Ideal), cfg.replicates,
                                     derive_seed(cfg.seed, g + 1));
    std::vector<double> errors;
    for (std::size_t r = 0; r < runs.size(); ++r) {
      const double est = runs[r].final_estimate();
      errors.push_back(est - truth);
      result.rows.push_back(
          {"figure-a", eps, cfg.n, r, "paris", est, truth, est - truth, runs[r].ess_min()});
    }
    worst_z = std::max(worst_z, z_score(errors, bias));
  }

  const double max_bias = *std::max_element(bias_values.begin(), bias_values.end());
  double worst_drop = 0.0;
  for (std::size_t k = 1; k < bias_values.size(); ++k)
    worst_drop = std::max(worst_drop, bias_values[k - 1] - bias_values[k]);
  const double drop_ratio = max_bias > 0.0 ? worst_drop / max_bias : 0.0;
  const auto fit = stats::fit_through_origin(eps_values, bias_values);

  result.checks.push_back(make_check("kalman_bias_zero_at_eps0", zero_bias_ok, zero_bias, 0.0));
  result.checks.push_back(make_check("bias_nondecreasing", drop_ratio <= 0.05, drop_ratio, 0.05));
  result.checks.push_back(
      make_check("bias_linear_in_eps", fit.relative_residual < 0.25, fit.relative_residual, 0.25));
  result.checks.push_back(make_check("paris_brackets_kalman", worst_z <= 3.0, worst_z, 3.0));
  const double ess = min_ess(result.rows);
  result.checks.push_back(make_check("ess_min_above_one", ess > 1.0, ess, 1.0));
  return result;
}

ExperimentResult run_figure_b(const ExperimentConfig& cfg) {
  validate(cfg);
  ExperimentResult result{"figure-b", {}, {}};
  const OuDataset data =
      simulate_ou_dataset(cfg.theta, cfg.delta, 0.0, cfg.n, derive_seed(cfg.seed, kDataTag));
  const LgssSpec true_spec = ou_observation_model(cfg.theta, cfg.delta, 0.0);
  const LgssSpec skew_spec = ou_observation_model(cfg.theta, cfg.delta, cfg.eps_fixed);

  std::vector<double> truth(cfg.n + 1, 0.0), steps, bias;
  for (std::size_t k = 1; k <= cfg.n; ++k) {
    const std::span<const double> y(data.observations.data(), k);
    truth[k] = kalman_smooth_additive(true_spec, y).sum;
    const double skew = kalman_smooth_additive(skew_spec, y).sum;
    result.rows.push_back(
        {"figure-b", cfg.eps_fixed, k, 0, "kalman", skew, truth[k], skew - truth[k], kNaN});
    steps.push_back(static_cast<double>(k));
    bias.push_back(std::abs(skew - truth[k]));
  }

  const LgssPathModel skew_model(skew_spec, data.observations, cfg.proposal);
  const LgssPathModel true_model(true_spec, data.observations, cfg.proposal);
  const auto skew_runs = run_replicates(skew_model, cfg.n, paris_config(cfg, Mode::Ideal),
                                        cfg.replicates, derive_seed(cfg.seed, 1));
  const auto true_runs = run_replicates(true_model, cfg.n, paris_config(cfg, Mode::Ideal),
                                        cfg.replicates, derive_seed(cfg.seed, 2));

  const std::size_t early = std::min<std::size_t>(10, cfg.n);
  std::vector<double> skew_final, skew_early, true_final;
  for (std::size_t r = 0; r < cfg.replicates; ++r) {
    for (std::size_t k = 1; k <= cfg.n; ++k) {
      const double s = skew_runs[r].records[k].estimate;
      const double t = true_runs[r].records[k].estimate;
      result.rows.push_back({"figure-b", cfg.eps_fixed, k, r, "paris-skew", s, truth[k],
                             s - truth[k], skew_runs[r].ess_min(k)});
      result.rows.push_back({"figure-b", 0.0, k, r, "paris-true", t, truth[k], t - truth[k],
                             true_runs[r].ess_min(k)});
    }
    skew_final.push_back(skew_runs[r].records[cfg.n].estimate - truth[cfg.n]);
    skew_early.push_back(skew_runs[r].records[early].estimate - truth[early]);
    true_final.push_back(true_runs[r].records[cfg.n].estimate - truth[cfg.n]);
  }

  const auto fit = stats::fit_through_origin(steps, bias);
  result.checks.push_back(
      make_check("bias_linear_in_n", fit.relative_residual < 0.25, fit.relative_residual, 0.25));
  result.checks.push_back(
      make_check("bias_n1_le_bias_n", bias.front() <= bias.back(), bias.front(), bias.back()));
  const double z_true = z_score(true_final, 0.0);
  result.checks.push_back(make_check("true_model_unbiased", z_true <= 3.0, z_true, 3.0));
  const double early_var = stats::variance(skew_early);
  const double ratio = early_var > 0.0 ? stats::variance(skew_final) / early_var
                                       : std::numeric_limits<double>::infinity();
  result.checks.push_back(make_check("variance_growth_linear", ratio < 15.0, ratio, 15.0));
  const double ess = min_ess(result.rows);
  result.checks.push_back(make_check("ess_min_above_one", ess > 1.0, ess, 1.0));
  return result;
}

ExperimentResult run_oracle_hmm(const ExperimentConfig& cfg) {
  validate(cfg);
  ExperimentResult result{"oracle-hmm", {}, {}};

  // recursion vs brute-force enumeration on small random models
  double worst_gap = 0.0;
  std::uint64_t instance = 0;
  for (std::size_t S = 1; S <= 3; ++S) {
    for (std::size_t steps = 1; steps <= 6; ++steps) {
      const FiniteHmm hmm =
          random_finite_hmm(S, steps, derive_seed(cfg.seed, kInstanceTag + instance++));
      const double exact = exact_additive_smoothing(hmm, steps);
      const double brute = enumerate_additive_smoothing(hmm, steps);
      worst_gap = std::max(worst_gap, std::abs(exact - brute));
      result.rows.push_back(
          {"oracle-hmm", 0.0, steps, S, "recursion", exact, brute, exact - brute, kNaN});
    }
  }
  result.checks.push_back(
      make_check("exact_matches_enumeration", worst_gap <= 1e-10, worst_gap, 1e-10));

  const FiniteHmm hmm = random_finite_hmm(3, cfg.n, derive_seed(cfg.seed, kDataTag));
  const double exact = exact_additive_smoothing(hmm, cfg.n);
  const FiniteHmmPathModel model(hmm, HmmProposal::Uniform);
  const auto runs = run_replicates(model, cfg.n, paris_config(cfg, Mode::Ideal), cfg.replicates,
                                   derive_seed(cfg.seed, 1));
  std::vector<double> estimates;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    const double est = runs[r].final_estimate();
    estimates.push_back(est);
    result.rows.push_back(
        {"oracle-hmm", 0.0, cfg.n, r, "paris", est, exact, est - exact, runs[r].ess_min()});
  }
  const double z = z_score(estimates, exact);
  result.checks.push_back(make_check("paris_matches_exact", z <= 3.0, z, 3.0));
  return result;
}

namespace {

LgssSpec random_lgss(RngStream& rng) {
  auto in = [&](double lo, double hi) { return lo + (hi - lo) * rng.uniform(); };
  LgssSpec m;
  m.a = in(-1.2, 1.2);
  m.b = in(-1.0, 1.0);
  m.q = in(0.1, 2.0);
  m.c = in(-2.0, 2.0);
  m.d = in(-1.0, 1.0);
  m.r = in(0.1, 2.0);
  m.m0 = in(-1.0, 1.0);
  m.p0 = in(0.1, 2.0);
  return m;
}

std::vector<double> simulate_lgss(const LgssSpec& m, std::size_t n, RngStream& rng) {
  std::vector<double> y(n);
  double x = rng.normal(m.m0, std::sqrt(m.p0));
  for (std::size_t k = 0; k < n; ++k) {
    x = rng.normal(m.a * x + m.b, std::sqrt(m.q));
    y[k] = rng.normal(m.c * x + m.d, std::sqrt(m.r));
  }
  return y;
}

}  // namespace

ExperimentResult run_oracle_lgss(const ExperimentConfig& cfg) {
  validate(cfg);
  ExperimentResult result{"oracle-lgss", {}, {}};

  double worst_gap = 0.0;
  for (std::size_t k = 0; k < 20; ++k) {
    RngStream rng(derive_seed(cfg.seed, kInstanceTag), k, 0, Channel::kData);
    const LgssSpec m = random_lgss(rng);
    const std::size_t steps = 1 + static_cast<std::size_t>(rng.uniform() * 20.0) % 20;
    const auto y = simulate_lgss(m, steps, rng);
    const auto kalman = kalman_smooth_additive(m, y);
    const auto joint = joint_gaussian_condition(m, y);
    double joint_sum = 0.0;
    for (std::size_t i = 0; i < joint.size(); ++i) {
      worst_gap = std::max(worst_gap, std::abs(kalman.means[i] - joint[i]));
      joint_sum += joint[i];
    }
    result.rows.push_back(
        {"oracle-lgss", 0.0, steps, k, "kalman", kalman.sum, joint_sum, kalman.sum - joint_sum, kNaN});
  }
  result.checks.push_back(
      make_check("kalman_matches_joint_gaussian", worst_gap <= 1e-8, worst_gap, 1e-8));

  // PaRIS on the OU benchmark against Kalman, at N and 16 N
  const OuDataset data =
      simulate_ou_dataset(cfg.theta, cfg.delta, 0.0, cfg.n, derive_seed(cfg.seed, kDataTag));
  const LgssSpec spec = ou_observation_model(cfg.theta, cfg.delta, 0.0);
  const double truth = kalman_smooth_additive(spec, data.observations).sum;
  const LgssPathModel model(spec, data.observations, cfg.proposal);

  std::vector<double> sd;
  for (std::size_t scale : {std::size_t{1}, std::size_t{16}}) {
    ParisConfig pc = paris_config(cfg, Mode::Ideal);
    pc.particles = cfg.N * scale;
    const auto runs = run_replicates(model, cfg.n, pc, cfg.replicates,
                                     derive_seed(cfg.seed, 100 + scale));
    const std::string label = "paris-N" + std::to_string(pc.particles);
    std::vector<double> estimates;
    for (std::size_t r = 0; r < runs.size(); ++r) {
      const double est = runs[r].final_estimate();
      estimates.push_back(est);
      result.rows.push_back(
          {"oracle-lgss", 0.0, cfg.n, r, label, est, truth, est - truth, runs[r].ess_min()});
    }
    const double z = z_score(estimates, truth);
    result.checks.push_back(make_check("paris_tracks_kalman_" + label, z <= 3.0, z, 3.0));
    sd.push_back(std::sqrt(stats::variance(estimates)));
  }
  const double ratio = sd[1] > 0.0 ? sd[0] / sd[1] : std::numeric_limits<double>::infinity();
  result.checks.push_back(
      make_check("monte_carlo_rate", ratio >= 2.8 && ratio <= 5.7, ratio, 4.0));
  return result;
}

namespace {

struct DgPoint {
  double x;
  double x_next;
};

constexpr DgPoint kDgPoints[] = {{5.0, 5.3}, {4.5, 5.0}, {5.5, 4.8}, {4.0, 4.6}, {6.0, 5.5}};
constexpr std::size_t kDgDraws = 100000;

// Mean and standard error of kDgDraws independent estimates at one point.
std::pair<double, double> dg_mean(const SdeSpec& sde, const DgConfig& dg, DgPoint p,
                                  std::uint64_t seed, std::size_t point) {
  std::vector<double> values(kDgDraws);
  for_each_index(kDgDraws, Execution::Parallel, [&](std::size_t k) {
    RngStream rng(seed, point, k, Channel::kUser);
    values[k] = durham_gallant(sde, dg, {}, p.x, p.x_next, rng).value;
  });
  return {stats::mean(values), stats::standard_error(values)};
}

}  // namespace

ExperimentResult run_dg_check(const ExperimentConfig& cfg) {
  validate(cfg);
  ExperimentResult result{"dg-check", {}, {}};
  const double theta = cfg.theta;
  const double delta = cfg.delta;
  const SdeSpec sde{[theta](double x) { return -(x - theta); }, [](double) { return 1.0; }};

  // unbiasedness for the composed Euler density
  {
    const std::size_t K = 4;
    const DgConfig dg{delta, delta / static_cast<double>(K), cfg.L};
    double worst_z = 0.0;
    for (std::size_t i = 0; i < std::size(kDgPoints); ++i) {
      const DgPoint p = kDgPoints[i];
      const auto [mean, se] = dg_mean(sde, dg, p, derive_seed(cfg.seed, 4), i);
      const GaussianMoments composed = euler_ou_composition(theta, dg.eps, K, p.x);
      const double target = normal_pdf(p.x_next, composed.mean, composed.variance);
      worst_z = std::max(worst_z, se > 0.0 ? std::abs(mean - target) / se : 0.0);
      result.rows.push_back({"dg-check", dg.eps, 0, i, "dg-K4", mean, target, mean - target, kNaN});
    }
    result.checks.push_back(make_check("dg_unbiased_for_composed_euler", worst_z <= 3.0, worst_z, 3.0));
  }

  // finer steps move the mean towards the exact OU density
  {
    const DgConfig coarse{delta, delta / 2.0, cfg.L};
    const DgConfig fine{delta, delta / 32.0, cfg.L};
    bool ordered = true;
    double worst_ratio = 0.0;
    for (std::size_t i = 0; i < std::size(kDgPoints); ++i) {
      const DgPoint p = kDgPoints[i];
      const GaussianMoments exact = ou_exact_transition(theta, delta, p.x);
      const double target = normal_pdf(p.x_next, exact.mean, exact.variance);
      const double m2 = dg_mean(sde, coarse, p, derive_seed(cfg.seed, 2), i).first;
      const double m32 = dg_mean(sde, fine, p, derive_seed(cfg.seed, 32), i).first;
      result.rows.push_back({"dg-check", coarse.eps, 0, i, "dg-K2", m2, target, m2 - target, kNaN});
      result.rows.push_back({"dg-check", fine.eps, 0, i, "dg-K32", m32, target, m32 - target, kNaN});
      const double e2 = std::abs(m2 - target), e32 = std::abs(m32 - target);
      ordered = ordered && e32 < e2;
      worst_ratio = std::max(worst_ratio, e2 > 0.0 ? e32 / e2 : 1.0);
    }
    result.checks.push_back(make_check("dg_converges_as_eps_shrinks", ordered, worst_ratio, 1.0));
  }

  // pseudo-marginal PaRIS with the Durham-Gallant estimator targets the
  // composed-Euler model
  const OuDataset data =
      simulate_ou_dataset(theta, delta, 0.0, cfg.n, derive_seed(cfg.seed, kDataTag));
  {
    const DgConfig dg{delta, delta / 4.0, cfg.L};
    const OuDurhamGallantModel model(theta, dg, 1.0, data.observations);
    const double skew = kalman_smooth_additive(model.skew_model(), data.observations).sum;
    const auto runs = run_replicates(model, cfg.n, paris_config(cfg, Mode::PseudoMarginal, true),
                                     cfg.replicates, derive_seed(cfg.seed, 5));
    std::vector<double> estimates;
    for (std::size_t r = 0; r < runs.size(); ++r) {
      const double est = runs[r].final_estimate();
      estimates.push_back(est);
      result.rows.push_back(
          {"dg-check", dg.eps, cfg.n, r, "pm-paris-dg", est, skew, est - skew, runs[r].ess_min()});
    }
    const double z = z_score(estimates, skew);
    result.checks.push_back(make_check("pm_paris_dg_matches_skew_kalman", z <= 3.0, z, 3.0));
  }

  // pseudo-marginal PaRIS with an ABC emission estimate
  {
    const double bandwidth = 0.5;
    const AbcLgssModel model(ou_observation_model(theta, delta, 0.0), bandwidth, data.observations);
    const double skew = kalman_smooth_additive(model.skew_model(), data.observations).sum;
    const auto runs = run_replicates(model, cfg.n, paris_config(cfg, Mode::PseudoMarginal),
                                     cfg.replicates, derive_seed(cfg.seed, 6));
    std::vector<double> estimates;
    for (std::size_t r = 0; r < runs.size(); ++r) {
      const double est = runs[r].final_estimate();
      estimates.push_back(est);
      result.rows.push_back(
          {"dg-check", bandwidth, cfg.n, r, "pm-paris-abc", est, skew, est - skew, runs[r].ess_min()});
    }
    const double z = z_score(estimates, skew);
    result.checks.push_back(make_check("pm_paris_abc_matches_skew_kalman", z <= 3.0, z, 3.0));
  }
  return result;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.experiment) {
    case ExperimentKind::FigureA: return run_figure_a(cfg);
    case ExperimentKind::FigureB: return run_figure_b(cfg);
    case ExperimentKind::OracleHmm: return run_oracle_hmm(cfg);
    case ExperimentKind::OracleLgss: return run_oracle_lgss(cfg);
    case ExperimentKind::DgCheck: return run_dg_check(cfg);
  }
  throw ConfigError("unknown experiment");
}

// --- output ---------------------------------------------------------------

namespace {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string format_csv(const std::vector<ResultRow>& rows) {
  std::string out = "experiment,eps,n,replicate,estimator,estimate,oracle,error,ess_min\n";
  for (const auto& r : rows) {
    out += r.experiment;
    out += ',' + format_number(r.eps);
    out += ',' + std::to_string(r.n);
    out += ',' + std::to_string(r.replicate);
    out += ',' + r.estimator;
    out += ',' + format_number(r.estimate);
    out += ',' + format_number(r.oracle);
    out += ',' + format_number(r.error);
    out += ',' + format_number(r.ess_min);
    out += '\n';
  }
  return out;
}

void write_csv(const std::filesystem::path& path, const std::vector<ResultRow>& rows) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write CSV to '" + path.string() + "'");
  out << format_csv(rows);
  if (!out) throw Error("failed while writing CSV to '" + path.string() + "'");
}

void write_summary(const std::filesystem::path& path, const std::vector<ExperimentResult>& results) {
  nlohmann::json doc;
  doc["passed"] = std::all_of(results.begin(), results.end(),
                              [](const ExperimentResult& r) { return r.passed(); });
  doc["experiments"] = nlohmann::json::array();
  for (const auto& r : results) {
    nlohmann::json entry;
    entry["experiment"] = r.experiment;
    entry["passed"] = r.passed();
    entry["checks"] = nlohmann::json::array();
    for (const auto& c : r.checks) {
      nlohmann::json check{{"name", c.name}, {"passed", c.passed}, {"threshold", c.threshold}};
      // JSON has no NaN or infinity
      if (std::isfinite(c.value))
        check["value"] = c.value;
      else
        check["value"] = format_number(c.value);
      entry["checks"].push_back(std::move(check));
    }
    doc["experiments"].push_back(std::move(entry));
  }
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write summary to '" + path.string() + "'");
  out << doc.dump(2) << '\n';
}

}  // namespace paris
