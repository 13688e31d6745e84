// Acceptance suite: one PASS/FAIL line per criterion. Statistics are
// recomputed here from the experiment rows rather than read from the
// experiments' own checks.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "paris/backward.hpp"
#include "paris/estimators.hpp"
#include "paris/experiments.hpp"
#include "paris/models.hpp"
#include "paris/oracles.hpp"
#include "paris/parallel.hpp"
#include "paris/samplers.hpp"
#include "paris/stats.hpp"

using namespace paris;
namespace fs = std::filesystem;

namespace {

// Tolerances
constexpr double kZ = 3.0;                  // standard errors for mean checks
constexpr double kEnumTol = 1e-10;          // recursion vs enumeration
constexpr double kKalmanTol = 1e-8;         // Kalman vs joint Gaussian
constexpr double kTvRejection = 0.01;
constexpr double kTvMh = 0.02;
constexpr double kMonotoneSlack = 0.05;     // fraction of the largest bias
constexpr double kLinearResidual = 0.25;
constexpr double kVarianceRatio = 15.0;
constexpr double kRateLow = 2.8, kRateHigh = 5.7;

// Runtime budgets in seconds
constexpr double kBudget1 = 120, kBudget2 = 5, kBudget3 = 30, kBudget4 = 60;
constexpr double kBudget5 = 300, kBudget6 = 300;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [x]");
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<double> column(const std::vector<ResultRow>& rows,
                           const std::function<bool(const ResultRow&)>& keep,
                           double ResultRow::*field) {
  std::vector<double> out;
  for (const auto& r : rows)
    if (keep(r)) out.push_back(r.*field);
  return out;
}

double zscore(const std::vector<double>& xs, double target) {
  const double se = stats::standard_error(xs);
  return se > 0.0 ? std::abs(stats::mean(xs) - target) / se : INFINITY;
}

// Least squares y = beta x; returns ||y - beta x|| / ||y||.
double origin_residual(const std::vector<double>& x, const std::vector<double>& y) {
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += x[i] * y[i];
    sxx += x[i] * x[i];
    syy += y[i] * y[i];
  }
  const double beta = sxy / sxx;
  double res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) res += std::pow(y[i] - beta * x[i], 2);
  return std::sqrt(res / syy);
}

Outcome criterion1() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const ExperimentConfig cfg = default_config(ExperimentKind::OracleHmm);
  const ExperimentResult res = run_oracle_hmm(cfg);
  const double secs = seconds_since(t0);

  const auto est = column(res.rows, [](const ResultRow& r) { return r.estimator == "paris"; },
                          &ResultRow::estimate);
  double exact = NAN, worst = 0.0;
  for (const auto& r : res.rows) {
    if (r.estimator == "paris") exact = r.oracle;
    if (r.estimator == "recursion") worst = std::max(worst, std::abs(r.estimate - r.oracle));
  }
  // recompute the oracle independently of the rows
  const double direct = exact_additive_smoothing(random_finite_hmm(3, cfg.n, derive_seed(cfg.seed, 0xDA7A)), cfg.n);
  o.require(est.size() == 50 && cfg.N == 5000 && cfg.M == 2 && cfg.n == 20, "n=20 N=5000 M=2 50 reps");
  o.require(direct == exact, "oracle reproducible");
  const double z = zscore(est, exact);
  o.require(z <= kZ, "z=" + fmt("%.2f", z));
  o.require(worst <= kEnumTol, "enum gap=" + fmt("%.2e", worst));
  o.require(secs <= kBudget1, "time=" + fmt("%.0fs", secs));
  return o;
}

Outcome criterion2() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  RngStream rng(20240611, 2, 0, Channel::kUser);
  auto in = [&](double lo, double hi) { return lo + (hi - lo) * rng.uniform(); };
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const LgssSpec m{in(-1.2, 1.2), in(-1, 1), in(0.1, 2), in(-2, 2), in(-1, 1), in(0.1, 2), in(-1, 1), in(0.1, 2)};
    std::vector<double> y(1 + k % 20);
    for (auto& v : y) v = rng.normal(0.0, 2.0);
    const auto kalman = kalman_smooth_additive(m, y);
    const auto joint = joint_gaussian_condition(m, y);
    for (std::size_t i = 0; i < joint.size(); ++i)
      worst = std::max(worst, std::abs(kalman.means[i] - joint[i]));
  }
  const double secs = seconds_since(t0);
  o.require(worst <= kKalmanTol, "max gap=" + fmt("%.2e", worst));
  o.require(secs <= kBudget2, "time=" + fmt("%.2fs", secs));
  return o;
}

Outcome criterion3() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<double> xs = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  const std::vector<double> w = {1.0, 0.5, 2.0, 0.1, 1.5, 3.0, 0.7, 1.2, 0.3, 2.2};
  const std::vector<double> dens = {0.9, 0.2, 0.5, 1.0, 0.05, 0.6, 0.8, 0.3, 0.7, 0.4};
  const ParticleCloud cloud(1, xs, w, std::vector<double>(10, 0.0), 0);
  const auto est = exact_wrap([dens](State x, State) { return dens[static_cast<std::size_t>(x[0])]; },
                              [](State) { return 1.0; });
  const std::vector<double> x_next = {0.0};
  const auto target = lambda_row(cloud, x_next, *est);
  const CategoricalTable table(cloud.weights());

  auto tv = [&](const std::vector<double>& counts) {
    double total = 0.0, d = 0.0;
    for (double c : counts) total += c;
    for (std::size_t j = 0; j < 10; ++j) d += std::abs(counts[j] / total - target[j]);
    return 0.5 * d;
  };
  RngStream rng(3, 0, 0, Channel::kUser);
  std::vector<double> rs(10, 0.0), mh(10, 0.0);
  for (int k = 0; k < 100000; ++k)
    rs[sample_backward_index_rejection(cloud, table, x_next, *est, rng, 1'000'000).index] += 1;
  BackwardDraw state = propose_backward_index(cloud, table, x_next, *est, rng);
  for (int k = 0; k < 100000; ++k) {
    state = sample_backward_index_mh(cloud, table, x_next, *est, state, rng, 5);
    mh[state.index] += 1;
  }
  const double secs = seconds_since(t0);
  o.require(tv(rs) <= kTvRejection, "TV rejection=" + fmt("%.4f", tv(rs)));
  o.require(tv(mh) <= kTvMh, "TV MH=" + fmt("%.4f", tv(mh)));
  o.require(secs <= kBudget3, "time=" + fmt("%.1fs", secs));
  return o;
}

Outcome criterion4() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const double theta = 5.0, delta = 1.0;
  const SdeSpec sde{[theta](double x) { return theta - x; }, [](double) { return 1.0; }};
  const double pts[5][2] = {{5.0, 5.3}, {4.5, 5.0}, {5.5, 4.8}, {4.0, 4.6}, {6.0, 5.5}};

  auto draws = [&](std::size_t K, double x, double xn, std::uint64_t seed) {
    const DgConfig cfg{delta, delta / static_cast<double>(K), 1};
    std::vector<double> v(100000);
    for_each_index(v.size(), Execution::Parallel, [&](std::size_t k) {
      RngStream rng(seed, K, k, Channel::kUser);
      v[k] = durham_gallant(sde, cfg, {}, x, xn, rng).value;
    });
    return v;
  };
  double worst_z = 0.0;
  bool ordered = true;
  for (int p = 0; p < 5; ++p) {
    const double x = pts[p][0], xn = pts[p][1];
    // K = 4 composed Euler law, written out in closed form
    const double rho = 1.0 - 0.25;
    const double mean = theta + (x - theta) * std::pow(rho, 4);
    const double var = 0.25 * (1 - std::pow(rho, 8)) / (1 - rho * rho);
    worst_z = std::max(worst_z, zscore(draws(4, x, xn, 100 + p), normal_pdf(xn, mean, var)));

    const double em = theta + (x - theta) * std::exp(-delta);
    const double ev = (1 - std::exp(-2 * delta)) / 2;
    const double exact = normal_pdf(xn, em, ev);
    const double coarse = stats::mean(draws(2, x, xn, 200 + p));
    const double fine = stats::mean(draws(32, x, xn, 300 + p));
    ordered = ordered && std::abs(fine - exact) < std::abs(coarse - exact);
  }
  const double secs = seconds_since(t0);
  o.require(worst_z <= kZ, "max z=" + fmt("%.2f", worst_z));
  o.require(ordered, "eps=delta/32 closer than delta/2 at all points");
  o.require(secs <= kBudget4, "time=" + fmt("%.1fs", secs));
  return o;
}

Outcome criterion5() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const ExperimentConfig cfg = default_config(ExperimentKind::FigureA);
  const ExperimentResult res = run_figure_a(cfg);
  const double secs = seconds_since(t0);

  std::vector<double> eps, bias;
  double zero_bias = NAN, worst_z = 0.0;
  for (double e : cfg.eps_grid) {
    const auto at = [e](const ResultRow& r) { return r.eps == e; };
    const auto kal = column(res.rows, [&](const ResultRow& r) { return at(r) && r.estimator == "kalman"; },
                            &ResultRow::estimate);
    const auto truth = column(res.rows, [&](const ResultRow& r) { return at(r) && r.estimator == "kalman"; },
                              &ResultRow::oracle);
    const auto pr = column(res.rows, [&](const ResultRow& r) { return at(r) && r.estimator == "paris"; },
                           &ResultRow::estimate);
    eps.push_back(e);
    bias.push_back(std::abs(kal.at(0) - truth.at(0)));
    if (e == 0.0) zero_bias = kal.at(0) - truth.at(0);
    o.pass = o.pass && pr.size() == cfg.replicates;
    worst_z = std::max(worst_z, zscore(pr, kal.at(0)));
  }
  const double top = *std::max_element(bias.begin(), bias.end());
  double drop = 0.0;
  for (std::size_t k = 1; k < bias.size(); ++k) drop = std::max(drop, bias[k - 1] - bias[k]);
  const double resid = origin_residual(eps, bias);
  o.require(zero_bias == 0.0, "bias(0)=" + fmt("%g", zero_bias));
  o.require(drop <= kMonotoneSlack * top, "max drop/max bias=" + fmt("%.3f", drop / top));
  o.require(resid < kLinearResidual, "fit residual=" + fmt("%.3f", resid));
  o.require(worst_z <= kZ, "max z=" + fmt("%.2f", worst_z));
  o.require(secs <= kBudget5, "time=" + fmt("%.0fs", secs));
  return o;
}

Outcome criterion6() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const ExperimentConfig cfg = default_config(ExperimentKind::FigureB);
  const ExperimentResult res = run_figure_b(cfg);
  const double secs = seconds_since(t0);

  std::vector<double> ns, bias;
  for (const auto& r : res.rows) {
    if (r.estimator != "kalman") continue;
    ns.push_back(static_cast<double>(r.n));
    bias.push_back(std::abs(r.error));
  }
  const double resid = origin_residual(ns, bias);
  const std::size_t n = cfg.n, early = 10;
  const auto true_err = column(res.rows, [n](const ResultRow& r) { return r.estimator == "paris-true" && r.n == n; },
                               &ResultRow::error);
  const auto skew_late = column(res.rows, [n](const ResultRow& r) { return r.estimator == "paris-skew" && r.n == n; },
                                &ResultRow::estimate);
  const auto skew_early = column(res.rows, [](const ResultRow& r) { return r.estimator == "paris-skew" && r.n == early; },
                                 &ResultRow::estimate);
  const double z = zscore(true_err, 0.0);
  const double ratio = stats::variance(skew_late) / stats::variance(skew_early);
  o.require(cfg.eps_fixed == 0.1 && n == 50, "eps=0.1 n=50");
  o.require(resid < kLinearResidual, "fit residual=" + fmt("%.3f", resid));
  o.require(z <= kZ, "true-model z=" + fmt("%.2f", z));
  o.require(ratio < kVarianceRatio, "var(50)/var(10)=" + fmt("%.2f", ratio));
  o.require(secs <= kBudget6, "time=" + fmt("%.0fs", secs));
  return o;
}

Outcome criterion7() {
  Outcome o;
  const ExperimentResult res = run_oracle_lgss(default_config(ExperimentKind::OracleLgss));
  const auto small = column(res.rows, [](const ResultRow& r) { return r.estimator == "paris-N200"; },
                            &ResultRow::estimate);
  const auto large = column(res.rows, [](const ResultRow& r) { return r.estimator == "paris-N3200"; },
                            &ResultRow::estimate);
  const double ratio = std::sqrt(stats::variance(small) / stats::variance(large));
  o.require(small.size() == 60 && large.size() == 60, "60 replicates each");
  o.require(ratio >= kRateLow && ratio <= kRateHigh, "sd(200)/sd(3200)=" + fmt("%.2f", ratio));
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome criterion8() {
  Outcome o;
  // in process, different thread counts
  ExperimentConfig cfg = default_config(ExperimentKind::FigureB);
  const int saved = thread_count();
  set_thread_count(1);
  const std::string a = format_csv(run_figure_b(cfg).rows);
  set_thread_count(4);
  const std::string b = format_csv(run_figure_b(cfg).rows);
  set_thread_count(saved);
  o.require(a == b, "figure-b identical at 1 and 4 threads");

  ExperimentConfig hmm = default_config(ExperimentKind::OracleHmm);
  hmm.N = 500;
  hmm.replicates = 8;
  set_thread_count(1);
  const std::string c = format_csv(run_oracle_hmm(hmm).rows);
  set_thread_count(3);
  const std::string d = format_csv(run_oracle_hmm(hmm).rows);
  set_thread_count(saved);
  o.require(c == d, "oracle-hmm identical at 1 and 3 threads");

  // through the command line, twice
  const fs::path dir = fs::temp_directory_path() / "paris_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string base = std::string(PARIS_CLI_PATH) + " dg-check --n 20 --replicates 5 --output_path ";
  const int r1 = std::system(("PARIS_THREADS=1 " + base + (dir / "a" / "r.csv").string() + " > /dev/null").c_str());
  const int r2 = std::system(("PARIS_THREADS=2 " + base + (dir / "b" / "r.csv").string() + " > /dev/null").c_str());
  const std::string fa = slurp(dir / "a" / "r.csv"), fb = slurp(dir / "b" / "r.csv");
  o.require(r1 != -1 && r2 != -1 && !fa.empty() && fa == fb, "CLI dg-check CSV byte-identical");
  return o;
}

}  // namespace

int main() {
  struct Entry {
    int id;
    const char* name;
    Outcome (*run)();
  };
  const Entry entries[] = {
      {1, "discrete oracle equivalence", criterion1},
      {2, "Kalman oracle integrity", criterion2},
      {3, "backward-sampler correctness", criterion3},
      {4, "Durham-Gallant unbiasedness", criterion4},
      {5, "bias against eps", criterion5},
      {6, "bias against n", criterion6},
      {7, "Monte Carlo rate", criterion7},
      {8, "determinism", criterion8},
  };
  bool all = true;
  for (const auto& e : entries) {
    Outcome o;
    try {
      o = e.run();
    } catch (const std::exception& ex) {
      o.pass = false;
      o.detail = std::string("error: ") + ex.what();
    }
    all = all && o.pass;
    std::printf("%s  %d %s: %s\n", o.pass ? "PASS" : "FAIL", e.id, e.name, o.detail.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
