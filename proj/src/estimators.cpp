#include "paris/estimators.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numbers>

#include "paris/error.hpp"
#include "paris/samplers.hpp"

namespace paris {

ExactEstimator::ExactEstimator(DensityFn density, BoundFn bound)
    : density_(std::move(density)), bound_(std::move(bound)) {
  if (!density_) throw ConfigError("exact estimator needs a density");
}

double ExactEstimator::bound(State x_next) const {
  if (!bound_) return TransitionEstimator::bound(x_next);
  return bound_(x_next);
}

std::shared_ptr<const TransitionEstimator> exact_wrap(DensityFn density, BoundFn bound) {
  return std::make_shared<ExactEstimator>(std::move(density), std::move(bound));
}

// --- Durham-Gallant -------------------------------------------------------

std::size_t DgConfig::substeps() const {
  if (!(delta > 0.0) || !(eps > 0.0) || eps > delta * (1.0 + 1e-12))
    throw ConfigError("durham-gallant: need 0 < eps <= delta");
  const double ratio = delta / eps;
  const double K = std::round(ratio);
  if (std::abs(ratio - K) > 1e-9 * ratio)
    throw ConfigError("durham-gallant: delta / eps must be an integer");
  return static_cast<std::size_t>(K);
}

void validate(const DgConfig& config) {
  (void)config.substeps();
  if (config.paths == 0) throw ConfigError("durham-gallant: L must be at least 1");
}

double euler_log_density(const SdeSpec& sde, double step, double x, double x_next) {
  if (!(step > 0.0)) throw ConfigError("euler density: step must be positive");
  const double sigma = sde.diffusion(x);
  if (!(sigma >= sde.sigma_floor))
    throw ConfigError("euler density: diffusion coefficient below its floor");
  return log_normal_pdf(x_next, x + step * sde.drift(x), step * sigma * sigma);
}

double euler_density(const SdeSpec& sde, double step, double x, double x_next) {
  return std::exp(euler_log_density(sde, step, x, x_next));
}

namespace {

double observation_factor(const ObservationDensity& g, double x, double x_next) {
  if (!g) return 1.0;
  const double v = g(x, x_next);
  if (!std::isfinite(v) || v < 0.0)
    throw DegenerateWeights("durham-gallant: observation density is negative or not finite");
  return v;
}

}  // namespace

double durham_gallant_evaluate(const SdeSpec& sde, const DgConfig& config,
                               const ObservationDensity& observation, const AuxPayload& paths,
                               double x, double x_next) {
  const std::size_t K = config.substeps();
  const std::size_t L = config.paths;
  const std::size_t inner = K - 1;
  if (paths.size() != L * inner)
    throw ConfigError("durham-gallant: auxiliary payload has the wrong size");

  const double g = observation_factor(observation, x, x_next);
  if (g == 0.0) return 0.0;

  // log of each importance ratio; averaged with a log-sum-exp
  std::vector<double> log_ratio(L);
  for (std::size_t l = 0; l < L; ++l) {
    const std::span<const double> z(paths.data() + l * inner, inner);
    double log_euler = 0.0;
    double prev = x;
    for (std::size_t k = 0; k < K; ++k) {
      const double cur = k + 1 < K ? z[k] : x_next;
      log_euler += euler_log_density(sde, config.eps, prev, cur);
      prev = cur;
    }
    const double log_bridge = bridge_log_density(x, x_next, K, config.eps, z);
    if (!std::isfinite(log_bridge))
      throw Error("durham-gallant: bridge proposal density vanishes (misconfigured bridge)");
    log_ratio[l] = log_euler - log_bridge;
  }
  const double top = *std::max_element(log_ratio.begin(), log_ratio.end());
  if (top == -std::numeric_limits<double>::infinity()) return 0.0;
  double sum = 0.0;
  for (double lr : log_ratio) sum += std::exp(lr - top);
  return g * std::exp(top) * sum / static_cast<double>(L);
}

DgEstimate durham_gallant(const SdeSpec& sde, const DgConfig& config,
                          const ObservationDensity& observation, double x, double x_next,
                          RngStream& rng) {
  validate(config);
  const std::size_t K = config.substeps();
  const std::size_t inner = K - 1;
  DgEstimate est;
  est.paths.resize(config.paths * inner);
  for (std::size_t l = 0; l < config.paths; ++l) {
    bridge_sample_into(x, x_next, K, config.eps, rng,
                       std::span<double>(est.paths.data() + l * inner, inner));
  }
  est.value = durham_gallant_evaluate(sde, config, observation, est.paths, x, x_next);
  return est;
}

DurhamGallantEstimator::DurhamGallantEstimator(SdeSpec sde, DgConfig config,
                                               ObservationDensity observation)
    : sde_(std::move(sde)), config_(config), observation_(std::move(observation)) {
  validate(config_);
  if (!sde_.drift || !sde_.diffusion) throw ConfigError("durham-gallant: incomplete SDE");
  substeps_ = config_.substeps();
}

AuxPayload DurhamGallantEstimator::draw_aux(State x, State x_next, RngStream& rng) const {
  const std::size_t inner = substeps_ - 1;
  AuxPayload paths(config_.paths * inner);
  for (std::size_t l = 0; l < config_.paths; ++l) {
    bridge_sample_into(x[0], x_next[0], substeps_, config_.eps, rng,
                       std::span<double>(paths.data() + l * inner, inner));
  }
  return paths;
}

double DurhamGallantEstimator::evaluate(const AuxPayload& z, State x, State x_next) const {
  return durham_gallant_evaluate(sde_, config_, observation_, z, x[0], x_next[0]);
}

// --- ABC ------------------------------------------------------------------

KernelFn gaussian_kernel(double bandwidth, std::size_t dim) {
  if (!(bandwidth > 0.0)) throw ConfigError("abc: bandwidth must be positive");
  const double var = bandwidth * bandwidth;
  const double log_norm = -0.5 * static_cast<double>(dim) * std::log(2.0 * std::numbers::pi * var);
  return [var, log_norm, dim](std::span<const double> u) {
    if (u.size() != dim) throw ConfigError("abc: kernel argument has the wrong dimension");
    double sq = 0.0;
    for (double v : u) sq += v * v;
    return std::exp(log_norm - 0.5 * sq / var);
  };
}

void validate(const AbcConfig& config) {
  if (!(config.bandwidth > 0.0)) throw ConfigError("abc: bandwidth must be positive");
  if (config.obs_dim == 0) throw ConfigError("abc: observation dimension must be positive");
  if (!config.emission_sampler) throw ConfigError("abc: emission sampler is required");
}

namespace {

class AbcEstimator final : public TransitionEstimator {
 public:
  AbcEstimator(const AbcConfig& config, DensityFn transition, std::vector<double> y_next,
               BoundFn transition_bound)
      : kernel_(config.kernel ? config.kernel : gaussian_kernel(config.bandwidth, config.obs_dim)),
        sampler_(config.emission_sampler),
        transition_(std::move(transition)),
        transition_bound_(std::move(transition_bound)),
        y_(std::move(y_next)) {
    if (!transition_) throw ConfigError("abc: transition density is required");
    if (y_.size() != config.obs_dim) throw ConfigError("abc: observation has the wrong dimension");
    const std::vector<double> zero(y_.size(), 0.0);
    kernel_peak_ = kernel_(zero);
  }

  AuxPayload draw_aux(State, State x_next, RngStream& rng) const override {
    AuxPayload z(y_.size());
    sampler_(x_next, rng, z);
    return z;
  }

  double evaluate(const AuxPayload& z, State x, State x_next) const override {
    std::vector<double> u(y_.size());
    for (std::size_t k = 0; k < u.size(); ++k) u[k] = z[k] - y_[k];
    const double q = transition_(x, x_next);
    return q == 0.0 ? 0.0 : q * kernel_(u);
  }

  bool has_bound() const override { return static_cast<bool>(transition_bound_); }
  double bound(State x_next) const override {
    if (!transition_bound_) return TransitionEstimator::bound(x_next);
    return transition_bound_(x_next) * kernel_peak_;
  }

 private:
  KernelFn kernel_;
  EmissionSampler sampler_;
  DensityFn transition_;
  BoundFn transition_bound_;
  std::vector<double> y_;
  double kernel_peak_ = 0.0;
};

}  // namespace

std::shared_ptr<const TransitionEstimator> abc_estimator(const AbcConfig& config,
                                                         DensityFn transition_density,
                                                         std::vector<double> y_next,
                                                         BoundFn transition_bound) {
  validate(config);
  return std::make_shared<AbcEstimator>(config, std::move(transition_density), std::move(y_next),
                                        std::move(transition_bound));
}

}  // namespace paris
