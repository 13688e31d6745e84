#include "paris/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "paris/error.hpp"

namespace paris {

double log_normal_pdf(double x, double mean, double var) {
  const double d = x - mean;
  return -0.5 * (std::log(2.0 * std::numbers::pi * var) + d * d / var);
}

double normal_pdf(double x, double mean, double var) {
  return std::exp(log_normal_pdf(x, mean, var));
}

CategoricalTable::CategoricalTable(std::span<const double> weights) {
  if (weights.empty()) throw DegenerateWeights("categorical: empty weight vector");
  cumulative_.resize(weights.size());
  double acc = 0.0;
  bool any_positive = false;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double w = weights[i];
    if (!std::isfinite(w) || w < 0.0)
      throw DegenerateWeights("categorical: weight " + std::to_string(i) +
                              " is negative or not finite");
    if (w > 0.0) {
      any_positive = true;
      last_positive_ = i;
    }
    acc += w;
    cumulative_[i] = acc;
  }
  if (!any_positive) throw DegenerateWeights("categorical: all weights are zero");
  if (!std::isfinite(acc)) throw DegenerateWeights("categorical: weight sum overflows");
}

std::size_t CategoricalTable::sample(RngStream& rng) const {
  const double target = rng.uniform() * cumulative_.back();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
  auto idx = static_cast<std::size_t>(it - cumulative_.begin());
  // target can round up to the total
  return std::min(idx, last_positive_);
}

std::size_t categorical(std::span<const double> weights, RngStream& rng) {
  return CategoricalTable(weights).sample(rng);
}

double BridgePath::point(std::size_t k) const {
  if (k == 0) return x0;
  if (k == K) return xK;
  return interior.at(k - 1);
}

namespace {

void check_bridge_args(std::size_t K, double eps) {
  if (K == 0) throw ConfigError("bridge: K must be at least 1");
  if (!(eps > 0.0) || !std::isfinite(eps)) throw ConfigError("bridge: eps must be positive");
}

// Conditional law of z_{j+1} given z_j for the bridge pinned at xK.
inline void bridge_step(double zj, double xK, std::size_t K, std::size_t j, double eps,
                        double& mean, double& var) {
  const double remaining = static_cast<double>(K - j);
  mean = zj + (xK - zj) / remaining;
  var = eps * (remaining - 1.0) / remaining;
}

}  // namespace

void bridge_sample_into(double x0, double xK, std::size_t K, double eps, RngStream& rng,
                        std::span<double> out) {
  check_bridge_args(K, eps);
  if (out.size() != K - 1) throw ConfigError("bridge: output span must hold K - 1 points");
  double z = x0;
  for (std::size_t j = 0; j + 1 < K; ++j) {
    double mean = 0.0, var = 0.0;
    bridge_step(z, xK, K, j, eps, mean, var);
    z = mean + std::sqrt(var) * rng.normal();
    out[j] = z;
  }
}

BridgePath bridge_sample(double x0, double xK, std::size_t K, double eps, RngStream& rng) {
  check_bridge_args(K, eps);
  BridgePath path{x0, xK, eps, K, std::vector<double>(K - 1)};
  bridge_sample_into(x0, xK, K, eps, rng, path.interior);
  return path;
}

double bridge_log_density(double x0, double xK, std::size_t K, double eps,
                          std::span<const double> interior) {
  check_bridge_args(K, eps);
  if (interior.size() != K - 1)
    throw ConfigError("bridge: interior length does not match K - 1");
  double log_density = 0.0;
  double z = x0;
  for (std::size_t j = 0; j + 1 < K; ++j) {
    double mean = 0.0, var = 0.0;
    bridge_step(z, xK, K, j, eps, mean, var);
    if (!(var > 0.0)) {
      if (interior[j] != mean)
        throw Error("bridge: zero-variance step evaluated away from its mean");
      continue;
    }
    log_density += log_normal_pdf(interior[j], mean, var);
    z = interior[j];
  }
  return log_density;
}

double bridge_log_density(const BridgePath& path) {
  return bridge_log_density(path.x0, path.xK, path.K, path.eps, path.interior);
}

double bridge_density(const BridgePath& path) { return std::exp(bridge_log_density(path)); }

}  // namespace paris
