#include "paris/model.hpp"

#include <cmath>
#include <string>

#include "paris/error.hpp"

namespace paris {

double TransitionEstimator::exact_density(State, State) const {
  throw ConfigError("transition estimator has no exact density");
}

double TransitionEstimator::bound(State) const {
  throw ConfigError("transition estimator has no uniform bound");
}

double PathModel::adjustment(std::size_t, State) const { return 1.0; }

double checked_weight_sum(std::span<const double> weights, const char* context) {
  double total = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double w = weights[i];
    if (!std::isfinite(w) || w < 0.0)
      throw DegenerateWeights(std::string(context) + ": weight " + std::to_string(i) +
                              " is negative or not finite");
    total += w;
  }
  if (!(total > 0.0) || !std::isfinite(total))
    throw DegenerateWeights(std::string(context) + ": weights have no positive mass");
  return total;
}

ParticleCloud::ParticleCloud(std::size_t dim, std::vector<double> particles,
                             std::vector<double> weights, std::vector<double> stats,
                             std::size_t time_index)
    : dim_(dim),
      particles_(std::move(particles)),
      weights_(std::move(weights)),
      stats_(std::move(stats)),
      time_index_(time_index) {
  if (dim_ == 0) throw ConfigError("particle cloud: state dimension must be positive");
  if (weights_.empty()) throw ConfigError("particle cloud: needs at least one particle");
  if (particles_.size() != weights_.size() * dim_ || stats_.size() != weights_.size())
    throw ConfigError("particle cloud: array lengths disagree");
  total_weight_ = checked_weight_sum(weights_, "particle cloud");
}

std::size_t ParticleCloud::footprint_bytes() const noexcept {
  return sizeof(double) * (particles_.capacity() + weights_.capacity() + stats_.capacity());
}

ParticleCloud init_cloud(const PathModel& model, std::size_t N, std::uint64_t seed) {
  if (N == 0) throw ConfigError("init_cloud: N must be at least 1");
  const std::size_t dim = model.dim();
  std::vector<double> particles(N * dim);
  std::vector<double> weights(N);
  for (std::size_t i = 0; i < N; ++i) {
    RngStream rng(seed, 0, i, Channel::kInit);
    std::span<double> x(particles.data() + i * dim, dim);
    model.sample_initial(rng, x);
    weights[i] = model.initial_weight(x);
  }
  try {
    checked_weight_sum(weights, "init_cloud");
  } catch (const DegenerateWeights& e) {
    throw DegenerateWeights(std::string("degenerate initialization: ") + e.what());
  }
  return ParticleCloud(dim, std::move(particles), std::move(weights), std::vector<double>(N, 0.0),
                       0);
}

double weighted_mean(const ParticleCloud& cloud, const std::function<double(State)>& f) {
  double acc = 0.0;
  const auto w = cloud.weights();
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    if (w[i] != 0.0) acc += w[i] * f(cloud.particle(i));
  }
  return acc / cloud.total_weight();
}

double smoothing_estimate(const ParticleCloud& cloud) {
  double acc = 0.0;
  const auto w = cloud.weights();
  const auto tau = cloud.stats();
  for (std::size_t i = 0; i < cloud.size(); ++i) acc += w[i] * tau[i];
  return acc / cloud.total_weight();
}

double effective_sample_size(std::span<const double> weights) {
  double s = 0.0, s2 = 0.0;
  for (double w : weights) {
    s += w;
    s2 += w * w;
  }
  return s2 > 0.0 ? s * s / s2 : 0.0;
}

double weight_cv(std::span<const double> weights) {
  if (weights.empty()) return 0.0;
  const double n = static_cast<double>(weights.size());
  double mean = 0.0;
  for (double w : weights) mean += w;
  mean /= n;
  double var = 0.0;
  for (double w : weights) var += (w - mean) * (w - mean);
  var /= n;
  return mean > 0.0 ? std::sqrt(var) / mean : 0.0;
}

}  // namespace paris
