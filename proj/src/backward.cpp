#include "paris/backward.hpp"

#include <cmath>
#include <memory>
#include <string>

#include "paris/error.hpp"

namespace paris {
namespace {

double checked_estimate(double value) {
  if (!std::isfinite(value) || value < 0.0)
    throw DegenerateWeights("backward: transition estimate is negative or not finite");
  return value;
}

}  // namespace

void validate(const BackwardConfig& config) {
  if (config.samples == 0) throw ConfigError("backward: sample count M must be at least 1");
  if (const auto* rs = std::get_if<RejectionSampling>(&config.sampler)) {
    if (rs->max_trials == 0) throw ConfigError("backward: max_trials must be at least 1");
  } else if (std::get<IndependentMh>(config.sampler).steps_per_sample == 0) {
    throw ConfigError("backward: steps_per_sample must be at least 1");
  }
}

ExactView::ExactView(const TransitionEstimator& inner) : inner_(inner) {
  if (!inner.has_exact_density())
    throw ConfigError("ideal backward sampling needs an exact transition density");
}

std::vector<double> lambda_row(const ParticleCloud& cloud, State x_next,
                               const std::function<double(State, State)>& density) {
  std::vector<double> row(cloud.size());
  double total = 0.0;
  for (std::size_t j = 0; j < cloud.size(); ++j) {
    const double w = cloud.weights()[j];
    row[j] = w == 0.0 ? 0.0 : w * checked_estimate(density(cloud.particle(j), x_next));
    total += row[j];
  }
  if (!(total > 0.0) || !std::isfinite(total))
    throw DegenerateWeights("lambda_row: all backward numerators vanish");
  for (double& p : row) p /= total;
  return row;
}

std::vector<double> lambda_row(const ParticleCloud& cloud, State x_next,
                               const TransitionEstimator& estimator) {
  if (!estimator.has_exact_density())
    throw ConfigError("lambda_row: estimator has no exact density");
  return lambda_row(cloud, x_next,
                    [&](State x, State y) { return estimator.exact_density(x, y); });
}

BackwardDraw propose_backward_index(const ParticleCloud& cloud, const CategoricalTable& weights,
                                    State x_next, const TransitionEstimator& estimator,
                                    RngStream& rng) {
  BackwardDraw draw;
  draw.index = weights.sample(rng);
  const State parent = cloud.particle(draw.index);
  draw.aux = estimator.draw_aux(parent, x_next, rng);
  draw.value = checked_estimate(estimator.evaluate(draw.aux, parent, x_next));
  draw.trials = 1;
  return draw;
}

BackwardDraw sample_backward_index_rejection(const ParticleCloud& cloud,
                                             const CategoricalTable& weights, State x_next,
                                             const TransitionEstimator& estimator,
                                             RngStream& rng, std::size_t max_trials) {
  if (!estimator.has_bound())
    throw ConfigError("rejection backward sampling needs an estimator bound c(x')");
  const double c = estimator.bound(x_next);
  if (!(c > 0.0) || !std::isfinite(c))
    throw ConfigError("rejection backward sampling: bound must be positive and finite");

  for (std::size_t trial = 1; trial <= max_trials; ++trial) {
    BackwardDraw candidate = propose_backward_index(cloud, weights, x_next, estimator, rng);
    if (candidate.value > c * (1.0 + 1e-12))
      throw ConfigError("rejection backward sampling: estimate exceeds the declared bound");
    if (rng.uniform() * c <= candidate.value) {
      candidate.trials = trial;
      return candidate;
    }
  }
  throw RejectionExhausted(max_trials);
}

BackwardDraw sample_backward_index_rejection(const ParticleCloud& cloud, State x_next,
                                             const TransitionEstimator& estimator,
                                             RngStream& rng, std::size_t max_trials) {
  const CategoricalTable weights(cloud.weights());
  return sample_backward_index_rejection(cloud, weights, x_next, estimator, rng, max_trials);
}

BackwardDraw sample_backward_index_mh(const ParticleCloud& cloud, const CategoricalTable& weights,
                                      State x_next, const TransitionEstimator& estimator,
                                      BackwardDraw current, RngStream& rng, std::size_t steps) {
  for (std::size_t s = 0; s < steps; ++s) {
    BackwardDraw candidate = propose_backward_index(cloud, weights, x_next, estimator, rng);
    const double u = rng.uniform();
    // A zero-valued current state (possible only right after a warm start) is
    // left as soon as any candidate is proposed.
    if (current.value <= 0.0 || u * current.value <= candidate.value) {
      candidate.trials = current.trials + 1;
      current = std::move(candidate);
    } else {
      ++current.trials;
    }
  }
  return current;
}

BackwardDraw sample_backward_index_mh(const ParticleCloud& cloud, State x_next,
                                      const TransitionEstimator& estimator, BackwardDraw current,
                                      RngStream& rng, std::size_t steps) {
  const CategoricalTable weights(cloud.weights());
  return sample_backward_index_mh(cloud, weights, x_next, estimator, std::move(current), rng,
                                  steps);
}

std::vector<double> bs_update(const ParticleCloud& cloud, const ForwardOutcome& outcome,
                              const PathModel& model, const BackwardConfig& config,
                              std::uint64_t seed, Mode mode, Execution exec) {
  validate(config);
  const std::size_t n = cloud.time_index();
  if (outcome.time_index != n + 1 || outcome.dim != cloud.dim())
    throw ConfigError("bs_update: forward outcome does not follow the given cloud");

  const auto model_estimator = model.estimator(n);
  std::unique_ptr<ExactView> ideal;
  if (mode == Mode::Ideal) ideal = std::make_unique<ExactView>(*model_estimator);
  const TransitionEstimator& estimator =
      ideal ? static_cast<const TransitionEstimator&>(*ideal) : *model_estimator;

  const CategoricalTable weights(cloud.weights());
  const auto tau = cloud.stats();
  const std::size_t M = config.samples;
  std::vector<double> next(outcome.size());

  for_each_index(outcome.size(), exec, [&](std::size_t i) {
    RngStream rng(seed, n, i, Channel::kBackward);
    const State x_next = outcome.particle(i);
    double acc = 0.0;
    auto accumulate = [&](std::size_t j) {
      acc += tau[j] + model.increment(n, cloud.particle(j), x_next);
    };

    if (const auto* rs = std::get_if<RejectionSampling>(&config.sampler)) {
      for (std::size_t k = 0; k < M; ++k) {
        accumulate(sample_backward_index_rejection(cloud, weights, x_next, estimator, rng,
                                                   rs->max_trials)
                       .index);
      }
    } else {
      const std::size_t steps = std::get<IndependentMh>(config.sampler).steps_per_sample;
      BackwardDraw state = propose_backward_index(cloud, weights, x_next, estimator, rng);
      for (std::size_t k = 0; k < M; ++k) {
        state = sample_backward_index_mh(cloud, weights, x_next, estimator, std::move(state),
                                         rng, steps);
        accumulate(state.index);
      }
    }
    next[i] = acc / static_cast<double>(M);
  });
  return next;
}

}  // namespace paris
