#include "paris/forward.hpp"

#include <cmath>
#include <string>

#include "paris/error.hpp"
#include "paris/samplers.hpp"

namespace paris {
namespace {

// Selection weights theta_n(x_l) * w_l.
std::vector<double> adjusted_weights(const ParticleCloud& cloud, const PathModel& model) {
  const std::size_t n = cloud.time_index();
  std::vector<double> adjusted(cloud.size());
  for (std::size_t l = 0; l < cloud.size(); ++l) {
    const double w = cloud.weights()[l];
    if (w == 0.0) continue;
    const double theta = model.adjustment(n, cloud.particle(l));
    if (!(theta > 0.0) || !std::isfinite(theta))
      throw ConfigError("adjustment weight must be positive and finite");
    adjusted[l] = theta * w;
  }
  return adjusted;
}

double checked_weight(double numerator, double theta, double proposal, std::size_t i) {
  if (!std::isfinite(numerator) || numerator < 0.0)
    throw DegenerateWeights("forward: transition estimate for particle " + std::to_string(i) +
                            " is negative or not finite");
  if (numerator == 0.0) return 0.0;
  const double w = numerator / (theta * proposal);
  if (!std::isfinite(w))
    throw DegenerateWeights("forward: weight of particle " + std::to_string(i) +
                            " is not finite (proposal density vanishes?)");
  return w;
}

ForwardOutcome forward_pass(const ParticleCloud& cloud, const PathModel& model,
                            std::uint64_t seed, Execution exec, bool pseudo_marginal) {
  const std::size_t n = cloud.time_index();
  const std::size_t N = cloud.size();
  const std::size_t dim = model.dim();
  if (dim != cloud.dim()) throw ConfigError("forward: model and cloud dimensions differ");

  const auto estimator = model.estimator(n);
  if (!pseudo_marginal && !estimator->has_exact_density())
    throw ConfigError(
        "fs_update needs an exact transition density; use pmfs_update for estimated densities");

  const CategoricalTable selection(adjusted_weights(cloud, model));

  ForwardOutcome out;
  out.dim = dim;
  out.time_index = n + 1;
  out.particles.resize(N * dim);
  out.weights.resize(N);
  out.ancestors.resize(N);
  if (pseudo_marginal) out.aux.resize(N);

  for_each_index(N, exec, [&](std::size_t i) {
    RngStream rng(seed, n, i, Channel::kForward);
    const std::size_t ancestor = selection.sample(rng);
    const State parent = cloud.particle(ancestor);
    std::span<double> child(out.particles.data() + i * dim, dim);
    model.sample_proposal(n, parent, rng, child);

    double numerator = 0.0;
    if (pseudo_marginal) {
      out.aux[i] = estimator->draw_aux(parent, child, rng);
      numerator = estimator->evaluate(out.aux[i], parent, child);
    } else {
      numerator = estimator->exact_density(parent, child);
    }
    const double theta = model.adjustment(n, parent);
    const double proposal = model.proposal_density(n, parent, child);
    out.ancestors[i] = ancestor;
    out.weights[i] = checked_weight(numerator, theta, proposal, i);
  });
  return out;
}

}  // namespace

ForwardOutcome fs_update(const ParticleCloud& cloud, const PathModel& model, std::uint64_t seed,
                         Execution exec) {
  return forward_pass(cloud, model, seed, exec, false);
}

ForwardOutcome pmfs_update(const ParticleCloud& cloud, const PathModel& model,
                           std::uint64_t seed, Execution exec) {
  return forward_pass(cloud, model, seed, exec, true);
}

}  // namespace paris
