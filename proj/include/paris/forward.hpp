#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "paris/model.hpp"
#include "paris/parallel.hpp"

namespace paris {

/// Result of one forward-sampling pass from time n to n + 1.
struct ForwardOutcome {
  std::size_t dim = 1;
  std::size_t time_index = 0;  ///< n + 1
  std::vector<double> particles;
  std::vector<double> weights;
  std::vector<std::size_t> ancestors;
  /// One auxiliary draw per particle in pseudo-marginal mode, empty otherwise.
  std::vector<AuxPayload> aux;

  std::size_t size() const noexcept { return weights.size(); }
  State particle(std::size_t i) const { return {particles.data() + i * dim, dim}; }
};

/// Auxiliary-particle-filter forward sampling with the exact transition
/// density. Requires model.estimator(n)->has_exact_density().
ForwardOutcome fs_update(const ParticleCloud& cloud, const PathModel& model, std::uint64_t seed,
                         Execution exec = Execution::Parallel);

/// Forward sampling with the transition density replaced by an estimate
/// drawn from the model's estimator; the auxiliary draws are kept.
ForwardOutcome pmfs_update(const ParticleCloud& cloud, const PathModel& model,
                           std::uint64_t seed, Execution exec = Execution::Parallel);

}  // namespace paris
