#include "paris/paris.hpp"

#include <exception>
#include <utility>

#include "paris/error.hpp"

namespace paris {

void validate(const ParisConfig& config) {
  if (config.particles == 0) throw ConfigError("paris: particle count must be positive");
  if (config.record_every == 0) throw ConfigError("paris: record_every must be positive");
  validate(config.backward);
}

EstimateRecord make_record(const ParticleCloud& cloud) {
  return {cloud.time_index(), smoothing_estimate(cloud), effective_sample_size(cloud.weights()),
          weight_cv(cloud.weights())};
}

ParticleCloud paris_step(const ParticleCloud& cloud, const PathModel& model,
                         const ParisConfig& config) {
  ForwardOutcome outcome = config.mode == Mode::Ideal
                               ? fs_update(cloud, model, config.seed, config.execution)
                               : pmfs_update(cloud, model, config.seed, config.execution);
  std::vector<double> stats = bs_update(cloud, outcome, model, config.backward, config.seed,
                                        config.mode, config.execution);
  return ParticleCloud(outcome.dim, std::move(outcome.particles), std::move(outcome.weights),
                       std::move(stats), outcome.time_index);
}

OnlineSmoother::OnlineSmoother(const PathModel& model, ParisConfig config)
    : model_(model),
      config_((validate(config), config)),
      cloud_(init_cloud(model, config_.particles, config_.seed)) {}

void OnlineSmoother::step() {
  const std::size_t n = cloud_.time_index();
  try {
    cloud_ = paris_step(cloud_, model_, config_);
  } catch (const StepError&) {
    throw;
  } catch (const std::exception& e) {
    std::throw_with_nested(StepError(n, e.what()));
  }
}

std::vector<EstimateRecord> run_online(const PathModel& model, std::size_t n_steps,
                                       const ParisConfig& config) {
  OnlineSmoother smoother(model, config);
  std::vector<EstimateRecord> records;
  records.push_back(smoother.record());
  for (std::size_t k = 1; k <= n_steps; ++k) {
    smoother.step();
    if (k % config.record_every == 0 || k == n_steps) records.push_back(smoother.record());
  }
  return records;
}

}  // namespace paris
