#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "paris/backward.hpp"
#include "paris/forward.hpp"
#include "paris/model.hpp"
#include "paris/parallel.hpp"

namespace paris {

struct ParisConfig {
  std::size_t particles = 200;
  BackwardConfig backward;
  std::uint64_t seed = 0;
  Mode mode = Mode::PseudoMarginal;
  Execution execution = Execution::Parallel;
  /// Record an estimate every this many steps (the final step is always kept).
  std::size_t record_every = 1;
};

void validate(const ParisConfig& config);

struct EstimateRecord {
  std::size_t time_index = 0;
  double estimate = 0.0;
  double ess = 0.0;
  double weight_cv = 0.0;
};

EstimateRecord make_record(const ParticleCloud& cloud);

/// One full PaRIS update: forward sampling (exact or pseudo-marginal weights)
/// followed by backward sampling of the statistics.
ParticleCloud paris_step(const ParticleCloud& cloud, const PathModel& model,
                         const ParisConfig& config);

/// Online smoother holding only the current particle cloud.
class OnlineSmoother {
 public:
  OnlineSmoother(const PathModel& model, ParisConfig config);

  /// Advances one step. Errors are rethrown as StepError carrying the index
  /// of the step that failed, with the original exception nested inside.
  void step();

  const ParticleCloud& cloud() const noexcept { return cloud_; }
  std::size_t time_index() const noexcept { return cloud_.time_index(); }
  double estimate() const { return smoothing_estimate(cloud_); }
  EstimateRecord record() const { return make_record(cloud_); }

  /// Bytes of particle state currently retained.
  std::size_t live_bytes() const noexcept { return cloud_.footprint_bytes(); }

 private:
  const PathModel& model_;
  ParisConfig config_;
  ParticleCloud cloud_;
};

/// Initialises a cloud and runs n_steps updates, returning the recorded
/// estimates (time 0 first).
std::vector<EstimateRecord> run_online(const PathModel& model, std::size_t n_steps,
                                       const ParisConfig& config);

}  // namespace paris
