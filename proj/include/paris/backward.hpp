#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <variant>
#include <vector>

#include "paris/forward.hpp"
#include "paris/model.hpp"
#include "paris/parallel.hpp"
#include "paris/samplers.hpp"

namespace paris {

/// Accept-reject against the uniform bound c(x') of the estimator.
struct RejectionSampling {
  std::size_t max_trials = 1'000'000;
};

/// Independent Metropolis-Hastings with proposal cat(w) x R_n; the chain is
/// thinned to every `steps_per_sample`-th state.
struct IndependentMh {
  std::size_t steps_per_sample = 5;
};

struct BackwardConfig {
  std::variant<RejectionSampling, IndependentMh> sampler = RejectionSampling{};
  /// Backward draws per particle.
  std::size_t samples = 2;
};

void validate(const BackwardConfig& config);

/// Whether the backward pass uses the exact density (ideal PaRIS) or the
/// estimator (pseudo-marginal PaRIS).
enum class Mode { Ideal, PseudoMarginal };

/// One draw (J, zeta) from the extended backward kernel, together with the
/// estimate l<zeta>(x_J, x') it carries and the number of candidates tried.
struct BackwardDraw {
  std::size_t index = 0;
  AuxPayload aux;
  double value = 0.0;
  std::size_t trials = 0;
};

/// Exact backward probabilities w_j l(x_j, x') / sum_j' w_j' l(x_j', x').
/// O(N); used as a test oracle and for the quadratic full update in tests.
std::vector<double> lambda_row(const ParticleCloud& cloud, State x_next,
                               const std::function<double(State, State)>& density);
/// Same with the estimator's exact density.
std::vector<double> lambda_row(const ParticleCloud& cloud, State x_next,
                               const TransitionEstimator& estimator);

/// Rejection sampling: candidates J ~ cat(w), zeta ~ R_n(x_J, x', .) are
/// accepted with probability l<zeta>(x_J, x') / c(x').
BackwardDraw sample_backward_index_rejection(const ParticleCloud& cloud,
                                             const CategoricalTable& weights, State x_next,
                                             const TransitionEstimator& estimator,
                                             RngStream& rng, std::size_t max_trials);
BackwardDraw sample_backward_index_rejection(const ParticleCloud& cloud, State x_next,
                                             const TransitionEstimator& estimator,
                                             RngStream& rng, std::size_t max_trials);

/// Advances an independent MH chain `steps` transitions from `current`.
/// A candidate replaces the state with probability 1 ^ value* / value.
BackwardDraw sample_backward_index_mh(const ParticleCloud& cloud, const CategoricalTable& weights,
                                      State x_next, const TransitionEstimator& estimator,
                                      BackwardDraw current, RngStream& rng, std::size_t steps);
BackwardDraw sample_backward_index_mh(const ParticleCloud& cloud, State x_next,
                                      const TransitionEstimator& estimator, BackwardDraw current,
                                      RngStream& rng, std::size_t steps);

/// Fresh draw from the MH proposal cat(w) x R_n, used to warm-start chains.
BackwardDraw propose_backward_index(const ParticleCloud& cloud, const CategoricalTable& weights,
                                    State x_next, const TransitionEstimator& estimator,
                                    RngStream& rng);

/// Backward-sampling update of the statistics:
///   tau'_i = (1/M) sum_j (tau_{J(i,j)} + h~_n(x_{J(i,j)}, x'_i)).
/// In Ideal mode the estimator's exact density is used and no auxiliary
/// variables are drawn.
std::vector<double> bs_update(const ParticleCloud& cloud, const ForwardOutcome& outcome,
                              const PathModel& model, const BackwardConfig& config,
                              std::uint64_t seed, Mode mode = Mode::PseudoMarginal,
                              Execution exec = Execution::Parallel);

/// Estimator view exposing only the exact density of another estimator, with
/// an empty auxiliary variable. Turns the pseudo-marginal samplers into the
/// ideal ones.
class ExactView final : public TransitionEstimator {
 public:
  explicit ExactView(const TransitionEstimator& inner);

  AuxPayload draw_aux(State, State, RngStream&) const override { return {}; }
  double evaluate(const AuxPayload&, State x, State x_next) const override {
    return inner_.exact_density(x, x_next);
  }
  bool has_exact_density() const override { return true; }
  double exact_density(State x, State x_next) const override {
    return inner_.exact_density(x, x_next);
  }
  bool has_bound() const override { return inner_.has_bound(); }
  double bound(State x_next) const override { return inner_.bound(x_next); }

 private:
  const TransitionEstimator& inner_;
};

}  // namespace paris
