#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "paris/rng.hpp"

namespace paris {

/// Read-only view of one particle (a point of the state space).
using State = std::span<const double>;

/// Opaque auxiliary variable drawn by a transition estimator.
using AuxPayload = std::vector<double>;

/// A pair (R_n, estimate) giving a nonnegative, possibly biased, estimate of
/// the unnormalised transition density l_n(x, x'): draw z from R_n(x, x', .)
/// and evaluate l<z>(x, x').
class TransitionEstimator {
 public:
  virtual ~TransitionEstimator() = default;

  virtual AuxPayload draw_aux(State x, State x_next, RngStream& rng) const = 0;

  /// Deterministic in (z, x, x_next). Must be nonnegative.
  virtual double evaluate(const AuxPayload& z, State x, State x_next) const = 0;

  /// Exact density l_n, when tractable.
  virtual bool has_exact_density() const { return false; }
  virtual double exact_density(State x, State x_next) const;

  /// c(x') with evaluate(z, x, x') <= c(x') for all x and z. Needed by the
  /// rejection backward sampler.
  virtual bool has_bound() const { return false; }
  virtual double bound(State x_next) const;
};

/// Feynman-Kac path model together with the instrumental quantities of an
/// auxiliary particle filter. Step `n` maps time n to time n + 1. Everything is
/// pulled lazily per step, so observations may be generated on the fly.
class PathModel {
 public:
  virtual ~PathModel() = default;

  virtual std::size_t dim() const = 0;

  /// Draw x_0 from the initial proposal nu.
  virtual void sample_initial(RngStream& rng, std::span<double> out) const = 0;
  /// d chi / d nu at x.
  virtual double initial_weight(State x) const = 0;

  /// Adjustment multiplier theta_n(x) > 0.
  virtual double adjustment(std::size_t n, State x) const;

  virtual void sample_proposal(std::size_t n, State x, RngStream& rng,
                               std::span<double> out) const = 0;
  virtual double proposal_density(std::size_t n, State x, State x_next) const = 0;

  virtual std::shared_ptr<const TransitionEstimator> estimator(std::size_t n) const = 0;

  /// Additive-functional term h~_n(x_n, x_{n+1}).
  virtual double increment(std::size_t n, State x, State x_next) const = 0;
};

/// Particles, unnormalised weights and backward statistics at one time step.
/// Particles are stored row-major (N x dim).
class ParticleCloud {
 public:
  ParticleCloud(std::size_t dim, std::vector<double> particles, std::vector<double> weights,
                std::vector<double> stats, std::size_t time_index);

  std::size_t size() const noexcept { return weights_.size(); }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t time_index() const noexcept { return time_index_; }

  State particle(std::size_t i) const { return {particles_.data() + i * dim_, dim_}; }
  std::span<const double> particles() const noexcept { return particles_; }
  std::span<const double> weights() const noexcept { return weights_; }
  std::span<const double> stats() const noexcept { return stats_; }

  double total_weight() const noexcept { return total_weight_; }

  /// Bytes held by the three arrays (capacity, not size).
  std::size_t footprint_bytes() const noexcept;

 private:
  std::size_t dim_;
  std::vector<double> particles_;
  std::vector<double> weights_;
  std::vector<double> stats_;
  std::size_t time_index_;
  double total_weight_ = 0.0;
};

/// Draws N initial particles from nu, weights d chi / d nu, zero statistics.
ParticleCloud init_cloud(const PathModel& model, std::size_t N, std::uint64_t seed);

/// Self-normalised estimate sum_i w_i f(x_i) / sum_i w_i.
double weighted_mean(const ParticleCloud& cloud, const std::function<double(State)>& f);

/// Online smoothing estimate sum_i w_i tau_i / sum_i w_i.
double smoothing_estimate(const ParticleCloud& cloud);

/// (sum w)^2 / sum w^2.
double effective_sample_size(std::span<const double> weights);
/// Population standard deviation of the weights over their mean.
double weight_cv(std::span<const double> weights);

/// Checks a weight vector: finite, nonnegative, positive sum. Throws
/// DegenerateWeights otherwise and returns the sum.
double checked_weight_sum(std::span<const double> weights, const char* context);

}  // namespace paris
