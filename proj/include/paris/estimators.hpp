#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "paris/model.hpp"
#include "paris/rng.hpp"

namespace paris {

using DensityFn = std::function<double(State x, State x_next)>;
using BoundFn = std::function<double(State x_next)>;

/// Zero-variance estimator returning the exact density.
class ExactEstimator final : public TransitionEstimator {
 public:
  explicit ExactEstimator(DensityFn density, BoundFn bound = {});

  AuxPayload draw_aux(State, State, RngStream&) const override { return {}; }
  double evaluate(const AuxPayload&, State x, State x_next) const override {
    return density_(x, x_next);
  }
  bool has_exact_density() const override { return true; }
  double exact_density(State x, State x_next) const override { return density_(x, x_next); }
  bool has_bound() const override { return static_cast<bool>(bound_); }
  double bound(State x_next) const override;

 private:
  DensityFn density_;
  BoundFn bound_;
};

std::shared_ptr<const TransitionEstimator> exact_wrap(DensityFn density, BoundFn bound = {});

// --- Durham-Gallant -------------------------------------------------------

/// Scalar diffusion dX = mu(X) dt + sigma(X) dW.
struct SdeSpec {
  std::function<double(double)> drift;
  std::function<double(double)> diffusion;
  double sigma_floor = 1e-8;
};

/// Observation interval delta, fine step eps = delta / K and L bridge paths.
struct DgConfig {
  double delta = 1.0;
  double eps = 1.0;
  std::size_t paths = 1;

  /// K = delta / eps; throws ConfigError unless it is a positive integer.
  std::size_t substeps() const;
};

void validate(const DgConfig& config);

/// g_n(x_n, x_{n+1}) with the observation y_{n+1} already bound. An empty
/// function stands for g = 1.
using ObservationDensity = std::function<double(double x, double x_next)>;

/// Euler transition density N(x'; x + step mu(x), step sigma(x)^2).
double euler_log_density(const SdeSpec& sde, double step, double x, double x_next);
double euler_density(const SdeSpec& sde, double step, double x, double x_next);

struct DgEstimate {
  double value = 0.0;
  /// The L bridge paths, each K - 1 interior points, concatenated.
  AuxPayload paths;
};

/// Durham-Gallant importance-sampling estimate of g(x, x') times the density
/// of K Euler steps of length eps from x to x', using L Brownian-bridge paths.
DgEstimate durham_gallant(const SdeSpec& sde, const DgConfig& config,
                          const ObservationDensity& observation, double x, double x_next,
                          RngStream& rng);

/// Evaluates the estimate for given bridge paths.
double durham_gallant_evaluate(const SdeSpec& sde, const DgConfig& config,
                               const ObservationDensity& observation, const AuxPayload& paths,
                               double x, double x_next);

class DurhamGallantEstimator final : public TransitionEstimator {
 public:
  DurhamGallantEstimator(SdeSpec sde, DgConfig config, ObservationDensity observation = {});

  AuxPayload draw_aux(State x, State x_next, RngStream& rng) const override;
  double evaluate(const AuxPayload& z, State x, State x_next) const override;

  const DgConfig& config() const noexcept { return config_; }

 private:
  SdeSpec sde_;
  DgConfig config_;
  std::size_t substeps_;
  ObservationDensity observation_;
};

// --- ABC ------------------------------------------------------------------

/// Smoothing kernel kappa(u) evaluated at u = z - y.
using KernelFn = std::function<double(std::span<const double> u)>;

/// Density of N(0, bandwidth^2 I) in `dim` dimensions.
KernelFn gaussian_kernel(double bandwidth, std::size_t dim);

using EmissionSampler = std::function<void(State x_next, RngStream& rng, std::span<double> z)>;

struct AbcConfig {
  double bandwidth = 1.0;
  /// Empty means the Gaussian kernel with covariance bandwidth^2 I.
  KernelFn kernel;
  EmissionSampler emission_sampler;
  std::size_t obs_dim = 1;
};

void validate(const AbcConfig& config);

/// ABC estimator q(x, x') kappa(z - y) with z drawn from the emission kernel
/// at x'. If `transition_bound` is given the estimator is bounded by
/// transition_bound(x') kappa(0), which assumes the kernel peaks at zero.
std::shared_ptr<const TransitionEstimator> abc_estimator(const AbcConfig& config,
                                                         DensityFn transition_density,
                                                         std::vector<double> y_next,
                                                         BoundFn transition_bound = {});

}  // namespace paris
