#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "paris/estimators.hpp"
#include "paris/model.hpp"
#include "paris/rng.hpp"

namespace paris::testing {

inline ParticleCloud make_cloud(std::vector<double> particles, std::vector<double> weights,
                                std::vector<double> stats = {}, std::size_t n = 0) {
  if (stats.empty()) stats.assign(weights.size(), 0.0);
  return ParticleCloud(1, std::move(particles), std::move(weights), std::move(stats), n);
}

/// Scalar path model assembled from plain functions, for fixtures.
struct FunctionModel final : PathModel {
  std::function<double(RngStream&)> initial = [](RngStream& rng) { return rng.normal(); };
  std::function<double(double)> initial_w = [](double) { return 1.0; };
  std::function<double(std::size_t, double)> adjust = [](std::size_t, double) { return 1.0; };
  std::function<double(std::size_t, double, RngStream&)> propose;
  std::function<double(std::size_t, double, double)> propose_density;
  std::function<std::shared_ptr<const TransitionEstimator>(std::size_t)> make_estimator;
  std::function<double(std::size_t, double, double)> incr = [](std::size_t, double, double) {
    return 0.0;
  };

  std::size_t dim() const override { return 1; }
  void sample_initial(RngStream& rng, std::span<double> out) const override {
    out[0] = initial(rng);
  }
  double initial_weight(State x) const override { return initial_w(x[0]); }
  double adjustment(std::size_t n, State x) const override { return adjust(n, x[0]); }
  void sample_proposal(std::size_t n, State x, RngStream& rng,
                       std::span<double> out) const override {
    out[0] = propose(n, x[0], rng);
  }
  double proposal_density(std::size_t n, State x, State x_next) const override {
    return propose_density(n, x[0], x_next[0]);
  }
  std::shared_ptr<const TransitionEstimator> estimator(std::size_t n) const override {
    return make_estimator(n);
  }
  double increment(std::size_t n, State x, State x_next) const override {
    return incr(n, x[0], x_next[0]);
  }
};

/// Estimator returning `low` or `high` with probability 1/2 each, times an
/// exact density; used to check pseudo-marginal expectations.
struct TwoPointEstimator final : TransitionEstimator {
  std::function<double(double, double)> density;
  double low = 0.5;
  double high = 1.5;

  AuxPayload draw_aux(State, State, RngStream& rng) const override {
    return {rng.uniform() < 0.5 ? 0.0 : 1.0};
  }
  double evaluate(const AuxPayload& z, State x, State x_next) const override {
    return (z[0] == 0.0 ? low : high) * density(x[0], x_next[0]);
  }
  bool has_exact_density() const override { return true; }
  double exact_density(State x, State x_next) const override {
    return 0.5 * (low + high) * density(x[0], x_next[0]);
  }
  bool has_bound() const override { return bound_value > 0.0; }
  double bound(State) const override { return bound_value; }
  double bound_value = 0.0;
};

/// Density on the integers 0..N-1 given by a lookup table indexed by the
/// previous state; x' is ignored.
inline std::shared_ptr<const TransitionEstimator> table_density(std::vector<double> table,
                                                                double bound = 0.0) {
  DensityFn density = [table](State x, State) { return table.at(static_cast<std::size_t>(x[0])); };
  if (bound > 0.0) return exact_wrap(density, [bound](State) { return bound; });
  return exact_wrap(density);
}

inline double total_variation(std::span<const double> p, std::span<const double> q) {
  double tv = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) tv += std::abs(p[i] - q[i]);
  return 0.5 * tv;
}

}  // namespace paris::testing
