#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "paris/estimators.hpp"
#include "paris/model.hpp"
#include "paris/oracles.hpp"

namespace paris {

/// h~_n(x_n, x_{n+1}) for scalar models.
using ScalarIncrement = std::function<double(std::size_t n, double x, double x_next)>;

/// Increments giving h_n(x_{0:n}) = sum_{k=0}^n x_k.
ScalarIncrement state_sum_increment();

/// Increments giving h_n = f(x_m) for every n > m and 0 before: fixed-point
/// smoothing of f at time m.
ScalarIncrement fixed_point_increment(std::size_t m, std::function<double(double)> f);

/// phi(x) = min(max(x, -1e5), 1e5).
double clip_state(double x);

/// Gaussian mean and variance of p(x' | x, y) proportional to
/// N(x'; a x + b, q) N(y; c x' + d, r).
GaussianMoments optimal_proposal_lgss(const LgssSpec& model, double x, double y_next);

/// Predictive likelihood N(y; c (a x + b) + d, c^2 q + r), i.e. the fully
/// adapted adjustment weight for the optimal proposal.
double predictive_likelihood_lgss(const LgssSpec& model, double x, double y_next);

enum class LgssProposal { Optimal, Bootstrap };

/// Scalar linear-Gaussian state-space model seen as a path model with exact
/// densities l_n(x, x') = N(x'; a x + b, q) N(y_{n+1}; c phi(x') + d, r).
class LgssPathModel final : public PathModel {
 public:
  LgssPathModel(LgssSpec spec, std::vector<double> observations,
                LgssProposal proposal = LgssProposal::Optimal,
                ScalarIncrement increment = state_sum_increment());

  std::size_t dim() const override { return 1; }
  void sample_initial(RngStream& rng, std::span<double> out) const override;
  double initial_weight(State) const override { return 1.0; }
  double adjustment(std::size_t n, State x) const override;
  void sample_proposal(std::size_t n, State x, RngStream& rng,
                       std::span<double> out) const override;
  double proposal_density(std::size_t n, State x, State x_next) const override;
  std::shared_ptr<const TransitionEstimator> estimator(std::size_t n) const override;
  double increment(std::size_t n, State x, State x_next) const override {
    return increment_(n, x[0], x_next[0]);
  }

  const LgssSpec& spec() const noexcept { return spec_; }
  std::size_t steps() const noexcept { return observations_.size(); }

 private:
  double observation(std::size_t n) const;

  LgssSpec spec_;
  std::vector<double> observations_;
  LgssProposal proposal_;
  ScalarIncrement increment_;
};

enum class HmmProposal { Uniform, FullyAdapted };

/// Finite-state model; states are encoded as 0.0, 1.0, ... S - 1.
/// The initial proposal is the initial law (unit weights).
class FiniteHmmPathModel final : public PathModel {
 public:
  explicit FiniteHmmPathModel(FiniteHmm hmm, HmmProposal proposal = HmmProposal::Uniform);

  std::size_t dim() const override { return 1; }
  void sample_initial(RngStream& rng, std::span<double> out) const override;
  double initial_weight(State) const override { return 1.0; }
  double adjustment(std::size_t n, State x) const override;
  void sample_proposal(std::size_t n, State x, RngStream& rng,
                       std::span<double> out) const override;
  double proposal_density(std::size_t n, State x, State x_next) const override;
  std::shared_ptr<const TransitionEstimator> estimator(std::size_t n) const override;
  double increment(std::size_t n, State x, State x_next) const override;

  const FiniteHmm& hmm() const noexcept { return hmm_; }

 private:
  std::size_t state_index(State x) const;
  double row_mass(std::size_t n, std::size_t i) const;

  FiniteHmm hmm_;
  HmmProposal proposal_;
};

/// Random finite model with transition entries in [0.1, 1] and increments in
/// [-1, 1]; the initial law is uniform.
FiniteHmm random_finite_hmm(std::size_t states, std::size_t steps, std::uint64_t seed);

/// OU diffusion dX = -(X - theta) dt + dW observed every delta as
/// y = c phi(x) + N(0, 1), with the transition density replaced by the
/// Durham-Gallant estimator. Particles move with the optimal proposal of the
/// exact OU chain.
class OuDurhamGallantModel final : public PathModel {
 public:
  OuDurhamGallantModel(double theta, DgConfig dg, double obs_coefficient,
                       std::vector<double> observations,
                       ScalarIncrement increment = state_sum_increment());

  std::size_t dim() const override { return 1; }
  void sample_initial(RngStream& rng, std::span<double> out) const override;
  double initial_weight(State) const override { return 1.0; }
  double adjustment(std::size_t n, State x) const override;
  void sample_proposal(std::size_t n, State x, RngStream& rng,
                       std::span<double> out) const override;
  double proposal_density(std::size_t n, State x, State x_next) const override;
  std::shared_ptr<const TransitionEstimator> estimator(std::size_t n) const override;
  double increment(std::size_t n, State x, State x_next) const override {
    return increment_(n, x[0], x_next[0]);
  }

  /// The linear-Gaussian model targeted by the algorithm: K Euler steps of
  /// the OU drift composed, same observation model.
  LgssSpec skew_model() const;

 private:
  double theta_;
  DgConfig dg_;
  LgssSpec exact_;
  SdeSpec sde_;
  std::vector<double> observations_;
  ScalarIncrement increment_;
};

/// Linear-Gaussian model whose emission density is replaced by an ABC kernel
/// estimate: z ~ N(c x' + d, r), estimate q(x, x') kappa(z - y). Bootstrap
/// proposal. The skew target is the same model with r + bandwidth^2.
class AbcLgssModel final : public PathModel {
 public:
  AbcLgssModel(LgssSpec spec, double bandwidth, std::vector<double> observations,
               ScalarIncrement increment = state_sum_increment());

  std::size_t dim() const override { return 1; }
  void sample_initial(RngStream& rng, std::span<double> out) const override;
  double initial_weight(State) const override { return 1.0; }
  void sample_proposal(std::size_t n, State x, RngStream& rng,
                       std::span<double> out) const override;
  double proposal_density(std::size_t n, State x, State x_next) const override;
  std::shared_ptr<const TransitionEstimator> estimator(std::size_t n) const override;
  double increment(std::size_t n, State x, State x_next) const override {
    return increment_(n, x[0], x_next[0]);
  }

  LgssSpec skew_model() const;

 private:
  LgssSpec spec_;
  double bandwidth_;
  std::vector<double> observations_;
  ScalarIncrement increment_;
};

/// Law of x_K after K Euler steps of length eps of the OU drift from x_0 = x:
/// mean theta + (1 - eps)^K (x - theta), variance eps sum_{j<K} (1 - eps)^{2j}.
GaussianMoments euler_ou_composition(double theta, double eps, std::size_t K, double x);

}  // namespace paris
