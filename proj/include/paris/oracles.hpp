#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace paris {

struct GaussianMoments {
  double mean = 0.0;
  double variance = 0.0;
};

/// Exact transition over `delta` of dX = -(X - theta) dt + dW started at x.
GaussianMoments ou_exact_transition(double theta, double delta, double x);

/// Scalar linear-Gaussian state-space model
///   x_{k+1} = a x_k + b + N(0, q),  y_k = c x_k + d + N(0, r),  x_0 ~ N(m0, p0),
/// with observations y_1, ..., y_n.
struct LgssSpec {
  double a = 1.0, b = 0.0, q = 1.0;
  double c = 1.0, d = 0.0, r = 1.0;
  double m0 = 0.0, p0 = 1.0;
};

void validate(const LgssSpec& model);

/// OU latent chain observed as y = (1 - eps) x + N(0, 1), x_0 ~ N(0, 1).
LgssSpec ou_observation_model(double theta, double delta, double eps);

struct SmoothingResult {
  std::vector<double> means;      ///< E[x_k | y_{1:n}], k = 0..n
  std::vector<double> variances;  ///< Var[x_k | y_{1:n}]
  double sum = 0.0;               ///< E[sum_k x_k | y_{1:n}]
};

/// Kalman filter followed by a Rauch-Tung-Striebel backward pass.
SmoothingResult kalman_smooth_additive(const LgssSpec& model, std::span<const double> observations);

/// Smoothed means by direct conditioning of the joint Gaussian of
/// (x_{0:n}, y_{1:n}). Dense, so limited to n <= 50.
std::vector<double> joint_gaussian_condition(const LgssSpec& model,
                                             std::span<const double> observations);

/// Finite-state path model: l_n(i, j) = trans[n][i * S + j] (unnormalised),
/// h~_n(i, j) = increments[n][i * S + j].
struct FiniteHmm {
  std::size_t states = 1;
  std::vector<double> init;
  std::vector<std::vector<double>> trans;
  std::vector<std::vector<double>> increments;

  double transition(std::size_t n, std::size_t i, std::size_t j) const {
    return trans[n][i * states + j];
  }
  double increment(std::size_t n, std::size_t i, std::size_t j) const {
    return increments[n][i * states + j];
  }
  std::size_t steps() const noexcept { return trans.size(); }
};

void validate(const FiniteHmm& hmm);

/// Exact E[sum_{m<n} h~_m(x_m, x_{m+1})] under the path measure at time n,
/// via the forward filter and the forward-smoothing recursion for T_n h_n.
double exact_additive_smoothing(const FiniteHmm& hmm, std::size_t n);

/// Same quantity by brute-force summation over all S^(n+1) paths. Independent
/// of the recursion above; only practical for tiny models.
double enumerate_additive_smoothing(const FiniteHmm& hmm, std::size_t n);

}  // namespace paris
