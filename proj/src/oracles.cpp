#include "paris/oracles.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "paris/error.hpp"

namespace paris {

GaussianMoments ou_exact_transition(double theta, double delta, double x) {
  if (!(delta > 0.0)) throw ConfigError("ou transition: delta must be positive");
  const double decay = std::exp(-delta);
  return {theta + (x - theta) * decay, -0.5 * std::expm1(-2.0 * delta)};
}

void validate(const LgssSpec& m) {
  if (!(m.q > 0.0) || !(m.r > 0.0) || !(m.p0 > 0.0))
    throw ConfigError("lgss: q, r and p0 must be positive");
}

LgssSpec ou_observation_model(double theta, double delta, double eps) {
  const GaussianMoments origin = ou_exact_transition(theta, delta, 0.0);
  LgssSpec m;
  m.a = std::exp(-delta);
  m.b = origin.mean;
  m.q = origin.variance;
  m.c = 1.0 - eps;
  m.d = 0.0;
  m.r = 1.0;
  m.m0 = 0.0;
  m.p0 = 1.0;
  return m;
}

SmoothingResult kalman_smooth_additive(const LgssSpec& model, std::span<const double> y) {
  validate(model);
  if (y.empty()) throw ConfigError("kalman: observations must be nonempty");
  const std::size_t n = y.size();

  std::vector<double> mf(n + 1), pf(n + 1), mp(n + 1), pp(n + 1);
  mf[0] = model.m0;
  pf[0] = model.p0;
  for (std::size_t k = 1; k <= n; ++k) {
    mp[k] = model.a * mf[k - 1] + model.b;
    pp[k] = model.a * model.a * pf[k - 1] + model.q;
    const double s = model.c * model.c * pp[k] + model.r;
    const double gain = pp[k] * model.c / s;
    mf[k] = mp[k] + gain * (y[k - 1] - model.c * mp[k] - model.d);
    pf[k] = (1.0 - gain * model.c) * pp[k];
  }

  SmoothingResult out;
  out.means = mf;
  out.variances = pf;
  for (std::size_t k = n; k-- > 0;) {
    const double g = pf[k] * model.a / pp[k + 1];
    out.means[k] = mf[k] + g * (out.means[k + 1] - mp[k + 1]);
    out.variances[k] = pf[k] + g * g * (out.variances[k + 1] - pp[k + 1]);
  }
  for (double m : out.means) out.sum += m;
  return out;
}

std::vector<double> joint_gaussian_condition(const LgssSpec& model, std::span<const double> y) {
  validate(model);
  const std::size_t n = y.size();
  if (n == 0 || n > 50) throw ConfigError("joint gaussian oracle: need 1 <= n <= 50");
  const auto nx = static_cast<Eigen::Index>(n + 1);
  const auto ny = static_cast<Eigen::Index>(n);

  Eigen::VectorXd mean_x(nx), var_x(nx);
  mean_x(0) = model.m0;
  var_x(0) = model.p0;
  for (Eigen::Index k = 1; k < nx; ++k) {
    mean_x(k) = model.a * mean_x(k - 1) + model.b;
    var_x(k) = model.a * model.a * var_x(k - 1) + model.q;
  }
  // Cov(x_j, x_k) = a^{k-j} Var(x_j) for j <= k
  Eigen::MatrixXd cov_xx(nx, nx);
  for (Eigen::Index j = 0; j < nx; ++j) {
    for (Eigen::Index k = j; k < nx; ++k) {
      const double v = std::pow(model.a, static_cast<double>(k - j)) * var_x(j);
      cov_xx(j, k) = v;
      cov_xx(k, j) = v;
    }
  }
  // y_k observes x_k for k = 1..n
  const Eigen::MatrixXd cov_xy = model.c * cov_xx.rightCols(ny);
  Eigen::MatrixXd cov_yy = model.c * model.c * cov_xx.bottomRightCorner(ny, ny);
  cov_yy.diagonal().array() += model.r;

  Eigen::VectorXd resid(ny);
  for (Eigen::Index k = 0; k < ny; ++k)
    resid(k) = y[static_cast<std::size_t>(k)] - (model.c * mean_x(k + 1) + model.d);

  Eigen::LLT<Eigen::MatrixXd> chol(cov_yy);
  if (chol.info() != Eigen::Success)
    throw Error("joint gaussian oracle: observation covariance is not positive definite");
  const Eigen::VectorXd post = mean_x + cov_xy * chol.solve(resid);
  return {post.data(), post.data() + post.size()};
}

void validate(const FiniteHmm& hmm) {
  const std::size_t S = hmm.states;
  if (S == 0) throw ConfigError("finite hmm: need at least one state");
  if (hmm.init.size() != S) throw ConfigError("finite hmm: init has the wrong length");
  double total = 0.0;
  for (double p : hmm.init) {
    if (!(p >= 0.0)) throw ConfigError("finite hmm: init has a negative entry");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) throw ConfigError("finite hmm: init must sum to 1");
  if (hmm.increments.size() != hmm.trans.size())
    throw ConfigError("finite hmm: transition and increment sequences differ in length");
  for (std::size_t n = 0; n < hmm.trans.size(); ++n) {
    if (hmm.trans[n].size() != S * S || hmm.increments[n].size() != S * S)
      throw ConfigError("finite hmm: matrix at step " + std::to_string(n) + " is not S x S");
    for (std::size_t i = 0; i < S; ++i) {
      bool positive = false;
      for (std::size_t j = 0; j < S; ++j) {
        const double v = hmm.transition(n, i, j);
        if (!(v >= 0.0) || !std::isfinite(v))
          throw ConfigError("finite hmm: transition entries must be finite and nonnegative");
        positive = positive || v > 0.0;
      }
      if (!positive)
        throw ConfigError("finite hmm: row " + std::to_string(i) + " at step " +
                          std::to_string(n) + " has no positive entry");
    }
  }
}

double exact_additive_smoothing(const FiniteHmm& hmm, std::size_t n) {
  validate(hmm);
  if (n == 0) throw ConfigError("exact smoothing: n must be at least 1");
  if (n > hmm.steps()) throw ConfigError("exact smoothing: model has fewer than n steps");
  const std::size_t S = hmm.states;

  std::vector<double> filter = hmm.init;  // phi_m
  std::vector<double> t(S, 0.0);          // T_m h_m
  std::vector<double> next_filter(S), next_t(S);
  for (std::size_t m = 0; m < n; ++m) {
    double normaliser = 0.0;
    for (std::size_t j = 0; j < S; ++j) {
      double mass = 0.0, acc = 0.0;
      for (std::size_t i = 0; i < S; ++i) {
        const double w = filter[i] * hmm.transition(m, i, j);
        mass += w;
        acc += w * (t[i] + hmm.increment(m, i, j));
      }
      next_filter[j] = mass;
      next_t[j] = mass > 0.0 ? acc / mass : 0.0;
      normaliser += mass;
    }
    if (!(normaliser > 0.0))
      throw Error("exact smoothing: filter normaliser vanishes at step " + std::to_string(m));
    for (std::size_t j = 0; j < S; ++j) next_filter[j] /= normaliser;
    filter.swap(next_filter);
    t.swap(next_t);
  }
  double value = 0.0;
  for (std::size_t j = 0; j < S; ++j) value += filter[j] * t[j];
  return value;
}

double enumerate_additive_smoothing(const FiniteHmm& hmm, std::size_t n) {
  validate(hmm);
  if (n == 0 || n > hmm.steps()) throw ConfigError("enumeration: need 1 <= n <= steps");
  const std::size_t S = hmm.states;
  double paths = 1.0;
  for (std::size_t k = 0; k <= n; ++k) paths *= static_cast<double>(S);
  if (paths > 1e7) throw ConfigError("enumeration: too many paths");

  std::vector<std::size_t> path(n + 1, 0);
  double mass = 0.0, weighted = 0.0;
  for (;;) {
    double w = hmm.init[path[0]];
    double h = 0.0;
    for (std::size_t m = 0; m < n && w > 0.0; ++m) {
      w *= hmm.transition(m, path[m], path[m + 1]);
      h += hmm.increment(m, path[m], path[m + 1]);
    }
    mass += w;
    weighted += w * h;
    // odometer increment over {0..S-1}^(n+1)
    std::size_t k = 0;
    while (k <= n && ++path[k] == S) path[k++] = 0;
    if (k > n) break;
  }
  if (!(mass > 0.0)) throw Error("enumeration: path measure has no mass");
  return weighted / mass;
}

}  // namespace paris
