#include "paris/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "paris/error.hpp"
#include "paris/samplers.hpp"

namespace paris {

ScalarIncrement state_sum_increment() {
  return [](std::size_t n, double x, double x_next) { return n == 0 ? x + x_next : x_next; };
}

ScalarIncrement fixed_point_increment(std::size_t m, std::function<double(double)> f) {
  return [m, f = std::move(f)](std::size_t n, double x, double) { return n == m ? f(x) : 0.0; };
}

double clip_state(double x) { return std::clamp(x, -1e5, 1e5); }

GaussianMoments optimal_proposal_lgss(const LgssSpec& m, double x, double y_next) {
  const double precision = 1.0 / m.q + m.c * m.c / m.r;
  const double var = 1.0 / precision;
  return {var * ((m.a * x + m.b) / m.q + m.c * (y_next - m.d) / m.r), var};
}

double predictive_likelihood_lgss(const LgssSpec& m, double x, double y_next) {
  return normal_pdf(y_next, m.c * (m.a * x + m.b) + m.d, m.c * m.c * m.q + m.r);
}

GaussianMoments euler_ou_composition(double theta, double eps, std::size_t K, double x) {
  const double rho = 1.0 - eps;
  double decay = 1.0, var = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    var += eps * decay * decay;
    decay *= rho;
  }
  return {theta + (x - theta) * decay, var};
}

// --- LgssPathModel --------------------------------------------------------

namespace {

double lgss_emission(const LgssSpec& m, double x_next, double y) {
  return normal_pdf(y, m.c * clip_state(x_next) + m.d, m.r);
}

}  // namespace

LgssPathModel::LgssPathModel(LgssSpec spec, std::vector<double> observations,
                             LgssProposal proposal, ScalarIncrement increment)
    : spec_(spec),
      observations_(std::move(observations)),
      proposal_(proposal),
      increment_(std::move(increment)) {
  validate(spec_);
  if (!increment_) throw ConfigError("lgss model: increment function is required");
}

double LgssPathModel::observation(std::size_t n) const {
  if (n >= observations_.size())
    throw ConfigError("lgss model: no observation for step " + std::to_string(n));
  return observations_[n];
}

void LgssPathModel::sample_initial(RngStream& rng, std::span<double> out) const {
  out[0] = rng.normal(spec_.m0, std::sqrt(spec_.p0));
}

double LgssPathModel::adjustment(std::size_t n, State x) const {
  if (proposal_ == LgssProposal::Bootstrap) return 1.0;
  return predictive_likelihood_lgss(spec_, x[0], observation(n));
}

void LgssPathModel::sample_proposal(std::size_t n, State x, RngStream& rng,
                                    std::span<double> out) const {
  if (proposal_ == LgssProposal::Bootstrap) {
    out[0] = rng.normal(spec_.a * x[0] + spec_.b, std::sqrt(spec_.q));
    return;
  }
  const GaussianMoments p = optimal_proposal_lgss(spec_, x[0], observation(n));
  out[0] = rng.normal(p.mean, std::sqrt(p.variance));
}

double LgssPathModel::proposal_density(std::size_t n, State x, State x_next) const {
  if (proposal_ == LgssProposal::Bootstrap)
    return normal_pdf(x_next[0], spec_.a * x[0] + spec_.b, spec_.q);
  const GaussianMoments p = optimal_proposal_lgss(spec_, x[0], observation(n));
  return normal_pdf(x_next[0], p.mean, p.variance);
}

std::shared_ptr<const TransitionEstimator> LgssPathModel::estimator(std::size_t n) const {
  const double y = observation(n);
  const LgssSpec m = spec_;
  const double peak = 1.0 / std::sqrt(2.0 * std::numbers::pi * m.q);
  return exact_wrap(
      [m, y](State x, State x_next) {
        return normal_pdf(x_next[0], m.a * x[0] + m.b, m.q) * lgss_emission(m, x_next[0], y);
      },
      [m, y, peak](State x_next) { return peak * lgss_emission(m, x_next[0], y); });
}

// --- FiniteHmmPathModel ---------------------------------------------------

FiniteHmmPathModel::FiniteHmmPathModel(FiniteHmm hmm, HmmProposal proposal)
    : hmm_(std::move(hmm)), proposal_(proposal) {
  validate(hmm_);
}

std::size_t FiniteHmmPathModel::state_index(State x) const {
  const double v = x[0];
  const auto i = static_cast<std::size_t>(std::llround(v));
  if (v < 0.0 || i >= hmm_.states || static_cast<double>(i) != v)
    throw ConfigError("finite hmm: particle is not a valid state index");
  return i;
}

double FiniteHmmPathModel::row_mass(std::size_t n, std::size_t i) const {
  double mass = 0.0;
  for (std::size_t j = 0; j < hmm_.states; ++j) mass += hmm_.transition(n, i, j);
  return mass;
}

void FiniteHmmPathModel::sample_initial(RngStream& rng, std::span<double> out) const {
  out[0] = static_cast<double>(categorical(hmm_.init, rng));
}

double FiniteHmmPathModel::adjustment(std::size_t n, State x) const {
  if (proposal_ == HmmProposal::Uniform) return 1.0;
  return row_mass(n, state_index(x));
}

void FiniteHmmPathModel::sample_proposal(std::size_t n, State x, RngStream& rng,
                                         std::span<double> out) const {
  if (n >= hmm_.steps()) throw ConfigError("finite hmm: step beyond the model horizon");
  const std::size_t S = hmm_.states;
  if (proposal_ == HmmProposal::Uniform) {
    out[0] = static_cast<double>(std::min<std::size_t>(
        static_cast<std::size_t>(rng.uniform() * static_cast<double>(S)), S - 1));
    return;
  }
  const std::size_t i = state_index(x);
  const std::span<const double> row(hmm_.trans[n].data() + i * S, S);
  out[0] = static_cast<double>(categorical(row, rng));
}

double FiniteHmmPathModel::proposal_density(std::size_t n, State x, State x_next) const {
  const std::size_t S = hmm_.states;
  if (proposal_ == HmmProposal::Uniform) return 1.0 / static_cast<double>(S);
  const std::size_t i = state_index(x);
  return hmm_.transition(n, i, state_index(x_next)) / row_mass(n, i);
}

std::shared_ptr<const TransitionEstimator> FiniteHmmPathModel::estimator(std::size_t n) const {
  if (n >= hmm_.steps()) throw ConfigError("finite hmm: step beyond the model horizon");
  const std::size_t S = hmm_.states;
  std::vector<double> column_max(S, 0.0);
  for (std::size_t i = 0; i < S; ++i)
    for (std::size_t j = 0; j < S; ++j)
      column_max[j] = std::max(column_max[j], hmm_.transition(n, i, j));
  return exact_wrap(
      [this, n](State x, State x_next) {
        return hmm_.transition(n, state_index(x), state_index(x_next));
      },
      [this, column_max = std::move(column_max)](State x_next) {
        return column_max[state_index(x_next)];
      });
}

double FiniteHmmPathModel::increment(std::size_t n, State x, State x_next) const {
  return hmm_.increment(n, state_index(x), state_index(x_next));
}

FiniteHmm random_finite_hmm(std::size_t states, std::size_t steps, std::uint64_t seed) {
  if (states == 0) throw ConfigError("random hmm: need at least one state");
  FiniteHmm hmm;
  hmm.states = states;
  hmm.init.assign(states, 1.0 / static_cast<double>(states));
  RngStream rng(seed, 0, 0, Channel::kData);
  for (std::size_t n = 0; n < steps; ++n) {
    std::vector<double> trans(states * states), incr(states * states);
    for (double& v : trans) v = 0.1 + 0.9 * rng.uniform();
    for (double& v : incr) v = 2.0 * rng.uniform() - 1.0;
    hmm.trans.push_back(std::move(trans));
    hmm.increments.push_back(std::move(incr));
  }
  return hmm;
}

// --- OuDurhamGallantModel -------------------------------------------------

OuDurhamGallantModel::OuDurhamGallantModel(double theta, DgConfig dg, double obs_coefficient,
                                           std::vector<double> observations,
                                           ScalarIncrement increment)
    : theta_(theta),
      dg_(dg),
      exact_(ou_observation_model(theta, dg.delta, 1.0 - obs_coefficient)),
      sde_{[theta](double x) { return -(x - theta); }, [](double) { return 1.0; }},
      observations_(std::move(observations)),
      increment_(std::move(increment)) {
  validate(dg_);
}

void OuDurhamGallantModel::sample_initial(RngStream& rng, std::span<double> out) const {
  out[0] = rng.normal();
}

double OuDurhamGallantModel::adjustment(std::size_t n, State x) const {
  return predictive_likelihood_lgss(exact_, x[0], observations_.at(n));
}

void OuDurhamGallantModel::sample_proposal(std::size_t n, State x, RngStream& rng,
                                           std::span<double> out) const {
  const GaussianMoments p = optimal_proposal_lgss(exact_, x[0], observations_.at(n));
  out[0] = rng.normal(p.mean, std::sqrt(p.variance));
}

double OuDurhamGallantModel::proposal_density(std::size_t n, State x, State x_next) const {
  const GaussianMoments p = optimal_proposal_lgss(exact_, x[0], observations_.at(n));
  return normal_pdf(x_next[0], p.mean, p.variance);
}

std::shared_ptr<const TransitionEstimator> OuDurhamGallantModel::estimator(std::size_t n) const {
  if (n >= observations_.size())
    throw ConfigError("ou model: no observation for step " + std::to_string(n));
  const double y = observations_[n];
  const LgssSpec m = exact_;
  return std::make_shared<DurhamGallantEstimator>(
      sde_, dg_, [m, y](double, double x_next) { return lgss_emission(m, x_next, y); });
}

LgssSpec OuDurhamGallantModel::skew_model() const {
  const std::size_t K = dg_.substeps();
  LgssSpec skew = exact_;
  skew.a = euler_ou_composition(0.0, dg_.eps, K, 1.0).mean;
  const GaussianMoments origin = euler_ou_composition(theta_, dg_.eps, K, 0.0);
  skew.b = origin.mean;
  skew.q = origin.variance;
  return skew;
}

// --- AbcLgssModel ---------------------------------------------------------

AbcLgssModel::AbcLgssModel(LgssSpec spec, double bandwidth, std::vector<double> observations,
                           ScalarIncrement increment)
    : spec_(spec),
      bandwidth_(bandwidth),
      observations_(std::move(observations)),
      increment_(std::move(increment)) {
  validate(spec_);
  if (!(bandwidth_ > 0.0)) throw ConfigError("abc model: bandwidth must be positive");
}

void AbcLgssModel::sample_initial(RngStream& rng, std::span<double> out) const {
  out[0] = rng.normal(spec_.m0, std::sqrt(spec_.p0));
}

void AbcLgssModel::sample_proposal(std::size_t, State x, RngStream& rng,
                                   std::span<double> out) const {
  out[0] = rng.normal(spec_.a * x[0] + spec_.b, std::sqrt(spec_.q));
}

double AbcLgssModel::proposal_density(std::size_t, State x, State x_next) const {
  return normal_pdf(x_next[0], spec_.a * x[0] + spec_.b, spec_.q);
}

std::shared_ptr<const TransitionEstimator> AbcLgssModel::estimator(std::size_t n) const {
  if (n >= observations_.size())
    throw ConfigError("abc model: no observation for step " + std::to_string(n));
  const LgssSpec m = spec_;
  AbcConfig cfg;
  cfg.bandwidth = bandwidth_;
  cfg.emission_sampler = [m](State x_next, RngStream& rng, std::span<double> z) {
    z[0] = rng.normal(m.c * x_next[0] + m.d, std::sqrt(m.r));
  };
  const double peak = 1.0 / std::sqrt(2.0 * std::numbers::pi * m.q);
  return abc_estimator(
      cfg, [m](State x, State x_next) { return normal_pdf(x_next[0], m.a * x[0] + m.b, m.q); },
      {observations_[n]}, [peak](State) { return peak; });
}

LgssSpec AbcLgssModel::skew_model() const {
  LgssSpec skew = spec_;
  skew.r += bandwidth_ * bandwidth_;
  return skew;
}

}  // namespace paris
