#include <doctest.h>

#include <cmath>
#include <vector>

#include "paris/error.hpp"
#include "paris/models.hpp"
#include "paris/oracles.hpp"
#include "paris/rng.hpp"

using namespace paris;

namespace {

LgssSpec random_spec(RngStream& rng) {
  auto in = [&](double lo, double hi) { return lo + (hi - lo) * rng.uniform(); };
  return LgssSpec{in(-1.1, 1.1), in(-1, 1), in(0.1, 2), in(-2, 2), in(-1, 1), in(0.1, 2), in(-1, 1), in(0.1, 2)};
}

std::vector<double> random_obs(std::size_t n, RngStream& rng) {
  std::vector<double> y(n);
  for (auto& v : y) v = rng.normal(0.0, 2.0);
  return y;
}

}  // namespace

TEST_CASE("OU exact transition") {
  const GaussianMoments fixed = ou_exact_transition(5.0, 0.3, 5.0);
  CHECK(fixed.mean == doctest::Approx(5.0));
  const GaussianMoments far = ou_exact_transition(5.0, 50.0, 9.0);
  CHECK(std::abs(far.mean - 5.0) < 1e-10);
  CHECK(std::abs(far.variance - 0.5) < 1e-10);
  const GaussianMoments one = ou_exact_transition(5.0, 1.0, 6.0);
  CHECK(one.mean == doctest::Approx(5.0 + std::exp(-1.0)));
  CHECK(one.variance == doctest::Approx((1.0 - std::exp(-2.0)) / 2.0));
  CHECK(one.variance == doctest::Approx(0.4323).epsilon(1e-4));
  CHECK_THROWS_AS(ou_exact_transition(5.0, 0.0, 1.0), ConfigError);
}

TEST_CASE("OU observation model parameters") {
  const LgssSpec m = ou_observation_model(5.0, 1.0, 0.2);
  CHECK(m.a == doctest::Approx(std::exp(-1.0)));
  CHECK(m.b == doctest::Approx(5.0 * (1.0 - std::exp(-1.0))));
  CHECK(m.q == doctest::Approx((1.0 - std::exp(-2.0)) / 2.0));
  CHECK(m.c == doctest::Approx(0.8));
  CHECK(m.d == 0.0);
  CHECK(m.r == 1.0);
  CHECK(m.m0 == 0.0);
  CHECK(m.p0 == 1.0);
}

TEST_CASE("Kalman smoother limits") {
  SUBCASE("uninformative data") {
    const LgssSpec m{1.0, 0.0, 0.5, 1.0, 0.0, 1e12, 0.7, 1.0};
    const auto res = kalman_smooth_additive(m, std::vector<double>{3.0, -2.0, 10.0, 4.0});
    REQUIRE(res.means.size() == 5);
    for (double v : res.means) CHECK(std::abs(v - 0.7) < 1e-6);
    CHECK(res.sum == doctest::Approx(3.5).epsilon(1e-6));
  }
  SUBCASE("single conjugate observation") {
    // x_1 ~ N(0, 1) a priori, y_1 = x_1 + N(0, 1), y_1 = 0
    const LgssSpec m{0.0, 0.0, 1.0, 1.0, 0.0, 1.0, 0.0, 1.0};
    const auto res = kalman_smooth_additive(m, std::vector<double>{0.0});
    CHECK(res.means[1] == doctest::Approx(0.0));
    CHECK(res.variances[1] == doctest::Approx(0.5));
    CHECK(res.variances[0] == doctest::Approx(1.0));
  }
  CHECK_THROWS_AS(kalman_smooth_additive(LgssSpec{}, std::vector<double>{}), ConfigError);
  CHECK_THROWS_AS(validate(LgssSpec{1, 0, 0.0, 1, 0, 1, 0, 1}), ConfigError);
}

TEST_CASE("Kalman smoother against joint Gaussian conditioning") {
  RngStream rng(1, 0, 0);
  SUBCASE("n = 8") {
    const LgssSpec m = random_spec(rng);
    const auto y = random_obs(8, rng);
    const auto kalman = kalman_smooth_additive(m, y);
    const auto joint = joint_gaussian_condition(m, y);
    REQUIRE(joint.size() == 9);
    for (std::size_t k = 0; k < 9; ++k) CHECK(std::abs(kalman.means[k] - joint[k]) < 1e-8);
  }
  SUBCASE("twenty random instances") {
    for (int inst = 0; inst < 20; ++inst) {
      const LgssSpec m = random_spec(rng);
      const auto y = random_obs(1 + inst % 20, rng);
      const auto kalman = kalman_smooth_additive(m, y);
      const auto joint = joint_gaussian_condition(m, y);
      double sum = 0.0;
      for (std::size_t k = 0; k < joint.size(); ++k) {
        REQUIRE(std::abs(kalman.means[k] - joint[k]) < 1e-8);
        sum += joint[k];
      }
      CHECK(kalman.sum == doctest::Approx(sum).epsilon(1e-10));
    }
  }
}

TEST_CASE("joint Gaussian conditioning special cases") {
  SUBCASE("frozen chain averages repeated measurements") {
    const LgssSpec m{1.0, 0.0, 1e-12, 1.0, 0.0, 0.5, 0.2, 2.0};
    const std::vector<double> y = {1.0, 1.4, 0.7, 1.1};
    const auto means = joint_gaussian_condition(m, y);
    double precision = 1.0 / m.p0, weighted = m.m0 / m.p0;
    for (double v : y) {
      precision += 1.0 / m.r;
      weighted += v / m.r;
    }
    for (double v : means) CHECK(std::abs(v - weighted / precision) < 1e-4);
  }
  SUBCASE("swapping identical observations") {
    const LgssSpec m = ou_observation_model(5.0, 1.0, 0.1);
    const auto a = joint_gaussian_condition(m, std::vector<double>{4.0, 5.5, 4.0});
    const auto b = joint_gaussian_condition(m, std::vector<double>{4.0, 5.5, 4.0});
    CHECK(a == b);
  }
  CHECK_THROWS_AS(joint_gaussian_condition(LgssSpec{}, std::vector<double>(51, 0.0)), ConfigError);
}

namespace {

FiniteHmm hand_hmm() {
  FiniteHmm h;
  h.states = 2;
  h.init = {0.3, 0.7};
  h.trans = {{0.9, 0.2, 0.4, 0.6}, {0.5, 0.5, 0.1, 1.2}, {0.3, 0.8, 0.7, 0.2}};
  h.increments = {{1.0, -1.0, 0.5, 2.0}, {0.0, 3.0, -2.0, 1.0}, {1.5, 0.5, -0.5, 0.25}};
  return h;
}

}  // namespace

TEST_CASE("exact additive smoothing") {
  SUBCASE("zero increments") {
    FiniteHmm h = hand_hmm();
    for (auto& inc : h.increments) std::fill(inc.begin(), inc.end(), 0.0);
    CHECK(exact_additive_smoothing(h, 3) == 0.0);
  }
  SUBCASE("one state") {
    FiniteHmm h;
    h.states = 1;
    h.init = {1.0};
    h.trans = {{0.5}, {2.0}, {0.1}};
    h.increments = {{1.5}, {-0.25}, {4.0}};
    CHECK(exact_additive_smoothing(h, 3) == doctest::Approx(5.25));
    CHECK(exact_additive_smoothing(h, 2) == doctest::Approx(1.25));
  }
  SUBCASE("two states, hand enumeration over 16 paths") {
    const FiniteHmm h = hand_hmm();
    double mass = 0.0, acc = 0.0;
    for (int p = 0; p < 16; ++p) {
      const int x[4] = {p & 1, (p >> 1) & 1, (p >> 2) & 1, (p >> 3) & 1};
      double w = h.init[x[0]], add = 0.0;
      for (int n = 0; n < 3; ++n) {
        w *= h.transition(n, x[n], x[n + 1]);
        add += h.increment(n, x[n], x[n + 1]);
      }
      mass += w;
      acc += w * add;
    }
    CHECK(exact_additive_smoothing(h, 3) == doctest::Approx(acc / mass).epsilon(1e-12));
    CHECK(enumerate_additive_smoothing(h, 3) == doctest::Approx(acc / mass).epsilon(1e-12));
  }
  SUBCASE("random instances against enumeration") {
    std::uint64_t seed = 0;
    for (std::size_t S = 1; S <= 3; ++S) {
      for (std::size_t n = 1; n <= 6; ++n) {
        const FiniteHmm h = random_finite_hmm(S, n, ++seed);
        CHECK(std::abs(exact_additive_smoothing(h, n) - enumerate_additive_smoothing(h, n)) < 1e-10);
      }
    }
  }
}

TEST_CASE("finite HMM validation") {
  FiniteHmm h = hand_hmm();
  CHECK_NOTHROW(validate(h));
  h.init = {0.5, 0.6};
  CHECK_THROWS_AS(validate(h), ConfigError);
  h = hand_hmm();
  h.trans[1] = {0.0, 0.0, 0.3, 0.3};
  CHECK_THROWS_AS(validate(h), ConfigError);
  h = hand_hmm();
  h.increments.pop_back();
  CHECK_THROWS_AS(validate(h), ConfigError);
  CHECK_THROWS_AS(exact_additive_smoothing(hand_hmm(), 4), ConfigError);
  CHECK_THROWS_AS(exact_additive_smoothing(hand_hmm(), 0), ConfigError);
}

TEST_CASE("optimal proposal and predictive likelihood") {
  LgssSpec m{0.5, 0.2, 0.8, 0.0, 0.0, 1.0, 0.0, 1.0};
  GaussianMoments p = optimal_proposal_lgss(m, 1.0, 3.0);
  CHECK(p.mean == doctest::Approx(0.7));
  CHECK(p.variance == doctest::Approx(0.8));

  m = LgssSpec{1.0, 0.0, 1.0, 1.0, 0.0, 1e-10, 0.0, 1.0};
  p = optimal_proposal_lgss(m, 0.0, 2.5);
  CHECK(std::abs(p.mean - 2.5) < 1e-6);

  m = LgssSpec{1.0, 0.0, 1.0, 1.0, 0.0, 1.0, 0.0, 1.0};
  p = optimal_proposal_lgss(m, 0.0, 2.0);
  CHECK(p.mean == doctest::Approx(1.0));
  CHECK(p.variance == doctest::Approx(0.5));

  // N(y; c (a x + b) + d, c^2 q + r)
  m = LgssSpec{0.5, 0.2, 0.8, 1.5, -0.3, 0.6, 0.0, 1.0};
  CHECK(predictive_likelihood_lgss(m, 1.0, 0.9) ==
        doctest::Approx(std::exp(-0.5 * std::pow(0.9 - (1.5 * 0.7 - 0.3), 2) / (2.25 * 0.8 + 0.6)) /
                        std::sqrt(2 * M_PI * (2.25 * 0.8 + 0.6))));
}

TEST_CASE("composed Euler OU steps") {
  const GaussianMoments one = euler_ou_composition(5.0, 0.25, 1, 6.0);
  CHECK(one.mean == doctest::Approx(6.0 - 0.25));
  CHECK(one.variance == doctest::Approx(0.25));
  const GaussianMoments four = euler_ou_composition(5.0, 0.25, 4, 6.0);
  CHECK(four.mean == doctest::Approx(5.0 + std::pow(0.75, 4)));
  CHECK(four.variance == doctest::Approx(0.25 * (1 - std::pow(0.75, 8)) / (1 - 0.5625)));
  // fine steps approach the exact transition
  const GaussianMoments fine = euler_ou_composition(5.0, 1e-4, 10000, 6.0);
  const GaussianMoments exact = ou_exact_transition(5.0, 1.0, 6.0);
  CHECK(fine.mean == doctest::Approx(exact.mean).epsilon(1e-3));
  CHECK(fine.variance == doctest::Approx(exact.variance).epsilon(1e-3));
}
