#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "bajd/ergodicity.hpp"
#include "bajd/simulate.hpp"
#include "helpers/oracles.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const bajd::BajdParams kPositive{1.0, 1.0, 1.0, 1.0, 1.0};
const bajd::BajdParams kNegative{1.0, 1.0, 2.0, 1.0, 2.0};
const bajd::BajdParams kZero{1.0, 1.0, std::sqrt(2.0), 1.0, 1.0};
const std::vector<bajd::BajdParams> kRegimes{kPositive, kNegative, kZero};

bajd::TwiceDifferentiable exponential_function(double gamma) {
  return {[gamma](double x) { return std::exp(gamma * x); },
          [gamma](double x) { return gamma * std::exp(gamma * x); },
          [gamma](double x) { return gamma * gamma * std::exp(gamma * x); }};
}

}  // namespace

TEST_CASE("generator_apply: constants are in the kernel") {
  const bajd::TwiceDifferentiable one{[](double) { return 1.0; }, [](double) { return 0.0; },
                                      [](double) { return 0.0; }};
  for (double x : {0.0, 1.0, 7.0}) {
    CHECK_THAT(bajd::generator_apply(kPositive, one, x), WithinAbs(0.0, 1e-12));
  }
}

TEST_CASE("generator_apply: identity map") {
  const bajd::TwiceDifferentiable identity{[](double x) { return x; },
                                           [](double) { return 1.0; },
                                           [](double) { return 0.0; }};
  for (const auto& p : kRegimes) {
    for (double x : {0.0, 0.7, 4.0}) {
      const double expected = p.a * p.theta - p.a * x + p.c / p.d;
      CHECK_THAT(bajd::generator_apply(p, identity, x), WithinRel(expected, 1e-10));
    }
  }
}

TEST_CASE("generator_apply: exponentials match the closed form") {
  for (const auto& p : kRegimes) {
    const double gamma = 0.4 * p.d;
    const auto g = exponential_function(gamma);
    for (double x : {0.0, 1.0, 3.5}) {
      CHECK_THAT(bajd::generator_apply(p, g, x),
                 WithinRel(bajd::generator_on_exponential(p, gamma, x), 1e-9));
    }
  }
}

TEST_CASE("generator_apply: divergent jump integral is signaled") {
  CHECK_THROWS_AS(bajd::generator_apply(kPositive, exponential_function(kPositive.d), 1.0),
                  bajd::NonConvergenceError);
  CHECK_THROWS_AS(
      bajd::generator_apply(kPositive, exponential_function(1.3 * kPositive.d), 1.0),
      bajd::NonConvergenceError);
}

TEST_CASE("build_certificate: drift inequality holds on [0, 10 x_star]") {
  for (const auto& p : kRegimes) {
    const double gamma = bajd::default_drift_exponent(p);
    const auto cert = bajd::build_certificate(p, gamma);
    CHECK(cert.x_star > 0.0);
    CHECK(cert.k == 1.0);
    CHECK(std::isfinite(cert.M));
    for (int i = 0; i <= 200; ++i) {
      const double x = 10.0 * cert.x_star * i / 200.0;
      const double drift = bajd::generator_on_exponential(p, cert.gamma, x);
      const double bound = -std::exp(cert.gamma * x) + cert.M;
      CHECK(drift <= bound * (1.0 + 1e-12) + 1e-12);
    }
  }
}

TEST_CASE("build_certificate: infeasible exponents are rejected") {
  CHECK_THROWS_AS(bajd::build_certificate(kPositive, kPositive.d), std::domain_error);
  CHECK_THROWS_AS(bajd::build_certificate(kPositive, 0.0), std::domain_error);
  CHECK_THROWS_AS(
      bajd::build_certificate(kPositive,
                              2.0 * kPositive.a / (kPositive.sigma * kPositive.sigma)),
      std::domain_error);
}

TEST_CASE("build_certificate: small-exponent limit of the drift constant") {
  // As gamma -> 0, gamma x_star -> 1/a, so M -> e^{1/a}.
  for (const auto& p : kRegimes) {
    const double expected = std::exp(1.0 / p.a);
    double prev_gap = std::numeric_limits<double>::infinity();
    for (double gamma : {1e-2, 1e-4, 1e-6}) {
      const auto cert = bajd::build_certificate(p, gamma);
      const double gap = std::abs(cert.M - expected);
      CHECK(gap < prev_gap);
      prev_gap = gap;
    }
    CHECK(prev_gap < 1e-4 * expected);
  }
}

TEST_CASE("semigroup_drift_check: bound holds on the (t, x) grid") {
  for (const auto& p : kRegimes) {
    const auto cert = bajd::build_certificate(p, bajd::default_drift_exponent(p));
    for (double t : {0.1, 1.0, 10.0}) {
      for (double x : {0.0, 1.0, 5.0, 20.0}) {
        const auto result = bajd::semigroup_drift_check(p, cert, t, x);
        CHECK(result.pass);
        CHECK(result.lhs > 0.0);
      }
    }
    // t -> 0: lhs -> V(x) while rhs -> V(x) + M
    const auto near_zero = bajd::semigroup_drift_check(p, cert, 1e-8, 3.0);
    CHECK_THAT(near_zero.lhs, WithinRel(std::exp(cert.gamma * 3.0), 1e-6));
    CHECK(near_zero.pass);
  }
}

TEST_CASE("semigroup_drift_check: vanishing jump intensity (CIR case)") {
  bajd::BajdParams p = kPositive;
  p.c = 1e-12;
  const auto cert = bajd::build_certificate(p, bajd::default_drift_exponent(p));
  for (double t : {0.1, 1.0, 10.0}) {
    for (double x : {0.0, 1.0, 5.0, 20.0}) {
      CHECK(bajd::semigroup_drift_check(p, cert, t, x).pass);
    }
  }
}

TEST_CASE("semigroup_drift_check: exponent outside the transform domain") {
  const bajd::DriftCertificate bad{0.99 * kNegative.d, 1.0, 10.0, 1.0};
  CHECK_THROWS_AS(bajd::semigroup_drift_check(kNegative, bad, 2.0, 1.0), std::domain_error);
}

TEST_CASE("tv_distance: vanishes for large times and decreases in t") {
  for (const auto& p : kRegimes) {
    const double far = bajd::tv_distance(p, 25.0, 2.0);
    CHECK(far < 1e-6);
    double prev = 1.0;
    for (double t : {0.5, 1.0, 2.0, 4.0}) {
      const double tv = bajd::tv_distance(p, t, 0.0);
      CHECK(tv < prev + 1e-6);
      CHECK(tv > 0.0);
      CHECK(tv <= 1.0);
      prev = tv;
    }
  }
}

TEST_CASE("tv_distance: small when averaged against the invariant law") {
  // quantile-style spots of pi stand in for the integral against l(x)
  const double t = 6.0;
  double acc = 0.0;
  for (double x : {0.5, 1.5, 3.0}) acc += bajd::tv_distance(kPositive, t, x);
  CHECK(acc / 3.0 < 5e-3);
}

TEST_CASE("fit_decay: geometric decay with tight linear fit") {
  const std::vector<double> t_grid{0.5, 1.0, 2.0, 4.0, 6.0, 8.0};
  const auto fit = bajd::fit_decay(kPositive, 2.0, t_grid);
  CHECK(fit.beta_hat < 1.0);
  CHECK(fit.beta_hat > 0.0);
  CHECK(fit.r2 > 0.98);
  CHECK(fit.excluded == 0);
  REQUIRE(fit.tv_values.size() == t_grid.size());
  // the fitted curve reproduces the data within the fit's own r^2 slack
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    CHECK(fit.tv_values[i] > 0.0);
  }
}

TEST_CASE("fit_decay: transition laws from distinct starts are ordered") {
  // starting far from the invariant mean keeps the law farther away in TV,
  // and the fitted prefactor reflects that
  for (double t : {0.5, 2.0, 6.0}) {
    CHECK(bajd::tv_distance(kPositive, t, 5.0) > bajd::tv_distance(kPositive, t, 0.0));
  }
  const std::vector<double> t_grid{0.5, 1.0, 2.0, 4.0, 6.0, 8.0};
  const auto fit_near = bajd::fit_decay(kPositive, 0.0, t_grid);
  const auto fit_far = bajd::fit_decay(kPositive, 5.0, t_grid);
  CHECK(fit_far.c_hat > fit_near.c_hat);
}

TEST_CASE("occupation averages approach the invariant integral as the horizon grows") {
  // ergodic consequence of Harris recurrence: the time fraction spent in
  // [0, K] approaches pi([0, K]) as the horizon grows
  const double cap = 2.0;
  const bajd::InvariantDensity inv(kPositive);
  const bajd::QuadratureControl ctl{1e-10, 1e-13, 4000};
  const double target = bajd::integrate([&](double y) { return inv(y); }, 1e-12, cap, ctl);
  std::mt19937_64 rng(140914);
  double prev_gap = std::numeric_limits<double>::infinity();
  for (double horizon : {100.0, 1000.0, 10000.0}) {
    const auto path = bajd::euler_path(kPositive, {0.01, horizon, 1.0, 0}, rng);
    const double fraction =
        bajd::occupation_average(path, [&](double x) { return x <= cap ? 1.0 : 0.0; });
    const double gap = std::abs(fraction - target);
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }
  CHECK(prev_gap < 0.02);
}

TEST_CASE("fit_decay: input validation") {
  CHECK_THROWS_AS(bajd::fit_decay_from_values({1.0, 1.0, 2.0, 3.0}, {0.5, 0.4, 0.3, 0.2}),
                  std::invalid_argument);
  CHECK_THROWS_AS(bajd::fit_decay_from_values({1.0, 2.0, 3.0}, {0.5, 0.4, 0.3}),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      bajd::fit_decay_from_values({1.0, 2.0, 3.0, 4.0}, {0.1, 0.2, 0.4, 0.8}),
      bajd::NonConvergenceError);  // growing values: fitted base above one
  // nonpositive TV values are excluded (and leave too few points here)
  CHECK_THROWS_AS(
      bajd::fit_decay_from_values({1.0, 2.0, 3.0, 4.0}, {0.5, 0.0, -0.1, 0.2}),
      std::invalid_argument);
}
