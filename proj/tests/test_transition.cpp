#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "bajd/invariant.hpp"
#include "bajd/transition.hpp"
#include "helpers/oracles.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const bajd::BajdParams kPositive{1.0, 1.0, 1.0, 1.0, 1.0};                  // delta = 1/2
const bajd::BajdParams kNegative{1.0, 1.0, 2.0, 1.0, 2.0};                  // delta = -3
const bajd::BajdParams kZero{1.0, 1.0, std::sqrt(2.0), 1.0, 1.0};           // delta = 0
const std::vector<bajd::BajdParams> kRegimes{kPositive, kNegative, kZero};

std::complex<double> fd_time_derivative(const std::function<std::complex<double>(double)>& f,
                                        double t) {
  const double h = 1e-3;
  return (-f(t + 2 * h) + 8.0 * f(t + h) - 8.0 * f(t - h) + f(t - 2 * h)) / (12.0 * h);
}

// Simpson oracle over [0, cutoff] of g(y) p(t,x,y) dy for a prebuilt density;
// the y^q head and (for q < 0) the substituted singular stretch mirror the
// CIR oracle.
template <class Density, class G>
double density_integral_oracle(const Density& density, double q, double y_max, G&& g,
                               int panels = 4000) {
  const long double eps = 1e-9L;
  auto f = [&](long double y) {
    const double yd = static_cast<double>(y);
    return static_cast<long double>(g(yd) * density(yd));
  };
  const long double head = f(eps) * eps / (q + 1.0L);
  long double body;
  if (q < 0.0) {
    const long double split = std::min(1.0L, static_cast<long double>(y_max) / 4.0L);
    const long double pw = 1.0L / (q + 1.0L);
    auto sub = [&](long double v) { return f(std::pow(v, pw)) * pw * std::pow(v, pw - 1.0L); };
    body = oracle::simpson(sub, std::pow(eps, q + 1.0L),
                           std::pow(split, static_cast<long double>(q) + 1.0L), panels) +
           oracle::simpson(f, split, static_cast<long double>(y_max), panels);
  } else {
    body = oracle::simpson(f, eps, static_cast<long double>(y_max), panels);
  }
  return static_cast<double>(head + body);
}

double state_exponent(const bajd::BajdParams& p) {
  return 2.0 * p.a * p.theta / (p.sigma * p.sigma) - 1.0;
}

}  // namespace

TEST_CASE("riccati_psi: initial condition and zero frequency") {
  for (const auto& p : kRegimes) {
    for (std::complex<double> u : {std::complex<double>(-2.0, 0.0),
                                   std::complex<double>(0.0, 1.0),
                                   std::complex<double>(-0.5, 3.0)}) {
      CHECK(std::abs(bajd::riccati_psi(p, 0.0, u) - u) < 1e-15);
    }
    CHECK(bajd::riccati_psi(p, 1.3, {0.0, 0.0}) == std::complex<double>(0.0, 0.0));
    CHECK(bajd::riccati_phi(p, 0.0, {-2.0, 0.5}) == std::complex<double>(0.0, 0.0));
    CHECK(bajd::riccati_phi(p, 1.3, {0.0, 0.0}) == std::complex<double>(0.0, 0.0));
  }
}

TEST_CASE("riccati flow: finite differences match the generalized Riccati system") {
  const std::vector<std::complex<double>> us = {
      {-5.0, 0.0}, {-1.0, 0.0}, {-0.1, 0.0}, {0.0, 1.0}, {0.0, -1.0}};
  for (const auto& p : kRegimes) {
    for (double t : {0.1, 0.7, 2.0, 5.0}) {
      for (const auto u : us) {
        const auto psi_t = bajd::riccati_psi(p, t, u);
        const auto dpsi =
            fd_time_derivative([&](double s) { return bajd::riccati_psi(p, s, u); }, t);
        CHECK(std::abs(dpsi - bajd::riccati_rate_psi(p, psi_t)) < 1e-6);
        const auto dphi =
            fd_time_derivative([&](double s) { return bajd::riccati_phi(p, s, u); }, t);
        CHECK(std::abs(dphi - bajd::riccati_rate_phi(p, psi_t)) < 1e-6);
      }
    }
  }
}

TEST_CASE("riccati flow: semigroup property") {
  const std::vector<std::complex<double>> us = {{-2.0, 0.0}, {0.0, 1.0}, {-1.0, 3.0}};
  for (const auto& p : kRegimes) {
    for (double s : {0.2, 1.0}) {
      for (double t : {0.5, 2.0}) {
        for (const auto u : us) {
          const auto psi_s = bajd::riccati_psi(p, s, u);
          CHECK(std::abs(bajd::riccati_psi(p, t + s, u) - bajd::riccati_psi(p, t, psi_s)) <
                1e-9);
          CHECK(std::abs(bajd::riccati_phi(p, t + s, u) -
                         (bajd::riccati_phi(p, s, u) + bajd::riccati_phi(p, t, psi_s))) < 1e-9);
        }
      }
    }
  }
}

TEST_CASE("bajd_cf: normalization and convolution factorization") {
  for (const auto& p : kRegimes) {
    CHECK(bajd::bajd_cf(p, 0.9, 1.7, {0.0, 0.0}) == std::complex<double>(1.0, 0.0));
  }
  const double t = 0.7, x = 1.0;
  for (const auto& p : kRegimes) {
    for (std::complex<double> u : {std::complex<double>(-2.0, 0.0),
                                   std::complex<double>(0.0, 0.8),
                                   std::complex<double>(-1.0, -2.5)}) {
      const auto lhs = bajd::bajd_cf(p, t, x, u);
      const auto rhs = bajd::cir_cf(p.cir(), t, x, u) * bajd::jump_law(p, t).cf(u);
      CHECK(std::abs(lhs - rhs) < 1e-12 * std::abs(lhs) + 1e-14);
    }
  }
}

TEST_CASE("riccati_phi: principal branch stays continuous in t") {
  // fine-grid check that the complex logarithms never jump branches
  for (const auto& p : kRegimes) {
    for (std::complex<double> u : {std::complex<double>(-0.5, 20.0),
                                   std::complex<double>(-30.0, 5.0),
                                   std::complex<double>(0.0, 50.0)}) {
      std::complex<double> prev = bajd::riccati_phi(p, 1e-4, u);
      for (double t = 0.01; t <= 5.0; t += 0.01) {
        const auto value = bajd::riccati_phi(p, t, u);
        CHECK(std::abs(value - prev) < 1.0);
        prev = value;
      }
    }
  }
}

TEST_CASE("bajd_cf: long-time limit is the invariant transform") {
  for (const auto& p : kRegimes) {
    for (std::complex<double> u : {std::complex<double>(-1.5, 0.0),
                                   std::complex<double>(0.0, 2.0)}) {
      CHECK(std::abs(bajd::bajd_cf(p, 250.0, 3.0, u) - bajd::invariant_cf(p, u)) < 1e-11);
    }
  }
}

TEST_CASE("mgf_domain: diffusion and jump poles") {
  const double t = 1.0;
  // delta > 0 and delta = 0: the jump pole is d
  CHECK_THAT(bajd::mgf_domain(kPositive, t),
             WithinRel(std::min(bajd::cir_mgf_pole(kPositive.cir(), t), kPositive.d), 1e-14));
  // delta < 0: the mixture transform diverges already at d / L1(t)
  const double l1 = bajd::jump_decay_scalar(kNegative, t);
  CHECK(l1 > 1.0);
  CHECK_THAT(bajd::mgf_domain(kNegative, t),
             WithinRel(std::min(bajd::cir_mgf_pole(kNegative.cir(), t), kNegative.d / l1),
                       1e-14));
  const double edge = bajd::mgf_domain(kNegative, t);
  CHECK(std::isfinite(bajd::bajd_mgf(kNegative, t, 1.0, 0.99 * edge)));
  CHECK_THROWS_AS(bajd::bajd_mgf(kNegative, t, 1.0, edge), std::domain_error);
  CHECK_THROWS_AS(bajd::bajd_cf(kNegative, t, 1.0, {edge * 1.001, 0.0}), std::domain_error);
}

TEST_CASE("jump_law: branch parameters") {
  const double t = 0.9;
  const auto positive = bajd::jump_law(kPositive, t);
  REQUIRE(positive.regime == bajd::DeltaRegime::positive);
  const auto& m1 = std::get<bajd::BesselMixtureLaw>(positive.law);
  CHECK_THAT(m1.gamma, WithinRel(kPositive.c / kPositive.delta(), 1e-14));
  CHECK_THAT(m1.alpha, WithinRel(1.0 / positive.L1 - 1.0, 1e-12));
  CHECK_THAT(m1.beta, WithinRel(kPositive.d / positive.L1, 1e-13));

  const auto zero = bajd::jump_law(kZero, t);
  REQUIRE(zero.regime == bajd::DeltaRegime::zero);
  const auto& b = std::get<bajd::BesselLaw>(zero.law);
  CHECK_THAT(b.beta, WithinRel(kZero.d, 1e-14));
  CHECK_THAT(b.alpha, WithinRel((kZero.c / kZero.a) * (1.0 - std::exp(-kZero.a * t)), 1e-13));

  const auto negative = bajd::jump_law(kNegative, t);
  REQUIRE(negative.regime == bajd::DeltaRegime::negative);
  const auto& m2 = std::get<bajd::BesselMixtureLaw>(negative.law);
  CHECK_THAT(m2.gamma, WithinRel(-kNegative.c / kNegative.delta(), 1e-14));
  CHECK_THAT(m2.beta, WithinRel(kNegative.d, 1e-14));
  CHECK_THAT(m2.alpha, WithinRel(negative.L1 - 1.0, 1e-12));
}

TEST_CASE("jump_law: transform matches the closed form by quadrature") {
  const double t = 0.8, u = -1.0;
  for (const auto& p : kRegimes) {
    const auto law = bajd::jump_law(p, t);
    const double l1 = law.L1;
    double expected;
    if (law.regime == bajd::DeltaRegime::zero) {
      expected = std::exp(p.c * u * (1.0 - std::exp(-p.a * t)) / (p.a * (p.d - u)));
    } else {
      expected = std::pow((p.d - u * l1) / (p.d - u), p.c / p.delta());
    }
    // transform computed from the law's own atom + continuous density
    const long double cutoff = 45.0L / law.mgf_pole();
    auto f = [&](long double z) {
      const double zd = static_cast<double>(z);
      return static_cast<long double>(std::exp(u * zd) * law.continuous_pdf(zd));
    };
    const double numeric =
        law.atom() + static_cast<double>(f(1e-10L) * 1e-10L + oracle::simpson(f, 1e-10L, cutoff, 50000));
    CHECK_THAT(numeric, WithinAbs(expected, 1e-9));
    CHECK(std::abs(law.cf({u, 0.0}) - expected) < 1e-13);
  }
}

TEST_CASE("unified_kernel: continuous mass complements the atom") {
  for (const auto& p : kRegimes) {
    for (double t : {0.3, 1.5}) {
      const auto kernel = bajd::unified_kernel(p, t);
      const long double cutoff =
          2.0L * kernel.jump_mean + 8.0L * kernel.jump_sd + 45.0L / kernel.tail_rate;
      auto h = [&](long double z) {
        return static_cast<long double>(kernel.h(static_cast<double>(z)));
      };
      const double mass =
          static_cast<double>(oracle::simpson(h, 0.0L, cutoff, 50000));
      CHECK_THAT(mass, WithinAbs(1.0 - kernel.L, 1e-8));
    }
  }
}

TEST_CASE("unified_kernel: atom bounds and long-time limits") {
  for (const auto& p : kRegimes) {
    for (double t : {0.01, 0.1, 1.0, 10.0}) {
      const double L = bajd::unified_kernel(p, t).L;
      CHECK(L > 0.0);
      CHECK(L < 1.0);
    }
  }
  // t -> infinity limits of the atom
  const double l_pos = bajd::unified_kernel(kPositive, 60.0).L;
  const double sd2a_pos = kPositive.sigma * kPositive.sigma * kPositive.d / (2.0 * kPositive.a);
  CHECK_THAT(l_pos, WithinRel(std::pow(sd2a_pos, kPositive.c / kPositive.delta()), 1e-10));
  const double l_neg = bajd::unified_kernel(kNegative, 60.0).L;
  const double sd2a_neg = kNegative.sigma * kNegative.sigma * kNegative.d / (2.0 * kNegative.a);
  CHECK_THAT(l_neg, WithinRel(std::pow(sd2a_neg, kNegative.c / kNegative.delta()), 1e-10));
  const double t_zero = 2.0;
  CHECK_THAT(bajd::unified_kernel(kZero, t_zero).L,
             WithinRel(std::exp(-(kZero.c / kZero.a) * (1.0 - std::exp(-kZero.a * t_zero))),
                       1e-12));
  CHECK_THAT(bajd::unified_kernel(kZero, 60.0).L,
             WithinRel(std::exp(-kZero.c / kZero.a), 1e-10));
}

TEST_CASE("convolve_F: vanishes at y = 0 and scales like y^{q+1}") {
  for (const auto& p : kRegimes) {
    CHECK(bajd::convolve_F(p, 0.8, 1.2, 0.0) == 0.0);
    const double target = state_exponent(p) + 1.0;  // = 2 a theta / sigma^2
    std::vector<double> logy, logF;
    for (double y = 1e-3; y < 0.12; y *= std::sqrt(10.0)) {
      logy.push_back(std::log(y));
      logF.push_back(std::log(bajd::convolve_F(p, 0.8, 1.2, y)));
    }
    // least-squares slope of log F against log y
    const double n = static_cast<double>(logy.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < logy.size(); ++i) {
      sx += logy[i];
      sy += logF[i];
      sxx += logy[i] * logy[i];
      sxy += logy[i] * logF[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(slope >= target - 0.05);
    CHECK(slope <= target + 0.2);
  }
}

TEST_CASE("convolve_F: matches a Monte Carlo convolution estimate") {
  const double t = 1.0, x = 0.5, y = 2.0;
  const auto& p = kPositive;
  const double exact = bajd::convolve_F(p, t, x, y);
  const auto law = bajd::jump_law(p, t);
  const double continuous_mass = 1.0 - law.atom();
  std::mt19937_64 rng(24601);
  const int n = 400000;
  const double window = 0.05;
  int hits = 0;
  for (int i = 0; i < n; ++i) {
    double jump = 0.0;
    while (jump == 0.0) jump = law.sample(rng);  // condition on the continuous part
    const double s = bajd::sample_cir(p.cir(), t, x, rng) + jump;
    if (std::abs(s - y) <= window) ++hits;
  }
  const double density_at_y = continuous_mass * hits / (n * 2.0 * window);
  const double mc_sigma = continuous_mass *
                          std::sqrt(static_cast<double>(hits)) / (n * 2.0 * window);
  CHECK_THAT(density_at_y, WithinAbs(exact, 5.0 * mc_sigma + 0.01 * exact));
}

TEST_CASE("bajd_pdf: normalization") {
  for (const auto& p : kRegimes) {
    const bajd::TransitionDensity density(p, 0.5, 1.0);
    const double mass = density_integral_oracle(density, state_exponent(p),
                                                density.upper_cutoff(), [](double) { return 1.0; });
    CHECK_THAT(mass, WithinAbs(1.0, 1e-7));
  }
}

TEST_CASE("bajd_pdf: vanishing jump intensity degenerates to the CIR density") {
  bajd::BajdParams p = kPositive;
  p.c = 1e-12;
  for (double y : {0.2, 1.0, 3.0}) {
    CHECK_THAT(bajd::bajd_pdf(p, 0.7, 1.1, y),
               WithinRel(bajd::cir_pdf(p.cir(), 0.7, 1.1, y), 1e-9));
  }
}

TEST_CASE("bajd_pdf: Fourier transform matches bajd_cf") {
  const double t = 0.5, x = 1.0, omega = 1.0;
  for (const auto& p : kRegimes) {
    const bajd::TransitionDensity density(p, t, x);
    const double q = state_exponent(p);
    const double y_max = density.upper_cutoff();
    const double re = density_integral_oracle(density, q, y_max,
                                              [&](double y) { return std::cos(omega * y); }, 6000);
    const double im = density_integral_oracle(density, q, y_max,
                                              [&](double y) { return std::sin(omega * y); }, 6000);
    const auto cf = bajd::bajd_cf(p, t, x, {0.0, omega});
    CHECK(std::abs(std::complex<double>(re, im) - cf) < 1e-6);
  }
}

TEST_CASE("bajd_pdf: strictly positive on the open state space") {
  for (const auto& p : kRegimes) {
    for (double t : {0.1, 1.0, 4.0}) {
      for (double x : {0.0, 1.0, 6.0}) {
        for (double y : {1e-3, 0.8, 4.0, 12.0}) {
          CHECK(bajd::bajd_pdf(p, t, x, y) > 0.0);
        }
      }
    }
  }
  CHECK_THROWS_AS(bajd::bajd_pdf(kNegative, 0.5, 1.0, 0.0), bajd::DensityDivergenceError);
  CHECK(bajd::bajd_pdf(kPositive, 0.5, 1.0, 0.0) == 0.0);
}

TEST_CASE("bajd_pdf: Chapman-Kolmogorov") {
  struct Point {
    bajd::BajdParams p;
    double s, t, x, y;
  };
  for (const auto& pt : {Point{kPositive, 0.4, 0.6, 1.0, 1.5}, Point{kZero, 0.5, 0.5, 0.3, 2.0}}) {
    const double direct = bajd::bajd_pdf(pt.p, pt.s + pt.t, pt.x, pt.y);
    const bajd::TransitionDensity first(pt.p, pt.s, pt.x);
    const double composed = density_integral_oracle(
        first, state_exponent(pt.p), first.upper_cutoff(),
        [&](double z) { return bajd::bajd_pdf(pt.p, pt.t, z, pt.y); }, 1200);
    CHECK_THAT(composed, WithinAbs(direct, 1e-4 * direct));
  }
}

TEST_CASE("weighted_pdf: reference-measure weighting") {
  const double t = 0.6, x = 0.9;
  for (const auto& p : kRegimes) {
    // above one the weight is unity
    CHECK_THAT(bajd::weighted_pdf(p, t, x, 2.3),
               WithinRel(bajd::bajd_pdf(p, t, x, 2.3), 1e-13));
    // continuity across the kink at y = 1
    const double left = bajd::weighted_pdf(p, t, x, 1.0 - 1e-9);
    const double right = bajd::weighted_pdf(p, t, x, 1.0 + 1e-9);
    CHECK_THAT(left, WithinRel(right, 1e-6));
    // finite strictly positive boundary limit
    const double at_zero = bajd::weighted_pdf(p, t, x, 0.0);
    CHECK(at_zero > 0.0);
    CHECK(std::isfinite(at_zero));
    CHECK_THAT(bajd::weighted_pdf(p, t, x, 1e-7), WithinRel(at_zero, 1e-4));
  }
}

TEST_CASE("jump convolution law: regime seam continuity") {
  // parameter sets a tiny |delta| on both sides of the seam, plus exact zero
  auto with_delta = [](double delta) {
    bajd::BajdParams p{1.0, 1.0, 1.0, 1.0, 0.0};
    p.d = 2.0 * (p.a - delta) / (p.sigma * p.sigma);
    return p;
  };
  const auto plus = with_delta(1e-8);
  const auto minus = with_delta(-1e-8);
  const auto zero = with_delta(0.0);
  REQUIRE(bajd::delta_regime(plus) == bajd::DeltaRegime::positive);
  REQUIRE(bajd::delta_regime(minus) == bajd::DeltaRegime::negative);
  REQUIRE(bajd::delta_regime(zero) == bajd::DeltaRegime::zero);
  for (double t : {0.3, 1.0}) {
    for (double y : {0.4, 1.1, 2.8}) {
      const double f_plus = bajd::bajd_pdf(plus, t, 1.0, y);
      const double f_minus = bajd::bajd_pdf(minus, t, 1.0, y);
      const double f_zero = bajd::bajd_pdf(zero, t, 1.0, y);
      CHECK_THAT(f_plus, WithinAbs(f_minus, 1e-6));
      CHECK_THAT(f_plus, WithinAbs(f_zero, 1e-6));
    }
  }
}

TEST_CASE("sample_bajd: matches the quadrature CDF") {
  const double t = 0.5, x = 1.0;
  for (const auto& p : {kPositive, kNegative}) {
    const bajd::TransitionDensity density(p, t, x);
    oracle::GridCdf cdf([&](double y) { return density(y); }, density.upper_cutoff(), 2000,
                        state_exponent(p));
    std::mt19937_64 rng(90210);
    const int n = 100000;
    std::vector<double> draws(n);
    for (int i = 0; i < n; ++i) draws[i] = bajd::sample_bajd(p, t, x, rng);
    const double d = oracle::ks_statistic(draws, [&](double y) { return cdf(y); });
    CHECK(d < oracle::kKs1PercentCoefficient / std::sqrt(static_cast<double>(n)));
  }
}

TEST_CASE("sample_bajd: empirical transform and CIR degeneracy") {
  const double t = 0.8, x = 0.6, omega = 0.9;
  std::mt19937_64 rng(5551212);
  const int n = 100000;
  double c = 0.0, s = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v = bajd::sample_bajd(kZero, t, x, rng);
    c += std::cos(omega * v);
    s += std::sin(omega * v);
  }
  const auto cf = bajd::bajd_cf(kZero, t, x, {0.0, omega});
  const double bound = 4.0 / std::sqrt(static_cast<double>(n));
  CHECK_THAT(c / n, WithinAbs(cf.real(), bound));
  CHECK_THAT(s / n, WithinAbs(cf.imag(), bound));

  bajd::BajdParams tiny_jumps = kPositive;
  tiny_jumps.c = 1e-12;
  const auto scal = bajd::cir_kernel_scalars(tiny_jumps.cir(), t, x, 0.0);
  oracle::GridCdf cir_cdf([&](double y) { return bajd::cir_pdf(tiny_jumps.cir(), t, x, y); },
                          (std::sqrt(scal.u_nc) + std::sqrt(scal.u_nc + 50.0)) *
                              (std::sqrt(scal.u_nc) + std::sqrt(scal.u_nc + 50.0)) / scal.rho,
                          3000, scal.q);
  std::vector<double> draws(50000);
  for (auto& v : draws) v = bajd::sample_bajd(tiny_jumps, t, x, rng);
  const double d = oracle::ks_statistic(draws, [&](double y) { return cir_cdf(y); });
  CHECK(d < oracle::kKs1PercentCoefficient / std::sqrt(static_cast<double>(draws.size())));
}

TEST_CASE("density_grid: validation and evaluation") {
  const std::vector<double> ys{0.2, 0.5, 1.0, 2.0};
  const auto grid = bajd::density_grid(kPositive, 0.5, 1.0, ys);
  REQUIRE(grid.values.size() == ys.size());
  for (std::size_t i = 0; i < ys.size(); ++i) {
    CHECK_THAT(grid.values[i], WithinRel(bajd::bajd_pdf(kPositive, 0.5, 1.0, ys[i]), 1e-10));
    CHECK(grid.values[i] >= 0.0);
  }
  CHECK_THROWS_AS(bajd::density_grid(kPositive, 0.5, 1.0, {1.0, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(bajd::density_grid(kPositive, 0.5, 1.0, {}), std::invalid_argument);
}
