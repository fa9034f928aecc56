#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "bajd/invariant.hpp"
#include "helpers/oracles.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const bajd::BajdParams kPositive{1.0, 1.0, 1.0, 1.0, 1.0};
const bajd::BajdParams kNegative{1.0, 1.0, 2.0, 1.0, 2.0};
const bajd::BajdParams kZero{1.0, 1.0, std::sqrt(2.0), 1.0, 1.0};
const std::vector<bajd::BajdParams> kRegimes{kPositive, kNegative, kZero};

// Simpson nodes and weights over [eps, y_max] plus the power-law head, reused
// to integrate several functionals of the invariant density in one pass. When
// the density has a y^q singularity (q < 0) the nodes are uniform in the
// substituted variable s = y^{q+1}, with dy/ds folded into the weights.
struct InvariantTable {
  std::vector<double> ys;
  std::vector<double> weights;  // Simpson weights times density values
  double head_mass;
  double head_y;

  InvariantTable(const bajd::BajdParams& p, int panels) {
    const bajd::InvariantDensity density(p);
    const double q = density.stationary_base().shape - 1.0;
    const double y_max = density.upper_cutoff();
    const double eps = 1e-9;
    head_y = eps;
    head_mass = density(eps) * eps / (q + 1.0);
    if (panels % 2 != 0) ++panels;
    ys.resize(panels + 1);
    weights.resize(panels + 1);
    if (q < 0.0) {
      const double pw = q + 1.0;
      const double s_lo = std::pow(eps, pw);
      const double hs = (std::pow(y_max, pw) - s_lo) / panels;
      for (int i = 0; i <= panels; ++i) {
        const double s = s_lo + i * hs;
        const double y = std::pow(s, 1.0 / pw);
        const double w = (i == 0 || i == panels) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        ys[i] = y;
        weights[i] = w * hs / 3.0 * density(y) * y / (pw * s);
      }
    } else {
      const double h = (y_max - eps) / panels;
      for (int i = 0; i <= panels; ++i) {
        ys[i] = eps + i * h;
        const double w = (i == 0 || i == panels) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        weights[i] = w * h / 3.0 * density(ys[i]);
      }
    }
  }

  template <class G>
  double integral(G&& g) const {
    double acc = head_mass * g(head_y);
    for (std::size_t i = 0; i < ys.size(); ++i) acc += weights[i] * g(ys[i]);
    return acc;
  }
};

}  // namespace

TEST_CASE("invariant_pdf: integrates to one in every regime") {
  for (const auto& p : kRegimes) {
    const InvariantTable table(p, 3000);
    CHECK_THAT(table.integral([](double) { return 1.0; }), WithinAbs(1.0, 1e-7));
  }
}

TEST_CASE("invariant law: mean equals theta + c/(a d)") {
  for (const auto& p : kRegimes) {
    const double expected = p.theta + p.c / (p.a * p.d);
    // derivative of the transform by a complex step at the origin
    const double h = 1e-7;
    const double mean_cf = std::log(bajd::invariant_cf(p, {0.0, h})).imag() / h;
    CHECK_THAT(mean_cf, WithinRel(expected, 1e-10));
    const InvariantTable table(p, 3000);
    CHECK_THAT(table.integral([](double y) { return y; }), WithinAbs(expected, 1e-7));
  }
}

TEST_CASE("invariant_pdf: vanishing jump intensity recovers the CIR stationary Gamma") {
  bajd::BajdParams p = kPositive;
  p.c = 1e-13;
  const auto stationary = bajd::cir_stationary(p.cir());
  for (double y : {0.1, 0.7, 2.0, 5.0}) {
    CHECK_THAT(bajd::invariant_pdf(p, y),
               WithinRel(bajd::gamma_pdf(y, stationary.shape, stationary.rate), 1e-9));
  }
}

TEST_CASE("invariant_cf: domain checks and the delta = 0 branch") {
  const double edge = std::min(kZero.d, 2.0 * kZero.a / (kZero.sigma * kZero.sigma));
  CHECK_THROWS_AS(bajd::invariant_cf(kZero, {edge, 0.0}), std::domain_error);
  CHECK(std::isfinite(bajd::invariant_mgf(kZero, 0.9 * edge)));
  // closed delta = 0 form
  const std::complex<double> u{-1.2, 0.6};
  const std::complex<double> denom = 1.0 - (kZero.sigma * kZero.sigma / (2.0 * kZero.a)) * u;
  const auto expected =
      std::exp(-(2.0 * kZero.a * kZero.theta / (kZero.sigma * kZero.sigma)) * std::log(denom) +
               kZero.c * u / (kZero.a * (kZero.d - u)));
  CHECK(std::abs(bajd::invariant_cf(kZero, u) - expected) < 1e-14);
}

TEST_CASE("invariant law: stationarity under the transition transform") {
  // int l(x) E_x[e^{u X_t}] dx = invariant transform, t in {0.5, 2}
  for (const auto& p : kRegimes) {
    const InvariantTable table(p, 2000);
    for (double t : {0.5, 2.0}) {
      for (std::complex<double> u : {std::complex<double>(-0.5, 0.0),
                                     std::complex<double>(-2.0, 0.0),
                                     std::complex<double>(0.0, 1.0)}) {
        const double re =
            table.integral([&](double x) { return bajd::bajd_cf(p, t, x, u).real(); });
        const double im =
            table.integral([&](double x) { return bajd::bajd_cf(p, t, x, u).imag(); });
        CHECK(std::abs(std::complex<double>(re, im) - bajd::invariant_cf(p, u)) < 1e-5);
      }
    }
  }
}

TEST_CASE("invariant jump component: atom matches the long-time kernel limit") {
  for (const auto& p : kRegimes) {
    const auto limit_law = bajd::invariant_jump_law(p);
    const auto kernel_at_large_t = bajd::unified_kernel(p, 80.0);
    CHECK_THAT(limit_law.atom(), WithinRel(kernel_at_large_t.L, 1e-10));
  }
}
