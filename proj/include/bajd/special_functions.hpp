#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "bajd/errors.hpp"

namespace bajd {

/// Truncation control for the power series used throughout the density
/// formulas. All series involved are entire with factorial term decay, so the
/// defaults converge for every argument the library produces.
struct SeriesControl {
  double rel_tol = 1e-14;
  int max_terms = 500;
};

/// ln Gamma(x) for x > 0.
inline double log_gamma(double x) {
  detail::require_domain(x > 0.0 && std::isfinite(x), "log_gamma: requires x > 0");
  return std::lgamma(x);
}

namespace detail {

// Exponentially scaled modified Bessel function e^{-r} I_q(r) for r > 30.
// Up to r = 600 the series is summed with the scale folded into the leading
// term; beyond that the Hankel expansion in 1/r is used (truncated at its
// smallest term).
inline double bessel_i_scaled_large(double q, double r, const SeriesControl& ctl) {
  if (r <= 600.0) {
    double term = std::exp(q * std::log(0.5 * r) - std::lgamma(q + 1.0) - r);
    double sum = term;
    const double w = 0.25 * r * r;
    for (int k = 0; k < ctl.max_terms; ++k) {
      term *= w / ((k + 1.0) * (q + k + 1.0));
      sum += term;
      if (term < ctl.rel_tol * sum) return sum;
    }
    throw NonConvergenceError("bessel_i: scaled series did not converge within max_terms");
  }
  const double mu = 4.0 * q * q;
  double term = 1.0;
  double sum = 1.0;
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= 64; ++k) {
    term *= -(mu - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (8.0 * r * k);
    if (std::abs(term) >= prev) break;  // asymptotic series: stop at smallest term
    sum += term;
    prev = std::abs(term);
    if (std::abs(term) < ctl.rel_tol * std::abs(sum)) break;
  }
  return sum / std::sqrt(2.0 * M_PI * r);
}

// Plain series for I_q(r), 0 < r <= 30. Terms are positive, so the partial
// sums are monotone and the truncation criterion is a true relative bound.
inline double bessel_i_series(double q, double r, const SeriesControl& ctl) {
  double term = std::exp(q * std::log(0.5 * r) - std::lgamma(q + 1.0));
  double sum = term;
  const double w = 0.25 * r * r;
  for (int k = 0; k < ctl.max_terms; ++k) {
    term *= w / ((k + 1.0) * (q + k + 1.0));
    sum += term;
    if (term < ctl.rel_tol * sum) return sum;
  }
  throw NonConvergenceError("bessel_i: series did not converge within max_terms");
}

inline void check_bessel_args(double order, double r) {
  require_domain(order > -1.0, "bessel_i: requires order > -1");
  require_domain(r >= 0.0, "bessel_i: requires r >= 0");
}

}  // namespace detail

/// Modified Bessel function of the first kind I_q(r), q > -1, r >= 0.
/// Above r = 30 the value is assembled from the scaled form e^{r}*(e^{-r}I_q),
/// which keeps intermediates in range; the result itself overflows to +inf
/// only where I_q(r) genuinely exceeds the double range (r ~ 710).
inline double bessel_i(double order, double r, const SeriesControl& ctl = {}) {
  detail::check_bessel_args(order, r);
  if (r == 0.0) {
    if (order > 0.0) return 0.0;
    if (order == 0.0) return 1.0;
    return std::numeric_limits<double>::infinity();
  }
  if (r <= 30.0) return detail::bessel_i_series(order, r, ctl);
  return std::exp(r) * detail::bessel_i_scaled_large(order, r, ctl);
}

/// ln I_q(r); usable for all arguments where the plain value would overflow.
inline double log_bessel_i(double order, double r, const SeriesControl& ctl = {}) {
  detail::check_bessel_args(order, r);
  if (r == 0.0) {
    if (order > 0.0) return -std::numeric_limits<double>::infinity();
    if (order == 0.0) return 0.0;
    return std::numeric_limits<double>::infinity();
  }
  if (r <= 30.0) return std::log(detail::bessel_i_series(order, r, ctl));
  return r + std::log(detail::bessel_i_scaled_large(order, r, ctl));
}

/// Density of the Gamma distribution with the given shape and *rate* at x >= 0.
inline double gamma_pdf(double x, double shape, double rate) {
  detail::require_domain(x >= 0.0, "gamma_pdf: requires x >= 0");
  detail::require_domain(shape > 0.0 && rate > 0.0, "gamma_pdf: requires shape > 0 and rate > 0");
  if (x == 0.0) {
    if (shape == 1.0) return rate;
    if (shape > 1.0) return 0.0;
    throw DensityDivergenceError("gamma_pdf: density diverges at x = 0 for shape < 1");
  }
  return std::exp(shape * std::log(rate) + (shape - 1.0) * std::log(x) - rate * x -
                  std::lgamma(shape));
}

/// ln gamma_pdf, same edge behavior at x = 0 expressed in log scale.
inline double log_gamma_pdf(double x, double shape, double rate) {
  detail::require_domain(x >= 0.0, "gamma_pdf: requires x >= 0");
  detail::require_domain(shape > 0.0 && rate > 0.0, "gamma_pdf: requires shape > 0 and rate > 0");
  if (x == 0.0) {
    if (shape == 1.0) return std::log(rate);
    if (shape > 1.0) return -std::numeric_limits<double>::infinity();
    throw DensityDivergenceError("gamma_pdf: density diverges at x = 0 for shape < 1");
  }
  return shape * std::log(rate) + (shape - 1.0) * std::log(x) - rate * x - std::lgamma(shape);
}

/// ln of the k-th negative-binomial mixing weight
///   alpha^k Gamma(k+gamma) / ((alpha+1)^{k+gamma} Gamma(gamma) k!).
inline double log_nb_weight(int k, double alpha, double gamma) {
  detail::require_domain(k >= 0, "nb_weight: requires k >= 0");
  detail::require_domain(alpha > 0.0 && gamma > 0.0,
                         "nb_weight: requires alpha > 0 and gamma > 0");
  if (k == 0) return -gamma * std::log1p(alpha);
  return k * std::log(alpha) - (k + gamma) * std::log1p(alpha) + std::lgamma(k + gamma) -
         std::lgamma(gamma) - std::lgamma(k + 1.0);
}

/// The k-th mixing weight; the weights over k >= 0 sum to one and the k = 0
/// term equals the point mass (1/(1+alpha))^gamma.
inline double nb_weight(int k, double alpha, double gamma) {
  return std::exp(log_nb_weight(k, alpha, gamma));
}

/// Weights w_0..w_K tabulated until the accumulated mass reaches
/// 1 - cum_tol. Uses the term ratio recurrence in log scale, which stays
/// accurate for the extreme (alpha -> 0, gamma -> inf) corner produced by
/// near-critical parameter sets.
inline std::vector<double> nb_weight_table(double alpha, double gamma,
                                           const SeriesControl& ctl = {},
                                           double cum_tol = 1e-12) {
  detail::require_domain(alpha > 0.0 && gamma > 0.0,
                         "nb_weight_table: requires alpha > 0 and gamma > 0");
  std::vector<double> w;
  w.reserve(64);
  const double log_ratio_base = std::log(alpha) - std::log1p(alpha);
  double lw = -gamma * std::log1p(alpha);
  double cum = 0.0;
  for (int k = 0; k < ctl.max_terms; ++k) {
    const double wk = std::exp(lw);
    w.push_back(wk);
    cum += wk;
    if (cum >= 1.0 - cum_tol) return w;
    lw += log_ratio_base + std::log((k + gamma) / (k + 1.0));
  }
  throw NonConvergenceError("nb_weight_table: weight mass did not reach target within max_terms");
}

}  // namespace bajd
