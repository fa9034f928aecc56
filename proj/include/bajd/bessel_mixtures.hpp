#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "bajd/errors.hpp"
#include "bajd/special_functions.hpp"

namespace bajd {

/// Mixed law on [0,inf) with point mass e^{-alpha} at the origin and a
/// continuous part built from I_1; equivalently a Poisson(alpha) compound of
/// Exp(beta) variables. beta is a rate (1/state units).
struct BesselLaw {
  double alpha;
  double beta;
};

/// Gamma(gamma,1)-mixture of Bessel laws; equivalently a negative-binomial
/// count mixture of Gamma(k, beta) laws with atom (1/(1+alpha))^gamma.
struct BesselMixtureLaw {
  double alpha;
  double beta;
  double gamma;
};

namespace detail {

inline void check_law(const BesselLaw& law) {
  require_domain(law.alpha > 0.0 && law.beta > 0.0,
                 "BesselLaw: requires alpha > 0 and beta > 0");
}

inline void check_law(const BesselMixtureLaw& law) {
  require_domain(law.alpha > 0.0 && law.beta > 0.0 && law.gamma > 0.0,
                 "BesselMixtureLaw: requires alpha, beta, gamma > 0");
}

// sum_{k>=1} w[k] Gamma(x; k, beta) for a tabulated weight vector; defined and
// continuous at x = 0 where only the k = 1 term survives.
inline double mixture_series_value(double beta, const std::vector<double>& w, double x) {
  if (x == 0.0) return w.size() > 1 ? w[1] * beta : 0.0;
  const double bx = beta * x;
  double sum = 0.0;
  if (bx <= 600.0) {
    double pk = beta * std::exp(-bx);  // Gamma(x; k=1, beta)
    for (std::size_t k = 1; k < w.size(); ++k) {
      sum += w[k] * pk;
      pk *= bx / static_cast<double>(k);
    }
  } else {
    // e^{-beta x} underflows; assemble each term in log scale instead.
    const double log_beta = std::log(beta);
    const double log_bx = std::log(bx);
    for (std::size_t k = 1; k < w.size(); ++k) {
      if (w[k] == 0.0) continue;
      const double log_pk = log_beta + (static_cast<double>(k) - 1.0) * log_bx - bx -
                            std::lgamma(static_cast<double>(k));
      sum += w[k] * std::exp(log_pk);
    }
  }
  return sum;
}

// Compound Poisson(alpha) of Exp(beta); alpha = 0 allowed (returns 0).
inline double sample_poisson_exponential_compound(double alpha, double beta,
                                                  std::mt19937_64& rng) {
  long long n = 0;
  if (alpha > 0.0) {
    std::poisson_distribution<long long> pois(alpha);
    n = pois(rng);
  }
  if (n == 0) return 0.0;
  std::gamma_distribution<double> gamma_draw(static_cast<double>(n), 1.0 / beta);
  return gamma_draw(rng);
}

}  // namespace detail

/// Probability of the point mass at 0.
inline double bessel_atom(const BesselLaw& law) {
  detail::check_law(law);
  return std::exp(-law.alpha);
}

/// Continuous part of the Bessel law at x > 0:
///   beta e^{-alpha - beta x} sqrt(alpha/(beta x)) I_1(2 sqrt(alpha beta x)).
/// The x -> 0+ limit is alpha beta e^{-alpha}; the x = 0 mass itself is the
/// atom and is reported separately.
inline double bessel_pdf(const BesselLaw& law, double x, const SeriesControl& ctl = {}) {
  detail::check_law(law);
  detail::require_domain(x > 0.0, "bessel_pdf: requires x > 0 (the x = 0 mass is the atom)");
  const double r = 2.0 * std::sqrt(law.alpha * law.beta * x);
  const double log_value = std::log(law.beta) - law.alpha - law.beta * x +
                           0.5 * (std::log(law.alpha) - std::log(law.beta * x)) +
                           log_bessel_i(1.0, r, ctl);
  return std::exp(log_value);
}

/// exp(alpha u / (beta - u)) on Re u <= 0, extended to real u < beta.
inline std::complex<double> bessel_cf(const BesselLaw& law, std::complex<double> u) {
  detail::check_law(law);
  detail::require_domain(u.real() <= 0.0 || (u.imag() == 0.0 && u.real() < law.beta),
                         "bessel_cf: requires Re u <= 0 or real u < beta");
  return std::exp(law.alpha * u / (law.beta - u));
}

/// Real moment generating function, u < beta.
inline double bessel_mgf(const BesselLaw& law, double u) {
  detail::check_law(law);
  detail::require_domain(u < law.beta, "bessel_mgf: requires u < beta");
  return std::exp(law.alpha * u / (law.beta - u));
}

/// Probability of the point mass at 0: (1/(1+alpha))^gamma.
inline double mixture_atom(const BesselMixtureLaw& law) {
  detail::check_law(law);
  return std::exp(-law.gamma * std::log1p(law.alpha));
}

/// Continuous part of the mixture law at x > 0:
///   sum_{k>=1} w_k Gamma(x; k, beta),
/// truncated when the remaining weight mass is below the table tolerance
/// (the Gamma densities are uniformly bounded by beta, so tail weight bounds
/// the truncation error). The x -> 0+ limit is w_1 beta.
inline double mixture_pdf(const BesselMixtureLaw& law, double x, const SeriesControl& ctl = {}) {
  detail::check_law(law);
  detail::require_domain(x > 0.0, "mixture_pdf: requires x > 0 (the x = 0 mass is the atom)");
  const std::vector<double> w = nb_weight_table(law.alpha, law.gamma, ctl);
  return detail::mixture_series_value(law.beta, w, x);
}

/// Closed-form transform
///   (1/(alpha+1) + (alpha/(alpha+1)) / (1 - (alpha+1) u / beta))^gamma
/// on Re u <= 0, extended to real u < beta/(alpha+1); principal branch.
inline std::complex<double> mixture_cf(const BesselMixtureLaw& law, std::complex<double> u) {
  detail::check_law(law);
  detail::require_domain(
      u.real() <= 0.0 || (u.imag() == 0.0 && u.real() < law.beta / (law.alpha + 1.0)),
      "mixture_cf: requires Re u <= 0 or real u < beta/(alpha+1)");
  const double p0 = 1.0 / (law.alpha + 1.0);
  const std::complex<double> base =
      p0 + (1.0 - p0) / (1.0 - (law.alpha + 1.0) / law.beta * u);
  return std::exp(law.gamma * std::log(base));
}

/// Real moment generating function, u < beta/(alpha+1).
inline double mixture_mgf(const BesselMixtureLaw& law, double u) {
  detail::check_law(law);
  detail::require_domain(u < law.beta / (law.alpha + 1.0),
                         "mixture_mgf: requires u < beta/(alpha+1)");
  const double p0 = 1.0 / (law.alpha + 1.0);
  const double base = p0 + (1.0 - p0) / (1.0 - (law.alpha + 1.0) / law.beta * u);
  return std::exp(law.gamma * std::log(base));
}

/// Exact draw via the compound representation: N ~ Poisson(alpha), then the
/// sum of N Exp(beta) variables (0 when N = 0).
inline double sample_bessel(const BesselLaw& law, std::mt19937_64& rng) {
  detail::check_law(law);
  return detail::sample_poisson_exponential_compound(law.alpha, law.beta, rng);
}

/// Exact draw via the mixing representation: T ~ Gamma(gamma, 1), then a
/// Bessel(alpha T, beta) draw. The count marginal is exactly the
/// negative-binomial law nb_weight(., alpha, gamma).
inline double sample_mixture(const BesselMixtureLaw& law, std::mt19937_64& rng) {
  detail::check_law(law);
  std::gamma_distribution<double> mixing(law.gamma, 1.0);
  const double t = mixing(rng);
  return detail::sample_poisson_exponential_compound(law.alpha * t, law.beta, rng);
}

}  // namespace bajd
