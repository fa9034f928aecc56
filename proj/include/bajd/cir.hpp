#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <random>

#include "bajd/errors.hpp"
#include "bajd/special_functions.hpp"

namespace bajd {

/// Mean-reverting square-root diffusion dZ = a(theta - Z)dt + sigma sqrt(Z) dW.
struct CirParams {
  double a;      // mean-reversion speed (1/time)
  double theta;  // long-run level (state units)
  double sigma;  // volatility
};

/// Scalars of the CIR transition kernel at (t, x, y):
///   rho = 2a / (sigma^2 (1 - e^{-at})), u_nc = rho x e^{-at}, v = rho y,
///   q = 2 a theta / sigma^2 - 1.
struct CirKernelScalars {
  double rho;
  double u_nc;
  double v;
  double q;
};

struct GammaLaw {
  double shape;
  double rate;
};

namespace detail {

inline void check_params(const CirParams& p) {
  require_domain(p.a > 0.0 && p.theta > 0.0 && p.sigma > 0.0,
                 "CirParams: requires a, theta, sigma > 0");
}

// log of S_q(w) = sum_k w^k / (k! Gamma(q+k+1)) = I_q(2 sqrt(w)) / w^{q/2}.
// S is entire in w, positive, and S(0) = 1/Gamma(q+1); expressing the CIR
// kernel through it keeps the x -> 0 boundary inside one formula.
inline double log_normalized_bessel_series(double q, double w, const SeriesControl& ctl) {
  if (w == 0.0) return -std::lgamma(q + 1.0);
  const double r = 2.0 * std::sqrt(w);
  if (r <= 600.0) {
    double term = std::exp(-std::lgamma(q + 1.0));
    double sum = term;
    for (int k = 0; k < ctl.max_terms; ++k) {
      term *= w / ((k + 1.0) * (q + k + 1.0));
      sum += term;
      if (term < ctl.rel_tol * sum) return std::log(sum);
    }
    throw NonConvergenceError("cir_pdf: kernel series did not converge within max_terms");
  }
  return r + std::log(bessel_i_scaled_large(q, r, ctl)) - 0.5 * q * std::log(w);
}

}  // namespace detail

inline CirKernelScalars cir_kernel_scalars(const CirParams& p, double t, double x, double y) {
  detail::check_params(p);
  detail::require_domain(t > 0.0, "cir_kernel_scalars: requires t > 0");
  detail::require_domain(x >= 0.0 && y >= 0.0, "cir_kernel_scalars: requires x, y >= 0");
  const double decay = std::exp(-p.a * t);
  const double rho = 2.0 * p.a / (p.sigma * p.sigma * (-std::expm1(-p.a * t)));
  return {rho, rho * x * decay, rho * y, 2.0 * p.a * p.theta / (p.sigma * p.sigma) - 1.0};
}

/// Largest real u for which the transition transform is finite.
inline double cir_mgf_pole(const CirParams& p, double t) {
  detail::check_params(p);
  detail::require_domain(t > 0.0, "cir_mgf_pole: requires t > 0");
  return 2.0 * p.a / (p.sigma * p.sigma * (-std::expm1(-p.a * t)));
}

/// E_x[e^{u Z_t}] in closed form, Re u <= 0 or real u below the pole.
inline std::complex<double> cir_cf(const CirParams& p, double t, double x,
                                   std::complex<double> u) {
  detail::check_params(p);
  detail::require_domain(t > 0.0, "cir_cf: requires t > 0");
  detail::require_domain(x >= 0.0, "cir_cf: requires x >= 0");
  detail::require_domain(
      u.real() <= 0.0 || (u.imag() == 0.0 && u.real() < cir_mgf_pole(p, t)),
      "cir_cf: u outside the transform domain");
  const double decay = std::exp(-p.a * t);
  const std::complex<double> denom =
      1.0 - (p.sigma * p.sigma / (2.0 * p.a)) * u * (-std::expm1(-p.a * t));
  const double exponent = 2.0 * p.a * p.theta / (p.sigma * p.sigma);
  return std::exp(-exponent * std::log(denom) + x * u * decay / denom);
}

/// Real transform E_x[e^{u Z_t}] for u below the pole.
inline double cir_mgf(const CirParams& p, double t, double x, double u) {
  detail::require_domain(u < cir_mgf_pole(p, t), "cir_mgf: u at or beyond the pole");
  const double decay = std::exp(-p.a * t);
  const double denom = 1.0 - (p.sigma * p.sigma / (2.0 * p.a)) * u * (-std::expm1(-p.a * t));
  const double exponent = 2.0 * p.a * p.theta / (p.sigma * p.sigma);
  detail::require_domain(x >= 0.0, "cir_mgf: requires x >= 0");
  return std::exp(-exponent * std::log(denom) + x * u * decay / denom);
}

/// ln f(t,x,y) assembled in log scale:
///   log rho - u - v + q log v + log S_q(u v).
/// At y = 0 the density is 0 for q > 0, rho e^{-u} for q = 0, and diverges
/// (integrably) for q < 0, which is signaled rather than returned.
inline double log_cir_pdf(const CirParams& p, double t, double x, double y,
                          const SeriesControl& ctl = {}) {
  const CirKernelScalars s = cir_kernel_scalars(p, t, x, y);
  if (y == 0.0) {
    if (s.q > 0.0) return -std::numeric_limits<double>::infinity();
    if (s.q == 0.0) return std::log(s.rho) - s.u_nc;
    throw DensityDivergenceError("cir_pdf: density diverges at y = 0 for 2 a theta < sigma^2");
  }
  return std::log(s.rho) - s.u_nc - s.v + s.q * std::log(s.v) +
         detail::log_normalized_bessel_series(s.q, s.u_nc * s.v, ctl);
}

/// Transition density f(t,x,y) of the CIR process; dispatches on x = 0 through
/// the same series (S_q(0) = 1/Gamma(q+1) reproduces the boundary formula).
inline double cir_pdf(const CirParams& p, double t, double x, double y,
                      const SeriesControl& ctl = {}) {
  return std::exp(log_cir_pdf(p, t, x, y, ctl));
}

/// Exact transition draw: N ~ Poisson(rho x e^{-at}), then Gamma(q+1+N, rho).
/// The compound transform reproduces the closed-form cir_cf.
inline double sample_cir(const CirParams& p, double t, double x, std::mt19937_64& rng) {
  const CirKernelScalars s = cir_kernel_scalars(p, t, x, 0.0);
  long long n = 0;
  if (s.u_nc > 0.0) {
    std::poisson_distribution<long long> pois(s.u_nc);
    n = pois(rng);
  }
  std::gamma_distribution<double> gamma_draw(s.q + 1.0 + static_cast<double>(n), 1.0 / s.rho);
  return gamma_draw(rng);
}

/// Stationary law of the CIR process: Gamma with shape 2 a theta / sigma^2 and
/// rate 2 a / sigma^2 (the rate convention matches the t -> infinity transform).
inline GammaLaw cir_stationary(const CirParams& p) {
  detail::check_params(p);
  return {2.0 * p.a * p.theta / (p.sigma * p.sigma), 2.0 * p.a / (p.sigma * p.sigma)};
}

}  // namespace bajd
