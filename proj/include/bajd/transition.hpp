#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <utility>
#include <variant>
#include <vector>

#include "bajd/bessel_mixtures.hpp"
#include "bajd/cir.hpp"
#include "bajd/errors.hpp"
#include "bajd/quadrature.hpp"
#include "bajd/special_functions.hpp"

namespace bajd {

/// Model constants of dX = a(theta - X)dt + sigma sqrt(X) dW + dJ, where J is
/// compound Poisson with arrival rate c and Exp(d) jump sizes. The regime
/// parameter delta = a - sigma^2 d / 2 is always recomputed from the fields.
struct BajdParams {
  double a;
  double theta;
  double sigma;
  double c;
  double d;

  double delta() const { return a - 0.5 * sigma * sigma * d; }
  CirParams cir() const { return {a, theta, sigma}; }
};

enum class DeltaRegime { positive, negative, zero };

namespace detail {

inline void check_params(const BajdParams& p) {
  require_domain(p.a > 0.0 && p.theta > 0.0 && p.sigma > 0.0 && p.c > 0.0 && p.d > 0.0,
                 "BajdParams: requires a, theta, sigma, c, d > 0");
}

// log(1+z) for complex z, accurate for |z| << 1 where the naive form loses
// the low digits of z.
inline std::complex<double> log1p_complex(std::complex<double> z) {
  if (std::abs(z) < 1e-4) {
    return z * (1.0 - z * (0.5 - z * (1.0 / 3.0 - z * 0.25)));
  }
  return std::log(1.0 + z);
}

}  // namespace detail

/// |delta| below this multiple of a is treated as the delta = 0 regime; the
/// delta != 0 formulas lose all precision there (exponents c/delta -> inf)
/// while the laws themselves are continuous across the seam.
inline constexpr double kZeroDeltaTolerance = 1e-10;

inline DeltaRegime delta_regime(const BajdParams& p) {
  detail::check_params(p);
  const double delta = p.delta();
  if (std::abs(delta) <= kZeroDeltaTolerance * p.a) return DeltaRegime::zero;
  return delta > 0.0 ? DeltaRegime::positive : DeltaRegime::negative;
}

/// L1(t) = e^{-at} + sigma^2 d (1 - e^{-at}) / (2a); the interpolation scalar
/// between 1 (t = 0) and sigma^2 d / (2a) (t -> infinity) that parameterizes
/// the jump convolution law.
inline double jump_decay_scalar(const BajdParams& p, double t) {
  detail::check_params(p);
  detail::require_domain(t >= 0.0, "jump_decay_scalar: requires t >= 0");
  return 1.0 - (p.delta() / p.a) * (-std::expm1(-p.a * t));
}

/// Largest real u for which E_x[e^{u X_t}] is finite. The diffusion factor has
/// its pole at 2a/(sigma^2(1-e^{-at})); the jump factor at d, except in the
/// delta < 0 regime where the mixture transform already diverges at d/L1(t).
inline double mgf_domain(const BajdParams& p, double t) {
  detail::check_params(p);
  detail::require_domain(t >= 0.0, "mgf_domain: requires t >= 0");
  const double jump_pole =
      delta_regime(p) == DeltaRegime::negative ? p.d / jump_decay_scalar(p, t) : p.d;
  if (t == 0.0) return jump_pole;
  return std::min(cir_mgf_pole(p.cir(), t), jump_pole);
}

namespace detail {

inline void check_cf_argument(const BajdParams& p, double t, std::complex<double> u) {
  require_domain(u.real() <= 0.0 || (u.imag() == 0.0 && u.real() < mgf_domain(p, t)),
                 "bajd transform: requires Re u <= 0 or real u inside the transform domain");
}

}  // namespace detail

/// psi(t,u) = u e^{-at} / (1 - (sigma^2/2a) u (1 - e^{-at})); psi(0,u) = u.
inline std::complex<double> riccati_psi(const BajdParams& p, double t, std::complex<double> u) {
  detail::check_params(p);
  detail::require_domain(t >= 0.0, "riccati_psi: requires t >= 0");
  if (!(u.real() <= 0.0)) {
    const bool real_below_pole =
        u.imag() == 0.0 && (t == 0.0 || u.real() < cir_mgf_pole(p.cir(), t));
    detail::require_domain(real_below_pole,
                           "riccati_psi: requires Re u <= 0 or real u below the pole");
  }
  const double m = -std::expm1(-p.a * t);
  const std::complex<double> denom = 1.0 - (p.sigma * p.sigma / (2.0 * p.a)) * u * m;
  return u * std::exp(-p.a * t) / denom;
}

/// phi(t,u), branching on the sign of delta; principal-branch logarithms. The
/// delta != 0 branch is written as (c/delta) log1p(u (delta/a) m / (d-u)) with
/// m = 1 - e^{-at}, which passes continuously into the delta = 0 form.
inline std::complex<double> riccati_phi(const BajdParams& p, double t, std::complex<double> u) {
  detail::check_params(p);
  detail::require_domain(t >= 0.0, "riccati_phi: requires t >= 0");
  if (!(u.real() <= 0.0)) {
    detail::require_domain(u.imag() == 0.0 && u.real() < mgf_domain(p, t),
                           "riccati_phi: requires Re u <= 0 or real u in the transform domain");
  }
  const double m = -std::expm1(-p.a * t);
  const std::complex<double> denom = 1.0 - (p.sigma * p.sigma / (2.0 * p.a)) * u * m;
  const std::complex<double> diffusion_part =
      -(2.0 * p.a * p.theta / (p.sigma * p.sigma)) * std::log(denom);
  const double delta = p.delta();
  if (delta_regime(p) == DeltaRegime::zero) {
    return diffusion_part + p.c * u * m / (p.a * (p.d - u));
  }
  const std::complex<double> jump_part =
      (p.c / delta) * detail::log1p_complex(u * (delta / p.a) * m / (p.d - u));
  return diffusion_part + jump_part;
}

/// Right-hand sides of the generalized Riccati system:
/// d/dt psi = sigma^2 psi^2 / 2 - a psi and d/dt phi = a theta psi + c psi/(d-psi).
inline std::complex<double> riccati_rate_psi(const BajdParams& p, std::complex<double> u) {
  return 0.5 * p.sigma * p.sigma * u * u - p.a * u;
}

inline std::complex<double> riccati_rate_phi(const BajdParams& p, std::complex<double> u) {
  return p.a * p.theta * u + p.c * u / (p.d - u);
}

/// E_x[e^{u X_t}] = exp(phi(t,u) + x psi(t,u)).
inline std::complex<double> bajd_cf(const BajdParams& p, double t, double x,
                                    std::complex<double> u) {
  detail::require_domain(x >= 0.0, "bajd_cf: requires x >= 0");
  detail::check_cf_argument(p, t, u);
  return std::exp(riccati_phi(p, t, u) + x * riccati_psi(p, t, u));
}

/// Real transform E_x[e^{u X_t}] for u < mgf_domain(p, t); used by the
/// Foster-Lyapunov checks, which need u > 0.
inline double bajd_mgf(const BajdParams& p, double t, double x, double u) {
  detail::check_params(p);
  detail::require_domain(x >= 0.0, "bajd_mgf: requires x >= 0");
  detail::require_domain(t >= 0.0, "bajd_mgf: requires t >= 0");
  detail::require_domain(u < mgf_domain(p, t), "bajd_mgf: u at or beyond the transform domain");
  const double m = -std::expm1(-p.a * t);
  const double denom = 1.0 - (p.sigma * p.sigma / (2.0 * p.a)) * u * m;
  const double psi = u * std::exp(-p.a * t) / denom;
  const double diffusion_part = -(2.0 * p.a * p.theta / (p.sigma * p.sigma)) * std::log(denom);
  const double delta = p.delta();
  double jump_part;
  if (delta_regime(p) == DeltaRegime::zero) {
    jump_part = p.c * u * m / (p.a * (p.d - u));
  } else {
    jump_part = (p.c / delta) * std::log1p(u * (delta / p.a) * m / (p.d - u));
  }
  return std::exp(diffusion_part + jump_part + x * psi);
}

/// The law nu_t by which the CIR transition law is convolved to produce the
/// BAJD transition law; a Bessel mixture in the delta != 0 regimes and a plain
/// Bessel law when delta = 0.
struct JumpConvolutionLaw {
  DeltaRegime regime;
  std::variant<BesselMixtureLaw, BesselLaw> law;
  double L1;

  double atom() const {
    if (regime == DeltaRegime::zero) return bessel_atom(std::get<BesselLaw>(law));
    return mixture_atom(std::get<BesselMixtureLaw>(law));
  }

  std::complex<double> cf(std::complex<double> u) const {
    if (regime == DeltaRegime::zero) return bessel_cf(std::get<BesselLaw>(law), u);
    return mixture_cf(std::get<BesselMixtureLaw>(law), u);
  }

  double mgf(double u) const {
    if (regime == DeltaRegime::zero) return bessel_mgf(std::get<BesselLaw>(law), u);
    return mixture_mgf(std::get<BesselMixtureLaw>(law), u);
  }

  /// Abscissa at which the transform diverges; also the exponential decay
  /// rate of the continuous-part tail.
  double mgf_pole() const {
    if (regime == DeltaRegime::zero) return std::get<BesselLaw>(law).beta;
    const auto& m = std::get<BesselMixtureLaw>(law);
    return m.beta / (1.0 + m.alpha);
  }

  double continuous_pdf(double z, const SeriesControl& ctl = {}) const {
    if (regime == DeltaRegime::zero) return bessel_pdf(std::get<BesselLaw>(law), z, ctl);
    return mixture_pdf(std::get<BesselMixtureLaw>(law), z, ctl);
  }

  double mean() const {
    if (regime == DeltaRegime::zero) {
      const auto& b = std::get<BesselLaw>(law);
      return b.alpha / b.beta;
    }
    const auto& m = std::get<BesselMixtureLaw>(law);
    return m.gamma * m.alpha / m.beta;
  }

  double variance() const {
    if (regime == DeltaRegime::zero) {
      const auto& b = std::get<BesselLaw>(law);
      return 2.0 * b.alpha / (b.beta * b.beta);
    }
    const auto& m = std::get<BesselMixtureLaw>(law);
    return (m.gamma * m.alpha + m.gamma * m.alpha * (1.0 + m.alpha)) / (m.beta * m.beta);
  }

  double sample(std::mt19937_64& rng) const {
    if (regime == DeltaRegime::zero) return sample_bessel(std::get<BesselLaw>(law), rng);
    return sample_mixture(std::get<BesselMixtureLaw>(law), rng);
  }
};

/// Branch selection by the sign of delta, with |delta| <= kZeroDeltaTolerance*a
/// collapsed onto the delta = 0 law.
inline JumpConvolutionLaw jump_law(const BajdParams& p, double t) {
  detail::check_params(p);
  detail::require_domain(t > 0.0, "jump_law: requires t > 0");
  const double m = -std::expm1(-p.a * t);
  const double delta = p.delta();
  const double one_minus_L1 = (delta / p.a) * m;
  const double L1 = 1.0 - one_minus_L1;
  switch (delta_regime(p)) {
    case DeltaRegime::positive:
      return {DeltaRegime::positive,
              BesselMixtureLaw{one_minus_L1 / L1, p.d / L1, p.c / delta}, L1};
    case DeltaRegime::negative:
      return {DeltaRegime::negative, BesselMixtureLaw{-one_minus_L1, p.d, -p.c / delta}, L1};
    case DeltaRegime::zero:
    default:
      return {DeltaRegime::zero, BesselLaw{(p.c / p.a) * m, p.d}, L1};
  }
}

/// The unified decomposition nu_t = L(t) delta_0 + h(t,z)dz of the jump
/// convolution law; h is continuous on [0,inf) and integrates to 1 - L(t).
struct UnifiedKernel {
  double L;
  std::function<double(double)> h;
  double jump_mean;
  double jump_sd;
  double tail_rate;
};

namespace detail {

inline UnifiedKernel make_unified_kernel(const JumpConvolutionLaw& law,
                                         const SeriesControl& ctl) {
  UnifiedKernel kernel;
  kernel.L = law.atom();
  kernel.jump_mean = law.mean();
  kernel.jump_sd = std::sqrt(law.variance());
  kernel.tail_rate = law.mgf_pole();
  if (law.regime == DeltaRegime::zero) {
    const BesselLaw b = std::get<BesselLaw>(law.law);
    kernel.h = [b, ctl](double z) {
      if (z == 0.0) return b.alpha * b.beta * std::exp(-b.alpha);
      return bessel_pdf(b, z, ctl);
    };
  } else {
    const BesselMixtureLaw m = std::get<BesselMixtureLaw>(law.law);
    std::vector<double> weights = nb_weight_table(m.alpha, m.gamma, ctl);
    kernel.h = [m, weights = std::move(weights)](double z) {
      return mixture_series_value(m.beta, weights, z);
    };
  }
  return kernel;
}

}  // namespace detail

inline UnifiedKernel unified_kernel(const BajdParams& p, double t, const SeriesControl& ctl = {}) {
  return detail::make_unified_kernel(jump_law(p, t), ctl);
}

namespace detail {

// int_0^y base(w) h(y-w) dw with base(w) ~ w^q near w = 0. The interval is
// split at y/2; the singular half gets the power-law substitution when q < 0.
template <class BasePdf, class Kernel>
double convolve_with_kernel(BasePdf&& base, double q, Kernel&& h, double y,
                            const QuadratureControl& quad) {
  if (y == 0.0) return 0.0;
  auto f = [&](double w) { return base(w) * h(y - w); };
  const double mid = 0.5 * y;
  const double upper = integrate(f, mid, y, quad);
  const double lower = q < 0.0 ? integrate_power_endpoint(f, 0.0, mid, q, quad)
                               : integrate(f, 0.0, mid, quad);
  return lower + upper;
}

}  // namespace detail

/// F(t,x,y) = int_0^y f(t,x,y-z) h(t,z) dz, the continuous convolution part of
/// the transition density. F(t,x,0) = 0 and F <= C y^{2 a theta / sigma^2} for
/// small y.
inline double convolve_F(const BajdParams& p, double t, double x, double y,
                         const QuadratureControl& quad = {}, const SeriesControl& ctl = {}) {
  detail::require_domain(y >= 0.0, "convolve_F: requires y >= 0");
  if (y == 0.0) return 0.0;
  const UnifiedKernel kernel = unified_kernel(p, t, ctl);
  const double q = 2.0 * p.a * p.theta / (p.sigma * p.sigma) - 1.0;
  const CirParams cir = p.cir();
  return detail::convolve_with_kernel(
      [&](double w) { return cir_pdf(cir, t, x, w, ctl); }, q, kernel.h, y, quad);
}

/// Transition density engine for fixed (t, x); builds the jump kernel once and
/// evaluates p(t,x,y) = L(t) f(t,x,y) + F(t,x,y) per point.
class TransitionDensity {
 public:
  TransitionDensity(const BajdParams& p, double t, double x, QuadratureControl quad = {},
                    SeriesControl series = {})
      : params_(p),
        t_(t),
        x_(x),
        quad_(quad),
        series_(series),
        kernel_(unified_kernel(p, t, series)),
        scalars_(cir_kernel_scalars(p.cir(), t, x, 0.0)) {}

  double operator()(double y) const {
    detail::require_domain(y >= 0.0, "bajd_pdf: requires y >= 0");
    const double base = cir_pdf(params_.cir(), t_, x_, y, series_);
    if (y == 0.0) return kernel_.L * base;
    const CirParams cir = params_.cir();
    const double conv = detail::convolve_with_kernel(
        [&](double w) { return cir_pdf(cir, t_, x_, w, series_); }, scalars_.q, kernel_.h, y,
        quad_);
    return kernel_.L * base + conv;
  }

  const UnifiedKernel& kernel() const { return kernel_; }
  const BajdParams& params() const { return params_; }
  double t() const { return t_; }
  double x() const { return x_; }

  double mean() const {
    const double decay = std::exp(-params_.a * t_);
    return params_.theta + (x_ - params_.theta) * decay + kernel_.jump_mean;
  }

  /// Point beyond which the density is below ~1e-18 of scale; integrating over
  /// [0, upper_cutoff()] captures the full mass to quadrature accuracy.
  double upper_cutoff() const {
    // Solves rho*y - 2 sqrt(u_nc rho y) = 42 + margin for the diffusion part;
    // the jump part adds its own mean, spread, and envelope extent.
    const double u = scalars_.u_nc;
    const double budget = 42.0 + 2.0 * std::max(scalars_.q, 0.0);
    const double root = std::sqrt(u) + std::sqrt(u + budget);
    const double diffusion_cut = root * root / scalars_.rho;
    const double jump_cut =
        2.0 * kernel_.jump_mean + 8.0 * kernel_.jump_sd + 42.0 / kernel_.tail_rate;
    return diffusion_cut + jump_cut;
  }

 private:
  BajdParams params_;
  double t_;
  double x_;
  QuadratureControl quad_;
  SeriesControl series_;
  UnifiedKernel kernel_;
  CirKernelScalars scalars_;
};

/// p(t,x,y); strictly positive for y > 0 and integrates to one over [0,inf).
inline double bajd_pdf(const BajdParams& p, double t, double x, double y,
                       const QuadratureControl& quad = {}, const SeriesControl& ctl = {}) {
  return TransitionDensity(p, t, x, quad, ctl)(y);
}

/// Density of the transition law with respect to the supporting measure
/// eta(dy) = kappa(y) dy, kappa(y) = y^{2 a theta/sigma^2 - 1} on (0,1] and 1
/// beyond; finite and strictly positive for all y >= 0.
inline double weighted_pdf(const BajdParams& p, double t, double x, double y,
                           const QuadratureControl& quad = {}, const SeriesControl& ctl = {}) {
  detail::check_params(p);
  detail::require_domain(y >= 0.0, "weighted_pdf: requires y >= 0");
  const double q = 2.0 * p.a * p.theta / (p.sigma * p.sigma) - 1.0;
  if (y > 1.0) return bajd_pdf(p, t, x, y, quad, ctl);
  if (y == 0.0) {
    const CirKernelScalars s = cir_kernel_scalars(p.cir(), t, x, 0.0);
    const UnifiedKernel kernel = unified_kernel(p, t, ctl);
    return kernel.L *
           std::exp((s.q + 1.0) * std::log(s.rho) - s.u_nc - std::lgamma(s.q + 1.0));
  }
  return bajd_pdf(p, t, x, y, quad, ctl) / std::pow(y, q);
}

/// Exact transition draw as the convolution of a CIR draw and a nu_t draw.
inline double sample_bajd(const BajdParams& p, double t, double x, std::mt19937_64& rng) {
  detail::check_params(p);
  return sample_cir(p.cir(), t, x, rng) + jump_law(p, t).sample(rng);
}

/// One evaluated density slice: ascending state grid with the density values.
struct DensityGrid {
  double t;
  double x;
  std::vector<double> ys;
  std::vector<double> values;
};

inline DensityGrid density_grid(const BajdParams& p, double t, double x, std::vector<double> ys,
                                const QuadratureControl& quad = {},
                                const SeriesControl& ctl = {}) {
  detail::require_arg(!ys.empty(), "density_grid: requires a nonempty grid");
  for (std::size_t i = 1; i < ys.size(); ++i) {
    detail::require_arg(ys[i] > ys[i - 1], "density_grid: grid must be ascending");
  }
  TransitionDensity density(p, t, x, quad, ctl);
  DensityGrid grid{t, x, std::move(ys), {}};
  grid.values.reserve(grid.ys.size());
  for (double y : grid.ys) grid.values.push_back(density(y));
  return grid;
}

}  // namespace bajd
