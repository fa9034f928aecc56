#pragma once

#include <cmath>
#include <complex>

#include "bajd/cir.hpp"
#include "bajd/transition.hpp"

namespace bajd {

/// The t -> infinity limit of the jump convolution law: the component by which
/// the stationary Gamma law of the CIR part is convolved to produce the
/// invariant law of the BAJD.
inline JumpConvolutionLaw invariant_jump_law(const BajdParams& p) {
  detail::check_params(p);
  const double delta = p.delta();
  const double L1 = 1.0 - delta / p.a;  // = sigma^2 d / (2a)
  switch (delta_regime(p)) {
    case DeltaRegime::positive:
      return {DeltaRegime::positive,
              BesselMixtureLaw{delta / (p.a - delta), 2.0 * p.a / (p.sigma * p.sigma),
                               p.c / delta},
              L1};
    case DeltaRegime::negative:
      return {DeltaRegime::negative, BesselMixtureLaw{-delta / p.a, p.d, -p.c / delta}, L1};
    case DeltaRegime::zero:
    default:
      return {DeltaRegime::zero, BesselLaw{p.c / p.a, p.d}, L1};
  }
}

/// Characteristic function of the invariant measure pi.
inline std::complex<double> invariant_cf(const BajdParams& p, std::complex<double> u) {
  detail::check_params(p);
  if (!(u.real() <= 0.0)) {
    detail::require_domain(
        u.imag() == 0.0 && u.real() < std::min(p.d, 2.0 * p.a / (p.sigma * p.sigma)),
        "invariant_cf: requires Re u <= 0 or real u < min(d, 2a/sigma^2)");
  }
  const std::complex<double> denom = 1.0 - (p.sigma * p.sigma / (2.0 * p.a)) * u;
  const std::complex<double> diffusion_part =
      -(2.0 * p.a * p.theta / (p.sigma * p.sigma)) * std::log(denom);
  const double delta = p.delta();
  if (delta_regime(p) == DeltaRegime::zero) {
    return std::exp(diffusion_part + p.c * u / (p.a * (p.d - u)));
  }
  const std::complex<double> jump_part =
      (p.c / delta) * detail::log1p_complex(u * (delta / p.a) / (p.d - u));
  return std::exp(diffusion_part + jump_part);
}

/// Real transform of pi for u < min(d, 2a/sigma^2).
inline double invariant_mgf(const BajdParams& p, double u) {
  detail::check_params(p);
  detail::require_domain(u < std::min(p.d, 2.0 * p.a / (p.sigma * p.sigma)),
                         "invariant_mgf: u at or beyond the transform domain");
  const double denom = 1.0 - (p.sigma * p.sigma / (2.0 * p.a)) * u;
  const double diffusion_part = -(2.0 * p.a * p.theta / (p.sigma * p.sigma)) * std::log(denom);
  const double delta = p.delta();
  if (delta_regime(p) == DeltaRegime::zero) {
    return std::exp(diffusion_part + p.c * u / (p.a * (p.d - u)));
  }
  return std::exp(diffusion_part + (p.c / delta) * std::log1p(u * (delta / p.a) / (p.d - u)));
}

/// Density l(y) of the invariant measure: the stationary Gamma density of the
/// CIR part convolved with the limiting jump law, evaluated with the same
/// kernel decomposition as the transition density.
class InvariantDensity {
 public:
  explicit InvariantDensity(const BajdParams& p, QuadratureControl quad = {},
                            SeriesControl series = {})
      : params_(p),
        quad_(quad),
        series_(series),
        base_(cir_stationary(p.cir())),
        kernel_(detail::make_unified_kernel(invariant_jump_law(p), series)) {}

  double operator()(double y) const {
    detail::require_domain(y >= 0.0, "invariant_pdf: requires y >= 0");
    const double base = gamma_pdf(y, base_.shape, base_.rate);
    if (y == 0.0) return kernel_.L * base;
    const double conv = detail::convolve_with_kernel(
        [&](double w) { return gamma_pdf(w, base_.shape, base_.rate); }, base_.shape - 1.0,
        kernel_.h, y, quad_);
    return kernel_.L * base + conv;
  }

  const UnifiedKernel& kernel() const { return kernel_; }
  const GammaLaw& stationary_base() const { return base_; }

  double mean() const { return base_.shape / base_.rate + kernel_.jump_mean; }

  double upper_cutoff() const {
    const double diffusion_cut = (2.0 * base_.shape + 46.0) / base_.rate;
    const double jump_cut =
        2.0 * kernel_.jump_mean + 8.0 * kernel_.jump_sd + 42.0 / kernel_.tail_rate;
    return diffusion_cut + jump_cut;
  }

 private:
  BajdParams params_;
  QuadratureControl quad_;
  SeriesControl series_;
  GammaLaw base_;
  UnifiedKernel kernel_;
};

inline double invariant_pdf(const BajdParams& p, double y, const QuadratureControl& quad = {},
                            const SeriesControl& ctl = {}) {
  return InvariantDensity(p, quad, ctl)(y);
}

}  // namespace bajd
