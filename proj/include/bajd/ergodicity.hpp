#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "bajd/invariant.hpp"
#include "bajd/quadrature.hpp"
#include "bajd/transition.hpp"

namespace bajd {

/// A function with its first two derivatives, as needed by the generator.
struct TwiceDifferentiable {
  std::function<double(double)> value;
  std::function<double(double)> first;
  std::function<double(double)> second;
};

/// Applies the BAJD generator
///   A g(x) = (sigma^2 x / 2) g'' + (a theta - a x) g'
///            + c d int_0^inf (g(x+s) - g(x)) e^{-d s} ds
/// with the jump integral evaluated by exponential-tail quadrature. Divergence
/// of the integral (g of exponential order >= d) is detected and signaled.
inline double generator_apply(const BajdParams& p, const TwiceDifferentiable& g, double x,
                              const QuadratureControl& quad = {}) {
  detail::check_params(p);
  detail::require_domain(x >= 0.0, "generator_apply: requires x >= 0");
  const double diffusion =
      0.5 * p.sigma * p.sigma * x * g.second(x) + (p.a * p.theta - p.a * x) * g.first(x);
  const double gx = g.value(x);
  auto integrand = [&](double s) { return (g.value(x + s) - gx) * std::exp(-p.d * s); };
  const double extent = exponential_tail_extent(p.d);
  double jump_integral = integrate(integrand, 0.0, extent, quad);
  // The envelope argument only bounds the tail when the integrand decays;
  // probe two more panels and require decay between them.
  const double tail_1 = integrate(integrand, extent, 2.0 * extent, quad);
  const double floor = std::max(quad.abs_tol, quad.rel_tol * std::abs(jump_integral));
  if (std::abs(tail_1) > 10.0 * floor) {
    const double tail_2 = integrate(integrand, 2.0 * extent, 3.0 * extent, quad);
    if (std::abs(tail_2) >= std::abs(tail_1)) {
      throw NonConvergenceError("generator_apply: jump integral diverges for this function");
    }
    jump_integral += tail_1 + tail_2;
  } else {
    jump_integral += tail_1;
  }
  return diffusion + p.c * p.d * jump_integral;
}

/// A V(x) for V(x) = e^{gamma x} in closed form:
///   gamma e^{gamma x} ((sigma^2 gamma / 2 - a) x + a theta + c/(d - gamma)).
inline double generator_on_exponential(const BajdParams& p, double gamma, double x) {
  detail::check_params(p);
  detail::require_domain(gamma > 0.0 && gamma < p.d,
                         "generator_on_exponential: requires 0 < gamma < d");
  return gamma * std::exp(gamma * x) *
         ((0.5 * p.sigma * p.sigma * gamma - p.a) * x + p.a * p.theta + p.c / (p.d - gamma));
}

/// Foster-Lyapunov certificate for V(x) = e^{gamma x}: A V <= -k V + M with
/// k = 1 (the crossover x_star is chosen so the drift equals -V there).
struct DriftCertificate {
  double gamma;
  double k;
  double M;
  double x_star;
};

inline DriftCertificate build_certificate(const BajdParams& p, double gamma) {
  detail::check_params(p);
  detail::require_domain(gamma > 0.0 && gamma < p.d &&
                             0.5 * p.sigma * p.sigma * gamma < p.a,
                         "build_certificate: infeasible gamma");
  const double slope = p.a - 0.5 * p.sigma * p.sigma * gamma;
  const double level = p.a * p.theta + p.c / (p.d - gamma);
  const double x_star = (level + 1.0 / gamma) / slope;
  const double M = std::exp(gamma * x_star) * (1.0 + gamma * level);
  detail::require_domain(std::isfinite(M), "build_certificate: infeasible gamma (M overflows)");
  return {gamma, 1.0, M, x_star};
}

/// Exponent used when none is supplied: halfway into the region where the
/// certificate is feasible and the transform stays defined for every t.
inline double default_drift_exponent(const BajdParams& p) {
  detail::check_params(p);
  return 0.5 * std::min(p.d, 2.0 * p.a / (p.sigma * p.sigma));
}

struct SemigroupDriftBound {
  double lhs;
  double rhs;
  bool pass;
};

/// Checks E_x[V(X_t)] <= e^{-kt} V(x) + M/k through the closed-form transform.
inline SemigroupDriftBound semigroup_drift_check(const BajdParams& p,
                                                 const DriftCertificate& cert, double t,
                                                 double x) {
  const double lhs = bajd_mgf(p, t, x, cert.gamma);
  const double rhs = std::exp(cert.gamma * x - cert.k * t) + cert.M / cert.k;
  return {lhs, rhs, lhs <= rhs * (1.0 + 1e-12)};
}

/// Total variation distance between the time-t transition law from x and the
/// invariant law, computed as half the L1 distance of the densities (the
/// sup-over-sets norm of a difference of probability measures equals half the
/// L1 norm).
inline double tv_distance(const BajdParams& p, double t, double x,
                          const QuadratureControl& quad = {}, const SeriesControl& ctl = {}) {
  const TransitionDensity transient(p, t, x, quad, ctl);
  const InvariantDensity stationary(p, quad, ctl);
  const double y_max = std::max(transient.upper_cutoff(), stationary.upper_cutoff());
  const double q = 2.0 * p.a * p.theta / (p.sigma * p.sigma) - 1.0;
  auto diff = [&](double y) { return std::abs(transient(y) - stationary(y)); };
  const double split = std::min(1.0, y_max / 16.0);
  const double head = q < 0.0 ? integrate_power_endpoint(diff, 0.0, split, q, quad)
                              : integrate(diff, 0.0, split, quad);
  const double body = integrate(diff, split, y_max, quad);
  return std::clamp(0.5 * (head + body), 0.0, 1.0);
}

/// Least-squares fit of log TV against t: TV(t) ~ c_hat * beta_hat^t.
struct DecayFit {
  double beta_hat;
  double c_hat;
  double r2;
  std::vector<double> t_grid;
  std::vector<double> tv_values;
  std::size_t excluded = 0;  // nonpositive TV values dropped from the fit
};

inline DecayFit fit_decay_from_values(std::vector<double> t_grid,
                                      std::vector<double> tv_values) {
  detail::require_arg(t_grid.size() == tv_values.size(),
                      "fit_decay: t_grid and tv_values must have equal length");
  detail::require_arg(t_grid.size() >= 4, "fit_decay: requires at least 4 points");
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    detail::require_arg(t_grid[i] > t_grid[i - 1], "fit_decay: t_grid must be strictly ascending");
  }
  std::vector<double> ts;
  std::vector<double> logs;
  std::size_t excluded = 0;
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (tv_values[i] > 0.0) {
      ts.push_back(t_grid[i]);
      logs.push_back(std::log(tv_values[i]));
    } else {
      ++excluded;
    }
  }
  detail::require_arg(ts.size() >= 4, "fit_decay: fewer than 4 positive TV values");
  const double n = static_cast<double>(ts.size());
  double st = 0.0, sl = 0.0, stt = 0.0, stl = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    st += ts[i];
    sl += logs[i];
    stt += ts[i] * ts[i];
    stl += ts[i] * logs[i];
  }
  const double slope = (n * stl - st * sl) / (n * stt - st * st);
  const double intercept = (sl - slope * st) / n;
  double ss_res = 0.0, ss_tot = 0.0;
  const double mean_log = sl / n;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double fit = intercept + slope * ts[i];
    ss_res += (logs[i] - fit) * (logs[i] - fit);
    ss_tot += (logs[i] - mean_log) * (logs[i] - mean_log);
  }
  DecayFit fit;
  fit.beta_hat = std::exp(slope);
  fit.c_hat = std::exp(intercept);
  fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 0.0;
  fit.t_grid = std::move(t_grid);
  fit.tv_values = std::move(tv_values);
  fit.excluded = excluded;
  if (!(fit.beta_hat < 1.0)) {
    throw NonConvergenceError("fit_decay: fitted decay base is not below one");
  }
  return fit;
}

inline DecayFit fit_decay(const BajdParams& p, double x, const std::vector<double>& t_grid,
                          const QuadratureControl& quad = {}, const SeriesControl& ctl = {}) {
  std::vector<double> tvs;
  tvs.reserve(t_grid.size());
  for (double t : t_grid) tvs.push_back(tv_distance(p, t, x, quad, ctl));
  return fit_decay_from_values(t_grid, std::move(tvs));
}

}  // namespace bajd
