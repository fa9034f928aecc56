#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "bajd/errors.hpp"

namespace bajd {

/// Tolerances for the adaptive Gauss-Kronrod integrator. Refinement stops when
/// the summed error estimate is below max(abs_tol, rel_tol * L1), with L1 the
/// integral of |f|, so oscillatory and small-magnitude integrals both get
/// meaningful control.
struct QuadratureControl {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  unsigned max_intervals = 2000;
};

namespace detail {

// (G7, K15) abscissae (positive half) and weights.
inline constexpr double kGk15Nodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr double kGk15Weights[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kGauss7Weights[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct QuadraturePanel {
  double a;
  double b;
  double integral;
  double error;
  double l1;
};

// Single (G7, K15) rule application with the QUADPACK error sharpening.
template <class F>
QuadraturePanel gk15_panel(F&& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double values[15];
  values[7] = f(center);
  for (int i = 0; i < 7; ++i) {
    values[i] = f(center - half * kGk15Nodes[i]);
    values[14 - i] = f(center + half * kGk15Nodes[i]);
  }
  double kronrod = kGk15Weights[7] * values[7];
  double l1 = kGk15Weights[7] * std::abs(values[7]);
  for (int i = 0; i < 7; ++i) {
    kronrod += kGk15Weights[i] * (values[i] + values[14 - i]);
    l1 += kGk15Weights[i] * (std::abs(values[i]) + std::abs(values[14 - i]));
  }
  double gauss = kGauss7Weights[3] * values[7];
  for (int i = 0; i < 3; ++i) {
    gauss += kGauss7Weights[i] * (values[2 * i + 1] + values[13 - 2 * i]);
  }
  const double mean = 0.5 * kronrod;
  double resasc = kGk15Weights[7] * std::abs(values[7] - mean);
  for (int i = 0; i < 7; ++i) {
    resasc += kGk15Weights[i] *
              (std::abs(values[i] - mean) + std::abs(values[14 - i] - mean));
  }
  resasc *= half;
  const double raw = std::abs(kronrod - gauss) * half;
  double error = raw;
  if (resasc != 0.0 && raw != 0.0) {
    error = resasc * std::min(1.0, std::pow(200.0 * raw / resasc, 1.5));
  }
  error = std::max(error, 1.1e-14 * l1 * half);
  return {a, b, kronrod * half, error, l1 * half};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (G7, K15) on [a, b]: the panel with the
/// largest error estimate is bisected until the summed estimate certifies the
/// tolerance. Throws QuadratureError carrying the best value and the achieved
/// estimate when the interval budget runs out first.
template <class F>
double integrate(F&& f, double a, double b, const QuadratureControl& ctl = {}) {
  detail::require_arg(std::isfinite(a) && std::isfinite(b), "integrate: bounds must be finite");
  if (a == b) return 0.0;
  detail::require_arg(a < b, "integrate: requires a < b");
  auto worse = [](const detail::QuadraturePanel& lhs, const detail::QuadraturePanel& rhs) {
    return lhs.error < rhs.error;
  };
  std::vector<detail::QuadraturePanel> panels;
  panels.reserve(64);
  panels.push_back(detail::gk15_panel(f, a, b));
  double err_sum = panels[0].error;
  double l1_sum = panels[0].l1;
  const double width_floor = 1e-15 * (std::abs(a) + std::abs(b) + 1.0);
  while (err_sum > std::max(ctl.abs_tol, ctl.rel_tol * l1_sum) &&
         panels.size() < ctl.max_intervals) {
    std::pop_heap(panels.begin(), panels.end(), worse);
    const detail::QuadraturePanel worst = panels.back();
    panels.pop_back();
    if (worst.b - worst.a < width_floor) {
      panels.push_back(worst);
      std::push_heap(panels.begin(), panels.end(), worse);
      break;
    }
    const double mid = 0.5 * (worst.a + worst.b);
    const auto left = detail::gk15_panel(f, worst.a, mid);
    const auto right = detail::gk15_panel(f, mid, worst.b);
    err_sum += left.error + right.error - worst.error;
    l1_sum += left.l1 + right.l1 - worst.l1;
    panels.push_back(left);
    std::push_heap(panels.begin(), panels.end(), worse);
    panels.push_back(right);
    std::push_heap(panels.begin(), panels.end(), worse);
  }
  double value = 0.0;
  err_sum = 0.0;
  l1_sum = 0.0;
  for (const auto& panel : panels) {
    value += panel.integral;
    err_sum += panel.error;
    l1_sum += panel.l1;
  }
  if (err_sum > std::max(ctl.abs_tol, ctl.rel_tol * l1_sum)) {
    throw QuadratureError("integrate: tolerance not reached", value, err_sum);
  }
  return value;
}

/// Complex-valued integrand, integrated component-wise.
template <class F>
std::complex<double> integrate_complex(F&& f, double a, double b,
                                       const QuadratureControl& ctl = {}) {
  const double re = integrate([&](double x) { return f(x).real(); }, a, b, ctl);
  const double im = integrate([&](double x) { return f(x).imag(); }, a, b, ctl);
  return {re, im};
}

/// Integrates f over [a,b] when f(w) ~ (w-a)^q near the left endpoint with
/// q in (-1,0). The substitution w = a + s^{1/(q+1)} removes the singularity:
/// the transformed integrand is bounded at s = 0.
template <class F>
double integrate_power_endpoint(F&& f, double a, double b, double q,
                                const QuadratureControl& ctl = {}) {
  detail::require_arg(q > -1.0 && q < 0.0, "integrate_power_endpoint: requires q in (-1,0)");
  if (a == b) return 0.0;
  detail::require_arg(a < b, "integrate_power_endpoint: requires a < b");
  const double p = 1.0 / (q + 1.0);
  const double s_max = std::pow(b - a, 1.0 / p);
  auto g = [&](double s) {
    const double w = a + std::pow(s, p);
    return f(w) * p * std::pow(s, p - 1.0);
  };
  return integrate(g, 0.0, s_max, ctl);
}

/// Distance over which an exp(-rate * y) envelope falls below 1e-16 of its
/// starting value; used to truncate improper integrals over [0, inf).
inline double exponential_tail_extent(double rate) {
  detail::require_arg(rate > 0.0, "exponential_tail_extent: requires rate > 0");
  return 38.0 / rate;
}

}  // namespace bajd
