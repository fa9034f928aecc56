#pragma once

// The acceptance suite: every release gate expressed as an executable check
// with its tolerance pinned in code. Both the acceptance test binary and the
// CLI `validate` command run this.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "bajd/ergodicity.hpp"
#include "bajd/invariant.hpp"
#include "bajd/simulate.hpp"
#include "bajd/transition.hpp"

namespace bajd {

struct CriterionResult {
  int id;
  std::string name;
  bool pass;
  std::string detail;
  double seconds;
};

struct ValidationConfig {
  BajdParams params{1.0, 1.0, 1.0, 1.0, 1.0};
  unsigned threads = 0;  // 0: use BAJD_THREADS or hardware concurrency
};

namespace detail {

inline unsigned thread_budget(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("BAJD_THREADS")) {
    const long parsed = std::strtol(env, nullptr, 10);
    if (parsed > 0) return static_cast<unsigned>(parsed);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& body) {
  if (n == 0) return;
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

// The three regime-spanning parameter sets the criteria pin down.
inline std::vector<BajdParams> regime_parameter_sets() {
  return {{1.0, 1.0, 1.0, 1.0, 1.0},
          {1.0, 1.0, 2.0, 1.0, 2.0},
          {1.0, 1.0, std::sqrt(2.0), 1.0, 1.0}};
}

inline const char* regime_label(const BajdParams& p) {
  switch (delta_regime(p)) {
    case DeltaRegime::positive: return "delta>0";
    case DeltaRegime::negative: return "delta<0";
    default: return "delta=0";
  }
}

// int_0^cutoff g(y) p(y) dy with the y^q head handled by the power-law
// substitution; built on the library's adaptive integrator.
template <class Density, class G>
double integrate_density(const Density& density, double q, double y_max, G&& g,
                         const QuadratureControl& ctl) {
  auto f = [&](double y) { return g(y) * density(y); };
  const double split = std::min(1.0, y_max / 16.0);
  const double head = q < 0.0 ? integrate_power_endpoint(f, 0.0, split, q, ctl)
                              : integrate(f, 0.0, split, ctl);
  return head + integrate(f, split, y_max, ctl);
}

// Piecewise-linear quadrature CDF on a grid, uniform in y, or uniform in
// s = y^{q+1} when the density has an integrable y^q singularity.
class QuadratureCdf {
 public:
  template <class Density>
  QuadratureCdf(const Density& density, double y_max, int cells, double q) {
    ys_.resize(cells + 1);
    cdf_.resize(cells + 1);
    ys_[0] = 0.0;
    cdf_[0] = 0.0;
    if (q < 0.0) {
      const double pw = q + 1.0;
      const double hs = std::pow(y_max, pw) / cells;
      auto y_of = [&](double s) { return std::pow(s, 1.0 / pw); };
      auto g = [&](double s) {
        const double y = y_of(s);
        return density(y) * y / (pw * s);
      };
      ys_[1] = y_of(hs);
      cdf_[1] = density(ys_[1]) * ys_[1] / pw;
      for (int i = 1; i < cells; ++i) {
        const double sa = i * hs;
        const double sb = sa + hs;
        ys_[i + 1] = y_of(sb);
        cdf_[i + 1] = cdf_[i] + (g(sa) + 4.0 * g(0.5 * (sa + sb)) + g(sb)) * hs / 6.0;
      }
    } else {
      const double h = y_max / cells;
      ys_[1] = h;
      cdf_[1] = density(h) * h / (q + 1.0);
      for (int i = 1; i < cells; ++i) {
        const double a = i * h;
        const double b = a + h;
        ys_[i + 1] = b;
        cdf_[i + 1] =
            cdf_[i] + (density(a) + 4.0 * density(0.5 * (a + b)) + density(b)) * h / 6.0;
      }
    }
  }

  double operator()(double y) const {
    if (y <= 0.0) return 0.0;
    if (y >= ys_.back()) return std::min(cdf_.back(), 1.0);
    const auto it = std::upper_bound(ys_.begin(), ys_.end(), y);
    const std::size_t i = static_cast<std::size_t>(it - ys_.begin()) - 1;
    const double w = (y - ys_[i]) / (ys_[i + 1] - ys_[i]);
    return cdf_[i] + w * (cdf_[i + 1] - cdf_[i]);
  }

 private:
  std::vector<double> ys_;
  std::vector<double> cdf_;
};

inline double ks_statistic(std::vector<double> samples, const QuadratureCdf& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < samples.size()) {
    std::size_t j = i;
    while (j < samples.size() && samples[j] == samples[i]) ++j;
    const double f = cdf(samples[i]);
    d = std::max(d, std::abs(static_cast<double>(j) / n - f));
    d = std::max(d, std::abs(static_cast<double>(i) / n - (samples[i] == 0.0 ? 0.0 : f)));
    i = j;
  }
  return d;
}

inline double state_exponent(const BajdParams& p) {
  return 2.0 * p.a * p.theta / (p.sigma * p.sigma) - 1.0;
}

inline double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

constexpr double kKs1Percent = 1.6276236307187293;  // sqrt(-ln(0.005)/2)

template <class Body>
CriterionResult timed_criterion(int id, const std::string& name, Body&& body,
                                double runtime_limit = 0.0) {
  CriterionResult result{id, name, false, "", 0.0};
  const auto start = std::chrono::steady_clock::now();
  try {
    body(result);
  } catch (const std::exception& e) {
    result.pass = false;
    result.detail = std::string("exception: ") + e.what();
  }
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (runtime_limit > 0.0 && result.seconds > runtime_limit) {
    result.pass = false;
    char note[64];
    std::snprintf(note, sizeof(note), "; runtime limit %.0fs exceeded", runtime_limit);
    result.detail += note;
  }
  return result;
}

inline std::string scientific(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2e", v);
  return buf;
}

}  // namespace detail

/// 1. Finite-difference time derivatives of psi and phi match the generalized
/// Riccati right-hand sides to 1e-6 over the (t, u) grid.
inline CriterionResult check_riccati_consistency(const ValidationConfig& cfg) {
  return detail::timed_criterion(1, "riccati-consistency", [&](CriterionResult& r) {
    const BajdParams& p = cfg.params;
    std::vector<std::complex<double>> us;
    for (double ur = -5.0; ur <= -0.1; ur += 0.7) us.push_back({ur, 0.0});
    us.push_back({0.0, 1.0});
    us.push_back({0.0, -1.0});
    const double h = 1e-3;
    double worst = 0.0;
    for (double t = 0.1; t <= 5.0; t += 0.35) {
      for (const auto u : us) {
        auto dpsi = (-riccati_psi(p, t + 2 * h, u) + 8.0 * riccati_psi(p, t + h, u) -
                     8.0 * riccati_psi(p, t - h, u) + riccati_psi(p, t - 2 * h, u)) /
                    (12.0 * h);
        auto dphi = (-riccati_phi(p, t + 2 * h, u) + 8.0 * riccati_phi(p, t + h, u) -
                     8.0 * riccati_phi(p, t - h, u) + riccati_phi(p, t - 2 * h, u)) /
                    (12.0 * h);
        const auto psi_t = riccati_psi(p, t, u);
        worst = std::max(worst, std::abs(dpsi - riccati_rate_psi(p, psi_t)));
        worst = std::max(worst, std::abs(dphi - riccati_rate_phi(p, psi_t)));
      }
    }
    r.pass = worst <= 1e-6;
    r.detail = "max abs defect " + detail::scientific(worst) + " (tol 1e-06)";
  }, 1.0);
}

/// 2. The transition density integrates to one within 1e-7 at nine (t, x)
/// pairs in each delta regime.
inline CriterionResult check_density_normalization(const ValidationConfig& cfg) {
  return detail::timed_criterion(2, "density-normalization", [&](CriterionResult& r) {
    const auto regimes = detail::regime_parameter_sets();
    struct Item {
      BajdParams p;
      double t, x;
    };
    std::vector<Item> items;
    for (const auto& p : regimes) {
      for (double t : {0.25, 1.0, 4.0}) {
        for (double x : {0.0, 1.0, 5.0}) items.push_back({p, t, x});
      }
    }
    std::vector<double> defects(items.size());
    const QuadratureControl ctl{1e-10, 1e-13, 4000};
    detail::parallel_for(items.size(), detail::thread_budget(cfg.threads), [&](std::size_t i) {
      const TransitionDensity density(items[i].p, items[i].t, items[i].x, ctl);
      const double mass =
          detail::integrate_density(density, detail::state_exponent(items[i].p),
                                    density.upper_cutoff(), [](double) { return 1.0; }, ctl);
      defects[i] = std::abs(mass - 1.0);
    });
    const double worst = *std::max_element(defects.begin(), defects.end());
    r.pass = worst <= 1e-7;
    r.detail = "max |mass - 1| " + detail::scientific(worst) + " over 27 (t,x) pairs (tol 1e-07)";
  }, 30.0);
}

/// 3. The Fourier transform of the density matches the closed-form transform
/// at omega in {0.5, 1, 2, 5} for (t, x) = (1, 1) in every regime.
inline CriterionResult check_fourier_round_trip(const ValidationConfig& cfg) {
  return detail::timed_criterion(3, "fourier-round-trip", [&](CriterionResult& r) {
    const auto regimes = detail::regime_parameter_sets();
    const std::vector<double> omegas{0.5, 1.0, 2.0, 5.0};
    struct Item {
      BajdParams p;
      double omega;
    };
    std::vector<Item> items;
    for (const auto& p : regimes) {
      for (double w : omegas) items.push_back({p, w});
    }
    std::vector<double> defects(items.size());
    const QuadratureControl ctl{1e-10, 1e-13, 4000};
    detail::parallel_for(items.size(), detail::thread_budget(cfg.threads), [&](std::size_t i) {
      const auto& p = items[i].p;
      const double omega = items[i].omega;
      const TransitionDensity density(p, 1.0, 1.0, ctl);
      const double q = detail::state_exponent(p);
      const double y_max = density.upper_cutoff();
      const double re = detail::integrate_density(
          density, q, y_max, [&](double y) { return std::cos(omega * y); }, ctl);
      const double im = detail::integrate_density(
          density, q, y_max, [&](double y) { return std::sin(omega * y); }, ctl);
      defects[i] =
          std::abs(std::complex<double>(re, im) - bajd_cf(p, 1.0, 1.0, {0.0, omega}));
    });
    const double worst = *std::max_element(defects.begin(), defects.end());
    r.pass = worst <= 1e-6;
    r.detail = "max transform defect " + detail::scientific(worst) + " (tol 1e-06)";
  });
}

/// 4. The closed-form factorization of the transform into the diffusion part
/// and the jump part holds to 1e-10 at 20 random (t, x, u) per parameter set.
inline CriterionResult check_convolution_identity(const ValidationConfig& cfg) {
  return detail::timed_criterion(4, "convolution-identity", [&](CriterionResult& r) {
    std::vector<BajdParams> sets = detail::regime_parameter_sets();
    sets.push_back(cfg.params);
    std::mt19937_64 rng(0xBA1D0004);
    std::uniform_real_distribution<double> t_draw(0.05, 5.0);
    std::uniform_real_distribution<double> x_draw(0.0, 5.0);
    std::uniform_real_distribution<double> re_draw(-5.0, 0.0);
    std::uniform_real_distribution<double> im_draw(-5.0, 5.0);
    double worst = 0.0;
    for (const auto& p : sets) {
      for (int k = 0; k < 20; ++k) {
        const double t = t_draw(rng);
        const double x = x_draw(rng);
        const std::complex<double> u{re_draw(rng), im_draw(rng)};
        const auto lhs = bajd_cf(p, t, x, u);
        const auto rhs = cir_cf(p.cir(), t, x, u) * jump_law(p, t).cf(u);
        worst = std::max(worst, std::abs(lhs - rhs));
      }
    }
    r.pass = worst <= 1e-10;
    r.detail = "max factorization defect " + detail::scientific(worst) + " (tol 1e-10)";
  });
}

/// 5. Chapman-Kolmogorov: composing the density over an intermediate time
/// reproduces the direct density within 1e-4 relative, three points per regime.
inline CriterionResult check_chapman_kolmogorov(const ValidationConfig& cfg) {
  return detail::timed_criterion(5, "chapman-kolmogorov", [&](CriterionResult& r) {
    struct Item {
      BajdParams p;
      double s, t, x, y;
    };
    std::vector<Item> items;
    for (const auto& p : detail::regime_parameter_sets()) {
      items.push_back({p, 0.3, 0.5, 1.0, 1.2});
      items.push_back({p, 0.5, 0.5, 0.0, 2.0});
      items.push_back({p, 0.8, 0.4, 2.0, 0.7});
    }
    std::vector<double> defects(items.size());
    const QuadratureControl ctl{1e-8, 1e-12, 4000};
    detail::parallel_for(items.size(), detail::thread_budget(cfg.threads), [&](std::size_t i) {
      const auto& it = items[i];
      const double direct = bajd_pdf(it.p, it.s + it.t, it.x, it.y, ctl);
      const TransitionDensity first(it.p, it.s, it.x, ctl);
      const double composed = detail::integrate_density(
          first, detail::state_exponent(it.p), first.upper_cutoff(),
          [&](double z) { return bajd_pdf(it.p, it.t, z, it.y, ctl); }, ctl);
      defects[i] = std::abs(composed - direct) / direct;
    });
    const double worst = *std::max_element(defects.begin(), defects.end());
    r.pass = worst <= 1e-4;
    r.detail = "max relative defect " + detail::scientific(worst) + " (tol 1e-04)";
  }, 120.0);
}

/// 6. KS statistic between 1e5 exact transition draws and the quadrature CDF
/// stays below the 1% critical value in every regime.
inline CriterionResult check_sampler_law(const ValidationConfig& cfg) {
  return detail::timed_criterion(6, "exact-sampler-law", [&](CriterionResult& r) {
    const auto regimes = detail::regime_parameter_sets();
    const int n = 100000;
    const double critical = detail::kKs1Percent / std::sqrt(static_cast<double>(n));
    std::vector<double> ds(regimes.size());
    detail::parallel_for(regimes.size(), detail::thread_budget(cfg.threads), [&](std::size_t i) {
      const auto& p = regimes[i];
      const double t = 0.5, x = 1.0;
      const TransitionDensity density(p, t, x);
      const detail::QuadratureCdf cdf([&](double y) { return density(y); },
                                      density.upper_cutoff(), 4000,
                                      detail::state_exponent(p));
      std::mt19937_64 rng(0xBA1D0006 + i);
      std::vector<double> draws(n);
      for (int k = 0; k < n; ++k) draws[static_cast<std::size_t>(k)] = sample_bajd(p, t, x, rng);
      ds[i] = detail::ks_statistic(std::move(draws), cdf);
    });
    const double worst = *std::max_element(ds.begin(), ds.end());
    r.pass = worst < critical;
    r.detail = "max KS " + detail::scientific(worst) + " (critical " +
               detail::scientific(critical) + ", n = 1e5)";
  }, 60.0);
}

/// 7. Terminal law of 1e4 Euler paths (dt = 1e-3, T = 1) against the exact
/// density's CDF, within the KS critical value plus a 0.02 discretization
/// bias allowance.
inline CriterionResult check_euler_cross_check(const ValidationConfig& cfg) {
  return detail::timed_criterion(7, "euler-cross-check", [&](CriterionResult& r) {
    const BajdParams& p = cfg.params;
    const double t = 1.0, x0 = 1.0, dt = 1e-3;
    const int n = 10000;
    std::vector<double> terminals(n);
    const unsigned threads = detail::thread_budget(cfg.threads);
    // fixed batch split so the draws do not depend on the thread budget
    const unsigned batches = 64;
    const int per_batch = (n + static_cast<int>(batches) - 1) / static_cast<int>(batches);
    detail::parallel_for(batches, threads, [&](std::size_t b) {
      std::mt19937_64 rng(0xBA1D0007 + b);
      const int lo = static_cast<int>(b) * per_batch;
      const int hi = std::min(n, lo + per_batch);
      for (int k = lo; k < hi; ++k) {
        terminals[static_cast<std::size_t>(k)] =
            euler_path(p, {dt, t, x0, 0}, rng).states.back();
      }
    });
    const TransitionDensity density(p, t, x0);
    const detail::QuadratureCdf cdf([&](double y) { return density(y); },
                                    density.upper_cutoff(), 4000, detail::state_exponent(p));
    const double d = detail::ks_statistic(std::move(terminals), cdf);
    const double budget = detail::kKs1Percent / std::sqrt(static_cast<double>(n)) + 0.02;
    r.pass = d < budget;
    r.detail = "KS " + detail::scientific(d) + " (critical + bias allowance " +
               detail::scientific(budget) + ")";
  });
}

/// 8. Invariant law: stationarity of the transform under the transition
/// semigroup to 1e-5, and the invariant mean theta + c/(a d) to 1e-8 by both
/// the transform derivative and the quadrature of y l(y).
inline CriterionResult check_invariant_law(const ValidationConfig& cfg) {
  return detail::timed_criterion(8, "invariant-law", [&](CriterionResult& r) {
    const BajdParams& p = cfg.params;
    const QuadratureControl tight{1e-11, 1e-15, 4000};
    const InvariantDensity density(p, tight);
    const double q = density.stationary_base().shape - 1.0;
    const double x_max = density.upper_cutoff();

    double stationarity_defect = 0.0;
    for (double t : {0.5, 2.0}) {
      for (std::complex<double> u : {std::complex<double>(-0.5, 0.0),
                                     std::complex<double>(-2.0, 0.0),
                                     std::complex<double>(0.0, 1.0)}) {
        const QuadratureControl ctl{1e-9, 1e-12, 4000};
        const double re = detail::integrate_density(
            density, q, x_max, [&](double x) { return bajd_cf(p, t, x, u).real(); }, ctl);
        const double im = detail::integrate_density(
            density, q, x_max, [&](double x) { return bajd_cf(p, t, x, u).imag(); }, ctl);
        stationarity_defect = std::max(
            stationarity_defect, std::abs(std::complex<double>(re, im) - invariant_cf(p, u)));
      }
    }

    const double expected_mean = p.theta + p.c / (p.a * p.d);
    const double h = 1e-7;
    const double mean_from_cf = std::log(invariant_cf(p, {0.0, h})).imag() / h;
    const double mean_from_quadrature = detail::integrate_density(
        density, q, x_max, [](double y) { return y; }, tight);
    const double mean_defect = std::max(std::abs(mean_from_cf - expected_mean),
                                        std::abs(mean_from_quadrature - expected_mean));

    r.pass = stationarity_defect <= 1e-5 && mean_defect <= 1e-8;
    r.detail = "stationarity defect " + detail::scientific(stationarity_defect) +
               " (tol 1e-05), mean defect " + detail::scientific(mean_defect) + " (tol 1e-08)";
  });
}

/// 9. Foster-Lyapunov: the closed-form drift inequality A V <= -V + M at 200
/// grid points (1e-12 rounding slack only), and the semigroup bound
/// E_x[V(X_t)] <= e^{-t} V(x) + M on the (t, x) grid.
inline CriterionResult check_foster_lyapunov(const ValidationConfig& cfg) {
  return detail::timed_criterion(9, "foster-lyapunov", [&](CriterionResult& r) {
    const BajdParams& p = cfg.params;
    const auto cert = build_certificate(p, default_drift_exponent(p));
    double worst_drift = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 200; ++i) {
      const double x = 10.0 * cert.x_star * i / 200.0;
      const double drift = generator_on_exponential(p, cert.gamma, x);
      const double v = std::exp(cert.gamma * x);
      // normalized defect: positive would violate A V <= -V + M
      worst_drift = std::max(worst_drift, (drift + v - cert.M) / (std::abs(drift) + v + cert.M));
    }
    bool semigroup_ok = true;
    double worst_ratio = 0.0;
    for (double t : {0.1, 1.0, 10.0}) {
      for (double x : {0.0, 1.0, 5.0, 20.0}) {
        const auto bound = semigroup_drift_check(p, cert, t, x);
        semigroup_ok = semigroup_ok && bound.pass;
        worst_ratio = std::max(worst_ratio, bound.lhs / bound.rhs);
      }
    }
    r.pass = worst_drift <= 1e-12 && semigroup_ok;
    r.detail = "max normalized drift defect " + detail::scientific(worst_drift) +
               " (tol 1e-12), max semigroup lhs/rhs " + detail::scientific(worst_ratio);
  });
}

/// 10. Empirical exponential ergodicity: log TV linear in t (r^2 > 0.98,
/// beta_hat < 1) for x in {0, 2, 5} in every regime, and the small-y bound
/// F <= C y^{2 a theta / sigma^2} verified through the log-log slope.
inline CriterionResult check_exponential_ergodicity(const ValidationConfig& cfg) {
  return detail::timed_criterion(10, "exponential-ergodicity", [&](CriterionResult& r) {
    const auto regimes = detail::regime_parameter_sets();
    const std::vector<double> xs{0.0, 2.0, 5.0};
    const std::vector<double> t_grid{0.5, 1.0, 2.0, 4.0, 6.0, 8.0};
    struct Item {
      BajdParams p;
      double x;
    };
    std::vector<Item> items;
    for (const auto& p : regimes) {
      for (double x : xs) items.push_back({p, x});
    }
    struct FitSummary {
      double beta;
      double r2;
    };
    std::vector<FitSummary> fits(items.size());
    detail::parallel_for(items.size(), detail::thread_budget(cfg.threads), [&](std::size_t i) {
      const auto fit = fit_decay(items[i].p, items[i].x, t_grid);
      fits[i] = {fit.beta_hat, fit.r2};
    });
    double worst_beta = 0.0;
    double worst_r2 = 1.0;
    for (const auto& f : fits) {
      worst_beta = std::max(worst_beta, f.beta);
      worst_r2 = std::min(worst_r2, f.r2);
    }

    double worst_slope_margin = std::numeric_limits<double>::infinity();
    for (const auto& p : regimes) {
      std::vector<double> logy, logF;
      for (double y = 1e-3; y < 0.12; y *= std::sqrt(10.0)) {
        logy.push_back(std::log(y));
        logF.push_back(std::log(convolve_F(p, 0.8, 1.2, y)));
      }
      const double target = 2.0 * p.a * p.theta / (p.sigma * p.sigma);
      worst_slope_margin =
          std::min(worst_slope_margin, detail::fit_slope(logy, logF) - (target - 0.05));
    }

    r.pass = worst_beta < 1.0 && worst_r2 > 0.98 && worst_slope_margin >= 0.0;
    r.detail = "max beta_hat " + detail::scientific(worst_beta) + ", min r2 " +
               detail::scientific(worst_r2) + ", small-y slope margin " +
               detail::scientific(worst_slope_margin);
  }, 300.0);
}

/// 11. Regime seam: densities for delta = +1e-8 and delta = -1e-8 parameter
/// perturbations agree pointwise within 1e-6.
inline CriterionResult check_regime_seam(const ValidationConfig& cfg) {
  return detail::timed_criterion(11, "regime-seam", [&](CriterionResult& r) {
    auto perturbed = [&](double delta) {
      BajdParams p = cfg.params;
      p.d = 2.0 * (p.a - delta) / (p.sigma * p.sigma);
      return p;
    };
    const auto plus = perturbed(1e-8);
    const auto minus = perturbed(-1e-8);
    double worst = 0.0;
    for (double t : {0.3, 1.0, 3.0}) {
      for (double x : {0.0, 1.0}) {
        for (double y : {0.4, 1.1, 2.8}) {
          worst = std::max(worst,
                           std::abs(bajd_pdf(plus, t, x, y) - bajd_pdf(minus, t, x, y)));
        }
      }
    }
    r.pass = worst <= 1e-6;
    r.detail = "max pointwise gap " + detail::scientific(worst) + " (tol 1e-06)";
  });
}

/// Runs every acceptance criterion in order.
inline std::vector<CriterionResult> run_validation(const ValidationConfig& cfg) {
  detail::check_params(cfg.params);
  std::vector<CriterionResult> results;
  results.push_back(check_riccati_consistency(cfg));
  results.push_back(check_density_normalization(cfg));
  results.push_back(check_fourier_round_trip(cfg));
  results.push_back(check_convolution_identity(cfg));
  results.push_back(check_chapman_kolmogorov(cfg));
  results.push_back(check_sampler_law(cfg));
  results.push_back(check_euler_cross_check(cfg));
  results.push_back(check_invariant_law(cfg));
  results.push_back(check_foster_lyapunov(cfg));
  results.push_back(check_exponential_ergodicity(cfg));
  results.push_back(check_regime_seam(cfg));
  return results;
}

inline bool all_passed(const std::vector<CriterionResult>& results) {
  return std::all_of(results.begin(), results.end(),
                     [](const CriterionResult& r) { return r.pass; });
}

inline std::string format_criterion_line(const CriterionResult& r) {
  char head[64];
  std::snprintf(head, sizeof(head), "[%s] %2d %-26s %7.2fs  ", r.pass ? "PASS" : "FAIL", r.id,
                r.name.c_str(), r.seconds);
  return std::string(head) + r.detail;
}

}  // namespace bajd
