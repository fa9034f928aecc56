#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "bajd/errors.hpp"
#include "bajd/transition.hpp"

namespace bajd {

struct PathConfig {
  double dt;
  double horizon;
  double x0;
  std::uint64_t seed = 0;
};

/// One simulated trajectory. states[i] is the recorded (nonnegative) state at
/// times[i]; jump_times/jump_sizes list every compound-Poisson jump applied.
struct PathRecord {
  std::vector<double> times;
  std::vector<double> states;
  std::vector<double> jump_times;
  std::vector<double> jump_sizes;
  std::uint64_t seed = 0;
};

namespace detail {

inline void check_config(const PathConfig& cfg) {
  require_arg(cfg.dt > 0.0, "euler_path: requires dt > 0");
  require_arg(cfg.horizon >= cfg.dt, "euler_path: requires horizon >= dt");
  require_arg(cfg.x0 >= 0.0, "euler_path: requires x0 >= 0");
}

}  // namespace detail

/// Full-truncation Euler scheme for the jump SDE: the drift and diffusion are
/// evaluated at the positive part of the running value, jumps are drawn
/// exactly (Poisson(c h) count, Exp(d) sizes) and applied at the end of each
/// step. The recursion carries the raw value; the recorded state is its
/// positive part.
inline PathRecord euler_path(const BajdParams& p, const PathConfig& cfg, std::mt19937_64& rng) {
  detail::check_params(p);
  detail::check_config(cfg);
  const std::size_t steps = static_cast<std::size_t>(std::ceil(cfg.horizon / cfg.dt - 1e-9));
  PathRecord path;
  path.seed = cfg.seed;
  path.times.reserve(steps + 1);
  path.states.reserve(steps + 1);
  path.times.push_back(0.0);
  path.states.push_back(cfg.x0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::exponential_distribution<double> jump_size(p.d);
  double x = cfg.x0;
  double t = 0.0;
  for (std::size_t i = 0; i < steps; ++i) {
    const double h = (i + 1 == steps) ? cfg.horizon - t : cfg.dt;
    const double x_plus = std::max(x, 0.0);
    const double t_next = (i + 1 == steps) ? cfg.horizon : t + h;
    double dj = 0.0;
    std::poisson_distribution<int> jump_count(p.c * h);
    const int n_jumps = jump_count(rng);
    for (int j = 0; j < n_jumps; ++j) {
      const double size = jump_size(rng);
      path.jump_times.push_back(t_next);
      path.jump_sizes.push_back(size);
      dj += size;
    }
    x += p.a * (p.theta - x_plus) * h + p.sigma * std::sqrt(x_plus) * std::sqrt(h) * gauss(rng) +
         dj;
    t = t_next;
    path.times.push_back(t);
    path.states.push_back(std::max(x, 0.0));
  }
  return path;
}

inline PathRecord euler_path(const BajdParams& p, const PathConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  return euler_path(p, cfg, rng);
}

/// States of the delta-skeleton chain: the recorded states nearest to the
/// sampling times delta, 2 delta, ..., strictly after time zero (the n = 0
/// observation is the known initial condition and is not repeated).
inline std::vector<double> skeleton(const PathRecord& path, double delta) {
  detail::require_arg(path.times.size() >= 2, "skeleton: requires a nonempty path");
  const double dt = path.times[1] - path.times[0];
  detail::require_arg(delta >= dt * (1.0 - 1e-9), "skeleton: requires delta >= path dt");
  std::vector<double> states;
  const double horizon = path.times.back();
  for (std::size_t n = 1; n * delta <= horizon * (1.0 + 1e-9); ++n) {
    const double target = n * delta;
    auto it = std::lower_bound(path.times.begin(), path.times.end(), target);
    std::size_t idx = static_cast<std::size_t>(it - path.times.begin());
    if (idx == path.times.size()) {
      idx = path.times.size() - 1;
    } else if (idx > 0 && target - path.times[idx - 1] < path.times[idx] - target) {
      idx -= 1;
    }
    states.push_back(path.states[idx]);
  }
  return states;
}

/// Trapezoidal time average (1/T) int_0^T f(X_s) ds along the recorded path.
template <class F>
double occupation_average(const PathRecord& path, F&& f) {
  detail::require_arg(path.times.size() >= 2, "occupation_average: requires a nonempty path");
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < path.times.size(); ++i) {
    const double h = path.times[i + 1] - path.times[i];
    acc += 0.5 * (f(path.states[i]) + f(path.states[i + 1])) * h;
  }
  return acc / (path.times.back() - path.times.front());
}

}  // namespace bajd
