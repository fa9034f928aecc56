#pragma once

#include <stdexcept>
#include <string>

namespace bajd {

/// A truncated series or iteration failed to reach its tolerance within the
/// allowed number of terms.
class NonConvergenceError : public std::runtime_error {
 public:
  explicit NonConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

/// Adaptive quadrature could not certify the requested tolerance. Carries the
/// best value found and the achieved error estimate.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double value, double error_estimate)
      : std::runtime_error(what), value(value), error_estimate(error_estimate) {}

  double value;
  double error_estimate;
};

/// A density was evaluated exactly at a point where it diverges (the
/// singularity is integrable; quadrature routines avoid the point by weight).
class DensityDivergenceError : public std::domain_error {
 public:
  explicit DensityDivergenceError(const std::string& what) : std::domain_error(what) {}
};

namespace detail {

inline void require_domain(bool cond, const char* msg) {
  if (!cond) throw std::domain_error(msg);
}

inline void require_arg(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace detail

}  // namespace bajd
