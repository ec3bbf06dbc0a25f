#pragma once

// Scalar multiplier solver shared by the log-barrier projection, the LB-FTRL
// leader and the log-det projection. All three reduce to
//
//   phi(lambda) = sum_i 1 / (c_i + lambda) - 1 = 0,   lambda > -min_i c_i,
//
// where phi is strictly decreasing and convex on the admissible interval, so
// the root is unique.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "scomd/error.hpp"

namespace scomd {

struct NewtonSolveReport {
  double multiplier = 0.0;
  int iterations = 0;
  /// |sum_i x_i - 1| at the returned point.
  double residual = 0.0;
  /// Set by callers when ||eta g||_inf exceeds conditioning_threshold. The
  /// solve still runs unclamped.
  bool ill_conditioned = false;
};

struct MultiplierSolution {
  Eigen::VectorXd weights;
  NewtonSolveReport report;
};

inline constexpr int newton_max_iterations = 200;
inline constexpr double newton_residual_tolerance = 1e-12;
inline constexpr double conditioning_threshold = 1e6;

/// Safeguarded Newton for sum_i 1/(c_i + lambda) = 1.
///
/// Starts at lambda_0 = max(0, d - min c), where every denominator is >= d and
/// phi <= 0. The bracket [lo, hi] with phi(lo) >= 0 >= phi(hi) is kept
/// throughout; lo starts at 1 - min c (the smallest denominator equals 1).
/// A Newton step leaving the open bracket restarts from lo when it came from
/// the right of the root and bisects otherwise.
inline MultiplierSolution solve_reciprocal_multiplier(const Eigen::VectorXd& offsets) {
  const Eigen::Index d = offsets.size();
  if (d == 0) throw DomainError("solve_reciprocal_multiplier: empty input");
  if (!offsets.allFinite()) throw DomainError("solve_reciprocal_multiplier: non-finite offsets");

  const double cmin = offsets.minCoeff();
  const double dd = static_cast<double>(d);

  NewtonSolveReport report;
  if (d == 1) {
    report.multiplier = 1.0 - cmin;
    report.iterations = 0;
    return {Eigen::VectorXd::Ones(1), report};
  }

  // Also returns a bound on the rounding error of phi, which grows with
  // (|c_i| + |lambda|) / (c_i + lambda) when the sum cancels.
  auto phi_and_slope = [&](double lambda, double& slope, double& error) {
    double value = -1.0;
    slope = 0.0;
    error = 0.0;
    for (Eigen::Index i = 0; i < d; ++i) {
      const double inv = 1.0 / (offsets(i) + lambda);
      value += inv;
      slope -= inv * inv;
      error += inv * (2.0 + (std::abs(offsets(i)) + std::abs(lambda)) * inv);
    }
    return value;
  };

  double lo = 1.0 - cmin;
  double hi = std::max(0.0, dd - cmin);
  double lambda = hi;
  const double eps = std::numeric_limits<double>::epsilon();

  int it = 0;
  double value = 0.0;
  bool converged = false;
  for (; it < newton_max_iterations; ++it) {
    double slope = 0.0, error = 0.0;
    value = phi_and_slope(lambda, slope, error);
    if (std::abs(value) <= eps * (dd + error)) {
      converged = true;
      break;
    }
    if (value > 0.0)
      lo = lambda;
    else
      hi = lambda;
    double next = lambda - value / slope;
    // phi is convex, so a step from the right of the root lands left of it and
    // steps from the left increase monotonically to it. An overshoot past lo
    // restarts from lo, where phi >= 0.
    if (!(next > lo && next < hi)) next = value < 0.0 ? lo : 0.5 * (lo + hi);
    if (next == lambda || hi - lo <= eps * std::max(1.0, std::abs(lambda))) {
      converged = true;
      break;
    }
    lambda = next;
  }

  Eigen::VectorXd x = (offsets.array() + lambda).inverse().matrix();
  report.multiplier = lambda;
  report.iterations = it + 1;
  report.residual = std::abs(x.sum() - 1.0);
  // With offsets of order 1e6 and beyond, c_i + lambda loses digits to
  // cancellation and the sum cannot reach the tolerance even at the exact
  // floating-point root. Once lambda has converged the weights are rescaled.
  if (converged && report.residual > newton_residual_tolerance && (x.array() > 0.0).all()) {
    x /= x.sum();
    report.residual = std::abs(x.sum() - 1.0);
  }
  if (!converged || !(report.residual <= newton_residual_tolerance) || !(x.array() > 0.0).all())
    throw NewtonFailure("multiplier solve did not converge (residual " + std::to_string(report.residual) +
                            " after " + std::to_string(report.iterations) + " iterations)",
                        report.iterations, report.residual);
  return {std::move(x), report};
}

}  // namespace scomd
