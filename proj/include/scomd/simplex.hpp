#pragma once

// Mirror maps on the probability simplex: negative Shannon entropy (closed
// form multiplicative update) and the logarithmic barrier (scalar Newton
// projection), plus the LB-FTRL leader.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "scomd/error.hpp"
#include "scomd/newton.hpp"
#include "scomd/omd.hpp"

namespace scomd {

/// A probability vector. Construction validates nonnegativity and sum 1.
class SimplexPoint {
 public:
  static constexpr double sum_tolerance = 1e-9;

  explicit SimplexPoint(Eigen::VectorXd coords) : x_(std::move(coords)) {
    if (x_.size() == 0) throw DomainError("SimplexPoint: empty vector");
    if (!x_.allFinite()) throw DomainError("SimplexPoint: non-finite coordinate");
    if ((x_.array() < 0.0).any()) throw DomainError("SimplexPoint: negative coordinate");
    if (std::abs(x_.sum() - 1.0) > sum_tolerance)
      throw DomainError("SimplexPoint: coordinates sum to " + std::to_string(x_.sum()));
  }

  static SimplexPoint uniform(Eigen::Index d) {
    return SimplexPoint(Eigen::VectorXd::Constant(d, 1.0 / static_cast<double>(d)));
  }

  static SimplexPoint vertex(Eigen::Index d, Eigen::Index i) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(d);
    v(i) = 1.0;
    return SimplexPoint(std::move(v));
  }

  const Eigen::VectorXd& coords() const noexcept { return x_; }
  Eigen::Index dim() const noexcept { return x_.size(); }
  double operator[](Eigen::Index i) const { return x_(i); }
  bool is_interior() const noexcept { return (x_.array() > 0.0).all(); }

 private:
  Eigen::VectorXd x_;
};

namespace detail {

inline void require_interior(const SimplexPoint& x, const char* who) {
  if (!x.is_interior()) throw DomainError(std::string(who) + ": point must be strictly positive");
}

inline void require_step_inputs(const SimplexPoint& x, const Eigen::VectorXd& g, double eta, const char* who) {
  if (g.size() != x.dim()) throw DomainError(std::string(who) + ": dimension mismatch");
  if (!g.allFinite()) throw DomainError(std::string(who) + ": non-finite gradient");
  if (!(eta > 0.0) || !std::isfinite(eta)) throw DomainError(std::string(who) + ": eta must be positive");
}

}  // namespace detail

/// x_{t+1}(i) proportional to x_t(i) exp(-eta g(i)), evaluated in log space
/// with the maximum subtracted before exponentiation.
inline SimplexPoint entropy_prox(const SimplexPoint& x_t, const Eigen::VectorXd& g, double eta) {
  detail::require_interior(x_t, "entropy_prox");
  detail::require_step_inputs(x_t, g, eta, "entropy_prox");
  Eigen::ArrayXd logits = x_t.coords().array().log() - eta * g.array();
  logits -= logits.maxCoeff();
  Eigen::ArrayXd w = logits.exp();
  return SimplexPoint((w / w.sum()).matrix());
}

struct SimplexProx {
  SimplexPoint point;
  NewtonSolveReport report;
};

/// argmin_{x in simplex} eta <g, x> + D_h(x, x_t) for h = -sum log x.
/// Stationarity gives x(i) = 1 / (1/x_t(i) + eta g(i) + lambda) with the
/// multiplier lambda fixed by sum x = 1.
inline SimplexProx logbarrier_prox(const SimplexPoint& x_t, const Eigen::VectorXd& g, double eta) {
  detail::require_interior(x_t, "logbarrier_prox");
  detail::require_step_inputs(x_t, g, eta, "logbarrier_prox");
  const Eigen::VectorXd scaled = eta * g;
  const Eigen::VectorXd offsets = (x_t.coords().array().inverse() + scaled.array()).matrix();
  MultiplierSolution sol = solve_reciprocal_multiplier(offsets);
  sol.report.ill_conditioned = scaled.lpNorm<Eigen::Infinity>() > conditioning_threshold;
  return {SimplexPoint(std::move(sol.weights)), sol.report};
}

/// argmin_{x in simplex} eta <cum_grad, x> - sum log x(i).
/// cum_grad = 0 gives the uniform point.
inline SimplexProx lbftrl_leader(const Eigen::VectorXd& cum_grad, double eta) {
  if (cum_grad.size() == 0) throw DomainError("lbftrl_leader: empty gradient");
  if (!cum_grad.allFinite()) throw DomainError("lbftrl_leader: non-finite gradient");
  if (!(eta > 0.0)) throw DomainError("lbftrl_leader: eta must be positive");
  const Eigen::VectorXd offsets = eta * cum_grad;
  MultiplierSolution sol = solve_reciprocal_multiplier(offsets);
  sol.report.ill_conditioned = offsets.lpNorm<Eigen::Infinity>() > conditioning_threshold;
  return {SimplexPoint(std::move(sol.weights)), sol.report};
}

/// h(x) = sum x log x - sum x on the simplex.
struct EntropyMap {
  using Point = SimplexPoint;
  using Dual = Eigen::VectorXd;

  bool interior(const SimplexPoint& x) const { return x.is_interior(); }

  double value(const SimplexPoint& x) const {
    double v = 0.0;
    for (Eigen::Index i = 0; i < x.dim(); ++i)
      if (x[i] > 0.0) v += x[i] * std::log(x[i]);
    return v - x.coords().sum();
  }

  Eigen::VectorXd gradient(const SimplexPoint& x) const { return x.coords().array().log().matrix(); }

  /// sum x log(x/y) - x + y, with 0 log 0 = 0.
  double divergence(const SimplexPoint& x, const SimplexPoint& y) const {
    double v = 0.0;
    for (Eigen::Index i = 0; i < x.dim(); ++i) {
      if (x[i] > 0.0) v += x[i] * std::log(x[i] / y[i]);
      v += y[i] - x[i];
    }
    return v;
  }

  ProxStep<SimplexPoint> prox(const SimplexPoint& x, const Eigen::VectorXd& g, double eta) const {
    return {entropy_prox(x, g, eta), {}};
  }
};

/// h(x) = -sum log x on the positive orthant, restricted to the simplex.
struct LogBarrierMap {
  using Point = SimplexPoint;
  using Dual = Eigen::VectorXd;

  bool interior(const SimplexPoint& x) const { return x.is_interior(); }

  double value(const SimplexPoint& x) const {
    if (!x.is_interior()) return std::numeric_limits<double>::infinity();
    return -x.coords().array().log().sum();
  }

  Eigen::VectorXd gradient(const SimplexPoint& x) const { return -x.coords().array().inverse().matrix(); }

  /// sum (x/y - log(x/y) - 1); +inf when x touches the boundary.
  double divergence(const SimplexPoint& x, const SimplexPoint& y) const {
    if (!x.is_interior()) return std::numeric_limits<double>::infinity();
    const Eigen::ArrayXd r = x.coords().array() / y.coords().array();
    return (r - r.log() - 1.0).sum();
  }

  ProxStep<SimplexPoint> prox(const SimplexPoint& x, const Eigen::VectorXd& g, double eta) const {
    SimplexProx p = logbarrier_prox(x, g, eta);
    return {std::move(p.point), p.report};
  }
};

static_assert(MirrorMap<EntropyMap>);
static_assert(MirrorMap<LogBarrierMap>);

}  // namespace scomd
