#pragma once

// Online portfolio selection learners: EG with mixing (EG~), mirror descent
// with the log barrier (LB-OMD), and FTRL with the log barrier on linearized
// losses (LB-FTRL).

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "scomd/error.hpp"
#include "scomd/omd.hpp"
#include "scomd/simplex.hpp"

namespace scomd {

/// Nonnegative price relatives, scaled at construction so that max_i a(i) = 1.
/// The scaling shifts every loss by a constant and leaves regret unchanged.
class PriceRelatives {
 public:
  explicit PriceRelatives(Eigen::VectorXd raw) : a_(std::move(raw)) {
    if (a_.size() == 0) throw DataError("PriceRelatives: empty vector");
    if (!a_.allFinite()) throw DataError("PriceRelatives: non-finite entry");
    if ((a_.array() < 0.0).any()) throw DataError("PriceRelatives: negative entry");
    const double top = a_.maxCoeff();
    if (!(top > 0.0)) throw DataError("PriceRelatives: all entries are zero");
    a_ /= top;
  }

  const Eigen::VectorXd& values() const noexcept { return a_; }
  Eigen::Index dim() const noexcept { return a_.size(); }
  double operator[](Eigen::Index i) const { return a_(i); }

 private:
  Eigen::VectorXd a_;
};

namespace detail {
inline double checked_return(const Eigen::VectorXd& x, const PriceRelatives& a) {
  if (x.size() != a.dim()) throw DomainError("price relatives and portfolio differ in dimension");
  const double r = a.values().dot(x);
  if (!(r > 0.0)) throw DegenerateRound("<a, x> = 0: loss is infinite");
  return r;
}
}  // namespace detail

/// f(x) = -log <a, x>
inline double ops_loss(const Eigen::VectorXd& x, const PriceRelatives& a) {
  return -std::log(detail::checked_return(x, a));
}
inline double ops_loss(const SimplexPoint& x, const PriceRelatives& a) { return ops_loss(x.coords(), a); }

/// grad f(x) = -a / <a, x>
inline Eigen::VectorXd ops_gradient(const Eigen::VectorXd& x, const PriceRelatives& a) {
  return -a.values() / detail::checked_return(x, a);
}
inline Eigen::VectorXd ops_gradient(const SimplexPoint& x, const PriceRelatives& a) {
  return ops_gradient(x.coords(), a);
}

/// Local norm of v induced by the Hessian a a^T / <a,x>^2: |<a,v>| / <a,x>.
inline double ops_local_norm(const Eigen::VectorXd& x, const Eigen::VectorXd& v, const PriceRelatives& a) {
  return std::abs(a.values().dot(v)) / detail::checked_return(x, a);
}

/// Squared dual local norm of grad f(x) w.r.t. the log barrier Hessian at x:
///   sum_i a(i)^2 x(i)^2 / <a, x>^2.
inline double ops_dual_norm_sq(const SimplexPoint& x, const PriceRelatives& a) {
  const double r = detail::checked_return(x.coords(), a);
  return (a.values().array() * x.coords().array()).square().sum() / (r * r);
}

// ---------------------------------------------------------------------------
// EG~

struct EgState {
  SimplexPoint played;    // x_t, where the loss is charged
  SimplexPoint internal;  // x^_t, the mirror descent iterate
  double gamma;
  double eta;

  static EgState initial(Eigen::Index d, double gamma, double eta) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw ScheduleError("EG: gamma must lie in (0,1)");
    if (!(eta > 0.0)) throw ScheduleError("EG: eta must be positive");
    return {SimplexPoint::uniform(d), SimplexPoint::uniform(d), gamma, eta};
  }
};

/// a^ = (1 - gamma/d) a + (gamma/d) e. Its maximum entry is still 1.
inline PriceRelatives eg_smoothed(const PriceRelatives& a, double gamma) {
  const double mix = gamma / static_cast<double>(a.dim());
  return PriceRelatives(((1.0 - mix) * a.values().array() + mix).matrix());
}

/// (1 - gamma) x^ + (gamma/d) e
inline SimplexPoint eg_mix(const SimplexPoint& internal, double gamma) {
  const double floor = gamma / static_cast<double>(internal.dim());
  return SimplexPoint(((1.0 - gamma) * internal.coords().array() + floor).matrix());
}

struct EgRoundResult {
  EgState state;
  double loss;
};

inline EgRoundResult eg_round(const EgState& state, const PriceRelatives& a) {
  const double loss = ops_loss(state.played, a);
  const PriceRelatives smoothed = eg_smoothed(a, state.gamma);
  SimplexPoint next_internal =
      entropy_prox(state.internal, ops_gradient(state.internal, smoothed), state.eta);
  SimplexPoint next_played = eg_mix(next_internal, state.gamma);
  return {{std::move(next_played), std::move(next_internal), state.gamma, state.eta}, loss};
}

// ---------------------------------------------------------------------------
// LB-OMD

struct LbOmdRoundResult {
  SimplexPoint next;
  double loss;
  double step;  // r_t = |<a, x_t - x_{t+1}>| / <a, x_t>
  NewtonSolveReport report;
};

inline LbOmdRoundResult lbomd_round(const SimplexPoint& x_t, const PriceRelatives& a, double eta) {
  const double loss = ops_loss(x_t, a);
  const LogBarrierMap map;
  OmdState<SimplexPoint> state{x_t, eta, 1, {}};
  OmdState<SimplexPoint> next = omd_round(state, map, ops_gradient(x_t, a));
  const double step = ops_local_norm(x_t.coords(), x_t.coords() - next.iterate.coords(), a);
  return {std::move(next.iterate), loss, step, next.last_solve};
}

// ---------------------------------------------------------------------------
// LB-FTRL with linearized losses

struct LbFtrlRoundResult {
  SimplexPoint next;
  double loss;
  Eigen::VectorXd cum_grad;
  NewtonSolveReport report;
};

/// The constant part of the linearized losses does not affect the argmin, so
/// only the running gradient sum is carried.
inline LbFtrlRoundResult lbftrl_round(const Eigen::VectorXd& cum_grad, const SimplexPoint& x_t,
                                      const PriceRelatives& a, double eta) {
  const double loss = ops_loss(x_t, a);
  Eigen::VectorXd updated = cum_grad + ops_gradient(x_t, a);
  SimplexProx leader = lbftrl_leader(updated, eta);
  return {std::move(leader.point), loss, std::move(updated), leader.report};
}

// ---------------------------------------------------------------------------
// Round-based learners with a common surface for experiment drivers.

class EgLearner {
 public:
  EgLearner(Eigen::Index d, double gamma, double eta) : state_(EgState::initial(d, gamma, eta)) {}

  const SimplexPoint& current() const noexcept { return state_.played; }
  const EgState& state() const noexcept { return state_; }

  RoundOutcome observe(const PriceRelatives& a) {
    EgRoundResult r = eg_round(state_, a);
    state_ = std::move(r.state);
    return {r.loss, std::nullopt, {}};
  }

 private:
  EgState state_;
};

class LbOmdLearner {
 public:
  LbOmdLearner(Eigen::Index d, double eta) : x_(SimplexPoint::uniform(d)), eta_(eta) {
    if (!(eta > 0.0 && eta < 1.0)) throw ScheduleError("LB-OMD: eta must lie in (0,1)");
  }

  const SimplexPoint& current() const noexcept { return x_; }
  double eta() const noexcept { return eta_; }

  RoundOutcome observe(const PriceRelatives& a) {
    LbOmdRoundResult r = lbomd_round(x_, a, eta_);
    x_ = std::move(r.next);
    return {r.loss, r.step, r.report};
  }

 private:
  SimplexPoint x_;
  double eta_;
};

class LbFtrlLearner {
 public:
  LbFtrlLearner(Eigen::Index d, double eta)
      : cum_grad_(Eigen::VectorXd::Zero(d)), x_(lbftrl_leader(cum_grad_, eta).point), eta_(eta) {}

  const SimplexPoint& current() const noexcept { return x_; }
  const Eigen::VectorXd& cumulative_gradient() const noexcept { return cum_grad_; }
  double eta() const noexcept { return eta_; }

  RoundOutcome observe(const PriceRelatives& a) {
    LbFtrlRoundResult r = lbftrl_round(cum_grad_, x_, a, eta_);
    cum_grad_ = std::move(r.cum_grad);
    x_ = std::move(r.next);
    return {r.loss, std::nullopt, r.report};
  }

 private:
  Eigen::VectorXd cum_grad_;
  SimplexPoint x_;
  double eta_;
};

/// Final wealth ratio w_{T+1}/w_1 of the investment interpretation, returned
/// as its logarithm together with a directly multiplied wealth (frexp-scaled
/// to avoid underflow).
struct WealthSimulation {
  double log_wealth_ratio;
  double mantissa;
  long exponent;
};

inline WealthSimulation simulate_wealth(std::span<const SimplexPoint> played, std::span<const PriceRelatives> stream) {
  if (played.size() < stream.size()) throw DomainError("simulate_wealth: fewer iterates than rounds");
  double mantissa = 1.0;
  long exponent = 0;
  for (std::size_t t = 0; t < stream.size(); ++t) {
    mantissa *= detail::checked_return(played[t].coords(), stream[t]);
    int e = 0;
    mantissa = std::frexp(mantissa, &e);
    exponent += e;
  }
  return {std::log(mantissa) + static_cast<double>(exponent) * std::log(2.0), mantissa, exponent};
}

}  // namespace scomd
