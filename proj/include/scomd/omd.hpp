#pragma once

// Generic online mirror descent:
//
//   x_{t+1} = argmin_{x in X}  eta <g_t, x - x_t> + D_h(x, x_t)
//
// over any mirror map satisfying the MirrorMap concept, plus per-round loss
// bookkeeping and regret traces.

#include <cmath>
#include <concepts>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "scomd/error.hpp"
#include "scomd/newton.hpp"

namespace scomd {

inline bool all_finite(const Eigen::VectorXd& v) { return v.allFinite(); }

/// Result of one Bregman proximal step. Closed-form maps leave the report at
/// its defaults.
template <class Point>
struct ProxStep {
  Point point;
  NewtonSolveReport report;
};

/// A Legendre function h together with its proximal step on the decision set.
///   interior(x)          membership test for the interior of dom h on X
///   gradient(x)          grad h(x)
///   divergence(x, y)     D_h(x, y) = h(x) - h(y) - <grad h(y), x - y>
///   prox(x, g, eta)      argmin_{z in X} eta <g, z - x> + D_h(z, x)
template <class M>
concept MirrorMap = requires(const M& map, const typename M::Point& x, const typename M::Dual& g,
                             double eta) {
  { map.interior(x) } -> std::convertible_to<bool>;
  { map.gradient(x) } -> std::convertible_to<typename M::Dual>;
  { map.divergence(x, x) } -> std::convertible_to<double>;
  { map.prox(x, g, eta) } -> std::same_as<ProxStep<typename M::Point>>;
};

template <class Point>
struct OmdState {
  Point iterate;
  double eta;
  std::int64_t round = 1;
  NewtonSolveReport last_solve{};
};

/// Builds the initial state, enforcing 0 < eta < 1/L.
template <MirrorMap Map>
OmdState<typename Map::Point> make_omd_state(const Map& map, typename Map::Point start, double eta,
                                             double smoothness = 1.0) {
  if (!(eta > 0.0) || !(smoothness * eta < 1.0))
    throw ScheduleError("learning rate must satisfy 0 < eta < 1/L");
  if (!map.interior(start)) throw DomainError("starting point is not interior");
  return {std::move(start), eta, 1, {}};
}

template <MirrorMap Map>
OmdState<typename Map::Point> omd_round(const OmdState<typename Map::Point>& state, const Map& map,
                                        const typename Map::Dual& gradient) {
  if (!all_finite(gradient)) throw DomainError("omd_round: loss gradient has non-finite entries");
  ProxStep<typename Map::Point> step = map.prox(state.iterate, gradient, state.eta);
  if (!map.interior(step.point))
    throw DomainError("omd_round: prox step left the interior at round " + std::to_string(state.round));
  return {std::move(step.point), state.eta, state.round + 1, step.report};
}

/// Per-round result reported by every learner.
struct RoundOutcome {
  double loss;
  std::optional<double> step;
  NewtonSolveReport report{};
};

/// Played points x_1..x_{T+1} and per-round outcomes of a learner over a stream.
template <class Point>
struct Trajectory {
  std::vector<Point> iterates;
  std::vector<RoundOutcome> outcomes;
};

template <class Learner, class Loss>
auto record_trajectory(Learner& learner, std::span<const Loss> stream) {
  using Point = std::decay_t<decltype(learner.current())>;
  Trajectory<Point> traj;
  traj.iterates.reserve(stream.size() + 1);
  traj.outcomes.reserve(stream.size());
  traj.iterates.push_back(learner.current());
  for (const Loss& loss : stream) {
    traj.outcomes.push_back(learner.observe(loss));
    traj.iterates.push_back(learner.current());
  }
  return traj;
}

enum class Summation { naive, kahan };

/// Running sum in ascending insertion order, optionally compensated.
class Accumulator {
 public:
  explicit Accumulator(Summation mode = Summation::naive) : mode_(mode) {}

  void add(double v) {
    if (mode_ == Summation::naive) {
      sum_ += v;
      return;
    }
    const double y = v - carry_;
    const double t = sum_ + y;
    carry_ = (t - sum_) - y;
    sum_ = t;
  }

  double value() const noexcept { return sum_; }

 private:
  Summation mode_;
  double sum_ = 0.0;
  double carry_ = 0.0;
};

struct RoundRecord {
  std::int64_t t;
  double loss;
  std::optional<double> step;  // r_t, local-norm distance between consecutive iterates
  double cum_loss;
};

/// Per-round losses of a run plus the comparator's per-round losses.
class ExperimentLog {
 public:
  explicit ExperimentLog(Summation mode = Summation::naive) : mode_(mode), total_(mode) {}

  void record(double loss, std::optional<double> step = std::nullopt) {
    total_.add(loss);
    rounds_.push_back({static_cast<std::int64_t>(rounds_.size()) + 1, loss, step, total_.value()});
  }

  void set_comparator(std::vector<double> per_round_losses, double certified_gap = 0.0) {
    Accumulator acc(mode_);
    for (double v : per_round_losses) acc.add(v);
    comparator_losses_ = std::move(per_round_losses);
    comparator_value_ = acc.value();
    comparator_gap_ = certified_gap;
  }

  const std::vector<RoundRecord>& rounds() const noexcept { return rounds_; }
  std::size_t size() const noexcept { return rounds_.size(); }
  double cumulative_loss() const noexcept { return rounds_.empty() ? 0.0 : rounds_.back().cum_loss; }
  const std::vector<double>& comparator_losses() const noexcept { return comparator_losses_; }
  double comparator_value() const noexcept { return comparator_value_; }
  double comparator_gap() const noexcept { return comparator_gap_; }
  Summation summation() const noexcept { return mode_; }

 private:
  Summation mode_;
  Accumulator total_;
  std::vector<RoundRecord> rounds_;
  std::vector<double> comparator_losses_;
  double comparator_value_ = 0.0;
  double comparator_gap_ = 0.0;
};

/// Entry t: learner cumulative loss through t minus the comparator's.
inline std::vector<double> regret_trace(const ExperimentLog& log, std::span<const double> comparator_losses) {
  if (comparator_losses.size() != log.size())
    throw DomainError("regret_trace: comparator has " + std::to_string(comparator_losses.size()) +
                      " rounds, log has " + std::to_string(log.size()));
  std::vector<double> trace;
  trace.reserve(log.size());
  Accumulator cmp(log.summation());
  for (std::size_t t = 0; t < log.size(); ++t) {
    cmp.add(comparator_losses[t]);
    trace.push_back(log.rounds()[t].cum_loss - cmp.value());
  }
  return trace;
}

inline std::vector<double> regret_trace(const ExperimentLog& log) {
  return regret_trace(log, log.comparator_losses());
}

}  // namespace scomd
