#pragma once

// Learning-rate schedules and closed-form regret bounds.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>

#include "scomd/error.hpp"

namespace scomd {

/// Regret bound of mirror descent for losses that are 1-self-concordant
/// barriers and L-smooth relative to the mirror map:
///   D_h(x, x_1) / eta + T L eta / (1 - L eta),   0 < eta < 1/L.
inline double omd_regret_bound(double divergence_at_start, double smoothness, double eta,
                             std::int64_t horizon) {
  if (!(smoothness > 0.0)) throw ScheduleError("omd_regret_bound: L must be positive");
  if (!(eta > 0.0) || !(smoothness * eta < 1.0))
    throw ScheduleError("omd_regret_bound: requires 0 < eta < 1/L");
  if (horizon < 1) throw ScheduleError("omd_regret_bound: T must be >= 1");
  if (!(divergence_at_start >= 0.0)) throw ScheduleError("omd_regret_bound: divergence must be >= 0");
  const double t = static_cast<double>(horizon);
  const double le = smoothness * eta;
  return divergence_at_start / eta + t * le / (1.0 - le);
}

/// Numerator of the exponentiated-gradient learning rate. sqrt(log d) is the
/// one for which the general bound reduces to the closed form; sqrt(d) is
/// kept for comparison.
enum class EgEtaVariant { sqrt_log_d, sqrt_d };

struct EgSchedule {
  double gamma;
  double eta;
};

inline bool eg_horizon_valid(std::int64_t horizon, std::int64_t dim) {
  if (dim < 2) return false;
  return static_cast<double>(horizon) > 4.0 * static_cast<double>(dim) / std::log(static_cast<double>(dim));
}

/// gamma = 2^(2/3) d^(1/3) / (T log d)^(1/3)
/// eta   = gamma * num / (sqrt(T d gamma) + d sqrt(log d)),  num = sqrt(log d) or sqrt(d).
inline EgSchedule eg_schedule(std::int64_t horizon, std::int64_t dim,
                              EgEtaVariant variant = EgEtaVariant::sqrt_log_d) {
  if (dim < 2) throw ScheduleError("eg_schedule: d must be >= 2");
  if (!eg_horizon_valid(horizon, dim))
    throw ScheduleError("eg_schedule: requires T > 4 d / log d (T=" + std::to_string(horizon) +
                        ", d=" + std::to_string(dim) + ")");
  const double t = static_cast<double>(horizon);
  const double d = static_cast<double>(dim);
  const double logd = std::log(d);
  const double gamma = std::cbrt(4.0) * std::cbrt(d) / std::cbrt(t * logd);
  const double numerator = variant == EgEtaVariant::sqrt_log_d ? std::sqrt(logd) : std::sqrt(d);
  const double eta = gamma * numerator / (std::sqrt(t * d * gamma) + d * std::sqrt(logd));
  return {gamma, eta};
}

/// eta = sqrt(d log T) / (sqrt(T) + sqrt(d log T)), requires T > d >= 2.
inline double lb_schedule(std::int64_t horizon, std::int64_t dim) {
  if (dim < 2) throw ScheduleError("lb_schedule: d must be >= 2");
  if (horizon <= dim) throw ScheduleError("lb_schedule: requires T > d");
  const double s = std::sqrt(static_cast<double>(dim) * std::log(static_cast<double>(horizon)));
  return s / (std::sqrt(static_cast<double>(horizon)) + s);
}

/// eta = min(1/4, sqrt(d log T / (2 T))), the minimizer of the FTRL bound capped at 1/4.
inline double lbftrl_schedule(std::int64_t horizon, std::int64_t dim) {
  if (dim < 2) throw ScheduleError("lbftrl_schedule: d must be >= 2");
  if (horizon < 2) throw ScheduleError("lbftrl_schedule: requires T >= 2");
  const double t = static_cast<double>(horizon);
  return std::min(0.25, std::sqrt(static_cast<double>(dim) * std::log(t) / (2.0 * t)));
}

/// 2^(5/3) T^(2/3) d^(1/3) (log d)^(2/3) + 2^(-2/3) T^(1/3) d^(2/3) (log d)^(4/3)
inline double eg_regret_bound(std::int64_t horizon, std::int64_t dim) {
  const double t = static_cast<double>(horizon);
  const double d = static_cast<double>(dim);
  const double logd = std::log(d);
  return std::pow(2.0, 5.0 / 3.0) * std::pow(t, 2.0 / 3.0) * std::cbrt(d) * std::pow(logd, 2.0 / 3.0) +
         std::pow(2.0, -2.0 / 3.0) * std::cbrt(t) * std::pow(d, 2.0 / 3.0) * std::pow(logd, 4.0 / 3.0);
}

/// log d / eta + T d eta / (gamma - d eta) + gamma T log d, valid when d eta < gamma.
/// Equals the closed form above at the default (sqrt_log_d) schedule.
inline double eg_regret_bound(std::int64_t horizon, std::int64_t dim, double gamma, double eta) {
  const double t = static_cast<double>(horizon);
  const double d = static_cast<double>(dim);
  if (!(gamma > 0.0 && gamma < 1.0)) throw ScheduleError("eg_regret_bound: gamma must lie in (0,1)");
  if (!(eta > 0.0) || !(d * eta < gamma))
    throw ScheduleError("eg_regret_bound: requires 0 < d eta < gamma");
  const double logd = std::log(d);
  return logd / eta + t * d * eta / (gamma - d * eta) + gamma * t * logd;
}

/// 2 sqrt(T d log T) + d log T + 2
inline double lb_regret_bound(std::int64_t horizon, std::int64_t dim) {
  const double t = static_cast<double>(horizon);
  const double d = static_cast<double>(dim);
  return 2.0 * std::sqrt(t * d * std::log(t)) + d * std::log(t) + 2.0;
}

/// d log T / eta + T eta / (1 - eta) + 2 for an arbitrary eta in (0, 1).
inline double lb_regret_bound(std::int64_t horizon, std::int64_t dim, double eta) {
  if (!(eta > 0.0 && eta < 1.0)) throw ScheduleError("lb_regret_bound: requires 0 < eta < 1");
  const double t = static_cast<double>(horizon);
  const double d = static_cast<double>(dim);
  return d * std::log(t) / eta + t * eta / (1.0 - eta) + 2.0;
}

/// d log T / eta + 2 eta T + 2, valid for eta <= 1/4.
inline double lbftrl_regret_bound(std::int64_t horizon, std::int64_t dim, double eta) {
  if (!(eta > 0.0 && eta <= 0.25)) throw ScheduleError("lbftrl_regret_bound: requires 0 < eta <= 1/4");
  const double t = static_cast<double>(horizon);
  const double d = static_cast<double>(dim);
  return d * std::log(t) / eta + 2.0 * eta * t + 2.0;
}

}  // namespace scomd
