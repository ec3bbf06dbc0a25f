#pragma once

// One learner on one stream against the best fixed action in hindsight.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "scomd/bench/generators.hpp"
#include "scomd/comparator.hpp"
#include "scomd/omd.hpp"
#include "scomd/ops.hpp"
#include "scomd/quantum.hpp"
#include "scomd/schedules.hpp"

namespace scomd::bench {

enum class Algorithm { eg, lb_omd, lb_ftrl, q_lb_omd };

inline std::optional<Algorithm> parse_algorithm(std::string_view s) {
  if (s == "eg") return Algorithm::eg;
  if (s == "lb-omd") return Algorithm::lb_omd;
  if (s == "lb-ftrl") return Algorithm::lb_ftrl;
  if (s == "q-lb-omd") return Algorithm::q_lb_omd;
  return std::nullopt;
}

inline std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::eg: return "eg";
    case Algorithm::lb_omd: return "lb-omd";
    case Algorithm::lb_ftrl: return "lb-ftrl";
    case Algorithm::q_lb_omd: return "q-lb-omd";
  }
  return "unknown";
}

inline bool is_quantum(Algorithm a) { return a == Algorithm::q_lb_omd; }

struct ExperimentConfig {
  Algorithm algorithm = Algorithm::lb_omd;
  std::int64_t dimension = 5;
  std::int64_t horizon = 1000;
  std::uint64_t seed = 0;
  std::optional<double> eta;    // overrides the default schedule
  std::optional<double> gamma;  // EG only
  EgEtaVariant eg_variant = EgEtaVariant::sqrt_log_d;
  MarketKind market = MarketKind::iid_uniform;
  StateKind state = StateKind::random_mixed;
  PovmKind povm = PovmKind::random_basis;
  Summation summation = Summation::naive;
  double comparator_tolerance = 1e-6;

  /// Rejects configurations no learner can run with.
  void validate() const {
    if (horizon < 2) throw ScheduleError("T must be >= 2");
    if (is_quantum(algorithm)) {
      if (dimension < 1) throw ScheduleError("d must be >= 1");
    } else if (dimension < 2) {
      throw ScheduleError("d must be >= 2");
    }
    if (!(comparator_tolerance > 0.0)) throw ScheduleError("comparator tolerance must be positive");
    if (eta && !(*eta > 0.0 && *eta < 1.0)) throw ScheduleError("eta must lie in (0,1)");
    if (gamma && !(*gamma > 0.0 && *gamma < 1.0)) throw ScheduleError("gamma must lie in (0,1)");
    if (gamma && algorithm != Algorithm::eg) throw ScheduleError("gamma applies to eg only");
    switch (algorithm) {
      case Algorithm::eg:
        if (!(eta && gamma) && !eg_horizon_valid(horizon, dimension))
          throw ScheduleError("eg schedule requires T > 4 d / log d");
        break;
      case Algorithm::lb_omd:
      case Algorithm::q_lb_omd:
        if (!eta && horizon <= std::max<std::int64_t>(dimension, 1))
          throw ScheduleError("default schedule requires T > d");
        break;
      case Algorithm::lb_ftrl:
        break;
    }
  }
};

struct ExperimentResult {
  ExperimentConfig config;
  double eta = 0.0;
  std::optional<double> gamma;
  ExperimentLog log;
  std::vector<double> regret;  // per round
  double final_regret = 0.0;
  double comparator_value = 0.0;
  double comparator_gap = 0.0;
  std::optional<double> bound;  // absent when the rates fall outside the bound's hypotheses
  bool bound_satisfied = false;
  int newton_max_iterations = 0;
  double newton_max_residual = 0.0;
  bool ill_conditioned = false;
  double wall_seconds = 0.0;
};

namespace detail {

inline void fill_learning_rates(ExperimentResult& r) {
  const ExperimentConfig& c = r.config;
  const std::int64_t d = std::max<std::int64_t>(c.dimension, 2);
  switch (c.algorithm) {
    case Algorithm::eg: {
      if (c.eta && c.gamma) {
        r.eta = *c.eta;
        r.gamma = *c.gamma;
      } else {
        const EgSchedule s = eg_schedule(c.horizon, c.dimension, c.eg_variant);
        r.eta = c.eta.value_or(s.eta);
        r.gamma = c.gamma.value_or(s.gamma);
      }
      break;
    }
    case Algorithm::lb_omd:
    case Algorithm::q_lb_omd:
      r.eta = c.eta ? *c.eta : lb_schedule(c.horizon, d);
      break;
    case Algorithm::lb_ftrl:
      r.eta = c.eta ? *c.eta : lbftrl_schedule(c.horizon, d);
      break;
  }
}

inline std::optional<double> regret_bound(const ExperimentResult& r) {
  const ExperimentConfig& c = r.config;
  try {
    switch (c.algorithm) {
      case Algorithm::eg: return eg_regret_bound(c.horizon, c.dimension, *r.gamma, r.eta);
      case Algorithm::lb_omd:
      case Algorithm::q_lb_omd: return lb_regret_bound(c.horizon, std::max<std::int64_t>(c.dimension, 2), r.eta);
      case Algorithm::lb_ftrl: return lbftrl_regret_bound(c.horizon, c.dimension, r.eta);
    }
  } catch (const ScheduleError&) {
  }
  return std::nullopt;
}

template <class Learner, class Loss>
void play(Learner& learner, std::span<const Loss> stream, ExperimentResult& r) {
  for (const Loss& loss : stream) {
    const RoundOutcome o = learner.observe(loss);
    r.log.record(o.loss, o.step);
    r.newton_max_iterations = std::max(r.newton_max_iterations, o.report.iterations);
    r.newton_max_residual = std::max(r.newton_max_residual, o.report.residual);
    r.ill_conditioned = r.ill_conditioned || o.report.ill_conditioned;
  }
}

inline void finish(ExperimentResult& r, std::vector<double> comparator_losses, double gap) {
  r.log.set_comparator(std::move(comparator_losses), gap);
  r.regret = regret_trace(r.log);
  r.final_regret = r.regret.back();
  r.comparator_value = r.log.comparator_value();
  r.comparator_gap = gap;
  r.bound = regret_bound(r);
  // The comparator value is certified only up to its gap, so the regret
  // against the true optimum may exceed the measured one by at most gap.
  r.bound_satisfied = r.bound && r.final_regret + gap <= *r.bound;
}

}  // namespace detail

inline ExperimentResult run_market_experiment(ExperimentConfig config, std::span<const PriceRelatives> stream) {
  if (stream.empty()) throw DomainError("run_market_experiment: empty stream");
  if (is_quantum(config.algorithm)) throw DomainError("run_market_experiment: quantum algorithm on a market");
  config.dimension = stream.front().dim();
  config.horizon = static_cast<std::int64_t>(stream.size());
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  ExperimentResult r;
  r.config = config;
  r.log = ExperimentLog(config.summation);
  detail::fill_learning_rates(r);
  const Eigen::Index d = config.dimension;
  switch (config.algorithm) {
    case Algorithm::eg: {
      EgLearner learner(d, *r.gamma, r.eta);
      detail::play(learner, stream, r);
      break;
    }
    case Algorithm::lb_omd: {
      LbOmdLearner learner(d, r.eta);
      detail::play(learner, stream, r);
      break;
    }
    case Algorithm::lb_ftrl: {
      LbFtrlLearner learner(d, r.eta);
      detail::play(learner, stream, r);
      break;
    }
    case Algorithm::q_lb_omd: break;
  }
  ComparatorResult<SimplexPoint> cmp = best_crp(stream, {config.comparator_tolerance, 100000});
  detail::finish(r, std::move(cmp.per_round_losses), cmp.gap);
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

inline ExperimentResult run_quantum_experiment(ExperimentConfig config, std::span<const Observable> stream) {
  if (stream.empty()) throw DomainError("run_quantum_experiment: empty stream");
  if (!is_quantum(config.algorithm)) throw DomainError("run_quantum_experiment: classical algorithm on observables");
  config.dimension = stream.front().dim();
  config.horizon = static_cast<std::int64_t>(stream.size());
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  ExperimentResult r;
  r.config = config;
  r.log = ExperimentLog(config.summation);
  detail::fill_learning_rates(r);
  QLbOmdLearner learner(config.dimension, r.eta);
  detail::play(learner, stream, r);
  ComparatorResult<DensityMatrix> cmp = best_fixed_state(stream, {config.comparator_tolerance, 100000});
  detail::finish(r, std::move(cmp.per_round_losses), cmp.gap);
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

/// Generates the stream described by the config and runs it.
inline ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  if (is_quantum(config.algorithm)) {
    const QuantumStream qs =
        generate_quantum_stream(config.dimension, config.horizon, config.seed, config.state, config.povm);
    return run_quantum_experiment(config, qs.observables);
  }
  const auto stream = generate_market(config.market, config.dimension, config.horizon, config.seed);
  return run_market_experiment(config, stream);
}

inline void write_trace_csv(std::ostream& out, const ExperimentResult& r) {
  out << "t,loss,cum_loss,cmp_cum_loss,regret,r_t\n";
  const auto& rounds = r.log.rounds();
  char buf[256];
  for (std::size_t t = 0; t < rounds.size(); ++t) {
    const double cmp = rounds[t].cum_loss - r.regret[t];
    std::snprintf(buf, sizeof buf, "%lld,%.17g,%.17g,%.17g,%.17g,", static_cast<long long>(rounds[t].t),
                  rounds[t].loss, rounds[t].cum_loss, cmp, r.regret[t]);
    out << buf;
    if (rounds[t].step) {
      std::snprintf(buf, sizeof buf, "%.17g", *rounds[t].step);
      out << buf;
    }
    out << '\n';
  }
}

inline nlohmann::json summary_json(const ExperimentResult& r) {
  const ExperimentConfig& c = r.config;
  nlohmann::json j;
  j["algorithm"] = to_string(c.algorithm);
  j["d"] = c.dimension;
  j["T"] = c.horizon;
  j["seed"] = c.seed;
  j["eta"] = r.eta;
  j["gamma"] = r.gamma ? nlohmann::json(*r.gamma) : nlohmann::json(nullptr);
  j["cumulative_loss"] = r.log.cumulative_loss();
  j["comparator_value"] = r.comparator_value;
  j["comparator_gap"] = r.comparator_gap;
  j["final_regret"] = r.final_regret;
  j["regret_bound"] = r.bound ? nlohmann::json(*r.bound) : nlohmann::json(nullptr);
  j["bound_satisfied"] = r.bound_satisfied;
  j["newton_max_iterations"] = r.newton_max_iterations;
  j["newton_max_residual"] = r.newton_max_residual;
  j["ill_conditioned"] = r.ill_conditioned;
  j["summation"] = c.summation == Summation::kahan ? "kahan" : "naive";
  j["wall_seconds"] = r.wall_seconds;
  return j;
}

}  // namespace scomd::bench
