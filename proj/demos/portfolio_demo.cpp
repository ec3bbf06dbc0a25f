// Three learners on one seeded market, against the best constant-rebalanced
// portfolio in hindsight.

#include <cstdio>
#include <span>

#include "scomd/bench/generators.hpp"
#include "scomd/scomd.hpp"

int main() {
  using namespace scomd;
  const Eigen::Index d = 5;
  const std::int64_t horizon = 2000;
  const auto market = bench::generate_market(bench::MarketKind::iid_uniform, d, horizon, 7);
  const std::span<const PriceRelatives> stream(market);

  const auto best = best_crp(stream);
  std::printf("best CRP loss %.6f (certified gap %.1e)\n", best.objective, best.gap);

  auto report = [&](const char* name, auto& learner, double bound) {
    const auto traj = record_trajectory(learner, stream);
    double loss = 0.0;
    for (const RoundOutcome& o : traj.outcomes) loss += o.loss;
    std::printf("%-8s regret %8.4f   bound %9.3f\n", name, loss - best.objective, bound);
  };

  const double eta = lb_schedule(horizon, d);
  LbOmdLearner lb(d, eta);
  report("lb-omd", lb, lb_regret_bound(horizon, d, eta));

  const double ftrl_eta = lbftrl_schedule(horizon, d);
  LbFtrlLearner ftrl(d, ftrl_eta);
  report("lb-ftrl", ftrl, lbftrl_regret_bound(horizon, d, ftrl_eta));

  const EgSchedule s = eg_schedule(horizon, d);
  EgLearner eg(d, s.gamma, s.eta);
  report("eg", eg, eg_regret_bound(horizon, d, s.gamma, s.eta));
}
