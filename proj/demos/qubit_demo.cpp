// Learning a single-qubit state from random projective measurements.

#include <cstdio>
#include <span>

#include "scomd/bench/generators.hpp"
#include "scomd/scomd.hpp"

int main() {
  using namespace scomd;
  const std::int64_t horizon = 500;
  const auto qs = bench::generate_quantum_stream(2, horizon, 11, bench::StateKind::random_mixed,
                                                 bench::PovmKind::random_basis);
  const std::span<const Observable> stream(qs.observables);

  const double eta = lb_schedule(horizon, 2);
  QLbOmdLearner learner(2, eta);
  const auto traj = record_trajectory(learner, stream);
  double loss = 0.0;
  for (const RoundOutcome& o : traj.outcomes) loss += o.loss;

  const auto best = best_fixed_state(stream);
  const ComplexMatrix& last = traj.iterates.back().matrix();
  std::printf("regret %.4f, bound %.3f\n", loss - best.objective, lb_regret_bound(horizon, 2, eta));
  std::printf("true state    [%.4f  %.4f%+.4fi]\n", qs.truth.matrix()(0, 0).real(), qs.truth.matrix()(0, 1).real(),
              qs.truth.matrix()(0, 1).imag());
  std::printf("final iterate [%.4f  %.4f%+.4fi]\n", last(0, 0).real(), last(0, 1).real(), last(0, 1).imag());
}
