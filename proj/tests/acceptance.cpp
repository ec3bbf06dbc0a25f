// Acceptance runs. Prints one PASS/FAIL line per criterion and exits nonzero
// if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "scomd/bench/experiment.hpp"
#include "scomd/scomd.hpp"

using namespace scomd;
using namespace scomd::bench;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Outcome bound_run(Algorithm algorithm, std::int64_t d, std::int64_t horizon, double closed_form, double time_limit) {
  ExperimentConfig c;
  c.algorithm = algorithm;
  c.dimension = d;
  c.horizon = horizon;
  c.seed = 2024;
  c.comparator_tolerance = 1e-6;
  if (algorithm == Algorithm::q_lb_omd) {
    c.state = StateKind::random_mixed;
    c.povm = PovmKind::random_basis;
  }
  const ExperimentResult r = run_experiment(c);
  const bool formula_ok = r.bound && std::abs(*r.bound - closed_form) <= 1e-9 * closed_form;
  const bool pass = r.bound_satisfied && r.comparator_gap <= 1e-6 && formula_ok && r.wall_seconds < time_limit;
  return {pass, fmt("regret=%.4f gap=%.2e bound=%.4f time=%.2fs", r.final_regret, r.comparator_gap,
                    r.bound.value_or(NAN), r.wall_seconds)};
}

// Commuting case: Q-LB-OMD on diagonal streams against LB-OMD on the diagonals.
Outcome commuting_equivalence() {
  double worst = 0.0;
  int streams = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Eigen::Index d = 2 + static_cast<Eigen::Index>(seed % 3);
    const QuantumStream qs = generate_quantum_stream(d, 200, 5000 + seed, StateKind::diagonal,
                                                     seed % 2 ? PovmKind::computational : PovmKind::diagonal_random);
    const double eta = lb_schedule(200, d);
    QLbOmdLearner q(d, eta);
    LbOmdLearner c(d, eta);
    for (const Observable& a : qs.observables) {
      q.observe(a);
      c.observe(PriceRelatives(a.hermitian().diagonal_real()));
      Eigen::VectorXd ev = eigh(q.current().hermitian()).values;
      Eigen::VectorXd x = c.current().coords();
      std::sort(x.data(), x.data() + x.size());
      worst = std::max(worst, (ev - x).cwiseAbs().maxCoeff());
      worst = std::max(worst, (q.current().hermitian().diagonal_real() - c.current().coords()).cwiseAbs().maxCoeff());
    }
    ++streams;
  }
  return {worst <= 1e-8, fmt("streams=%d rounds=200 worst_sup_diff=%.2e", streams, worst)};
}

double logbarrier_objective(const Eigen::VectorXd& x, const Eigen::VectorXd& x_t, const Eigen::VectorXd& sg) {
  const Eigen::ArrayXd r = x.array() / x_t.array();
  return sg.dot(x) + (r - r.log() - 1.0).sum();
}

double logdet_objective(const ComplexMatrix& rho, const ComplexMatrix& rho_t, const ComplexMatrix& sg) {
  return oracle::trace_product(sg, rho) + oracle::logdet_divergence(rho, rho_t);
}

// Projection correctness on 500 instances of each map.
Outcome prox_correctness() {
  Rng rng(99);
  double worst_kkt = 0.0, worst_residual = 0.0, worst_oracle = -INFINITY;
  for (int trial = 0; trial < 500; ++trial) {
    // log barrier, d = 2 against the grid
    {
      const Eigen::VectorXd x_t = verify::interior_simplex(rng, 2);
      const Eigen::VectorXd g = 5.0 * rng.gaussian_vector(2);
      const double eta = rng.uniform_pos();
      const SimplexProx p = logbarrier_prox(SimplexPoint(x_t), g, eta);
      const Eigen::VectorXd& x = p.point.coords();
      const Eigen::ArrayXd s = eta * g.array() - x.array().inverse() + x_t.array().inverse();
      worst_kkt = std::max(worst_kkt, (s.maxCoeff() - s.minCoeff()) / std::max(1.0, x.array().inverse().maxCoeff()));
      worst_residual = std::max(worst_residual, p.report.residual);
      const Eigen::VectorXd sg = eta * g;
      const auto grid = oracle::simplex2_grid(
          [&](const Eigen::VectorXd& y) { return logbarrier_objective(y, x_t, sg); }, 1e-4);
      worst_oracle = std::max(worst_oracle, logbarrier_objective(x, x_t, sg) - grid.value);
    }
    // log barrier, larger d, KKT and residual only
    {
      const Eigen::Index d = 3 + static_cast<Eigen::Index>(rng.index(8));
      const Eigen::VectorXd x_t = verify::interior_simplex(rng, d);
      const Eigen::VectorXd g = 5.0 * rng.gaussian_vector(d);
      const SimplexProx p = logbarrier_prox(SimplexPoint(x_t), g, 0.5);
      const Eigen::VectorXd& x = p.point.coords();
      const Eigen::ArrayXd s = 0.5 * g.array() - x.array().inverse() + x_t.array().inverse();
      worst_kkt = std::max(worst_kkt, (s.maxCoeff() - s.minCoeff()) / std::max(1.0, x.array().inverse().maxCoeff()));
      worst_residual = std::max(worst_residual, p.report.residual);
    }
    // log det, qubits against the Bloch grid
    {
      const DensityMatrix rho_t = verify::interior_density(rng, 2);
      const HermitianMatrix g = random_hermitian(2, rng);
      const double eta = rng.uniform_pos();
      const LogDetProx p = logdet_prox(rho_t, g, eta);
      const ComplexMatrix& rho = p.point.matrix();
      const ComplexMatrix sg = eta * g.matrix();
      const ComplexMatrix kkt =
          sg - rho.inverse() + rho_t.matrix().inverse() + p.report.multiplier * ComplexMatrix::Identity(2, 2);
      const double scale = std::max(1.0, (rho_t.matrix().inverse() + sg).cwiseAbs().maxCoeff());
      worst_kkt = std::max(worst_kkt, kkt.cwiseAbs().maxCoeff() / scale);
      worst_residual = std::max(worst_residual, p.report.residual);
      const auto grid = oracle::bloch_grid(
          [&](const Eigen::Matrix2cd& r) { return logdet_objective(r, rho_t.matrix(), sg); }, 0.1, 1e-3);
      worst_oracle = std::max(worst_oracle, logdet_objective(rho, rho_t.matrix(), sg) - grid.value);
    }
  }
  const bool pass = worst_kkt <= 1e-8 && worst_residual <= 1e-10 && worst_oracle <= 1e-4;
  return {pass, fmt("instances=500x3 worst_kkt=%.2e worst_residual=%.2e worst_excess_over_oracle=%.2e", worst_kkt,
                    worst_residual, worst_oracle)};
}

Outcome lemma_suite() {
  const auto start = std::chrono::steady_clock::now();
  const auto reports = verify::run_verify_suite(1, 1000);
  std::size_t failed = 0, adversarial = 0, min_samples = SIZE_MAX;
  std::string first_failure;
  for (const auto& r : reports) {
    if (!r.passed()) {
      ++failed;
      if (first_failure.empty()) first_failure = " first_failure=" + r.name;
    }
    adversarial += r.expect_violation ? 1 : 0;
    if (r.name.rfind("relsmooth/", 0) == 0 || r.name.rfind("hessian/", 0) == 0 ||
        r.name.rfind("self-concordance/", 0) == 0 || r.name.rfind("barrier/", 0) == 0 ||
        r.name.rfind("monotonicity/", 0) == 0)
      min_samples = std::min(min_samples, r.samples);
  }
  const double elapsed = seconds_since(start);
  const bool pass = failed == 0 && min_samples >= 1000 && elapsed < 60.0;
  return {pass, fmt("checks=%zu adversarial=%zu failed=%zu min_samples=%zu time=%.2fs%s", reports.size(), adversarial,
                    failed, min_samples, elapsed, first_failure.c_str())};
}

// Regret transfer to the clipped comparator on recorded Q-LB-OMD runs.
Outcome clipping_lemma() {
  double worst_transfer = -INFINITY, worst_divergence = -INFINITY;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Eigen::Index d = 2 + static_cast<Eigen::Index>(seed % 3);
    const std::int64_t horizon = 300;
    const StateKind state = seed % 2 ? StateKind::pure : StateKind::random_mixed;
    const QuantumStream qs = generate_quantum_stream(d, horizon, 7000 + seed, state, PovmKind::random_basis);
    QLbOmdLearner learner(d, lb_schedule(horizon, d));
    double learner_loss = 0.0;
    for (const Observable& a : qs.observables) learner_loss += learner.observe(a).loss;
    const auto best = best_fixed_state(qs.observables, {1e-6, 100000});
    const DensityMatrix bar = clipped_comparator(best.point, horizon);
    double bar_loss = 0.0;
    for (const Observable& a : qs.observables) bar_loss += quantum_loss(bar, a);
    // R_T(rho*) - R_T(rho_bar) = sum f(rho_bar) - sum f(rho*); rho* is optimal up to its gap
    const double regret_star = learner_loss - (best.objective - best.gap);
    const double regret_bar = learner_loss - bar_loss;
    worst_transfer = std::max(worst_transfer, regret_star - (regret_bar + 2.0));
    const double div = LogDetMap{}.divergence(bar, DensityMatrix::maximally_mixed(d));
    worst_divergence =
        std::max(worst_divergence, div - static_cast<double>(d) * std::log(static_cast<double>(horizon)));
  }
  return {worst_transfer <= 0.0 && worst_divergence <= 0.0,
          fmt("runs=50 max[R(rho*)-R(rho_bar)-2]=%.4f max[D(rho_bar,I/d)-d log T]=%.4f", worst_transfer,
              worst_divergence)};
}

}  // namespace

int main() {
  const double lb = lb_regret_bound(2000, 5);
  const double eg = eg_regret_bound(5000, 10);
  const double q = lb_regret_bound(1000, 4);
  const double ftrl = lbftrl_regret_bound(2000, 5, lbftrl_schedule(2000, 5));

  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"lb-omd regret bound (d=5, T=2000)", [&] { return bound_run(Algorithm::lb_omd, 5, 2000, lb, 5.0); }},
      {"eg regret bound (d=10, T=5000)", [&] { return bound_run(Algorithm::eg, 10, 5000, eg, 5.0); }},
      {"q-lb-omd regret bound (d=4, T=1000)", [&] { return bound_run(Algorithm::q_lb_omd, 4, 1000, q, 60.0); }},
      {"lb-ftrl regret bound (d=5, T=2000)", [&] { return bound_run(Algorithm::lb_ftrl, 5, 2000, ftrl, 5.0); }},
      {"commuting-case equivalence", commuting_equivalence},
      {"prox correctness", prox_correctness},
      {"lemma suite", lemma_suite},
      {"clipped comparator", clipping_lemma},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].name, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
