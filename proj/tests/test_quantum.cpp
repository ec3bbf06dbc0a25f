// Density matrices, the log-det projection, Q-LB-OMD and the offline comparators.

#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "scomd/scomd.hpp"

using namespace scomd;
using C = std::complex<double>;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

Observable diagonal_observable(const Eigen::VectorXd& a) { return Observable(HermitianMatrix::diagonal(a)); }

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

// Prox objective eta tr(G rho) + D_h(rho, rho_t), evaluated by the oracle.
double logdet_prox_objective(const ComplexMatrix& rho, const ComplexMatrix& rho_t, const ComplexMatrix& g,
                             double eta) {
  return eta * oracle::trace_product(g, rho) + oracle::logdet_divergence(rho, rho_t);
}

std::vector<Observable> random_observables(Rng& rng, Eigen::Index d, int count) {
  std::vector<Observable> out;
  for (int t = 0; t < count; ++t) out.push_back(verify::random_observable(rng, d));
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Types

TEST(HermitianMatrix, SymmetrizedAtConstruction) {
  ComplexMatrix m(2, 2);
  m << C(1, 0), C(2, 1), C(0, 0), C(3, 0);
  const HermitianMatrix h(m);
  EXPECT_LE(max_abs(h.matrix() - h.matrix().adjoint()), 1e-12);
  EXPECT_EQ(h.matrix()(0, 1), C(1.0, 0.5));
}

TEST(HermitianMatrix, InnerProductIsTraceOfProduct) {
  Rng rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const HermitianMatrix a = random_hermitian(4, rng), b = random_hermitian(4, rng);
    EXPECT_NEAR(inner(a, b), oracle::trace_product(a.matrix(), b.matrix()), 1e-12);
  }
}

TEST(DensityMatrix, Validation) {
  EXPECT_THROW(DensityMatrix(HermitianMatrix::identity(2)), DomainError);
  EXPECT_THROW(DensityMatrix(HermitianMatrix::diagonal(vec({1.5, -0.5}))), DomainError);
  EXPECT_FALSE(DensityMatrix(HermitianMatrix::diagonal(vec({1.0, 0.0}))).is_interior());
  EXPECT_TRUE(DensityMatrix::maximally_mixed(3).is_interior());
}

TEST(Observable, NormalizedBySpectralNorm) {
  const Observable a(HermitianMatrix::diagonal(vec({4.0, 2.0, 0.0})));
  EXPECT_NEAR(eigh(a.hermitian()).values.maxCoeff(), 1.0, 1e-15);
  EXPECT_THROW(Observable(HermitianMatrix::zero(2)), DataError);
  EXPECT_THROW(Observable(HermitianMatrix::diagonal(vec({1.0, -0.5}))), DataError);
}

TEST(Povm, CompletenessChecked) {
  EXPECT_NO_THROW(Povm({HermitianMatrix::diagonal(vec({1, 0})), HermitianMatrix::diagonal(vec({0, 1}))}));
  EXPECT_THROW(Povm({HermitianMatrix::diagonal(vec({1, 0})), HermitianMatrix::diagonal(vec({0, 0.9}))}), DataError);
}

// ---------------------------------------------------------------------------
// Gradient

TEST(QuantumGradient, IdentityObservable) {
  Rng rng(2);
  const DensityMatrix rho = verify::interior_density(rng, 3);
  EXPECT_LE(max_abs(quantum_gradient(rho, Observable(HermitianMatrix::identity(3))).matrix() +
                    ComplexMatrix::Identity(3, 3)),
            1e-14);
}

TEST(QuantumGradient, DiagonalReducesToPortfolioGradient) {
  const Eigen::VectorXd x = vec({0.2, 0.5, 0.3});
  const Eigen::VectorXd a = vec({0.3, 1.0, 0.6});
  const HermitianMatrix g =
      quantum_gradient(DensityMatrix(HermitianMatrix::diagonal(x)), diagonal_observable(a));
  EXPECT_LE((g.diagonal_real() - ops_gradient(x, PriceRelatives(a))).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(QuantumGradient, MatchesCentralDifference) {
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const DensityMatrix rho = verify::interior_density(rng, 3);
    const Observable a = verify::random_observable(rng, 3);
    const HermitianMatrix sigma = random_hermitian(3, rng);
    const double analytic = inner(quantum_gradient(rho, a), sigma);
    const double numeric = oracle::central_difference(
        [&](double s) { return -std::log(oracle::trace_product(a.matrix(), rho.matrix() + s * sigma.matrix())); },
        1e-6);
    EXPECT_LE(std::abs(analytic - numeric), 1e-5 * std::max(1.0, std::abs(analytic)));
  }
}

TEST(QuantumLoss, ThirdDerivativeIsCubedRatio) {
  Rng rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const DensityMatrix rho = verify::interior_density(rng, 3);
    const Observable a = verify::random_observable(rng, 3);
    const HermitianMatrix sigma = verify::traceless_direction(rng, 3);
    const auto f = [&](double s) {
      return -std::log(oracle::trace_product(a.matrix(), rho.matrix() + s * sigma.matrix()));
    };
    const double s = inner(a.hermitian(), sigma) / inner(a.hermitian(), rho.hermitian());
    const double h = 1e-3 / std::max(1.0, std::abs(s));
    const double third = (f(2 * h) - 2 * f(h) + 2 * f(-h) - f(-2 * h)) / (2 * h * h * h);
    const verify::LineDerivatives d = verify::quantum_line_derivatives(rho.hermitian(), sigma, a);
    EXPECT_NEAR(d.third, -2.0 * s * s * s, 1e-14 * std::max(1.0, std::abs(s * s * s)));
    EXPECT_LE(std::abs(third - d.third), 1e-4 * std::max(1.0, std::abs(d.third)));
  }
}

TEST(QuantumLoss, SecondDerivativeOfLogDetGapNonnegative) {
  Rng rng(5);
  for (int trial = 0; trial < 1000; ++trial) {
    const Eigen::Index d = 2 + static_cast<Eigen::Index>(rng.index(4));
    const DensityMatrix rho = verify::interior_density(rng, d);
    const Observable a = verify::random_observable(rng, d);
    const HermitianMatrix sigma = verify::traceless_direction(rng, d);
    const ComplexMatrix q = sigma.matrix() * rho.matrix().inverse();
    const double ratio = inner(a.hermitian(), sigma) / inner(a.hermitian(), rho.hermitian());
    EXPECT_GE((q * q).trace().real() - ratio * ratio, -1e-8);
  }
}

// ---------------------------------------------------------------------------
// Log-det projection

TEST(LogDetProx, ZeroGradientAtCenter) {
  for (Eigen::Index d : {2, 3, 5}) {
    const LogDetProx p = logdet_prox(DensityMatrix::maximally_mixed(d), HermitianMatrix::zero(d), 0.5);
    EXPECT_LE(max_abs(p.point.matrix() - ComplexMatrix::Identity(d, d) / static_cast<double>(d)), 1e-14);
    // M = d I and d / (d + lambda) = 1
    EXPECT_NEAR(p.report.multiplier, 0.0, 1e-12);
  }
}

TEST(LogDetProx, DiagonalInputsMatchLogBarrierProx) {
  Rng rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index d = 2 + static_cast<Eigen::Index>(rng.index(5));
    const Eigen::VectorXd x = verify::interior_simplex(rng, d);
    const Eigen::VectorXd g = 5.0 * rng.gaussian_vector(d);
    const double eta = rng.uniform_pos();
    const LogDetProx q = logdet_prox(DensityMatrix(HermitianMatrix::diagonal(x)), HermitianMatrix::diagonal(g), eta);
    const SimplexProx c = logbarrier_prox(SimplexPoint(x), g, eta);
    Eigen::VectorXd ev = eigh(q.point.hermitian()).values;
    Eigen::VectorXd cx = c.point.coords();
    std::sort(cx.data(), cx.data() + cx.size());
    EXPECT_LE((ev - cx).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_LE((q.point.hermitian().diagonal_real() - c.point.coords()).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(LogDetProx, QubitMatchesBlochGrid) {
  Rng rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    const DensityMatrix rho_t = verify::interior_density(rng, 2);
    const HermitianMatrix g = random_hermitian(2, rng);
    const double eta = 0.5;
    const LogDetProx p = logdet_prox(rho_t, g, eta);
    const auto grid = oracle::bloch_grid(
        [&](const Eigen::Matrix2cd& rho) { return logdet_prox_objective(rho, rho_t.matrix(), g.matrix(), eta); },
        0.05, 1e-3);
    EXPECT_LE(logdet_prox_objective(p.point.matrix(), rho_t.matrix(), g.matrix(), eta), grid.value + 1e-4);
  }
}

TEST(LogDetProx, RandomInstanceProperties) {
  Rng rng(8);
  for (int trial = 0; trial < 300; ++trial) {
    const Eigen::Index d = 2 + static_cast<Eigen::Index>(rng.index(5));
    const DensityMatrix rho_t = random_density(d, rng, 0.05);
    const HermitianMatrix g = random_hermitian(d, rng) * std::pow(10.0, 2.0 * rng.uniform() - 1.0);
    const double eta = rng.uniform_pos();
    const LogDetProx p = logdet_prox(rho_t, g, eta);
    const ComplexMatrix& rho = p.point.matrix();
    EXPECT_LE(std::abs(rho.trace().real() - 1.0), 1e-10);
    EXPECT_GT(p.point.min_eigenvalue(), 0.0);
    // eta G - rho^{-1} + rho_t^{-1} + lambda I = 0
    const ComplexMatrix m = rho_t.matrix().inverse() + eta * g.matrix();
    const ComplexMatrix kkt = eta * g.matrix() - rho.inverse() + rho_t.matrix().inverse() +
                              p.report.multiplier * ComplexMatrix::Identity(d, d);
    EXPECT_LE(max_abs(kkt) / std::max(1.0, max_abs(m)), 1e-8);
    EXPECT_LE(max_abs(rho * m - m * rho) / std::max(1.0, max_abs(m)), 1e-9);
    EXPECT_LE(logdet_prox_objective(rho, rho_t.matrix(), g.matrix(), eta),
              eta * oracle::trace_product(g.matrix(), rho_t.matrix()) + 1e-10);
  }
}

// ---------------------------------------------------------------------------
// Q-LB-OMD

TEST(QLbOmdRound, IdentityObservableIsFixedPoint) {
  Rng rng(9);
  const DensityMatrix rho = verify::interior_density(rng, 3);
  const QLbOmdRoundResult r = qlbomd_round(rho, Observable(HermitianMatrix::identity(3)), 0.4);
  EXPECT_NEAR(r.loss, 0.0, 1e-15);
  EXPECT_LE(max_abs(r.next.matrix() - rho.matrix()), 1e-12);
  EXPECT_LE(r.step, 1e-12);
}

TEST(QLbOmdLearner, IteratesValidAndStepsBounded) {
  const auto qs = bench::generate_quantum_stream(3, 500, 4, bench::StateKind::pure, bench::PovmKind::random_basis);
  for (double eta : {0.05, lb_schedule(500, 3), 0.9}) {
    QLbOmdLearner learner(3, eta);
    for (const Observable& a : qs.observables) {
      const RoundOutcome o = learner.observe(a);
      EXPECT_LE(*o.step, eta / (1.0 - eta) + 1e-8);
      EXPECT_LE(std::abs(learner.current().hermitian().trace() - 1.0), 1e-9);
      EXPECT_GT(learner.current().min_eigenvalue(), 0.0);
    }
  }
}

TEST(QLbOmdLearner, DiagonalStreamFollowsLbOmd) {
  const auto qs =
      bench::generate_quantum_stream(4, 300, 12, bench::StateKind::diagonal, bench::PovmKind::diagonal_random);
  const double eta = lb_schedule(300, 4);
  QLbOmdLearner q(4, eta);
  LbOmdLearner c(4, eta);
  for (const Observable& a : qs.observables) {
    const RoundOutcome qo = q.observe(a);
    const RoundOutcome co = c.observe(PriceRelatives(a.hermitian().diagonal_real()));
    EXPECT_NEAR(qo.loss, co.loss, 1e-10);
    EXPECT_LE((q.current().hermitian().diagonal_real() - c.current().coords()).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(ClippedComparator, Examples) {
  const DensityMatrix mixed = clipped_comparator(DensityMatrix::maximally_mixed(3), 50);
  EXPECT_LE(max_abs(mixed.matrix() - ComplexMatrix::Identity(3, 3) / 3.0), 1e-15);

  const DensityMatrix clipped = clipped_comparator(DensityMatrix(HermitianMatrix::diagonal(vec({1.0, 0.0}))), 100);
  const Eigen::VectorXd ev = eigh(clipped.hermitian()).values;
  EXPECT_NEAR(ev(0), 0.005, 1e-15);
  EXPECT_NEAR(ev(1), 0.995, 1e-15);
  EXPECT_THROW(clipped_comparator(DensityMatrix::maximally_mixed(2), 1), DomainError);
}

TEST(ClippedComparator, DivergenceFromCenterBounded) {
  Rng rng(10);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index d = 2 + static_cast<Eigen::Index>(rng.index(4));
    const std::int64_t t = 2 + static_cast<std::int64_t>(rng.index(5000));
    const DensityMatrix rho = rng.uniform() < 0.5 ? random_pure_state(d, rng) : random_density(d, rng);
    const DensityMatrix bar = clipped_comparator(rho, t);
    EXPECT_GE(bar.min_eigenvalue(), (1.0 - 1e-9) / (static_cast<double>(t) * static_cast<double>(d)));
    const double div = LogDetMap{}.divergence(bar, DensityMatrix::maximally_mixed(d));
    EXPECT_LE(div, static_cast<double>(d) * std::log(static_cast<double>(t)) + 1e-9);
  }
}

TEST(SampleMeasurement, IdentityPovmAlwaysFirstOutcome) {
  Rng rng(11);
  const Povm povm({HermitianMatrix::identity(3)});
  const DensityMatrix rho = random_density(3, rng);
  for (int k = 0; k < 100; ++k) EXPECT_EQ(sample_measurement(rho, povm, rng).outcome, 0u);
}

TEST(SampleMeasurement, UniformStateFrequencies) {
  Rng rng(12);
  const Povm povm({HermitianMatrix::diagonal(vec({1, 0})), HermitianMatrix::diagonal(vec({0, 1}))});
  const DensityMatrix rho = DensityMatrix::maximally_mixed(2);
  const int n = 10000;
  int zeros = 0;
  for (int k = 0; k < n; ++k) zeros += sample_measurement(rho, povm, rng).outcome == 0 ? 1 : 0;
  EXPECT_LE(std::abs(zeros - n / 2), 3.0 * std::sqrt(n * 0.25));
}

TEST(SampleMeasurement, SeedReproducible) {
  Rng rng(13);
  const DensityMatrix rho = random_density(4, rng);
  const ComplexMatrix u = random_unitary(4, rng);
  std::vector<HermitianMatrix> effects;
  for (Eigen::Index k = 0; k < 4; ++k) effects.push_back(HermitianMatrix::outer(u.col(k)));
  const Povm povm(std::move(effects));
  for (std::uint64_t seed = 0; seed < 20; ++seed)
    EXPECT_EQ(sample_measurement(rho, povm, seed).outcome, sample_measurement(rho, povm, seed).outcome);
  EXPECT_THROW(sample_measurement(DensityMatrix::maximally_mixed(2), povm, std::uint64_t{0}), DomainError);
}

// ---------------------------------------------------------------------------
// Comparators

TEST(BestCrp, ConstantMarket) {
  const std::vector<PriceRelatives> stream(20, PriceRelatives(Eigen::VectorXd::Ones(4)));
  const auto r = best_crp(stream);
  EXPECT_NEAR(r.objective, 0.0, 1e-12);
  EXPECT_LE((r.point.coords().array() - 0.25).abs().maxCoeff(), 1e-12);
}

TEST(BestCrp, DominantAssetIsVertex) {
  const std::vector<PriceRelatives> stream(30, PriceRelatives(vec({1.0, 0.5})));
  const auto r = best_crp(stream);
  EXPECT_NEAR(r.objective, 0.0, 1e-9);
  EXPECT_NEAR(r.point[0], 1.0, 1e-9);
  const auto gen = bench::generate_market(bench::MarketKind::dominant_asset, 4, 200, 3);
  const auto g = best_crp(gen);
  EXPECT_NEAR(g.objective, 0.0, 1e-6);
  EXPECT_NEAR(g.point[0], 1.0, 1e-6);
}

TEST(BestCrp, KellySymmetricOptimum) {
  const auto stream = bench::generate_market(bench::MarketKind::kelly_two_asset, 2, 100, 0);
  const auto r = best_crp(stream);
  EXPECT_NEAR(r.point[0], 0.5, 1e-6);
  // each vertex earns 1/2 every other round
  EXPECT_LT(r.objective, 50.0 * std::log(2.0) - 1.0);
  EXPECT_NEAR(r.objective, -100.0 * std::log(0.75), 1e-6);
}

TEST(BestCrp, TwoAssetMatchesGrid) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto stream = bench::generate_market(bench::MarketKind::iid_uniform, 2, 50, seed);
    const auto objective = [&](const Eigen::VectorXd& x) {
      double v = 0.0;
      for (const PriceRelatives& a : stream) v -= std::log(a.values().dot(x));
      return v;
    };
    auto grid = oracle::simplex2_grid(objective, 1e-5);
    grid.value = std::min({grid.value, objective(vec({1.0, 0.0})), objective(vec({0.0, 1.0}))});
    const auto r = best_crp(stream, {1e-9, 100000});
    EXPECT_NEAR(r.objective, grid.value, 1e-6);
    EXPECT_LE(r.gap, 1e-9);
    EXPECT_GE(r.gap, 0.0);
  }
}

TEST(BestCrp, ThreeAssetMatchesGrid) {
  const auto stream = bench::generate_market(bench::MarketKind::iid_uniform, 3, 40, 5);
  const auto objective = [&](const Eigen::VectorXd& x) {
    double v = 0.0;
    for (const PriceRelatives& a : stream) v -= std::log(a.values().dot(x));
    return v;
  };
  const auto grid = oracle::simplex3_grid(objective, 1e-2, 1e-5);
  const auto r = best_crp(stream, {1e-9, 100000});
  EXPECT_LE(r.objective, grid.value + 1e-9);
  EXPECT_GE(r.objective - r.gap, grid.value - 1e-3);
}

TEST(BestCrp, PerRoundLossesSumToObjective) {
  const auto stream = bench::generate_market(bench::MarketKind::iid_uniform, 5, 300, 8);
  const auto r = best_crp(stream);
  double sum = 0.0;
  for (std::size_t t = 0; t < stream.size(); ++t) {
    EXPECT_NEAR(r.per_round_losses[t], ops_loss(r.point, stream[t]), 1e-14);
    sum += r.per_round_losses[t];
  }
  EXPECT_NEAR(sum, r.objective, 1e-9);
}

TEST(BestFixedState, IdentityObservables) {
  const std::vector<Observable> stream(10, Observable(HermitianMatrix::identity(3)));
  const auto r = best_fixed_state(stream);
  EXPECT_NEAR(r.objective, 0.0, 1e-9);
  EXPECT_LE(max_abs(r.point.matrix() - ComplexMatrix::Identity(3, 3) / 3.0), 1e-6);
}

TEST(BestFixedState, DiagonalObservablesMatchBestCrp) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto qs =
        bench::generate_quantum_stream(3, 100, seed, bench::StateKind::diagonal, bench::PovmKind::diagonal_random);
    std::vector<PriceRelatives> market;
    for (const Observable& a : qs.observables) market.emplace_back(a.hermitian().diagonal_real());
    const auto q = best_fixed_state(qs.observables, {1e-9, 100000});
    const auto c = best_crp(market, {1e-9, 100000});
    EXPECT_NEAR(q.objective, c.objective, 1e-6);
  }
}

TEST(BestFixedState, QubitMatchesBlochGrid) {
  Rng rng(14);
  for (int trial = 0; trial < 3; ++trial) {
    const auto stream = random_observables(rng, 2, 30);
    const auto r = best_fixed_state(stream, {1e-9, 100000});
    const auto grid = oracle::bloch_grid(
        [&](const Eigen::Matrix2cd& rho) {
          double v = 0.0;
          for (const Observable& a : stream) {
            const double e = oracle::trace_product(a.matrix(), rho);
            if (!(e > 0.0)) return std::numeric_limits<double>::infinity();
            v -= std::log(e);
          }
          return v;
        },
        0.05, 1e-4);
    EXPECT_LE(r.objective, grid.value + 1e-6);
    EXPECT_GE(r.objective - r.gap, grid.value - 1e-3);
  }
}

TEST(BestFixedState, GapCertifiedOnRandomStreams) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto qs =
        bench::generate_quantum_stream(3, 200, seed, bench::StateKind::random_mixed, bench::PovmKind::random_basis);
    const auto r = best_fixed_state(qs.observables, {1e-7, 100000});
    EXPECT_GE(r.gap, 0.0);
    EXPECT_LE(r.gap, 1e-7);
    double sum = 0.0;
    for (std::size_t t = 0; t < qs.observables.size(); ++t) sum += quantum_loss(r.point, qs.observables[t]);
    EXPECT_NEAR(sum, r.objective, 1e-8);
  }
}
