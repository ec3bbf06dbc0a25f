#pragma once

// Numerical checks of the inequalities the regret analysis relies on.
//
// Each check evaluates an inequality "lhs <= rhs" on a batch of instances and
// records the worst violation (lhs - rhs) / max(1, |rhs|). A check passes when
// the worst violation stays within its tolerance. Checks built with a
// deliberately weakened constant set expect_violation; they pass only if some
// instance breaks the inequality, which shows the check has teeth.
//
// Instance generators own an Rng, so every check is reproducible from a seed.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "scomd/bench/generators.hpp"
#include "scomd/comparator.hpp"
#include "scomd/omd.hpp"
#include "scomd/ops.hpp"
#include "scomd/quantum.hpp"
#include "scomd/random.hpp"
#include "scomd/schedules.hpp"
#include "scomd/simplex.hpp"

namespace scomd::verify {

struct CheckReport {
  std::string name;
  std::size_t samples = 0;
  double worst_violation = -std::numeric_limits<double>::infinity();
  double tolerance = 0.0;
  bool expect_violation = false;

  bool violated() const noexcept { return worst_violation > tolerance; }
  bool passed() const noexcept { return samples > 0 && violated() == expect_violation; }

  void observe(double lhs, double rhs) {
    ++samples;
    double v = (lhs - rhs) / std::max(1.0, std::abs(rhs));
    if (std::isnan(v)) v = std::numeric_limits<double>::infinity();
    worst_violation = std::max(worst_violation, v);
  }

  std::string to_json_line() const {
    char buf[96];
    std::string out = "{\"name\":\"";
    for (char c : name) {
      if (c == '"' || c == '\\') out += '\\';
      out += c;
    }
    std::snprintf(buf, sizeof buf, "\",\"samples\":%zu,\"worst_violation\":", samples);
    out += buf;
    if (std::isfinite(worst_violation)) {
      std::snprintf(buf, sizeof buf, "%.17g", worst_violation);
      out += buf;
    } else {
      out += "null";
    }
    std::snprintf(buf, sizeof buf, ",\"tolerance\":%.17g", tolerance);
    out += buf;
    out += ",\"expect_violation\":";
    out += expect_violation ? "true" : "false";
    out += ",\"passed\":";
    out += passed() ? "true" : "false";
    out += "}";
    return out;
  }
};

inline double inner(const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return a.dot(b); }
using scomd::inner;

/// Gradients of f and h at two points. Points and gradients share one type:
/// Eigen::VectorXd on the simplex, HermitianMatrix on density matrices.
template <class P>
struct GradientPair {
  P x, y;
  P grad_f_x, grad_f_y;
  P grad_h_x, grad_h_y;
  double smoothness;  // claimed L for this instance
};

/// Second derivatives of f and h at one point along one direction.
struct HessianPair {
  double f_second;
  double h_second;
  double smoothness;
};

/// D f, D^2 f, D^3 f along a line x + s u at s = 0.
struct LineDerivatives {
  double first;
  double second;
  double third;
};

template <class P>
struct MonotonicitySample {
  P x, y;
  P grad_f_x, grad_f_y;
  double local_norm;  // ||y - x||_x
};

/// <grad f(y) - grad f(x), y - x> <= L <grad h(y) - grad h(x), y - x>
template <class Gen>
CheckReport check_relative_smoothness_gradient(std::string name, Gen&& generate, std::size_t samples,
                                               double constant_scale = 1.0, double tolerance = 1e-8) {
  CheckReport report{std::move(name), 0, -std::numeric_limits<double>::infinity(), tolerance, false};
  for (std::size_t i = 0; i < samples; ++i) {
    const auto s = generate();
    const auto dir = s.y - s.x;
    const double lhs = inner(s.grad_f_y - s.grad_f_x, dir);
    const double rhs = constant_scale * s.smoothness * inner(s.grad_h_y - s.grad_h_x, dir);
    report.observe(lhs, rhs);
  }
  return report;
}

/// D^2 f(x)[u,u] <= L D^2 h(x)[u,u]
template <class Gen>
CheckReport check_hessian_domination(std::string name, Gen&& generate, std::size_t samples,
                                     double constant_scale = 1.0, double tolerance = 1e-8) {
  CheckReport report{std::move(name), 0, -std::numeric_limits<double>::infinity(), tolerance, false};
  for (std::size_t i = 0; i < samples; ++i) {
    const HessianPair s = generate();
    report.observe(s.f_second, constant_scale * s.smoothness * s.h_second);
  }
  return report;
}

/// |D^3 f| <= 2 M_f (D^2 f)^{3/2}
template <class Gen>
CheckReport check_self_concordance(std::string name, Gen&& generate, double mf, std::size_t samples,
                                   double tolerance = 1e-8) {
  CheckReport report{std::move(name), 0, -std::numeric_limits<double>::infinity(), tolerance, false};
  for (std::size_t i = 0; i < samples; ++i) {
    const LineDerivatives s = generate();
    report.observe(std::abs(s.third), 2.0 * mf * std::pow(std::max(0.0, s.second), 1.5));
  }
  return report;
}

/// (D f)^2 <= nu D^2 f
template <class Gen>
CheckReport check_barrier(std::string name, Gen&& generate, double nu, std::size_t samples,
                          double tolerance = 1e-10) {
  CheckReport report{std::move(name), 0, -std::numeric_limits<double>::infinity(), tolerance, false};
  for (std::size_t i = 0; i < samples; ++i) {
    const LineDerivatives s = generate();
    report.observe(s.first * s.first, nu * s.second);
  }
  return report;
}

/// r^2 / (1 + r) <= <grad f(y) - grad f(x), y - x>,  r = ||y - x||_x
template <class Gen>
CheckReport check_self_concordance_monotonicity(std::string name, Gen&& generate, std::size_t samples,
                                                double rhs_scale = 1.0, double tolerance = 1e-8) {
  CheckReport report{std::move(name), 0, -std::numeric_limits<double>::infinity(), tolerance, false};
  for (std::size_t i = 0; i < samples; ++i) {
    const auto s = generate();
    const double r = s.local_norm;
    report.observe(rhs_scale * r * r / (1.0 + r), inner(s.grad_f_y - s.grad_f_x, s.y - s.x));
  }
  return report;
}

/// r_t <= L eta / (1 - L eta) for every recorded step.
inline CheckReport check_stepsize_lemma(std::string name, std::span<const double> steps, double smoothness,
                                        double eta, double bound_scale = 1.0, double tolerance = 1e-8) {
  if (!(smoothness * eta < 1.0)) throw ScheduleError("check_stepsize_lemma: requires L eta < 1");
  CheckReport report{std::move(name), 0, -std::numeric_limits<double>::infinity(), tolerance, false};
  const double bound = bound_scale * smoothness * eta / (1.0 - smoothness * eta);
  for (double r : steps) report.observe(r, bound);
  return report;
}

inline std::vector<double> recorded_steps(const ExperimentLog& log) {
  std::vector<double> out;
  for (const RoundRecord& r : log.rounds())
    if (r.step) out.push_back(*r.step);
  return out;
}

inline std::vector<double> recorded_steps(std::span<const RoundOutcome> outcomes) {
  std::vector<double> out;
  for (const RoundOutcome& o : outcomes)
    if (o.step) out.push_back(*o.step);
  return out;
}

/// sum_i a(i)^2 x_t(i)^2 / <a, x_t>^2 <= 1 for every round.
inline CheckReport check_dual_norm_bound(std::string name, std::span<const SimplexPoint> iterates,
                                         std::span<const PriceRelatives> stream, double bound = 1.0,
                                         double tolerance = 1e-10) {
  if (iterates.size() < stream.size()) throw DomainError("check_dual_norm_bound: fewer iterates than rounds");
  CheckReport report{std::move(name), 0, -std::numeric_limits<double>::infinity(), tolerance, false};
  for (std::size_t t = 0; t < stream.size(); ++t) report.observe(ops_dual_norm_sq(iterates[t], stream[t]), bound);
  return report;
}

/// sum_t f_t(x_{t+1}) - sum_t f_t(x) <= D_h(x, x_1) / eta, a single instance.
inline CheckReport check_lookahead_regret(std::string name, std::span<const double> lookahead_losses,
                                          std::span<const double> comparator_losses, double divergence, double eta,
                                          double bound_scale = 1.0, double tolerance = 1e-6) {
  if (lookahead_losses.size() != comparator_losses.size())
    throw DomainError("check_lookahead_regret: loss sequences differ in length");
  CheckReport report{std::move(name), 0, -std::numeric_limits<double>::infinity(), tolerance, false};
  double regret = 0.0;
  for (std::size_t t = 0; t < lookahead_losses.size(); ++t) regret += lookahead_losses[t] - comparator_losses[t];
  report.observe(regret, bound_scale * divergence / eta);
  return report;
}

inline CheckReport expecting_violation(CheckReport r) {
  r.expect_violation = true;
  return r;
}

// ---------------------------------------------------------------------------
// Sampling

/// Dirichlet(1) point mixed 10% toward the barycenter.
inline Eigen::VectorXd interior_simplex(Rng& rng, Eigen::Index d) {
  return (0.9 * rng.dirichlet(d).array() + 0.1 / static_cast<double>(d)).matrix();
}

/// Gaussian direction projected onto {sum u = 0}.
inline Eigen::VectorXd tangent_direction(Rng& rng, Eigen::Index d) {
  Eigen::VectorXd u = rng.gaussian_vector(d);
  u.array() -= u.mean();
  return u;
}

inline PriceRelatives random_price_relatives(Rng& rng, Eigen::Index d) {
  Eigen::VectorXd a(d);
  for (Eigen::Index i = 0; i < d; ++i) a(i) = rng.uniform();
  if (!(a.maxCoeff() > 0.0)) a.setOnes();
  return PriceRelatives(std::move(a));
}

inline double entropy_smoothness(const PriceRelatives& a) { return a.values().maxCoeff() / a.values().minCoeff(); }

/// Wishart state mixed 10% toward I/d.
inline DensityMatrix interior_density(Rng& rng, Eigen::Index d) { return random_density(d, rng, 0.1); }

/// Rank-one or full-rank PSD observable, each with probability 1/2.
inline Observable random_observable(Rng& rng, Eigen::Index d) {
  if (rng.uniform() < 0.5) return Observable(random_pure_state(d, rng).hermitian());
  return Observable(random_density(d, rng).hermitian());
}

inline HermitianMatrix traceless_direction(Rng& rng, Eigen::Index d) {
  const HermitianMatrix h = random_hermitian(d, rng);
  return h - HermitianMatrix::identity(d) * (h.trace() / static_cast<double>(d));
}

inline HermitianMatrix inverse_of(const HermitianMatrix& rho) {
  const Eigensystem es = eigh(rho);
  return from_eigensystem(es.vectors, es.values.array().inverse().matrix());
}

// ---------------------------------------------------------------------------
// Analytic derivatives of -log <a, x> and -log tr(A rho) along a line.
// With s = <a,u>/<a,x>: D f = -s, D^2 f = s^2, D^3 f = -2 s^3.

inline LineDerivatives ops_line_derivatives(const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                                            const PriceRelatives& a) {
  const double s = a.values().dot(u) / a.values().dot(x);
  return {-s, s * s, -2.0 * s * s * s};
}

inline LineDerivatives quantum_line_derivatives(const HermitianMatrix& rho, const HermitianMatrix& sigma,
                                                const Observable& a) {
  const double s = inner(a.hermitian(), sigma) / inner(a.hermitian(), rho);
  return {-s, s * s, -2.0 * s * s * s};
}

/// -sum log x along x + s u.
inline LineDerivatives logbarrier_line_derivatives(const Eigen::VectorXd& x, const Eigen::VectorXd& u) {
  const Eigen::ArrayXd q = u.array() / x.array();
  return {-q.sum(), q.square().sum(), -2.0 * q.cube().sum()};
}

// ---------------------------------------------------------------------------
// Instance generators

struct OpsLogBarrierPairs {
  Rng rng;
  Eigen::Index d;
  GradientPair<Eigen::VectorXd> operator()() {
    const PriceRelatives a = random_price_relatives(rng, d);
    Eigen::VectorXd x = interior_simplex(rng, d);
    Eigen::VectorXd y = interior_simplex(rng, d);
    return {x, y, ops_gradient(x, a), ops_gradient(y, a), -x.cwiseInverse(), -y.cwiseInverse(), 1.0};
  }
};

struct OpsEntropyPairs {
  Rng rng;
  Eigen::Index d;
  GradientPair<Eigen::VectorXd> operator()() {
    const PriceRelatives a = random_price_relatives(rng, d);
    Eigen::VectorXd x = interior_simplex(rng, d);
    Eigen::VectorXd y = interior_simplex(rng, d);
    return {x, y, ops_gradient(x, a), ops_gradient(y, a), x.array().log().matrix(), y.array().log().matrix(),
            entropy_smoothness(a)};
  }
};

struct QuantumLogDetPairs {
  Rng rng;
  Eigen::Index d;
  GradientPair<HermitianMatrix> operator()() {
    const Observable a = random_observable(rng, d);
    const DensityMatrix rho = interior_density(rng, d);
    const DensityMatrix sigma = interior_density(rng, d);
    return {rho.hermitian(),
            sigma.hermitian(),
            quantum_gradient(rho, a),
            quantum_gradient(sigma, a),
            inverse_of(rho.hermitian()) * -1.0,
            inverse_of(sigma.hermitian()) * -1.0,
            1.0};
  }
};

/// Log barrier near a face: a = e_1, x_1 = delta, y_1 = 2 delta. The ratio of
/// the two pairings tends to 1, so any constant below 1 is broken.
struct OpsLogBarrierWitness {
  Rng rng;
  GradientPair<Eigen::VectorXd> operator()() {
    const Eigen::Index d = 2 + static_cast<Eigen::Index>(rng.index(3));
    const double delta = std::pow(10.0, -2.0 - 2.0 * rng.uniform());
    Eigen::VectorXd rest = rng.dirichlet(d - 1);
    Eigen::VectorXd x(d), y(d);
    x << delta, (1.0 - delta) * rest;
    y << 2.0 * delta, (1.0 - 2.0 * delta) * rest;
    Eigen::VectorXd raw = Eigen::VectorXd::Zero(d);
    raw(0) = 1.0;
    const PriceRelatives a(raw);
    return {x, y, ops_gradient(x, a), ops_gradient(y, a), -x.cwiseInverse(), -y.cwiseInverse(), 1.0};
  }
};

/// Entropy with a = (1, eps), x = (eps, 1 - eps), y = (2 eps, 1 - 2 eps).
/// The pairing ratio is about 0.24 G with G = 1/eps; the supremum over the
/// simplex is G/4, not G.
struct OpsEntropyWitness {
  Rng rng;
  GradientPair<Eigen::VectorXd> operator()() {
    const double eps = std::pow(10.0, -2.0 - 2.0 * rng.uniform());
    Eigen::VectorXd raw(2);
    raw << 1.0, eps;
    const PriceRelatives a(raw);
    Eigen::VectorXd x(2), y(2);
    x << eps, 1.0 - eps;
    y << 2.0 * eps, 1.0 - 2.0 * eps;
    return {x, y, ops_gradient(x, a), ops_gradient(y, a), x.array().log().matrix(), y.array().log().matrix(),
            entropy_smoothness(a)};
  }
};

/// The log-barrier witness embedded in a random basis.
struct QuantumLogDetWitness {
  Rng rng;
  GradientPair<HermitianMatrix> operator()() {
    const Eigen::Index d = 2 + static_cast<Eigen::Index>(rng.index(3));
    const double delta = std::pow(10.0, -2.0 - 2.0 * rng.uniform());
    const ComplexMatrix u = random_unitary(d, rng);
    Eigen::VectorXd rest = rng.dirichlet(d - 1);
    Eigen::VectorXd x(d), y(d);
    x << delta, (1.0 - delta) * rest;
    y << 2.0 * delta, (1.0 - 2.0 * delta) * rest;
    Eigen::VectorXd e1 = Eigen::VectorXd::Zero(d);
    e1(0) = 1.0;
    const Observable a(from_eigensystem(u, e1));
    const DensityMatrix rho(from_eigensystem(u, x));
    const DensityMatrix sigma(from_eigensystem(u, y));
    return {rho.hermitian(),
            sigma.hermitian(),
            quantum_gradient(rho, a),
            quantum_gradient(sigma, a),
            from_eigensystem(u, -x.cwiseInverse()),
            from_eigensystem(u, -y.cwiseInverse()),
            1.0};
  }
};

struct OpsLogBarrierHessians {
  Rng rng;
  Eigen::Index d;
  HessianPair operator()() {
    const PriceRelatives a = random_price_relatives(rng, d);
    const Eigen::VectorXd x = interior_simplex(rng, d);
    const Eigen::VectorXd u = tangent_direction(rng, d);
    return {ops_line_derivatives(x, u, a).second, logbarrier_line_derivatives(x, u).second, 1.0};
  }
};

struct OpsEntropyHessians {
  Rng rng;
  Eigen::Index d;
  HessianPair operator()() {
    const PriceRelatives a = random_price_relatives(rng, d);
    const Eigen::VectorXd x = interior_simplex(rng, d);
    const Eigen::VectorXd u = tangent_direction(rng, d);
    return {ops_line_derivatives(x, u, a).second, (u.array().square() / x.array()).sum(), entropy_smoothness(a)};
  }
};

/// (tr(A sigma)/tr(A rho))^2 against tr((sigma rho^{-1})^2), tr sigma = 0.
struct QuantumLogDetHessians {
  Rng rng;
  Eigen::Index d;
  HessianPair operator()() {
    const Observable a = random_observable(rng, d);
    const DensityMatrix rho = interior_density(rng, d);
    const HermitianMatrix sigma = traceless_direction(rng, d);
    const ComplexMatrix m = sigma.matrix() * inverse_of(rho.hermitian()).matrix();
    return {quantum_line_derivatives(rho.hermitian(), sigma, a).second, (m * m).trace().real(), 1.0};
  }
};

struct OpsLineSamples {
  Rng rng;
  Eigen::Index d;
  LineDerivatives operator()() {
    const PriceRelatives a = random_price_relatives(rng, d);
    const Eigen::VectorXd x = interior_simplex(rng, d);
    return ops_line_derivatives(x, tangent_direction(rng, d), a);
  }
};

struct LogBarrierLineSamples {
  Rng rng;
  Eigen::Index d;
  LineDerivatives operator()() {
    const Eigen::VectorXd x = interior_simplex(rng, d);
    return logbarrier_line_derivatives(x, tangent_direction(rng, d));
  }
};

struct QuantumLineSamples {
  Rng rng;
  Eigen::Index d;
  LineDerivatives operator()() {
    const Observable a = random_observable(rng, d);
    const DensityMatrix rho = interior_density(rng, d);
    return quantum_line_derivatives(rho.hermitian(), traceless_direction(rng, d), a);
  }
};

struct OpsMonotonicitySamples {
  Rng rng;
  Eigen::Index d;
  MonotonicitySample<Eigen::VectorXd> operator()() {
    const PriceRelatives a = random_price_relatives(rng, d);
    Eigen::VectorXd x = interior_simplex(rng, d);
    Eigen::VectorXd y = interior_simplex(rng, d);
    const double r = ops_local_norm(x, y - x, a);
    return {x, y, ops_gradient(x, a), ops_gradient(y, a), r};
  }
};

struct QuantumMonotonicitySamples {
  Rng rng;
  Eigen::Index d;
  MonotonicitySample<HermitianMatrix> operator()() {
    const Observable a = random_observable(rng, d);
    const DensityMatrix rho = interior_density(rng, d);
    const DensityMatrix sigma = interior_density(rng, d);
    const double r = quantum_local_norm(rho, sigma.hermitian() - rho.hermitian(), a);
    return {rho.hermitian(), sigma.hermitian(), quantum_gradient(rho, a), quantum_gradient(sigma, a), r};
  }
};

// ---------------------------------------------------------------------------
// Run-based instances

struct LookaheadInstance {
  std::vector<double> lookahead_losses;
  std::vector<double> comparator_losses;
  double divergence;
  double eta;
};

/// LB-OMD against the clipped best CRP.
inline LookaheadInstance lbomd_lookahead(std::span<const PriceRelatives> stream, double eta) {
  const Eigen::Index d = stream.front().dim();
  LbOmdLearner learner(d, eta);
  const auto traj = record_trajectory(learner, stream);
  const auto horizon = static_cast<std::int64_t>(stream.size());
  const Eigen::VectorXd best = best_crp(stream).point.coords();
  const SimplexPoint clipped(((1.0 - 1.0 / static_cast<double>(horizon)) * best.array() +
                              1.0 / static_cast<double>(horizon * d))
                                 .matrix());
  LookaheadInstance out{{}, {}, LogBarrierMap().divergence(clipped, SimplexPoint::uniform(d)), eta};
  for (std::size_t t = 0; t < stream.size(); ++t) {
    out.lookahead_losses.push_back(ops_loss(traj.iterates[t + 1], stream[t]));
    out.comparator_losses.push_back(ops_loss(clipped, stream[t]));
  }
  return out;
}

/// EG~ internal iterates on the smoothed losses against their best CRP,
/// with the entropy divergence from the barycenter.
inline LookaheadInstance eg_lookahead(std::span<const PriceRelatives> stream, double gamma, double eta) {
  const Eigen::Index d = stream.front().dim();
  std::vector<PriceRelatives> smoothed;
  smoothed.reserve(stream.size());
  for (const PriceRelatives& a : stream) smoothed.push_back(eg_smoothed(a, gamma));
  const SimplexPoint best = best_crp(smoothed).point;
  LookaheadInstance out{{}, {}, EntropyMap().divergence(best, SimplexPoint::uniform(d)), eta};
  EgState state = EgState::initial(d, gamma, eta);
  for (std::size_t t = 0; t < stream.size(); ++t) {
    state = eg_round(state, stream[t]).state;
    out.lookahead_losses.push_back(ops_loss(state.internal, smoothed[t]));
    out.comparator_losses.push_back(ops_loss(best, smoothed[t]));
  }
  return out;
}

/// Q-LB-OMD against the clipped best state.
inline LookaheadInstance qlbomd_lookahead(std::span<const Observable> stream, double eta) {
  const Eigen::Index d = stream.front().dim();
  QLbOmdLearner learner(d, eta);
  const auto traj = record_trajectory(learner, stream);
  const DensityMatrix clipped =
      clipped_comparator(best_fixed_state(stream).point, static_cast<std::int64_t>(stream.size()));
  LookaheadInstance out{{}, {}, LogDetMap().divergence(clipped, DensityMatrix::maximally_mixed(d)), eta};
  for (std::size_t t = 0; t < stream.size(); ++t) {
    out.lookahead_losses.push_back(quantum_loss(traj.iterates[t + 1], stream[t]));
    out.comparator_losses.push_back(quantum_loss(clipped, stream[t]));
  }
  return out;
}

inline CheckReport check_lookahead_regret(std::string name, const LookaheadInstance& inst, double bound_scale = 1.0,
                                          double tolerance = 1e-6) {
  return check_lookahead_regret(std::move(name), inst.lookahead_losses, inst.comparator_losses, inst.divergence,
                                inst.eta, bound_scale, tolerance);
}

/// d = 2 stream that pushes x(1) toward 0 with a = e_2, then plays a = e_1.
/// Each e_1 round after the push moves x(1) by nearly eta/(1-eta) in local norm.
inline std::vector<PriceRelatives> squeeze_stream(std::int64_t push_rounds, std::int64_t probe_rounds) {
  std::vector<PriceRelatives> out;
  for (std::int64_t t = 0; t < push_rounds; ++t) out.emplace_back(Eigen::Vector2d(0.0, 1.0));
  for (std::int64_t t = 0; t < probe_rounds; ++t) out.emplace_back(Eigen::Vector2d(1.0, 0.0));
  return out;
}

// ---------------------------------------------------------------------------
// Suite

inline std::uint64_t check_seed(std::uint64_t seed, std::uint64_t index) {
  return seed + 0x9E3779B97F4A7C15ULL * (index + 1);
}

/// All checks with their weakened counterparts. `samples` applies to each
/// sampled check; run-based checks use fixed horizons.
inline std::vector<CheckReport> run_verify_suite(std::uint64_t seed, std::size_t samples = 1000) {
  std::vector<CheckReport> out;
  std::uint64_t k = 0;
  auto rng = [&] { return Rng(check_seed(seed, k++)); };

  // Relative smoothness, gradient form.
  for (Eigen::Index d : {2, 5}) {
    const std::string dim = "/d" + std::to_string(d);
    out.push_back(check_relative_smoothness_gradient("relsmooth/ops-logbarrier" + dim, OpsLogBarrierPairs{rng(), d},
                                                     samples));
    out.push_back(
        check_relative_smoothness_gradient("relsmooth/ops-entropy" + dim, OpsEntropyPairs{rng(), d}, samples));
  }
  for (Eigen::Index d : {2, 4})
    out.push_back(check_relative_smoothness_gradient("relsmooth/quantum-logdet/d" + std::to_string(d),
                                                     QuantumLogDetPairs{rng(), d}, samples));
  out.push_back(
      check_relative_smoothness_gradient("relsmooth/ops-logbarrier-face", OpsLogBarrierWitness{rng()}, samples));
  out.push_back(check_relative_smoothness_gradient("relsmooth/ops-entropy-face", OpsEntropyWitness{rng()}, samples));
  out.push_back(
      check_relative_smoothness_gradient("relsmooth/quantum-logdet-face", QuantumLogDetWitness{rng()}, samples));
  out.push_back(expecting_violation(check_relative_smoothness_gradient(
      "relsmooth/ops-logbarrier-half-L", OpsLogBarrierWitness{rng()}, samples, 0.5)));
  // The entropy constant G is loose by a factor of 4 on the simplex, so the
  // weakened variant halves the tight constant G/4.
  out.push_back(expecting_violation(check_relative_smoothness_gradient(
      "relsmooth/ops-entropy-eighth-L", OpsEntropyWitness{rng()}, samples, 0.125)));
  out.push_back(expecting_violation(check_relative_smoothness_gradient(
      "relsmooth/quantum-logdet-half-L", QuantumLogDetWitness{rng()}, samples, 0.5)));

  // Relative smoothness, second-derivative form.
  out.push_back(check_hessian_domination("hessian/ops-logbarrier/d5", OpsLogBarrierHessians{rng(), 5}, samples));
  out.push_back(check_hessian_domination("hessian/ops-entropy/d5", OpsEntropyHessians{rng(), 5}, samples));
  for (Eigen::Index d : {2, 4})
    out.push_back(check_hessian_domination("hessian/quantum-logdet/d" + std::to_string(d),
                                           QuantumLogDetHessians{rng(), d}, samples));

  // Self-concordance and barrier parameter.
  out.push_back(check_self_concordance("self-concordance/ops-loss", OpsLineSamples{rng(), 5}, 1.0, samples));
  out.push_back(check_self_concordance("self-concordance/quantum-loss", QuantumLineSamples{rng(), 3}, 1.0, samples));
  out.push_back(check_self_concordance("self-concordance/logbarrier", LogBarrierLineSamples{rng(), 5}, 1.0, samples));
  out.push_back(check_barrier("barrier/ops-loss", OpsLineSamples{rng(), 5}, 1.0, samples));
  out.push_back(check_barrier("barrier/quantum-loss", QuantumLineSamples{rng(), 3}, 1.0, samples));
  out.push_back(check_barrier("barrier/logbarrier", LogBarrierLineSamples{rng(), 5}, 5.0, samples));
  out.push_back(expecting_violation(
      check_self_concordance("self-concordance/ops-loss-half-M", OpsLineSamples{rng(), 5}, 0.5, samples)));
  out.push_back(
      expecting_violation(check_barrier("barrier/ops-loss-half-nu", OpsLineSamples{rng(), 5}, 0.5, samples)));

  // Monotonicity under self-concordance.
  out.push_back(check_self_concordance_monotonicity("monotonicity/ops", OpsMonotonicitySamples{rng(), 5}, samples));
  out.push_back(
      check_self_concordance_monotonicity("monotonicity/quantum", QuantumMonotonicitySamples{rng(), 3}, samples));
  out.push_back(expecting_violation(check_self_concordance_monotonicity(
      "monotonicity/ops-double-rhs", OpsMonotonicitySamples{rng(), 5}, samples, 2.0)));

  // Run-based checks.
  {
    const auto stream = bench::generate_market(bench::MarketKind::iid_uniform, 5, 2000, check_seed(seed, k++));
    const double eta = lb_schedule(2000, 5);
    LbOmdLearner learner(5, eta);
    const auto traj = record_trajectory(learner, std::span<const PriceRelatives>(stream));
    const auto steps = recorded_steps(traj.outcomes);
    out.push_back(check_stepsize_lemma("stepsize/lb-omd", steps, 1.0, eta));
    out.push_back(check_lookahead_regret("lookahead/lb-omd", lbomd_lookahead(stream, eta)));

    LbFtrlLearner ftrl(5, lbftrl_schedule(2000, 5));
    const auto ftraj = record_trajectory(ftrl, std::span<const PriceRelatives>(stream));
    out.push_back(check_dual_norm_bound("dual-norm/lb-ftrl", ftraj.iterates, stream));
  }
  {
    const auto stream = bench::generate_market(bench::MarketKind::iid_uniform, 10, 2000, check_seed(seed, k++));
    const EgSchedule s = eg_schedule(2000, 10);
    out.push_back(check_lookahead_regret("lookahead/eg", eg_lookahead(stream, s.gamma, s.eta)));
  }
  {
    const auto qs = bench::generate_quantum_stream(3, 300, check_seed(seed, k++), bench::StateKind::random_mixed,
                                                   bench::PovmKind::random_basis);
    const double eta = lb_schedule(300, 3);
    QLbOmdLearner learner(3, eta);
    const auto traj = record_trajectory(learner, std::span<const Observable>(qs.observables));
    out.push_back(check_stepsize_lemma("stepsize/q-lb-omd", recorded_steps(traj.outcomes), 1.0, eta));
    out.push_back(check_lookahead_regret("lookahead/q-lb-omd", qlbomd_lookahead(qs.observables, eta)));
  }
  {
    const auto stream = squeeze_stream(200, 5);
    const double eta = 0.25;
    LbOmdLearner learner(2, eta);
    const auto traj = record_trajectory(learner, std::span<const PriceRelatives>(stream));
    const auto steps = recorded_steps(traj.outcomes);
    out.push_back(check_stepsize_lemma("stepsize/lb-omd-squeeze", steps, 1.0, eta));
    out.push_back(expecting_violation(check_stepsize_lemma("stepsize/lb-omd-half-bound", steps, 1.0, eta, 0.5)));

    LbFtrlLearner ftrl(2, eta);
    const auto ftraj = record_trajectory(ftrl, std::span<const PriceRelatives>(stream));
    out.push_back(check_dual_norm_bound("dual-norm/lb-ftrl-squeeze", ftraj.iterates, stream));
    out.push_back(
        expecting_violation(check_dual_norm_bound("dual-norm/lb-ftrl-half-bound", ftraj.iterates, stream, 0.5)));

    const LookaheadInstance look = lbomd_lookahead(stream, eta);
    out.push_back(check_lookahead_regret("lookahead/lb-omd-squeeze", look));
    out.push_back(expecting_violation(check_lookahead_regret("lookahead/lb-omd-half-bound", look, 0.5)));
  }
  return out;
}

inline bool all_passed(std::span<const CheckReport> reports) {
  return std::all_of(reports.begin(), reports.end(), [](const CheckReport& r) { return r.passed(); });
}

}  // namespace scomd::verify
