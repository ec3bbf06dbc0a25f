#pragma once

// Density-matrix decision space and Q-LB-OMD: mirror descent with
// h(rho) = -log det rho over unit-trace Hermitian PSD matrices.

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "scomd/error.hpp"
#include "scomd/newton.hpp"
#include "scomd/omd.hpp"
#include "scomd/random.hpp"

namespace scomd {

using ComplexMatrix = Eigen::MatrixXcd;

/// Complex Hermitian matrix; symmetrized as (M + M^*)/2 at construction.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;

  explicit HermitianMatrix(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) throw DomainError("HermitianMatrix: matrix must be square");
    m_ = 0.5 * (m + m.adjoint());
  }

  static HermitianMatrix identity(Eigen::Index d) { return HermitianMatrix(ComplexMatrix::Identity(d, d)); }
  static HermitianMatrix zero(Eigen::Index d) { return HermitianMatrix(ComplexMatrix::Zero(d, d)); }

  static HermitianMatrix diagonal(const Eigen::VectorXd& diag) {
    return HermitianMatrix(diag.cast<std::complex<double>>().asDiagonal().toDenseMatrix());
  }

  /// u u^* for a (not necessarily normalized) vector u.
  static HermitianMatrix outer(const Eigen::VectorXcd& u) { return HermitianMatrix(u * u.adjoint()); }

  const ComplexMatrix& matrix() const noexcept { return m_; }
  Eigen::Index dim() const noexcept { return m_.rows(); }
  double trace() const { return m_.trace().real(); }
  Eigen::VectorXd diagonal_real() const { return m_.diagonal().real(); }

  HermitianMatrix operator+(const HermitianMatrix& o) const { return HermitianMatrix(m_ + o.m_); }
  HermitianMatrix operator-(const HermitianMatrix& o) const { return HermitianMatrix(m_ - o.m_); }
  HermitianMatrix operator*(double s) const { return HermitianMatrix(m_ * s); }
  friend HermitianMatrix operator*(double s, const HermitianMatrix& h) { return h * s; }

 private:
  ComplexMatrix m_;
};

inline bool all_finite(const HermitianMatrix& h) { return h.matrix().allFinite(); }

/// Real Frobenius inner product Re tr(A B) (both Hermitian, so tr(AB) is real).
inline double inner(const HermitianMatrix& a, const HermitianMatrix& b) {
  return (a.matrix().conjugate().cwiseProduct(b.matrix())).sum().real();
}

struct Eigensystem {
  Eigen::VectorXd values;  // ascending
  ComplexMatrix vectors;   // columns are orthonormal eigenvectors
};

inline Eigensystem eigh(const HermitianMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h.matrix());
  if (solver.info() != Eigen::Success) throw Error("Hermitian eigendecomposition failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

/// U diag(values) U^*
inline HermitianMatrix from_eigensystem(const ComplexMatrix& vectors, const Eigen::VectorXd& values) {
  return HermitianMatrix(vectors * values.cast<std::complex<double>>().asDiagonal() * vectors.adjoint());
}

/// Unit-trace Hermitian PSD matrix.
class DensityMatrix {
 public:
  static constexpr double trace_tolerance = 1e-9;
  static constexpr double eigenvalue_floor = -1e-10;

  explicit DensityMatrix(HermitianMatrix rho) : rho_(std::move(rho)) {
    if (!all_finite(rho_)) throw DomainError("DensityMatrix: non-finite entry");
    if (std::abs(rho_.trace() - 1.0) > trace_tolerance)
      throw DomainError("DensityMatrix: trace is " + std::to_string(rho_.trace()));
    min_eigenvalue_ = eigh(rho_).values(0);
    if (min_eigenvalue_ < eigenvalue_floor)
      throw DomainError("DensityMatrix: negative eigenvalue " + std::to_string(min_eigenvalue_));
  }

  static DensityMatrix maximally_mixed(Eigen::Index d) {
    return DensityMatrix(HermitianMatrix::identity(d) * (1.0 / static_cast<double>(d)));
  }

  const HermitianMatrix& hermitian() const noexcept { return rho_; }
  const ComplexMatrix& matrix() const noexcept { return rho_.matrix(); }
  Eigen::Index dim() const noexcept { return rho_.dim(); }
  double min_eigenvalue() const noexcept { return min_eigenvalue_; }
  bool is_interior() const noexcept { return min_eigenvalue_ > 0.0; }

 private:
  HermitianMatrix rho_;
  double min_eigenvalue_ = 0.0;
};

/// PSD observable, scaled at construction so that its largest eigenvalue is 1.
class Observable {
 public:
  static constexpr double eigenvalue_floor = -1e-10;

  explicit Observable(const HermitianMatrix& a) {
    if (!all_finite(a)) throw DataError("Observable: non-finite entry");
    const Eigen::VectorXd ev = eigh(a).values;
    const double top = ev(ev.size() - 1);
    if (!(top > 0.0)) throw DataError("Observable: matrix is zero or negative semidefinite");
    if (ev(0) / top < eigenvalue_floor) throw DataError("Observable: matrix is not PSD");
    a_ = a * (1.0 / top);
  }

  const HermitianMatrix& hermitian() const noexcept { return a_; }
  const ComplexMatrix& matrix() const noexcept { return a_.matrix(); }
  Eigen::Index dim() const noexcept { return a_.dim(); }

 private:
  HermitianMatrix a_;
};

/// PSD effects summing to the identity.
class Povm {
 public:
  static constexpr double completeness_tolerance = 1e-9;

  explicit Povm(std::vector<HermitianMatrix> effects) : effects_(std::move(effects)) {
    if (effects_.empty()) throw DataError("Povm: no effects");
    const Eigen::Index d = effects_.front().dim();
    ComplexMatrix sum = ComplexMatrix::Zero(d, d);
    for (const HermitianMatrix& m : effects_) {
      if (m.dim() != d) throw DataError("Povm: effects differ in dimension");
      if (eigh(m).values(0) < -1e-10) throw DataError("Povm: effect is not PSD");
      sum += m.matrix();
    }
    const double dev = (sum - ComplexMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
    if (dev > completeness_tolerance)
      throw DataError("Povm: effects do not sum to identity (deviation " + std::to_string(dev) + ")");
  }

  const std::vector<HermitianMatrix>& effects() const noexcept { return effects_; }
  std::size_t size() const noexcept { return effects_.size(); }
  Eigen::Index dim() const noexcept { return effects_.front().dim(); }

 private:
  std::vector<HermitianMatrix> effects_;
};

namespace detail {
inline double checked_expectation(const HermitianMatrix& rho, const Observable& a) {
  if (rho.dim() != a.dim()) throw DomainError("observable and state differ in dimension");
  const double v = inner(a.hermitian(), rho);
  if (!(v > 0.0)) throw DegenerateRound("tr(A rho) <= 0: loss is infinite");
  return v;
}
}  // namespace detail

/// f(rho) = -log tr(A rho)
inline double quantum_loss(const DensityMatrix& rho, const Observable& a) {
  return -std::log(detail::checked_expectation(rho.hermitian(), a));
}

/// grad f(rho) = -A / tr(A rho)
inline HermitianMatrix quantum_gradient(const DensityMatrix& rho, const Observable& a) {
  return a.hermitian() * (-1.0 / detail::checked_expectation(rho.hermitian(), a));
}

/// |tr(A sigma)| / tr(A rho), the local norm of sigma at rho.
inline double quantum_local_norm(const DensityMatrix& rho, const HermitianMatrix& sigma, const Observable& a) {
  return std::abs(inner(a.hermitian(), sigma)) / detail::checked_expectation(rho.hermitian(), a);
}

struct LogDetProx {
  DensityMatrix point;
  NewtonSolveReport report;
};

inline constexpr double logdet_trace_tolerance = 1e-10;

/// argmin_{rho in D_d} eta <G, rho> + D_h(rho, rho_t), h = -log det.
///
/// Stationarity gives rho = (M + lambda I)^{-1} with M = rho_t^{-1} + eta G.
/// rho_t^{-1} is formed in rho_t's eigenbasis; M is diagonalized once and the
/// multiplier solves sum_i 1/(mu_i + lambda) = 1.
inline LogDetProx logdet_prox(const DensityMatrix& rho_t, const HermitianMatrix& gradient, double eta) {
  if (!rho_t.is_interior()) throw DomainError("logdet_prox: rho_t must be positive definite");
  if (gradient.dim() != rho_t.dim()) throw DomainError("logdet_prox: dimension mismatch");
  if (!all_finite(gradient)) throw DomainError("logdet_prox: non-finite gradient");
  if (!(eta > 0.0)) throw DomainError("logdet_prox: eta must be positive");

  const Eigensystem state = eigh(rho_t.hermitian());
  if (!(state.values.array() > 0.0).all()) throw DomainError("logdet_prox: rho_t is numerically singular");
  const HermitianMatrix inverse = from_eigensystem(state.vectors, state.values.array().inverse().matrix());
  const HermitianMatrix scaled = gradient * eta;
  const Eigensystem shifted = eigh(inverse + scaled);

  MultiplierSolution sol = solve_reciprocal_multiplier(shifted.values);
  sol.report.ill_conditioned = scaled.matrix().cwiseAbs().maxCoeff() > conditioning_threshold;
  HermitianMatrix next = from_eigensystem(shifted.vectors, sol.weights);
  const double trace_residual = std::abs(next.trace() - 1.0);
  if (trace_residual > logdet_trace_tolerance)
    throw NewtonFailure("logdet_prox: trace residual " + std::to_string(trace_residual), sol.report.iterations,
                        trace_residual);
  sol.report.residual = std::max(sol.report.residual, trace_residual);
  return {DensityMatrix(std::move(next)), sol.report};
}

/// h(rho) = -log det rho on the density matrices.
struct LogDetMap {
  using Point = DensityMatrix;
  using Dual = HermitianMatrix;

  bool interior(const DensityMatrix& rho) const { return rho.is_interior(); }

  double value(const DensityMatrix& rho) const {
    const Eigen::VectorXd ev = eigh(rho.hermitian()).values;
    if (!(ev.array() > 0.0).all()) return std::numeric_limits<double>::infinity();
    return -ev.array().log().sum();
  }

  HermitianMatrix gradient(const DensityMatrix& rho) const {
    const Eigensystem es = eigh(rho.hermitian());
    return from_eigensystem(es.vectors, -es.values.array().inverse().matrix());
  }

  /// -log det rho + log det sigma + tr(sigma^{-1} rho) - d
  double divergence(const DensityMatrix& rho, const DensityMatrix& sigma) const {
    const double h_rho = value(rho);
    if (!std::isfinite(h_rho)) return std::numeric_limits<double>::infinity();
    const Eigensystem es = eigh(sigma.hermitian());
    const HermitianMatrix sigma_inv = from_eigensystem(es.vectors, es.values.array().inverse().matrix());
    return h_rho + es.values.array().log().sum() + inner(sigma_inv, rho.hermitian()) -
           static_cast<double>(rho.dim());
  }

  ProxStep<DensityMatrix> prox(const DensityMatrix& rho, const HermitianMatrix& g, double eta) const {
    LogDetProx p = logdet_prox(rho, g, eta);
    return {std::move(p.point), p.report};
  }
};

static_assert(MirrorMap<LogDetMap>);

struct QLbOmdRoundResult {
  DensityMatrix next;
  double loss;
  double step;  // |tr(A (rho_t - rho_{t+1}))| / tr(A rho_t)
  NewtonSolveReport report;
};

inline QLbOmdRoundResult qlbomd_round(const DensityMatrix& rho_t, const Observable& a, double eta) {
  const double loss = quantum_loss(rho_t, a);
  const LogDetMap map;
  OmdState<DensityMatrix> state{rho_t, eta, 1, {}};
  OmdState<DensityMatrix> next = omd_round(state, map, quantum_gradient(rho_t, a));
  const double step = quantum_local_norm(rho_t, rho_t.hermitian() - next.iterate.hermitian(), a);
  return {std::move(next.iterate), loss, step, next.last_solve};
}

/// (1 - 1/T) rho + I/(T d)
inline DensityMatrix clipped_comparator(const DensityMatrix& rho, std::int64_t horizon) {
  if (horizon < 2) throw DomainError("clipped_comparator: requires T >= 2");
  const double t = static_cast<double>(horizon);
  const Eigen::Index d = rho.dim();
  return DensityMatrix(rho.hermitian() * (1.0 - 1.0 / t) +
                       HermitianMatrix::identity(d) * (1.0 / (t * static_cast<double>(d))));
}

struct Measurement {
  std::size_t outcome;  // 0-based index into the POVM
  Observable observable;
};

/// Draws k with probability tr(M_k rho) by inverse-CDF on one uniform draw.
inline Measurement sample_measurement(const DensityMatrix& truth, const Povm& povm, Rng& rng) {
  if (povm.dim() != truth.dim()) throw DomainError("sample_measurement: dimension mismatch");
  std::vector<double> probs;
  probs.reserve(povm.size());
  double total = 0.0;
  for (const HermitianMatrix& m : povm.effects()) {
    probs.push_back(std::max(0.0, inner(m, truth.hermitian())));
    total += probs.back();
  }
  if (std::abs(total - 1.0) > 1e-8)
    throw DataError("sample_measurement: outcome probabilities sum to " + std::to_string(total));
  const double u = rng.uniform() * total;
  double acc = 0.0;
  std::size_t k = 0;
  for (; k + 1 < probs.size(); ++k) {
    acc += probs[k];
    if (u < acc) break;
  }
  // Skip zero-probability effects the loop may land on through rounding.
  while (probs[k] <= 0.0 && k > 0) --k;
  return {k, Observable(povm.effects()[k])};
}

inline Measurement sample_measurement(const DensityMatrix& truth, const Povm& povm, std::uint64_t seed) {
  Rng rng(seed);
  return sample_measurement(truth, povm, rng);
}

class QLbOmdLearner {
 public:
  QLbOmdLearner(Eigen::Index d, double eta) : rho_(DensityMatrix::maximally_mixed(d)), eta_(eta) {
    if (!(eta > 0.0 && eta < 1.0)) throw ScheduleError("Q-LB-OMD: eta must lie in (0,1)");
  }

  const DensityMatrix& current() const noexcept { return rho_; }
  double eta() const noexcept { return eta_; }

  RoundOutcome observe(const Observable& a) {
    QLbOmdRoundResult r = qlbomd_round(rho_, a, eta_);
    rho_ = std::move(r.next);
    return {r.loss, r.step, r.report};
  }

 private:
  DensityMatrix rho_;
  double eta_;
};

// ---------------------------------------------------------------------------
// Random states and measurements used by stream generators and verifiers.

/// Haar-random unitary: QR of a complex Gaussian matrix with the phases of
/// R's diagonal moved into Q.
inline ComplexMatrix random_unitary(Eigen::Index d, Rng& rng) {
  const ComplexMatrix z = rng.complex_gaussian_matrix(d, d);
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(d, d);
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < d; ++j) {
    const std::complex<double> rjj = r(j, j);
    const double mag = std::abs(rjj);
    if (mag > 0.0) q.col(j) *= rjj / mag;
  }
  return q;
}

/// G G^* / tr(G G^*) for complex Gaussian G, mixed with weight `center_mix`
/// toward I/d.
inline DensityMatrix random_density(Eigen::Index d, Rng& rng, double center_mix = 0.0) {
  const ComplexMatrix g = rng.complex_gaussian_matrix(d, d);
  ComplexMatrix w = g * g.adjoint();
  w /= w.trace().real();
  w = (1.0 - center_mix) * w + (center_mix / static_cast<double>(d)) * ComplexMatrix::Identity(d, d);
  return DensityMatrix(HermitianMatrix(w));
}

inline DensityMatrix random_pure_state(Eigen::Index d, Rng& rng) {
  Eigen::VectorXcd u = rng.complex_gaussian_matrix(d, 1).col(0);
  u.normalize();
  return DensityMatrix(HermitianMatrix::outer(u));
}

/// Random Hermitian direction with i.i.d. complex Gaussian entries, symmetrized.
inline HermitianMatrix random_hermitian(Eigen::Index d, Rng& rng) {
  return HermitianMatrix(rng.complex_gaussian_matrix(d, d));
}

}  // namespace scomd
