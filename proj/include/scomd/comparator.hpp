#pragma once

// Best fixed action in hindsight, with a certified optimality gap.
//
// Both problems minimize a sum of -log of linear functionals over a compact
// convex set, and each result carries a gap with objective - min <= gap.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "scomd/error.hpp"
#include "scomd/ops.hpp"
#include "scomd/quantum.hpp"
#include "scomd/simplex.hpp"

namespace scomd {

struct ComparatorOptions {
  double tolerance = 1e-6;
  int max_iterations = 100000;
};

template <class Point>
struct ComparatorResult {
  Point point;
  double objective;  // sum_t f_t(x*), nats
  double gap;        // certified: objective - optimum <= gap
  int iterations;
  std::vector<double> per_round_losses;
};

namespace detail {

/// argmin over [0, max_step] of -sum log(base + s * dir), assuming base > 0
/// and a negative derivative at 0. Safeguarded Newton on the derivative.
inline double log_line_search(const Eigen::VectorXd& base, const Eigen::VectorXd& dir, double max_step) {
  double domain_end = std::numeric_limits<double>::infinity();
  for (Eigen::Index t = 0; t < base.size(); ++t)
    if (dir(t) < 0.0) domain_end = std::min(domain_end, -base(t) / dir(t));

  auto derivative = [&](double s, double& second, double& scale) {
    double first = 0.0;
    second = 0.0;
    scale = 0.0;
    for (Eigen::Index t = 0; t < base.size(); ++t) {
      const double q = dir(t) / (base(t) + s * dir(t));
      first -= q;
      second += q * q;
      scale += std::abs(q);
    }
    return first;
  };

  double second = 0.0;
  double scale = 0.0;
  double hi = max_step;
  if (domain_end > max_step) {
    if (derivative(max_step, second, scale) <= 0.0) return max_step;
  } else {
    hi = domain_end;
  }

  double lo = 0.0;
  double s = 0.0;
  for (int it = 0; it < 200; ++it) {
    const double first = derivative(s, second, scale);
    if (std::abs(first) <= 1e-13 * std::max(1.0, scale)) break;
    if (first < 0.0)
      lo = s;
    else
      hi = s;
    double next = s - first / second;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, hi)) break;
    s = next;
  }
  // The last evaluated point is inside the domain; lo never exceeds it.
  return std::max(lo, std::min(s, hi));
}

struct CrpSolve {
  Eigen::VectorXd x;
  double objective;
  double gap;
  int iterations;
};

inline double loss_sum(const Eigen::VectorXd& returns) { return -returns.array().log().sum(); }

/// Away-step Frank-Wolfe for min_{x in simplex} -sum_t log (R x)_t, R >= 0
/// with no zero row. Exact line search along each direction.
inline CrpSolve solve_crp(const Eigen::MatrixXd& rows, const Eigen::VectorXd& start, const ComparatorOptions& opt) {
  const Eigen::Index d = rows.cols();
  Eigen::VectorXd x = start;
  Eigen::VectorXd rx = rows * x;
  if (!(rx.array() > 0.0).all()) {
    x = Eigen::VectorXd::Constant(d, 1.0 / static_cast<double>(d));
    rx = rows * x;
  }

  for (int it = 0; it < opt.max_iterations; ++it) {
    if (it % 64 == 0) rx = rows * x;
    const Eigen::VectorXd grad = -(rows.transpose() * rx.cwiseInverse());
    Eigen::Index fw = 0;
    grad.minCoeff(&fw);
    const double gx = grad.dot(x);
    double fw_gap = gx - grad(fw);

    if (fw_gap <= opt.tolerance) {
      rx = rows * x;
      const Eigen::VectorXd fresh = -(rows.transpose() * rx.cwiseInverse());
      const double fresh_gap = fresh.dot(x) - fresh.minCoeff();
      if (fresh_gap <= opt.tolerance) return {x, loss_sum(rx), std::max(0.0, fresh_gap), it};
      continue;
    }

    Eigen::Index away = -1;
    for (Eigen::Index i = 0; i < d; ++i)
      if (x(i) > 0.0 && (away < 0 || grad(i) > grad(away))) away = i;
    const double away_gap = away >= 0 ? grad(away) - gx : 0.0;

    Eigen::VectorXd dir;
    Eigen::VectorXd rdir;
    double max_step = 1.0;
    const bool use_away = away_gap > fw_gap && x(away) < 1.0;
    if (!use_away) {
      dir = -x;
      dir(fw) += 1.0;
      rdir = rows.col(fw) - rx;
    } else {
      dir = x;
      dir(away) -= 1.0;
      rdir = rx - rows.col(away);
      max_step = x(away) / (1.0 - x(away));
    }

    const double step = log_line_search(rx, rdir, max_step);
    x += step * dir;
    rx += step * rdir;
    if (use_away && step >= max_step) x(away) = 0.0;
    x = x.cwiseMax(0.0);
    x /= x.sum();
  }
  throw SolverBudgetExhausted("comparator: conditional-gradient iteration budget exhausted");
}

}  // namespace detail

/// Same problem on raw nonnegative rows (one per round, no zero rows); used
/// when the losses are not normalized price relatives.
inline ComparatorResult<SimplexPoint> best_crp_rows(const Eigen::MatrixXd& rows, const ComparatorOptions& opt = {}) {
  if (rows.rows() == 0 || rows.cols() == 0) throw DomainError("best_crp_rows: empty input");
  if (!(opt.tolerance > 0.0)) throw DomainError("best_crp_rows: tolerance must be positive");
  if ((rows.array() < 0.0).any()) throw DataError("best_crp_rows: negative entry");
  if (!(rows.rowwise().maxCoeff().array() > 0.0).all()) throw DataError("best_crp_rows: zero row");
  const Eigen::Index d = rows.cols();
  detail::CrpSolve sol = detail::solve_crp(rows, Eigen::VectorXd::Constant(d, 1.0 / static_cast<double>(d)), opt);
  const Eigen::VectorXd returns = rows * sol.x;
  std::vector<double> per_round(static_cast<std::size_t>(returns.size()));
  for (Eigen::Index t = 0; t < returns.size(); ++t) per_round[static_cast<std::size_t>(t)] = -std::log(returns(t));
  return {SimplexPoint(std::move(sol.x)), sol.objective, sol.gap, sol.iterations, std::move(per_round)};
}

/// Best constant-rebalanced portfolio: argmin_{x in simplex} sum_t -log <a_t, x>.
inline ComparatorResult<SimplexPoint> best_crp(std::span<const PriceRelatives> stream,
                                               const ComparatorOptions& opt = {}) {
  if (stream.empty()) throw DomainError("best_crp: empty stream");
  if (!(opt.tolerance > 0.0)) throw DomainError("best_crp: tolerance must be positive");
  const Eigen::Index d = stream.front().dim();
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(stream.size()), d);
  for (std::size_t t = 0; t < stream.size(); ++t) {
    if (stream[t].dim() != d) throw DomainError("best_crp: price relatives differ in dimension");
    rows.row(static_cast<Eigen::Index>(t)) = stream[t].values().transpose();
  }
  return best_crp_rows(rows, opt);
}

namespace detail {

/// Coordinates of Hermitian matrices in the orthonormal basis
///   e_ii,  (e_ij + e_ji)/sqrt2,  i(e_ij - e_ji)/sqrt2   (i < j)
/// under the real inner product Re tr(AB).
inline Eigen::VectorXd hermitian_coords(const ComplexMatrix& a) {
  const Eigen::Index d = a.rows();
  Eigen::VectorXd c(d * d);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < d; ++i) c(k++) = a(i, i).real();
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = i + 1; j < d; ++j) {
      c(k++) = std::numbers::sqrt2 * a(i, j).real();
      c(k++) = std::numbers::sqrt2 * a(i, j).imag();
    }
  return c;
}

inline ComplexMatrix hermitian_from_coords(const Eigen::VectorXd& c, Eigen::Index d) {
  ComplexMatrix a = ComplexMatrix::Zero(d, d);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < d; ++i) a(i, i) = c(k++);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = i + 1; j < d; ++j) {
      const std::complex<double> v(c(k) / std::numbers::sqrt2, c(k + 1) / std::numbers::sqrt2);
      k += 2;
      a(i, j) = v;
      a(j, i) = std::conj(v);
    }
  return a;
}

}  // namespace detail

/// Best fixed density matrix: argmin_{rho in D_d} sum_t -log tr(A_t rho).
///
/// Primal path following on f(rho) - mu log det rho with damped Newton steps
/// in real coordinates (trace fixed by a multiplier), mu shrinking tenfold per
/// stage. The certificate uses the dual point y_t = 1 / (lambda tr(A_t rho)),
/// lambda = lambda_max(sum_t A_t / tr(A_t rho)), which is feasible for
/// sum_t y_t A_t <= I and gives f(rho) - min f <= T log(lambda / T).
inline ComparatorResult<DensityMatrix> best_fixed_state(std::span<const Observable> stream,
                                                        const ComparatorOptions& opt = {}) {
  if (stream.empty()) throw DomainError("best_fixed_state: empty stream");
  if (!(opt.tolerance > 0.0)) throw DomainError("best_fixed_state: tolerance must be positive");
  const Eigen::Index d = stream.front().dim();
  const auto horizon = static_cast<Eigen::Index>(stream.size());
  for (const Observable& a : stream)
    if (a.dim() != d) throw DomainError("best_fixed_state: observables differ in dimension");
  const double t_count = static_cast<double>(horizon);
  const Eigen::Index n = d * d;

  Eigen::MatrixXd coeffs(horizon, n);
  for (Eigen::Index t = 0; t < horizon; ++t)
    coeffs.row(t) = detail::hermitian_coords(stream[static_cast<std::size_t>(t)].matrix()).transpose();
  const Eigen::VectorXd trace_row = detail::hermitian_coords(ComplexMatrix::Identity(d, d));

  Eigen::VectorXd r = trace_row / static_cast<double>(d);
  auto eigen_of = [&](const Eigen::VectorXd& coords) {
    return eigh(HermitianMatrix(detail::hermitian_from_coords(coords, d)));
  };
  // f(rho) - mu log det rho, or +inf outside the domain.
  auto barrier_value = [&](const Eigen::VectorXd& coords, double mu) {
    const Eigen::VectorXd a = coeffs * coords;
    if (!(a.array() > 0.0).all()) return std::numeric_limits<double>::infinity();
    const Eigen::VectorXd ev = eigen_of(coords).values;
    if (!(ev.array() > 0.0).all()) return std::numeric_limits<double>::infinity();
    return -a.array().log().sum() - mu * ev.array().log().sum();
  };
  auto certified_gap = [&](const Eigen::VectorXd& coords) {
    const Eigen::VectorXd a = coeffs * coords;
    const Eigen::VectorXd score = coeffs.transpose() * a.cwiseInverse();
    const double top = eigen_of(score).values(d - 1);
    return t_count * std::log(std::max(top, t_count) / t_count);
  };

  int iterations = 0;
  double mu = t_count / static_cast<double>(d);
  for (int stage = 0; stage < 60; ++stage) {
    for (int it = 0; it < 100 && iterations < opt.max_iterations; ++it, ++iterations) {
      const Eigen::VectorXd a = coeffs * r;
      const Eigensystem es = eigen_of(r);
      const ComplexMatrix inv_sqrt =
          es.vectors * es.values.array().rsqrt().matrix().cast<std::complex<double>>().asDiagonal() *
          es.vectors.adjoint();
      const ComplexMatrix inv = inv_sqrt * inv_sqrt;

      Eigen::VectorXd grad = -(coeffs.transpose() * a.cwiseInverse()) - mu * detail::hermitian_coords(inv);
      const Eigen::MatrixXd scaled = a.cwiseInverse().asDiagonal() * coeffs;
      Eigen::MatrixXd hess = scaled.transpose() * scaled;
      // Barrier Hessian mu <B_k, B_l> with B_k = rho^{-1/2} E_k rho^{-1/2}.
      Eigen::MatrixXd b(n, n);
      for (Eigen::Index k = 0; k < n; ++k) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
        e(k) = 1.0;
        b.col(k) = detail::hermitian_coords(inv_sqrt * detail::hermitian_from_coords(e, d) * inv_sqrt);
      }
      hess += mu * (b.transpose() * b);

      Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(n + 1, n + 1);
      kkt.topLeftCorner(n, n) = hess;
      kkt.topRightCorner(n, 1) = trace_row;
      kkt.bottomLeftCorner(1, n) = trace_row.transpose();
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
      rhs.head(n) = -grad;
      const Eigen::VectorXd sol = kkt.fullPivLu().solve(rhs);
      const Eigen::VectorXd step = sol.head(n);
      const double decrement = step.dot(hess * step);
      if (!(decrement > 1e-20)) break;

      const double f0 = barrier_value(r, mu);
      const double slope = grad.dot(step);
      double s = 1.0 / (1.0 + std::sqrt(decrement));
      if (decrement < 0.0625) s = 1.0;
      while (s > 1e-12 && !(barrier_value(r + s * step, mu) <= f0 + 0.25 * s * slope)) s *= 0.5;
      if (s <= 1e-12) break;
      r += s * step;
      r /= trace_row.dot(r);
      if (decrement < 1e-18) break;
    }
    if (mu * static_cast<double>(d) <= 0.5 * opt.tolerance || iterations >= opt.max_iterations) {
      if (certified_gap(r) <= opt.tolerance) break;
      if (iterations >= opt.max_iterations || mu < 1e-300)
        throw SolverBudgetExhausted("best_fixed_state: iteration budget exhausted");
    }
    mu *= 0.1;
  }

  const double gap = certified_gap(r);
  if (!(gap <= opt.tolerance)) throw SolverBudgetExhausted("best_fixed_state: gap did not reach the tolerance");
  const Eigen::VectorXd a = coeffs * r;
  std::vector<double> per_round(static_cast<std::size_t>(horizon));
  for (Eigen::Index t = 0; t < horizon; ++t) per_round[static_cast<std::size_t>(t)] = -std::log(a(t));
  return {DensityMatrix(HermitianMatrix(detail::hermitian_from_coords(r, d))), -a.array().log().sum(), gap,
          iterations, std::move(per_round)};
}

}  // namespace scomd
