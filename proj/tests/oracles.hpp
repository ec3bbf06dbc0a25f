#pragma once

// Brute-force and closed-form reference solutions used only by the tests.
// Nothing here calls into the library's solvers.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <utility>

#include <Eigen/Dense>

namespace oracle {

/// Larger root of x^2 + b x + c = 0.
inline double larger_root(double b, double c) { return 0.5 * (-b + std::sqrt(b * b - 4.0 * c)); }

/// Central difference of f at 0 with step h.
inline double central_difference(const std::function<double(double)>& f, double h = 1e-5) {
  return (f(h) - f(-h)) / (2.0 * h);
}

struct GridMin {
  Eigen::VectorXd point;
  double value;
};

/// Minimizes f over the open 1-simplex {(p, 1-p)} on a uniform grid of the
/// given step, evaluating every grid point.
inline GridMin simplex2_grid(const std::function<double(const Eigen::VectorXd&)>& f, double step) {
  GridMin best{Eigen::Vector2d(0.5, 0.5), std::numeric_limits<double>::infinity()};
  const long n = std::lround(1.0 / step);
  Eigen::VectorXd x(2);
  for (long k = 1; k < n; ++k) {
    x << static_cast<double>(k) * step, 1.0 - static_cast<double>(k) * step;
    const double v = f(x);
    if (v < best.value) best = {x, v};
  }
  return best;
}

/// Minimizes a convex f over the open 2-simplex: full grid at `coarse`, then
/// repeated full grids on a window of +-2 cells around the incumbent with the
/// cell shrunk 10x, down to `fine`.
inline GridMin simplex3_grid(const std::function<double(const Eigen::VectorXd&)>& f, double coarse, double fine) {
  GridMin best{Eigen::Vector3d::Constant(1.0 / 3.0), std::numeric_limits<double>::infinity()};
  Eigen::VectorXd x(3);
  auto scan = [&](double p_lo, double p_hi, double q_lo, double q_hi, double step) {
    for (double p = p_lo; p <= p_hi + 1e-15; p += step)
      for (double q = q_lo; q <= q_hi + 1e-15; q += step) {
        if (p <= 0.0 || q <= 0.0 || p + q >= 1.0) continue;
        x << p, q, 1.0 - p - q;
        const double v = f(x);
        if (v < best.value) best = {x, v};
      }
  };
  scan(coarse, 1.0, coarse, 1.0, coarse);
  for (double step = coarse; step > fine * 1.0001;) {
    const double window = 2.0 * step;
    step /= 10.0;
    const double p = best.point(0);
    const double q = best.point(1);
    scan(std::max(step, p - window), p + window, std::max(step, q - window), q + window, step);
  }
  return best;
}

/// (I + r . sigma) / 2
inline Eigen::Matrix2cd bloch_state(const Eigen::Vector3d& r) {
  using C = std::complex<double>;
  Eigen::Matrix2cd m;
  m << C(1.0 + r(2), 0.0), C(r(0), -r(1)), C(r(0), r(1)), C(1.0 - r(2), 0.0);
  return 0.5 * m;
}

struct BlochMin {
  Eigen::Vector3d r;
  Eigen::Matrix2cd rho;
  double value;
};

/// Minimizes a convex f over qubit density matrices |r| <= radius on a cubic
/// grid: `coarse` cells over the whole ball, then +-2 cell windows shrunk 5x
/// down to `fine`.
inline BlochMin bloch_grid(const std::function<double(const Eigen::Matrix2cd&)>& f, double coarse, double fine,
                           double radius = 1.0) {
  BlochMin best{Eigen::Vector3d::Zero(), bloch_state(Eigen::Vector3d::Zero()),
                std::numeric_limits<double>::infinity()};
  auto scan = [&](const Eigen::Vector3d& center, double half, double step) {
    const long n = std::lround(half / step);
    for (long i = -n; i <= n; ++i)
      for (long j = -n; j <= n; ++j)
        for (long k = -n; k <= n; ++k) {
          const Eigen::Vector3d r = center + step * Eigen::Vector3d(i, j, k);
          if (r.squaredNorm() > radius * radius) continue;
          const Eigen::Matrix2cd rho = bloch_state(r);
          const double v = f(rho);
          if (v < best.value) best = {r, rho, v};
        }
  };
  scan(Eigen::Vector3d::Zero(), radius, coarse);
  for (double step = coarse; step > fine * 1.0001;) {
    const double half = 2.0 * step;
    step /= 5.0;
    scan(best.r, half, step);
  }
  return best;
}

/// -log det rho + log det sigma + tr(sigma^{-1} rho) - d, evaluated with
/// LU determinants and a general inverse.
inline double logdet_divergence(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& sigma) {
  const std::complex<double> det_rho = rho.determinant();
  if (!(det_rho.real() > 0.0)) return std::numeric_limits<double>::infinity();
  const std::complex<double> det_sigma = sigma.determinant();
  return -std::log(det_rho.real()) + std::log(det_sigma.real()) + (sigma.inverse() * rho).trace().real() -
         static_cast<double>(rho.rows());
}

/// Re tr(A B)
inline double trace_product(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) { return (a * b).trace().real(); }

}  // namespace oracle
