#pragma once

// Seeded random source with a fully specified draw sequence.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard. The derived distributions are implemented here rather than taken
// from <random> because the standard library distributions are
// implementation-defined:
//
//   uniform()      (w >> 11) * 2^-53                       in [0, 1)
//   uniform_pos()  ((w >> 11) + 0.5) * 2^-53               in (0, 1)
//   normal()       Box-Muller, two uniform_pos() draws u1, u2 per call:
//                  sqrt(-2 log u1) * cos(2 pi u2)           (no caching)
//   exponential()  -log(uniform_pos())
//   index(n)       min(n - 1, floor(uniform() * n))
//
// Streams generated from the same seed are therefore reproducible across
// compilers and platforms up to libm differences in log/cos/sqrt.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

#include <Eigen/Dense>

namespace scomd {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform_pos() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

  double normal() {
    const double u1 = uniform_pos();
    const double u2 = uniform_pos();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  double exponential() { return -std::log(uniform_pos()); }

  std::size_t index(std::size_t n) {
    const auto k = static_cast<std::size_t>(uniform() * static_cast<double>(n));
    return k < n ? k : n - 1;
  }

  /// Real and imaginary parts are independent standard normals (real first).
  std::complex<double> complex_normal() {
    const double re = normal();
    const double im = normal();
    return {re, im};
  }

  /// Dirichlet(1, ..., 1) via normalized exponentials.
  Eigen::VectorXd dirichlet(Eigen::Index d) {
    Eigen::VectorXd w(d);
    for (Eigen::Index i = 0; i < d; ++i) w(i) = exponential();
    return w / w.sum();
  }

  Eigen::VectorXd gaussian_vector(Eigen::Index d) {
    Eigen::VectorXd v(d);
    for (Eigen::Index i = 0; i < d; ++i) v(i) = normal();
    return v;
  }

  /// Entries drawn row-major.
  Eigen::MatrixXcd complex_gaussian_matrix(Eigen::Index rows, Eigen::Index cols) {
    Eigen::MatrixXcd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = complex_normal();
    return m;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace scomd
