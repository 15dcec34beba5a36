#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace symred {

/// Seeded sampling helper. Draws are platform-independent: uniforms are
/// built directly from mt19937_64 output rather than std distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 42) : m_gen(seed) {}

  /// Uniform double in [0, 1).
  double uniform01() {
    return static_cast<double>(m_gen() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
  }

  /// Vector with i.i.d. uniform entries in [lo, hi).
  Eigen::VectorXd vector(int dim, double lo = -1.0, double hi = 1.0) {
    Eigen::VectorXd v(dim);
    for (int i = 0; i < dim; ++i) v[i] = uniform(lo, hi);
    return v;
  }

  /// Matrix with i.i.d. uniform entries in [lo, hi).
  Eigen::MatrixXd matrix(int rows, int cols, double lo = -1.0, double hi = 1.0) {
    Eigen::MatrixXd m(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) m(i, j) = uniform(lo, hi);
    return m;
  }

  /// Symmetric positive-definite matrix with moderate condition number.
  Eigen::MatrixXd spd_matrix(int dim) {
    Eigen::MatrixXd a = matrix(dim, dim);
    return a.transpose() * a / dim + Eigen::MatrixXd::Identity(dim, dim);
  }

  std::uint64_t raw() { return m_gen(); }

 private:
  std::mt19937_64 m_gen;
};

}  // namespace symred
