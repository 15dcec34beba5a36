#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "symred/errors.hpp"

namespace symred {

/// Element of the Lie algebra g (velocity-like: omega, xi).
struct AlgebraVector {
  Eigen::VectorXd coords;

  AlgebraVector() = default;
  explicit AlgebraVector(Eigen::VectorXd c) : coords(std::move(c)) {}
  int dim() const { return static_cast<int>(coords.size()); }
};

/// Element of the dual g* (momentum-like: pi, pidot).
struct AlgebraCovector {
  Eigen::VectorXd coords;

  AlgebraCovector() = default;
  explicit AlgebraCovector(Eigen::VectorXd c) : coords(std::move(c)) {}
  int dim() const { return static_cast<int>(coords.size()); }
};

/// Finite-dimensional Lie algebra given by structure constants c^k_{ij}
/// in a fixed basis: [e_i, e_j] = sum_k c^k_{ij} e_k.
///
/// Validated instances satisfy antisymmetry exactly and the Jacobi
/// identity to 1e-12. All state is immutable after construction.
class LieAlgebra {
 public:
  /// Validating constructor. `c` is a flat dim^3 array in (i,j,k) order,
  /// i.e. c[(i*dim + j)*dim + k] = c^k_{ij}, zero-based indices.
  static LieAlgebra create(int dim, std::vector<double> c, std::string name);

  /// Skips validation. For residual reporting on known-bad constants.
  static LieAlgebra unchecked(int dim, std::vector<double> c, std::string name);

  int dim() const { return m_dim; }
  const std::string& name() const { return m_name; }

  /// Structure constant c^k_{ij}, zero-based.
  double c(int i, int j, int k) const {
    return m_c[static_cast<std::size_t>((i * m_dim + j) * m_dim + k)];
  }

  const std::vector<double>& raw() const { return m_c; }

 private:
  LieAlgebra(int dim, std::vector<double> c, std::string name)
      : m_dim(dim), m_c(std::move(c)), m_name(std::move(name)) {}

  int m_dim = 0;
  std::vector<double> m_c;
  std::string m_name;
};

/// Group element represented through its adjoint action on g.
///
/// Construction is from exponential coordinates (Ad = exp(ad_xi)) or from
/// an explicit adjoint matrix, which must be invertible to 1e-10.
class GroupElement {
 public:
  static GroupElement identity(const LieAlgebra& algebra);
  static GroupElement from_exp(const LieAlgebra& algebra, const AlgebraVector& xi);
  static GroupElement from_adjoint(const LieAlgebra& algebra, const Eigen::MatrixXd& ad);

  /// Adjoint matrix Ad_g acting on algebra coordinates.
  const Eigen::MatrixXd& ad() const { return m_ad; }

  /// Adjoint of the inverse element, Ad_{g^-1}.
  const Eigen::MatrixXd& ad_inverse() const { return m_ad_inv; }

  /// Exponential coordinates when the element was built from them.
  const std::optional<Eigen::VectorXd>& exp_coords() const { return m_exp_coords; }

  int dim() const { return static_cast<int>(m_ad.rows()); }

  /// Group product: Ad_{gh} = Ad_g Ad_h.
  GroupElement operator*(const GroupElement& other) const;

  GroupElement inverse() const;

 private:
  GroupElement() = default;

  Eigen::MatrixXd m_ad;
  Eigen::MatrixXd m_ad_inv;
  std::optional<Eigen::VectorXd> m_exp_coords;
};

/// Validates antisymmetry and Jacobi, then returns the algebra.
/// Throws AntisymmetryViolation or JacobiViolation with the worst
/// offending index quadruple (one-based) and its residual.
LieAlgebra make_algebra(int dim, const std::vector<double>& c, const std::string& name = "custom");

/// Named algebras: so3, se3, sl2, heisenberg3, abelian(n).
LieAlgebra builtin_algebra(const std::string& name);

/// Names accepted by builtin_algebra, with dimensions. abelian is
/// parameterized; its entry reports dim 0.
std::vector<std::pair<std::string, int>> builtin_algebra_names();

/// ([x,y])_k = sum_{ij} c^k_{ij} x_i y_j.
AlgebraVector bracket(const LieAlgebra& algebra, const AlgebraVector& x, const AlgebraVector& y);

/// (ad*_omega pi)_j = sum_{ik} c^k_{ij} omega_i pi_k, the covector with
/// pair(ad_star(omega, pi), eta) = pair(pi, bracket(omega, eta)).
AlgebraCovector ad_star(const LieAlgebra& algebra, const AlgebraVector& omega,
                        const AlgebraCovector& pi);

/// Matrix of ad_xi: (ad_xi)_{kj} = sum_i c^k_{ij} xi_i.
Eigen::MatrixXd ad_matrix(const LieAlgebra& algebra, const AlgebraVector& xi);

/// Ad_{exp xi} = exp(ad_xi) on algebra coordinates.
Eigen::MatrixXd group_adjoint(const LieAlgebra& algebra, const AlgebraVector& xi);

/// Ad*_{g^-1} pi, the covector with pair(result, xi) = pair(pi, Ad_{g^-1} xi).
AlgebraCovector coadjoint_action(const LieAlgebra& algebra, const GroupElement& g,
                                 const AlgebraCovector& pi);

/// Duality pairing sum_i pi_i xi_i.
double pair(const AlgebraCovector& pi, const AlgebraVector& xi);

/// Max over i,j,k,l of |sum_m (c^m_{ij} c^l_{mk} + c^m_{jk} c^l_{mi} + c^m_{ki} c^l_{mj})|.
double jacobi_residual(const LieAlgebra& algebra);

/// Dense matrix exponential by scaling and squaring; the Taylor series is
/// truncated when a term falls below 1e-16 relative to the running sum.
Eigen::MatrixXd matrix_exp(const Eigen::MatrixXd& m);

}  // namespace symred
