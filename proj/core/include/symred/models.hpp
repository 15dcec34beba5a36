#pragma once

#include <functional>
#include <optional>

#include <Eigen/Core>

#include "symred/algebra.hpp"
#include "symred/tulczyjew.hpp"

namespace symred {

/// Finite-difference step for gradients: 1e-6 * max(1, |point|).
double fd_gradient_step(const Eigen::VectorXd& at);

/// Finite-difference step for Hessians (applied to the gradient):
/// cbrt(machine epsilon) * max(1, |point|), balancing truncation against
/// cancellation so Hessian symmetry holds to ~1e-11.
double fd_hessian_step(const Eigen::VectorXd& at);

/// Reduced Hamiltonian h on g*. Quadratic form h(pi) = 1/2 pi^T W pi + <b, pi>
/// with symmetric W, or a custom value oracle with optional gradient oracle
/// (central differences otherwise). The gradient dh(pi) is an algebra vector.
class ReducedHamiltonian {
 public:
  using ValueFn = std::function<double(const Eigen::VectorXd&)>;
  using GradientFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

  static ReducedHamiltonian quadratic(const Eigen::MatrixXd& w,
                                      const Eigen::VectorXd& b = Eigen::VectorXd());
  static ReducedHamiltonian custom(ValueFn value, GradientFn gradient = nullptr);

  double value(const AlgebraCovector& pi) const;
  AlgebraVector gradient(const AlgebraCovector& pi) const;
  Eigen::MatrixXd hessian(const AlgebraCovector& pi) const;

  bool is_quadratic() const { return m_quadratic; }
  int dim() const { return m_quadratic ? static_cast<int>(m_w.rows()) : -1; }
  const Eigen::MatrixXd& w() const { return m_w; }
  const Eigen::VectorXd& b() const { return m_b; }
  bool has_gradient_oracle() const { return m_quadratic || static_cast<bool>(m_gradient); }

 private:
  ReducedHamiltonian() = default;

  bool m_quadratic = false;
  Eigen::MatrixXd m_w;
  Eigen::VectorXd m_b;
  ValueFn m_value;
  GradientFn m_gradient;
};

/// Reduced Lagrangian l on g. Quadratic form l(xi) = 1/2 xi^T I xi with
/// symmetric positive-definite inertia, or custom oracles; missing custom
/// gradient/Hessian oracles fall back to central differences.
class ReducedLagrangian {
 public:
  using ValueFn = std::function<double(const Eigen::VectorXd&)>;
  using GradientFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
  using HessianFn = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

  static ReducedLagrangian quadratic(const Eigen::MatrixXd& inertia);
  static ReducedLagrangian custom(ValueFn value, GradientFn gradient = nullptr,
                                  HessianFn hessian = nullptr);

  double value(const AlgebraVector& xi) const;

  /// Fiber derivative F_l(xi) = dl/dxi, the reduced Legendre map.
  AlgebraCovector fiber_derivative(const AlgebraVector& xi) const;

  Eigen::MatrixXd hessian(const AlgebraVector& xi) const;

  bool is_quadratic() const { return m_quadratic; }
  const Eigen::MatrixXd& inertia() const { return m_inertia; }

 private:
  ReducedLagrangian() = default;

  bool m_quadratic = false;
  Eigen::MatrixXd m_inertia;
  ValueFn m_value;
  GradientFn m_gradient;
  HessianFn m_hessian;
};

/// Hamiltonian on the product reduced space g* x T*R^m. Quadratic form
///   h(pi, x, p) = 1/2 pi^T W pi + <b, pi> + 1/2 p^T Wp p + 1/2 x^T K x + <k, x>,
/// or a custom value oracle over (pi, x, p) with optional per-slot gradients.
class ProductHamiltonian {
 public:
  using ValueFn = std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&,
                                       const Eigen::VectorXd&)>;
  using SlotGradFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::VectorXd&,
                                                   const Eigen::VectorXd&)>;

  static ProductHamiltonian quadratic(const Eigen::MatrixXd& w, const Eigen::VectorXd& b,
                                      const Eigen::MatrixXd& wp, const Eigen::MatrixXd& k_quad,
                                      const Eigen::VectorXd& k_lin);
  static ProductHamiltonian custom(ValueFn value, SlotGradFn grad_pi = nullptr,
                                   SlotGradFn grad_x = nullptr, SlotGradFn grad_p = nullptr);

  double value(const ProductState& s) const;
  AlgebraVector grad_pi(const ProductState& s) const;
  Eigen::VectorXd grad_x(const ProductState& s) const;
  Eigen::VectorXd grad_p(const ProductState& s) const;

 private:
  ProductHamiltonian() = default;

  bool m_quadratic = false;
  Eigen::MatrixXd m_w, m_wp, m_k_quad;
  Eigen::VectorXd m_b, m_k_lin;
  ValueFn m_value;
  SlotGradFn m_grad_pi, m_grad_x, m_grad_p;
};

/// F_l(xi), the reduced Legendre transform.
AlgebraCovector legendre(const ReducedLagrangian& l, const AlgebraVector& xi);

/// Reduced energy e_l(xi) = <F_l(xi), xi> - l(xi).
double reduced_energy(const ReducedLagrangian& l, const AlgebraVector& xi);

/// h = e_l o F_l^-1. Quadratic inertia I gives the quadratic Hamiltonian
/// with W = I^-1; custom Lagrangians get value/gradient oracles that invert
/// F_l by Newton iteration (tolerance 1e-12, at most 50 steps).
ReducedHamiltonian hamiltonian_from_lagrangian(const ReducedLagrangian& l);

/// Max mismatch between the gradient and a Richardson-refined directional
/// derivative of the value, over a few fixed probe directions. Test hook
/// for the gradient/value consistency contract.
double gradient_consistency(const ReducedHamiltonian& h, const AlgebraCovector& pi);

}  // namespace symred
