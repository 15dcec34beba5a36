#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "symred/models.hpp"

namespace symred {

/// Uniform-step trajectory. States are flat coordinate vectors whose
/// reading is given by state_names; diagnostics are per-sample scalars.
struct Trajectory {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> states;
  std::map<std::string, std::vector<double>> diagnostics;
  std::vector<std::string> state_names;
  std::string method;
  double dt = 0.0;

  std::size_t size() const { return times.size(); }
};

/// Fixed-step integrator settings. t_final is rounded to the nearest whole
/// number of steps. newton_tol and newton_max_iter apply to midpoint only.
struct IntegratorConfig {
  std::string method = "rk4";  // rk4 | midpoint
  double dt = 1e-3;
  double t_final = 10.0;
  double newton_tol = 1e-12;
  int newton_max_iter = 50;
};

/// Throws ConfigError unless the config is usable.
void validate(const IntegratorConfig& cfg);

using Rhs = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// Rate of change of a product state (pi, x, p).
struct ProductRate {
  AlgebraCovector pidot;
  Eigen::VectorXd xdot;
  Eigen::VectorXd pdot;
};

/// Lie-Poisson equations: pidot = ad*_{dh(pi)} pi.
AlgebraCovector lie_poisson_rhs(const LieAlgebra& algebra, const ReducedHamiltonian& h,
                                const AlgebraCovector& pi);

/// Hamilton-Poincare equations on g* x T*R^m:
/// pidot = ad*_{dh/dpi} pi, xdot = dh/dp, pdot = -dh/dx.
ProductRate hp_product_rhs(const LieAlgebra& algebra, const ProductHamiltonian& h,
                           const ProductState& state);

/// Euler-Poincare equations solved for the velocity rate:
/// xidot = Hess_l(xi)^-1 ad*_xi(F_l(xi)).
AlgebraVector euler_poincare_rhs(const LieAlgebra& algebra, const ReducedLagrangian& l,
                                 const AlgebraVector& xi);

/// Fixed-step integration of an autonomous system, sampling every step.
/// method rk4 is the classic explicit scheme; midpoint is implicit with a
/// Newton solve per step (finite-difference Jacobian).
Trajectory integrate(const Rhs& rhs, const Eigen::VectorXd& y0, const IntegratorConfig& cfg);

/// Lie-Poisson trajectory for h from pi0, with energy and (for so3 and
/// heisenberg3) Casimir diagnostics attached.
Trajectory simulate_lie_poisson(const LieAlgebra& algebra, const ReducedHamiltonian& h,
                                const AlgebraCovector& pi0, const IntegratorConfig& cfg);

/// Euler-Poincare trajectory for l from xi0, with reduced energy attached.
Trajectory simulate_euler_poincare(const LieAlgebra& algebra, const ReducedLagrangian& l,
                                   const AlgebraVector& xi0, const IntegratorConfig& cfg);

/// Hamilton-Poincare product trajectory; states are (pi, x, p) stacked.
Trajectory simulate_hp_product(const LieAlgebra& algebra, const ProductHamiltonian& h,
                               const ProductState& s0, const IntegratorConfig& cfg);

/// Reconstruction of the group motion along a Lie-Poisson trajectory:
/// integrates the left-trivialized equation for Ad_{g(t)} with the
/// trajectory's own method and step, re-deriving the stage velocities
/// omega = dh(pi) from the stored samples. States are the row-major
/// adjoint matrices; diagnostics carry the spatial momentum
/// Ad*_{g(t)^-1} pi(t), whose componentwise drift is O(dt^4) for rk4.
/// Rotation blocks (so3/se3) are re-orthonormalized every 1000 steps.
Trajectory reconstruct(const LieAlgebra& algebra, const Trajectory& traj,
                       const ReducedHamiltonian& h, const GroupElement& g0);

}  // namespace symred
