#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "symred/dynamics.hpp"

namespace symred {

/// Outcome of one structural check: pass iff max_residual <= tolerance.
/// worst_case echoes the sample that attained the max residual.
struct CheckReport {
  std::string name;
  int samples = 0;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string worst_case;
};

/// Momentum maps intertwine with the trivialized flat map up to sign:
/// residual per sample is |J_{T*T*G}(grp_flat(pt)) + J_{TT*G}(pt)|_inf,
/// tolerance 1e-12.
CheckReport check_momentum_flat_relation(const LieAlgebra& algebra,
                                         const std::vector<GrpTTstar>& samples);

/// A pair of tangent directions at a base point.
struct DirectionPair {
  Eigen::VectorXd first;
  Eigen::VectorXd second;
};

/// Isotropy of the graph of dh: tangent vectors at pi are (d, H(pi) d),
/// and the symplectic pairing of two of them reduces to
/// <H d2, d1> - <H d1, d2>. Tolerance 1e-12 for quadratic h (closed-form
/// Hessian), 1e-10 otherwise (finite differences). points and directions
/// are paired index-wise and must have equal length.
CheckReport check_graph_isotropy(const ReducedHamiltonian& h,
                                 const std::vector<AlgebraCovector>& points,
                                 const std::vector<DirectionPair>& directions);

/// A Lie-Poisson trajectory, viewed through the graph of dh and the
/// reduced symplectomorphism, must be the tangent lift of its base curve:
/// the lifted second slot ad*_{dh(pi_k)} pi_k has to match the central
/// difference (pi_{k+1} - pi_{k-1}) / 2dt at interior samples.
/// Tolerance max(10 dt^2, 1e-9). Throws TooFewSamples below 3 samples.
CheckReport check_tangent_lift(const LieAlgebra& algebra, const Trajectory& traj,
                               const ReducedHamiltonian& h);

/// Membership of explicit points in both images of the classical triple
/// for the mechanical system L = 1/2 qdot^T M qdot - (1/2 q^T K q + k^T q):
/// the A-image of each TT*Q point must agree slotwise with dL, and the
/// flat-image with dH for H = 1/2 p^T M^-1 p + V(q). Tolerance 1e-12.
/// Throws SingularMass if M is not invertible.
CheckReport check_vs_triple_points(const Eigen::MatrixXd& mass, const Eigen::MatrixXd& k_quad,
                                   const Eigen::VectorXd& k_lin,
                                   const std::vector<VSPoint4>& points);

/// check_vs_triple_points on true graph points (q, M qdot, qdot, -(K q + k))
/// built from (q, qdot) samples.
CheckReport check_vs_triple(const Eigen::MatrixXd& mass, const Eigen::MatrixXd& k_quad,
                            const Eigen::VectorXd& k_lin,
                            const std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>>& samples);

/// The trivialized graph point ((g, pi), (0, dh(pi))) of an invariant
/// Hamiltonian; its momentum is exactly zero.
GrpTstarTstar invariant_graph_point(const LieAlgebra& algebra, const ReducedHamiltonian& h,
                                    const GroupElement& g, const AlgebraCovector& pi);

/// Zero-level membership: |J_{T*T*G}(pt)|_inf per sample, tolerance 1e-13.
/// Feed invariant_graph_point outputs to certify dh-graphs; feed perturbed
/// points to exercise the failure path.
CheckReport check_invariant_graph_zero_level(const LieAlgebra& algebra,
                                             const std::vector<GrpTstarTstar>& points);

/// Drift of conserved diagnostics: one report per requested quantity,
/// measuring max_t |Q(t) - Q(0)| against a fixed per-quantity tolerance
/// (energy 1e-8, casimir_so3 1e-8, casimir_heis 0 exact, spatial_momentum
/// 1e-8 across all its columns). Throws UnknownQuantity for names outside
/// that set or absent from the trajectory.
std::vector<CheckReport> drift_report(const Trajectory& traj,
                                      const std::vector<std::string>& quantities);

/// Measured order of accuracy from a step-size sweep.
struct ConvergenceResult {
  double order = 0.0;
  bool degenerate = false;  // errors at roundoff; order is NaN
  std::vector<double> dts;
  std::vector<double> errors;
};

/// Least-squares slope of log(error) vs log(dt) at t_final. The reference
/// is the supplied closed-form solution of time, or a run of the same
/// method at dt/4 when absent. Throws InsufficientData below 3 step sizes.
ConvergenceResult convergence_order(const Rhs& rhs, const Eigen::VectorXd& y0,
                                    const std::string& method, const std::vector<double>& dts,
                                    double t_final,
                                    std::function<Eigen::VectorXd(double)> reference = nullptr);

}  // namespace symred
