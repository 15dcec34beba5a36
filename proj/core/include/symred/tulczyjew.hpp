#pragma once

#include <Eigen/Core>

#include "symred/algebra.hpp"

namespace symred {

/// Which double-bundle over Q = R^n a VSPoint4 lives on. The four slots of
/// the point are positional; the tag fixes their reading:
///   tangent_cotangent    TT*Q    (q, p, qdot, pdot)
///   cotangent_tangent    T*TQ    (q, v, a, b): covector (a, b) at base (q, v)
///   cotangent_cotangent  T*T*Q   (q, p, alpha, beta): covector at base (q, p)
enum class VsSpace { tangent_cotangent, cotangent_tangent, cotangent_cotangent };

const char* vs_space_name(VsSpace s);

/// Point on one of the three iterated bundles over R^n, four n-slots plus
/// a runtime space tag. One container serves all spaces; maps check tags.
struct VSPoint4 {
  VsSpace space = VsSpace::tangent_cotangent;
  Eigen::VectorXd q, p, qdot, pdot;

  VSPoint4() = default;
  VSPoint4(VsSpace s, Eigen::VectorXd a, Eigen::VectorXd b, Eigen::VectorXd c,
           Eigen::VectorXd d)
      : space(s), q(std::move(a)), p(std::move(b)), qdot(std::move(c)), pdot(std::move(d)) {}

  int dim() const { return static_cast<int>(q.size()); }
};

/// Trivialized point of TT*G: ((g, pi), (omega, pidot)).
struct GrpTTstar {
  GroupElement g;
  AlgebraCovector pi;
  AlgebraVector omega;
  AlgebraCovector pidot;
};

/// Trivialized point of T*T*G: ((g, pi), (pitilde, omega)).
struct GrpTstarTstar {
  GroupElement g;
  AlgebraCovector pi;
  AlgebraCovector pitilde;
  AlgebraVector omega;
};

/// Point of the reduced space g* x g (both J^-1(0)/G and T*(T*G/G) are
/// identified with it).
struct ReducedPoint {
  AlgebraCovector pi;
  AlgebraVector omega;
};

/// Tangent vector to T*G/G = g* at pi, paired with its base: an element
/// (pi, pidot) of g* x g*.
struct ReducedTangent {
  AlgebraCovector pi;
  AlgebraCovector pidot;
};

/// Reduced state for the product case T*(G x S)/G with S = R^n.
struct ProductState {
  AlgebraCovector pi;
  Eigen::VectorXd x;
  Eigen::VectorXd p;
};

/// Tangent vector to T*S in coordinates.
struct TsTangent {
  Eigen::VectorXd xdot;
  Eigen::VectorXd pdot;
};

/// Result of the product-case Xi: group-factor tangent plus the untouched
/// T*S tangent.
struct ProductTangent {
  ReducedTangent group;
  TsTangent ts;
};

/// Tulczyjew map TT*Q -> T*TQ: (q, p, qdot, pdot) -> (q, qdot, pdot, p).
VSPoint4 vs_tulczyjew_a(const VSPoint4& pt);

/// Inverse slot permutation, T*TQ -> TT*Q.
VSPoint4 vs_tulczyjew_a_inv(const VSPoint4& pt);

/// Canonical flat TT*Q -> T*T*Q: (q, p, qdot, pdot) -> (q, p, -pdot, qdot).
VSPoint4 vs_flat(const VSPoint4& pt);

/// Inverse of vs_flat, T*T*Q -> TT*Q.
VSPoint4 vs_flat_inv(const VSPoint4& pt);

/// The comparison map R = vs_flat o vs_tulczyjew_a^-1, T*TQ -> T*T*Q:
/// (q, v, a, b) -> (q, b, -a, v). Satisfies the defining pairing identity
/// <R(alpha), W> = -<alpha, Wbar> + <W, Wbar>_T for compatible pairs.
VSPoint4 vs_r(const VSPoint4& pt);

/// Trivialized flat on TT*G: pitilde = -pidot + ad*_omega pi.
GrpTstarTstar grp_flat(const LieAlgebra& algebra, const GrpTTstar& pt);

/// Inverse: pidot = ad*_omega pi - pitilde.
GrpTTstar grp_flat_inv(const LieAlgebra& algebra, const GrpTstarTstar& pt);

/// J_{T*G}(g, pi) = Ad*_{g^-1} pi.
AlgebraCovector momentum_tstar_g(const LieAlgebra& algebra, const GroupElement& g,
                                 const AlgebraCovector& pi);

/// J_{TT*G} = Ad*_{g^-1}(pidot - ad*_omega pi).
AlgebraCovector momentum_ttstar_g(const LieAlgebra& algebra, const GrpTTstar& pt);

/// J_{T*T*G}((g, pi), (pitilde, omega)) = Ad*_{g^-1} pitilde.
AlgebraCovector momentum_tstar_tstar_g(const LieAlgebra& algebra, const GrpTstarTstar& pt);

/// Reduced flat [b_0]: the identity on g* x g. Materialized so the reduced
/// triple is navigable map by map.
ReducedPoint reduced_flat0(const ReducedPoint& rp);
ReducedPoint reduced_flat0_inv(const ReducedPoint& rp);

/// Psi_0: T*(T*G/G) -> J^-1(0)/G, the identity on g* x g.
ReducedPoint psi0(const ReducedPoint& rp);
ReducedPoint psi0_inv(const ReducedPoint& rp);

/// Xi(pi, omega) = (pi, ad*_omega pi), landing in g* x g*.
ReducedTangent xi(const LieAlgebra& algebra, const ReducedPoint& rp);

/// Poisson sharp on the reduced exact symplectic manifold:
/// sharp(pi, dphi) = Xi([b_0]^-1(Psi_0^-1(pi, dphi))) = (pi, ad*_dphi pi).
ReducedTangent sharp(const LieAlgebra& algebra, const AlgebraCovector& pi,
                     const AlgebraVector& dphi);

/// Product-case Xi: applies xi on the group factor, passes the T*S tangent
/// through unchanged.
ProductTangent xi_product(const LieAlgebra& algebra, const ReducedPoint& rp,
                          const TsTangent& x);

}  // namespace symred
