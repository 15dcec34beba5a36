#include "symred/tulczyjew.hpp"

#include <cstdio>

namespace symred {

namespace {

void require_space(const VSPoint4& pt, VsSpace expected, const char* op) {
  if (pt.space != expected) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%s expects a point on %s, got %s", op,
                  vs_space_name(expected), vs_space_name(pt.space));
    throw WrongSpaceTag(buf);
  }
  const auto n = pt.q.size();
  if (pt.p.size() != n || pt.qdot.size() != n || pt.pdot.size() != n)
    throw DimensionMismatch("VSPoint4 slots must share one length");
}

void require_dims(const LieAlgebra& a, const GroupElement& g, std::initializer_list<int> dims,
                  const char* op) {
  if (g.dim() != a.dim())
    throw DimensionMismatch(std::string(op) + ": group element dim does not match algebra");
  for (int d : dims)
    if (d != a.dim())
      throw DimensionMismatch(std::string(op) + ": slot dim does not match algebra");
}

}  // namespace

const char* vs_space_name(VsSpace s) {
  switch (s) {
    case VsSpace::tangent_cotangent: return "TT*Q";
    case VsSpace::cotangent_tangent: return "T*TQ";
    case VsSpace::cotangent_cotangent: return "T*T*Q";
  }
  return "?";
}

VSPoint4 vs_tulczyjew_a(const VSPoint4& pt) {
  require_space(pt, VsSpace::tangent_cotangent, "vs_tulczyjew_a");
  return VSPoint4(VsSpace::cotangent_tangent, pt.q, pt.qdot, pt.pdot, pt.p);
}

VSPoint4 vs_tulczyjew_a_inv(const VSPoint4& pt) {
  require_space(pt, VsSpace::cotangent_tangent, "vs_tulczyjew_a_inv");
  return VSPoint4(VsSpace::tangent_cotangent, pt.q, pt.pdot, pt.p, pt.qdot);
}

VSPoint4 vs_flat(const VSPoint4& pt) {
  require_space(pt, VsSpace::tangent_cotangent, "vs_flat");
  return VSPoint4(VsSpace::cotangent_cotangent, pt.q, pt.p, -pt.pdot, pt.qdot);
}

VSPoint4 vs_flat_inv(const VSPoint4& pt) {
  require_space(pt, VsSpace::cotangent_cotangent, "vs_flat_inv");
  return VSPoint4(VsSpace::tangent_cotangent, pt.q, pt.p, pt.pdot, -pt.qdot);
}

VSPoint4 vs_r(const VSPoint4& pt) {
  require_space(pt, VsSpace::cotangent_tangent, "vs_r");
  // reading (q, v, a, b): image covector (-a, v) sits at base (q, b)
  return VSPoint4(VsSpace::cotangent_cotangent, pt.q, pt.pdot, -pt.qdot, pt.p);
}

GrpTstarTstar grp_flat(const LieAlgebra& a, const GrpTTstar& pt) {
  require_dims(a, pt.g, {pt.pi.dim(), pt.omega.dim(), pt.pidot.dim()}, "grp_flat");
  AlgebraCovector pitilde(-pt.pidot.coords + ad_star(a, pt.omega, pt.pi).coords);
  return GrpTstarTstar{pt.g, pt.pi, std::move(pitilde), pt.omega};
}

GrpTTstar grp_flat_inv(const LieAlgebra& a, const GrpTstarTstar& pt) {
  require_dims(a, pt.g, {pt.pi.dim(), pt.pitilde.dim(), pt.omega.dim()}, "grp_flat_inv");
  AlgebraCovector pidot(ad_star(a, pt.omega, pt.pi).coords - pt.pitilde.coords);
  return GrpTTstar{pt.g, pt.pi, pt.omega, std::move(pidot)};
}

AlgebraCovector momentum_tstar_g(const LieAlgebra& a, const GroupElement& g,
                                 const AlgebraCovector& pi) {
  require_dims(a, g, {pi.dim()}, "momentum_tstar_g");
  return coadjoint_action(a, g, pi);
}

AlgebraCovector momentum_ttstar_g(const LieAlgebra& a, const GrpTTstar& pt) {
  require_dims(a, pt.g, {pt.pi.dim(), pt.omega.dim(), pt.pidot.dim()}, "momentum_ttstar_g");
  AlgebraCovector level(pt.pidot.coords - ad_star(a, pt.omega, pt.pi).coords);
  return coadjoint_action(a, pt.g, level);
}

AlgebraCovector momentum_tstar_tstar_g(const LieAlgebra& a, const GrpTstarTstar& pt) {
  require_dims(a, pt.g, {pt.pi.dim(), pt.pitilde.dim(), pt.omega.dim()},
               "momentum_tstar_tstar_g");
  return coadjoint_action(a, pt.g, pt.pitilde);
}

ReducedPoint reduced_flat0(const ReducedPoint& rp) { return rp; }
ReducedPoint reduced_flat0_inv(const ReducedPoint& rp) { return rp; }
ReducedPoint psi0(const ReducedPoint& rp) { return rp; }
ReducedPoint psi0_inv(const ReducedPoint& rp) { return rp; }

ReducedTangent xi(const LieAlgebra& a, const ReducedPoint& rp) {
  if (rp.pi.dim() != a.dim() || rp.omega.dim() != a.dim())
    throw DimensionMismatch("xi: reduced point dims do not match algebra");
  return ReducedTangent{rp.pi, ad_star(a, rp.omega, rp.pi)};
}

ReducedTangent sharp(const LieAlgebra& a, const AlgebraCovector& pi, const AlgebraVector& dphi) {
  if (pi.dim() != a.dim() || dphi.dim() != a.dim())
    throw DimensionMismatch("sharp: dims do not match algebra");
  ReducedPoint on_cotangent{pi, dphi};
  return xi(a, reduced_flat0_inv(psi0_inv(on_cotangent)));
}

ProductTangent xi_product(const LieAlgebra& a, const ReducedPoint& rp, const TsTangent& x) {
  if (x.xdot.size() != x.pdot.size())
    throw DimensionMismatch("xi_product: T*S tangent slots must share length");
  return ProductTangent{xi(a, rp), x};
}

}  // namespace symred
