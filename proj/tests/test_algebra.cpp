#include <cmath>

#include <Eigen/Dense>

#include "doctest.h"
#include "symred/algebra.hpp"
#include "symred/rng.hpp"

using namespace symred;

namespace {

Eigen::Vector3d cross_oracle(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  return Eigen::Vector3d(a.y() * b.z() - a.z() * b.y(),
                         a.z() * b.x() - a.x() * b.z(),
                         a.x() * b.y() - a.y() * b.x());
}

/// Rodrigues closed form for exp of a 3x3 skew matrix given the axis vector.
Eigen::Matrix3d rodrigues_oracle(const Eigen::Vector3d& xi) {
  const double theta = xi.norm();
  Eigen::Matrix3d k;
  k << 0, -xi.z(), xi.y(),
       xi.z(), 0, -xi.x(),
      -xi.y(), xi.x(), 0;
  if (theta < 1e-12) return Eigen::Matrix3d::Identity() + k;
  return Eigen::Matrix3d::Identity() + std::sin(theta) / theta * k +
         (1.0 - std::cos(theta)) / (theta * theta) * (k * k);
}

/// Independent brute-force Jacobi evaluation, written against the raw
/// constants rather than the library loops.
double jacobi_oracle(const LieAlgebra& a) {
  const int n = a.dim();
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double s = 0.0;
          for (int m = 0; m < n; ++m)
            s += a.c(i, j, m) * a.c(m, k, l) + a.c(j, k, m) * a.c(m, i, l) +
                 a.c(k, i, m) * a.c(m, j, l);
          worst = std::max(worst, std::abs(s));
        }
  return worst;
}

std::vector<double> so3_with(int i, int j, int k, double value) {
  LieAlgebra so3 = builtin_algebra("so3");
  std::vector<double> c = so3.raw();
  c[static_cast<std::size_t>((i * 3 + j) * 3 + k)] = value;
  c[static_cast<std::size_t>((j * 3 + i) * 3 + k)] = -value;
  return c;
}

}  // namespace

TEST_CASE("so3 bracket matches the cross product on 1000 samples") {
  LieAlgebra so3 = builtin_algebra("so3");
  Rng rng(42);
  for (int s = 0; s < 1000; ++s) {
    Eigen::Vector3d x = rng.vector(3), y = rng.vector(3);
    AlgebraVector b = bracket(so3, AlgebraVector(x), AlgebraVector(y));
    CHECK((b.coords - cross_oracle(x, y)).cwiseAbs().maxCoeff() <= 1e-13);
  }
  AlgebraVector b = bracket(so3, AlgebraVector(Eigen::Vector3d(1, 2, 3)),
                            AlgebraVector(Eigen::Vector3d(4, 5, 6)));
  CHECK(b.coords.isApprox(Eigen::Vector3d(-3, 6, -3)));
}

TEST_CASE("so3 basis brackets are cyclic") {
  LieAlgebra so3 = builtin_algebra("so3");
  Eigen::Matrix3d id = Eigen::Matrix3d::Identity();
  for (int i = 0; i < 3; ++i) {
    int j = (i + 1) % 3, k = (i + 2) % 3;
    AlgebraVector b = bracket(so3, AlgebraVector(id.col(i)), AlgebraVector(id.col(j)));
    CHECK(b.coords.isApprox(id.col(k)));
  }
}

TEST_CASE("ad_star equals pi x omega on so3 and satisfies duality everywhere") {
  Rng rng(7);
  for (const char* name : {"so3", "se3", "sl2", "heisenberg3", "abelian(4)"}) {
    LieAlgebra a = builtin_algebra(name);
    for (int s = 0; s < 200; ++s) {
      AlgebraVector omega(rng.vector(a.dim()));
      AlgebraCovector pi(rng.vector(a.dim()));
      AlgebraCovector as = ad_star(a, omega, pi);
      AlgebraVector eta(rng.vector(a.dim()));
      CHECK(std::abs(pair(as, eta) - pair(pi, bracket(a, omega, eta))) <= 1e-13);
    }
  }
  LieAlgebra so3 = builtin_algebra("so3");
  for (int s = 0; s < 1000; ++s) {
    Eigen::Vector3d w = rng.vector(3), p = rng.vector(3);
    AlgebraCovector as = ad_star(so3, AlgebraVector(w), AlgebraCovector(p));
    CHECK((as.coords - cross_oracle(p, w)).cwiseAbs().maxCoeff() <= 1e-13);
  }
  AlgebraCovector ex = ad_star(so3, AlgebraVector(Eigen::Vector3d(1, 0, 0)),
                               AlgebraCovector(Eigen::Vector3d(0, 1, 0)));
  CHECK(ex.coords.isApprox(Eigen::Vector3d(0, 0, -1)));
}

TEST_CASE("heisenberg3 ad_star moves the center into the second slot") {
  LieAlgebra h3 = builtin_algebra("heisenberg3");
  Rng rng(3);
  for (int s = 0; s < 100; ++s) {
    Eigen::Vector3d p = rng.vector(3);
    AlgebraCovector as =
        ad_star(h3, AlgebraVector(Eigen::Vector3d(1, 0, 0)), AlgebraCovector(p));
    CHECK(as.coords.isApprox(Eigen::Vector3d(0, p.z(), 0)));
  }
}

TEST_CASE("bracket is antisymmetric exactly") {
  Rng rng(11);
  for (const char* name : {"so3", "se3", "sl2", "heisenberg3"}) {
    LieAlgebra a = builtin_algebra(name);
    for (int s = 0; s < 100; ++s) {
      AlgebraVector x(rng.vector(a.dim())), y(rng.vector(a.dim()));
      Eigen::VectorXd sum = bracket(a, x, y).coords + bracket(a, y, x).coords;
      CHECK(sum.cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("abelian bracket and ad_star vanish") {
  LieAlgebra ab = builtin_algebra("abelian(4)");
  Rng rng(5);
  AlgebraVector x(rng.vector(4)), y(rng.vector(4));
  CHECK(bracket(ab, x, y).coords.isZero(0.0));
  CHECK(ad_star(ab, x, AlgebraCovector(rng.vector(4))).coords.isZero(0.0));
}

TEST_CASE("se3 structure: rot-rot, rot-trans, trans-trans") {
  LieAlgebra se3 = builtin_algebra("se3");
  Eigen::MatrixXd id = Eigen::MatrixXd::Identity(6, 6);
  auto e = [&](int i) { return AlgebraVector(id.col(i)); };
  CHECK(bracket(se3, e(0), e(1)).coords.isApprox(id.col(2)));   // [r1,r2]=r3
  CHECK(bracket(se3, e(1), e(2)).coords.isApprox(id.col(0)));   // [r2,r3]=r1
  CHECK(bracket(se3, e(0), e(4)).coords.isApprox(id.col(5)));   // [r1,t2]=t3
  CHECK(bracket(se3, e(1), e(3)).coords.isApprox(-id.col(5)));  // [r2,t1]=-t3
  CHECK(bracket(se3, e(2), e(5)).coords.isZero(0.0));           // [r3,t3]=0
  CHECK(bracket(se3, e(3), e(4)).coords.isZero(0.0));           // [t1,t2]=0
  CHECK(jacobi_residual(se3) == 0.0);
}

TEST_CASE("sl2 structure constants") {
  LieAlgebra sl2 = builtin_algebra("sl2");
  Eigen::Matrix3d id = Eigen::Matrix3d::Identity();
  auto e = [&](int i) { return AlgebraVector(Eigen::Vector3d(id.col(i))); };
  CHECK(bracket(sl2, e(0), e(1)).coords.isApprox(2.0 * id.col(1)));   // [h,e]=2e
  CHECK(bracket(sl2, e(0), e(2)).coords.isApprox(-2.0 * id.col(2)));  // [h,f]=-2f
  CHECK(bracket(sl2, e(1), e(2)).coords.isApprox(id.col(0)));         // [e,f]=h
}

TEST_CASE("jacobi_residual matches the brute-force oracle") {
  for (const char* name : {"so3", "se3", "sl2", "heisenberg3", "abelian(3)"}) {
    LieAlgebra a = builtin_algebra(name);
    double r = jacobi_residual(a);
    CHECK(r == jacobi_oracle(a));
    CHECK(r <= 1e-15);
  }

  // Rescaling c^3_{12} keeps the Jacobi identity exact: the epsilon-tensor
  // sum pairs each term with a vanishing diagonal bracket, so this stays a
  // valid Lie algebra and make_algebra accepts it.
  LieAlgebra diag = make_algebra(3, so3_with(0, 1, 2, 1.0 + 1e-3), "so3-rescaled");
  CHECK(jacobi_residual(diag) == 0.0);
  CHECK(jacobi_oracle(diag) == 0.0);

  // An off-diagonal perturbation genuinely breaks Jacobi; the oracle gives
  // exactly the perturbation size.
  LieAlgebra bad = LieAlgebra::unchecked(3, so3_with(0, 1, 0, 1e-3), "so3-broken");
  CHECK(jacobi_oracle(bad) == 1e-3);
  CHECK(jacobi_residual(bad) == 1e-3);
  CHECK(jacobi_residual(bad) >= 0.5e-3);
  CHECK_THROWS_AS(make_algebra(3, so3_with(0, 1, 0, 1e-3), "so3-broken"), JacobiViolation);
}

TEST_CASE("make_algebra validates antisymmetry") {
  std::vector<double> c(8, 0.0);
  c[(0 * 2 + 1) * 2 + 0] = 1.0;  // c^1_{12} = 1
  c[(1 * 2 + 0) * 2 + 0] = 1.0;  // c^1_{21} = 1, not -1
  CHECK_THROWS_AS(make_algebra(2, c, "bad"), AntisymmetryViolation);
  c[(1 * 2 + 0) * 2 + 0] = -1.0;
  CHECK_NOTHROW(make_algebra(2, c, "affine1"));
  CHECK_THROWS_AS(make_algebra(2, std::vector<double>(7, 0.0), "short"), DimensionMismatch);
}

TEST_CASE("builtin_algebra names and failures") {
  CHECK(builtin_algebra("so3").dim() == 3);
  CHECK(builtin_algebra("se3").dim() == 6);
  CHECK(builtin_algebra("sl2").dim() == 3);
  CHECK(builtin_algebra("heisenberg3").dim() == 3);
  CHECK(builtin_algebra("abelian(7)").dim() == 7);
  CHECK_THROWS_AS(builtin_algebra("su5"), UnknownAlgebra);
  CHECK_THROWS_AS(builtin_algebra("abelian(0)"), UnknownAlgebra);
  CHECK(builtin_algebra_names().size() == 5);
}

TEST_CASE("group_adjoint matches Rodrigues on so3") {
  LieAlgebra so3 = builtin_algebra("so3");
  Rng rng(13);
  for (int s = 0; s < 200; ++s) {
    Eigen::Vector3d xi = rng.vector(3, -3.0, 3.0);  // exercises the squaring path
    Eigen::MatrixXd ad = group_adjoint(so3, AlgebraVector(xi));
    CHECK((ad - rodrigues_oracle(xi)).cwiseAbs().maxCoeff() <= 1e-13);
  }
  CHECK(group_adjoint(so3, AlgebraVector(Eigen::Vector3d::Zero()))
            .isApprox(Eigen::MatrixXd::Identity(3, 3)));

  const double th = 0.7;
  Eigen::MatrixXd rz = group_adjoint(so3, AlgebraVector(Eigen::Vector3d(0, 0, th)));
  Eigen::Matrix3d expect;
  expect << std::cos(th), -std::sin(th), 0, std::sin(th), std::cos(th), 0, 0, 0, 1;
  CHECK((rz - expect).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("group_adjoint and abelian exponentials are identities where expected") {
  LieAlgebra ab = builtin_algebra("abelian(4)");
  Rng rng(17);
  CHECK(group_adjoint(ab, AlgebraVector(rng.vector(4))).isApprox(Eigen::MatrixXd::Identity(4, 4)));
}

TEST_CASE("group_adjoint is a bracket automorphism") {
  Rng rng(19);
  for (const char* name : {"so3", "se3", "sl2", "heisenberg3"}) {
    LieAlgebra a = builtin_algebra(name);
    for (int s = 0; s < 50; ++s) {
      AlgebraVector xi(rng.vector(a.dim()));
      Eigen::MatrixXd ad = group_adjoint(a, xi);
      AlgebraVector x(rng.vector(a.dim())), y(rng.vector(a.dim()));
      Eigen::VectorXd lhs = ad * bracket(a, x, y).coords;
      Eigen::VectorXd rhs =
          bracket(a, AlgebraVector(ad * x.coords), AlgebraVector(ad * y.coords)).coords;
      CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }
}

TEST_CASE("coadjoint_action pins the quarter-turn sign and satisfies duality") {
  LieAlgebra so3 = builtin_algebra("so3");
  const double half_pi = std::acos(0.0);
  GroupElement g = GroupElement::from_exp(so3, AlgebraVector(Eigen::Vector3d(0, 0, half_pi)));
  AlgebraCovector moved = coadjoint_action(so3, g, AlgebraCovector(Eigen::Vector3d(1, 0, 0)));

  // Oracle: Ad_{g^-1} = Rodrigues(-xi), and the coadjoint action is its
  // transpose acting on covector coordinates.
  Eigen::Vector3d oracle =
      rodrigues_oracle(Eigen::Vector3d(0, 0, -half_pi)).transpose() * Eigen::Vector3d(1, 0, 0);
  CHECK((moved.coords - oracle).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK((moved.coords - Eigen::Vector3d(0, 1, 0)).cwiseAbs().maxCoeff() <= 1e-15);

  Rng rng(23);
  for (const char* name : {"so3", "se3", "sl2", "heisenberg3", "abelian(3)"}) {
    LieAlgebra a = builtin_algebra(name);
    for (int s = 0; s < 50; ++s) {
      GroupElement h = GroupElement::from_exp(a, AlgebraVector(rng.vector(a.dim())));
      AlgebraCovector pi(rng.vector(a.dim()));
      AlgebraCovector cad = coadjoint_action(a, h, pi);
      AlgebraVector probe(rng.vector(a.dim()));
      CHECK(std::abs(pair(cad, probe) -
                     pair(pi, AlgebraVector(h.ad_inverse() * probe.coords))) <= 1e-12);
    }
  }

  GroupElement id = GroupElement::identity(so3);
  AlgebraCovector pi(Eigen::Vector3d(1, 2, 3));
  CHECK(coadjoint_action(so3, id, pi).coords.isApprox(pi.coords));
}

TEST_CASE("GroupElement representations and validation") {
  LieAlgebra so3 = builtin_algebra("so3");
  Rng rng(29);
  AlgebraVector xi(rng.vector(3));
  GroupElement g = GroupElement::from_exp(so3, xi);
  CHECK((g.ad() * g.ad_inverse() - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() <=
        1e-10);
  CHECK(g.exp_coords().has_value());

  GroupElement h = GroupElement::from_adjoint(so3, g.ad());
  CHECK(h.ad().isApprox(g.ad()));
  CHECK_FALSE(h.exp_coords().has_value());

  GroupElement gh = g * h.inverse();
  CHECK(gh.ad().isApprox(Eigen::MatrixXd::Identity(3, 3), 1e-12));

  CHECK_THROWS_AS(GroupElement::from_adjoint(so3, Eigen::MatrixXd::Zero(3, 3)),
                  InvalidGroupElement);
  CHECK_THROWS_AS(GroupElement::from_adjoint(so3, Eigen::MatrixXd::Zero(4, 4)),
                  DimensionMismatch);
}

TEST_CASE("pair is the coordinate dot product") {
  CHECK(pair(AlgebraCovector(Eigen::Vector3d(1, 2, 3)),
             AlgebraVector(Eigen::Vector3d(1, 1, 1))) == 6.0);
  CHECK(pair(AlgebraCovector(Eigen::Vector3d::Zero()),
             AlgebraVector(Eigen::Vector3d(4, 5, 6))) == 0.0);
  CHECK(pair(AlgebraCovector(Eigen::Vector2d(1, 0)),
             AlgebraVector(Eigen::Vector2d(0, 1))) == 0.0);
  CHECK_THROWS_AS(pair(AlgebraCovector(Eigen::Vector2d(1, 0)),
                       AlgebraVector(Eigen::Vector3d(0, 1, 0))),
                  DimensionMismatch);
}

TEST_CASE("dimension mismatches are rejected") {
  LieAlgebra so3 = builtin_algebra("so3");
  AlgebraVector bad(Eigen::Vector2d(1, 2));
  AlgebraVector good(Eigen::Vector3d(1, 2, 3));
  CHECK_THROWS_AS(bracket(so3, bad, good), DimensionMismatch);
  CHECK_THROWS_AS(ad_star(so3, good, AlgebraCovector(Eigen::Vector2d(1, 2))),
                  DimensionMismatch);
  CHECK_THROWS_AS(group_adjoint(so3, bad), DimensionMismatch);
}
