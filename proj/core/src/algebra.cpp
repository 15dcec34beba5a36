#include "symred/algebra.hpp"

#include <cmath>
#include <cstdio>
#include <regex>

#include <Eigen/Dense>

namespace symred {

namespace {

std::string index_message(const char* what, int i, int j, int k, int l, double residual) {
  char buf[160];
  // one-based indices in messages, matching the definition c^k_{ij}
  if (l < 0) {
    std::snprintf(buf, sizeof(buf), "%s at (i=%d, j=%d, k=%d): residual %.3e",
                  what, i + 1, j + 1, k + 1, residual);
  } else {
    std::snprintf(buf, sizeof(buf), "%s at (i=%d, j=%d, k=%d, l=%d): residual %.3e",
                  what, i + 1, j + 1, k + 1, l + 1, residual);
  }
  return buf;
}

double jacobi_worst(const LieAlgebra& a, int* wi, int* wj, int* wk, int* wl) {
  const int n = a.dim();
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double s = 0.0;
          for (int m = 0; m < n; ++m) {
            s += a.c(i, j, m) * a.c(m, k, l) + a.c(j, k, m) * a.c(m, i, l) +
                 a.c(k, i, m) * a.c(m, j, l);
          }
          if (std::abs(s) > worst) {
            worst = std::abs(s);
            if (wi) { *wi = i; *wj = j; *wk = k; *wl = l; }
          }
        }
  return worst;
}

constexpr double kJacobiTol = 1e-12;
constexpr double kGroupInverseTol = 1e-10;

void check_dim(const LieAlgebra& a, int got, const char* what) {
  if (got != a.dim()) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%s: size %d does not match algebra '%s' dim %d",
                  what, got, a.name().c_str(), a.dim());
    throw DimensionMismatch(buf);
  }
}

std::vector<double> so3_constants() {
  std::vector<double> c(27, 0.0);
  auto set = [&](int i, int j, int k, double v) {
    c[static_cast<std::size_t>((i * 3 + j) * 3 + k)] = v;
    c[static_cast<std::size_t>((j * 3 + i) * 3 + k)] = -v;
  };
  set(0, 1, 2, 1.0);
  set(1, 2, 0, 1.0);
  set(2, 0, 1, 1.0);
  return c;
}

std::vector<double> se3_constants() {
  // e1..e3 rotations, e4..e6 translations
  std::vector<double> c(216, 0.0);
  auto set = [&](int i, int j, int k, double v) {
    c[static_cast<std::size_t>((i * 6 + j) * 6 + k)] = v;
    c[static_cast<std::size_t>((j * 6 + i) * 6 + k)] = -v;
  };
  auto eps = [](int i, int j, int k) -> double {
    if (i == j || j == k || i == k) return 0.0;
    return (j - i + 3) % 3 == 1 ? 1.0 : -1.0;  // cyclic iff j follows i
  };
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        double v = eps(i, j, k);
        if (v == 0.0) continue;
        if (i < j) {
          set(i, j, k, v);          // [rot, rot] = rot
          set(i, j + 3, k + 3, v);  // [rot, trans] = trans
          set(j, i + 3, k + 3, eps(j, i, k));
        }
      }
  return c;
}

std::vector<double> sl2_constants() {
  // basis (h, e, f): [h,e] = 2e, [h,f] = -2f, [e,f] = h
  std::vector<double> c(27, 0.0);
  auto set = [&](int i, int j, int k, double v) {
    c[static_cast<std::size_t>((i * 3 + j) * 3 + k)] = v;
    c[static_cast<std::size_t>((j * 3 + i) * 3 + k)] = -v;
  };
  set(0, 1, 1, 2.0);
  set(0, 2, 2, -2.0);
  set(1, 2, 0, 1.0);
  return c;
}

std::vector<double> heisenberg3_constants() {
  std::vector<double> c(27, 0.0);
  c[static_cast<std::size_t>((0 * 3 + 1) * 3 + 2)] = 1.0;   // [e1,e2] = e3
  c[static_cast<std::size_t>((1 * 3 + 0) * 3 + 2)] = -1.0;
  return c;
}

}  // namespace

LieAlgebra LieAlgebra::create(int dim, std::vector<double> c, std::string name) {
  return LieAlgebra(dim, std::move(c), std::move(name));
}

LieAlgebra LieAlgebra::unchecked(int dim, std::vector<double> c, std::string name) {
  if (dim <= 0) throw DimensionMismatch("algebra dim must be positive");
  if (c.size() != static_cast<std::size_t>(dim) * dim * dim)
    throw DimensionMismatch("structure-constant array must have dim^3 entries");
  return LieAlgebra(dim, std::move(c), std::move(name));
}

LieAlgebra make_algebra(int dim, const std::vector<double>& c, const std::string& name) {
  LieAlgebra a = LieAlgebra::unchecked(dim, c, name);
  double worst_anti = 0.0;
  int ai = 0, aj = 0, ak = 0;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k) {
        double r = std::abs(a.c(i, j, k) + a.c(j, i, k));
        if (r > worst_anti) { worst_anti = r; ai = i; aj = j; ak = k; }
      }
  if (worst_anti > 0.0)
    throw AntisymmetryViolation(index_message("c^k_ij + c^k_ji != 0", ai, aj, ak, -1, worst_anti));

  int wi = 0, wj = 0, wk = 0, wl = 0;
  double worst = jacobi_worst(a, &wi, &wj, &wk, &wl);
  if (worst > kJacobiTol)
    throw JacobiViolation(index_message("Jacobi identity fails", wi, wj, wk, wl, worst));
  return a;
}

LieAlgebra builtin_algebra(const std::string& name) {
  if (name == "so3") return make_algebra(3, so3_constants(), "so3");
  if (name == "se3") return make_algebra(6, se3_constants(), "se3");
  if (name == "sl2") return make_algebra(3, sl2_constants(), "sl2");
  if (name == "heisenberg3") return make_algebra(3, heisenberg3_constants(), "heisenberg3");
  static const std::regex abelian_re(R"(abelian\((\d+)\))");
  std::smatch m;
  if (std::regex_match(name, m, abelian_re)) {
    int n = std::stoi(m[1].str());
    if (n <= 0) throw UnknownAlgebra("abelian dimension must be positive: " + name);
    return make_algebra(n, std::vector<double>(static_cast<std::size_t>(n) * n * n, 0.0), name);
  }
  throw UnknownAlgebra("unknown algebra '" + name +
                       "'; expected so3, se3, sl2, heisenberg3, or abelian(n)");
}

std::vector<std::pair<std::string, int>> builtin_algebra_names() {
  return {{"so3", 3}, {"se3", 6}, {"sl2", 3}, {"heisenberg3", 3}, {"abelian(n)", 0}};
}

AlgebraVector bracket(const LieAlgebra& a, const AlgebraVector& x, const AlgebraVector& y) {
  check_dim(a, x.dim(), "bracket: x");
  check_dim(a, y.dim(), "bracket: y");
  const int n = a.dim();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  // grouped over unordered (i,j) so that swapping x and y negates every
  // term exactly, making bracket antisymmetry hold in floating point
  for (int k = 0; k < n; ++k) {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        s += a.c(i, j, k) * (x.coords[i] * y.coords[j] - x.coords[j] * y.coords[i]);
    out[k] = s;
  }
  return AlgebraVector(std::move(out));
}

AlgebraCovector ad_star(const LieAlgebra& a, const AlgebraVector& omega,
                        const AlgebraCovector& pi) {
  check_dim(a, omega.dim(), "ad_star: omega");
  check_dim(a, pi.dim(), "ad_star: pi");
  const int n = a.dim();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  for (int j = 0; j < n; ++j) {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) s += a.c(i, j, k) * omega.coords[i] * pi.coords[k];
    out[j] = s;
  }
  return AlgebraCovector(std::move(out));
}

Eigen::MatrixXd ad_matrix(const LieAlgebra& a, const AlgebraVector& xi) {
  check_dim(a, xi.dim(), "ad_matrix: xi");
  const int n = a.dim();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += a.c(i, j, k) * xi.coords[i];
      m(k, j) = s;
    }
  return m;
}

Eigen::MatrixXd matrix_exp(const Eigen::MatrixXd& m) {
  const int n = static_cast<int>(m.rows());
  const double norm = m.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const Eigen::MatrixXd scaled = m / std::exp2(squarings);

  Eigen::MatrixXd sum = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n, n);
  for (int k = 1; k <= 64; ++k) {
    term = (term * scaled / k).eval();
    sum += term;
    if (term.cwiseAbs().maxCoeff() <= 1e-16 * sum.cwiseAbs().maxCoeff()) break;
  }
  for (int s = 0; s < squarings; ++s) sum = (sum * sum).eval();
  return sum;
}

Eigen::MatrixXd group_adjoint(const LieAlgebra& a, const AlgebraVector& xi) {
  return matrix_exp(ad_matrix(a, xi));
}

GroupElement GroupElement::identity(const LieAlgebra& a) {
  GroupElement g;
  g.m_ad = Eigen::MatrixXd::Identity(a.dim(), a.dim());
  g.m_ad_inv = g.m_ad;
  g.m_exp_coords = Eigen::VectorXd::Zero(a.dim());
  return g;
}

GroupElement GroupElement::from_exp(const LieAlgebra& a, const AlgebraVector& xi) {
  check_dim(a, xi.dim(), "GroupElement: xi");
  if (!xi.coords.allFinite()) throw InvalidGroupElement("exp coordinates must be finite");
  GroupElement g;
  g.m_ad = group_adjoint(a, xi);
  g.m_ad_inv = group_adjoint(a, AlgebraVector(-xi.coords));
  g.m_exp_coords = xi.coords;
  return g;
}

GroupElement GroupElement::from_adjoint(const LieAlgebra& a, const Eigen::MatrixXd& ad) {
  if (ad.rows() != a.dim() || ad.cols() != a.dim())
    throw DimensionMismatch("GroupElement: adjoint matrix shape does not match algebra dim");
  if (!ad.allFinite()) throw InvalidGroupElement("adjoint matrix must be finite");
  GroupElement g;
  g.m_ad = ad;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(ad);
  g.m_ad_inv = lu.solve(Eigen::MatrixXd::Identity(a.dim(), a.dim()));
  const double err =
      (g.m_ad * g.m_ad_inv - Eigen::MatrixXd::Identity(a.dim(), a.dim())).cwiseAbs().maxCoeff();
  if (!g.m_ad_inv.allFinite() || err > kGroupInverseTol) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "Ad_g Ad_g^-1 deviates from identity by %.3e", err);
    throw InvalidGroupElement(buf);
  }
  return g;
}

GroupElement GroupElement::operator*(const GroupElement& other) const {
  if (dim() != other.dim()) throw DimensionMismatch("GroupElement product: dims differ");
  GroupElement g;
  g.m_ad = m_ad * other.m_ad;
  g.m_ad_inv = other.m_ad_inv * m_ad_inv;
  return g;
}

GroupElement GroupElement::inverse() const {
  GroupElement g;
  g.m_ad = m_ad_inv;
  g.m_ad_inv = m_ad;
  if (m_exp_coords) g.m_exp_coords = -(*m_exp_coords);
  return g;
}

AlgebraCovector coadjoint_action(const LieAlgebra& a, const GroupElement& g,
                                 const AlgebraCovector& pi) {
  check_dim(a, g.dim(), "coadjoint_action: g");
  check_dim(a, pi.dim(), "coadjoint_action: pi");
  // pair(result, xi) = pair(pi, Ad_{g^-1} xi), so result = Ad_{g^-1}^T pi
  return AlgebraCovector(g.ad_inverse().transpose() * pi.coords);
}

double pair(const AlgebraCovector& pi, const AlgebraVector& xi) {
  if (pi.dim() != xi.dim()) throw DimensionMismatch("pair: covector and vector dims differ");
  return pi.coords.dot(xi.coords);
}

double jacobi_residual(const LieAlgebra& a) {
  return jacobi_worst(a, nullptr, nullptr, nullptr, nullptr);
}

}  // namespace symred
