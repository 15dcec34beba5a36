#include "symred/models.hpp"

#include <cmath>

#include <Eigen/Dense>

namespace symred {

namespace {

constexpr double kSymmetryTol = 1e-13;
constexpr double kNewtonTol = 1e-12;
constexpr int kNewtonMaxIter = 50;

void require_finite(const Eigen::VectorXd& v, const char* what) {
  if (!v.allFinite()) throw GradientFailure(std::string(what) + " produced non-finite values");
}

Eigen::VectorXd central_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                 const Eigen::VectorXd& at) {
  const double step = fd_gradient_step(at);
  Eigen::VectorXd g(at.size());
  Eigen::VectorXd probe = at;
  for (int i = 0; i < at.size(); ++i) {
    probe[i] = at[i] + step;
    const double hi = f(probe);
    probe[i] = at[i] - step;
    const double lo = f(probe);
    probe[i] = at[i];
    g[i] = (hi - lo) / (2.0 * step);
  }
  require_finite(g, "finite-difference gradient");
  return g;
}

Eigen::MatrixXd central_jacobian(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& g,
    const Eigen::VectorXd& at, double step) {
  const int n = static_cast<int>(at.size());
  Eigen::MatrixXd jac(n, n);
  Eigen::VectorXd probe = at;
  for (int j = 0; j < n; ++j) {
    probe[j] = at[j] + step;
    const Eigen::VectorXd hi = g(probe);
    probe[j] = at[j] - step;
    const Eigen::VectorXd lo = g(probe);
    probe[j] = at[j];
    jac.col(j) = (hi - lo) / (2.0 * step);
  }
  if (!jac.allFinite()) throw GradientFailure("finite-difference Hessian is non-finite");
  return jac;
}

}  // namespace

double fd_gradient_step(const Eigen::VectorXd& at) {
  return 1e-6 * std::max(1.0, at.norm());
}

double fd_hessian_step(const Eigen::VectorXd& at) {
  static const double cbrt_eps = std::cbrt(std::numeric_limits<double>::epsilon());
  return cbrt_eps * std::max(1.0, at.norm());
}

ReducedHamiltonian ReducedHamiltonian::quadratic(const Eigen::MatrixXd& w,
                                                 const Eigen::VectorXd& b) {
  if (w.rows() != w.cols()) throw DimensionMismatch("quadratic Hamiltonian: W must be square");
  if ((w - w.transpose()).cwiseAbs().maxCoeff() > kSymmetryTol)
    throw DimensionMismatch("quadratic Hamiltonian: W must be symmetric to 1e-13");
  ReducedHamiltonian h;
  h.m_quadratic = true;
  h.m_w = w;
  h.m_b = b.size() ? b : Eigen::VectorXd::Zero(w.rows());
  if (h.m_b.size() != w.rows())
    throw DimensionMismatch("quadratic Hamiltonian: b length must match W");
  return h;
}

ReducedHamiltonian ReducedHamiltonian::custom(ValueFn value, GradientFn gradient) {
  if (!value) throw ConfigError("custom Hamiltonian needs a value oracle");
  ReducedHamiltonian h;
  h.m_value = std::move(value);
  h.m_gradient = std::move(gradient);
  return h;
}

double ReducedHamiltonian::value(const AlgebraCovector& pi) const {
  if (m_quadratic) {
    if (pi.dim() != m_w.rows()) throw DimensionMismatch("Hamiltonian value: pi dim");
    return 0.5 * pi.coords.dot(m_w * pi.coords) + m_b.dot(pi.coords);
  }
  return m_value(pi.coords);
}

AlgebraVector ReducedHamiltonian::gradient(const AlgebraCovector& pi) const {
  if (m_quadratic) {
    if (pi.dim() != m_w.rows()) throw DimensionMismatch("Hamiltonian gradient: pi dim");
    return AlgebraVector(m_w * pi.coords + m_b);
  }
  if (m_gradient) {
    Eigen::VectorXd g = m_gradient(pi.coords);
    if (g.size() != pi.coords.size())
      throw GradientFailure("gradient oracle returned wrong length");
    require_finite(g, "gradient oracle");
    return AlgebraVector(std::move(g));
  }
  return AlgebraVector(central_gradient(m_value, pi.coords));
}

Eigen::MatrixXd ReducedHamiltonian::hessian(const AlgebraCovector& pi) const {
  if (m_quadratic) return m_w;
  auto grad = [this](const Eigen::VectorXd& v) {
    return gradient(AlgebraCovector(v)).coords;
  };
  return central_jacobian(grad, pi.coords, fd_hessian_step(pi.coords));
}

ReducedLagrangian ReducedLagrangian::quadratic(const Eigen::MatrixXd& inertia) {
  if (inertia.rows() != inertia.cols())
    throw DimensionMismatch("quadratic Lagrangian: inertia must be square");
  if ((inertia - inertia.transpose()).cwiseAbs().maxCoeff() > kSymmetryTol)
    throw DegenerateLagrangian("inertia must be symmetric");
  Eigen::LLT<Eigen::MatrixXd> llt(inertia);
  if (llt.info() != Eigen::Success)
    throw DegenerateLagrangian("inertia must be positive-definite (Cholesky failed)");
  ReducedLagrangian l;
  l.m_quadratic = true;
  l.m_inertia = inertia;
  return l;
}

ReducedLagrangian ReducedLagrangian::custom(ValueFn value, GradientFn gradient,
                                            HessianFn hessian) {
  if (!value) throw ConfigError("custom Lagrangian needs a value oracle");
  ReducedLagrangian l;
  l.m_value = std::move(value);
  l.m_gradient = std::move(gradient);
  l.m_hessian = std::move(hessian);
  return l;
}

double ReducedLagrangian::value(const AlgebraVector& xi) const {
  if (m_quadratic) {
    if (xi.dim() != m_inertia.rows()) throw DimensionMismatch("Lagrangian value: xi dim");
    return 0.5 * xi.coords.dot(m_inertia * xi.coords);
  }
  return m_value(xi.coords);
}

AlgebraCovector ReducedLagrangian::fiber_derivative(const AlgebraVector& xi) const {
  if (m_quadratic) {
    if (xi.dim() != m_inertia.rows()) throw DimensionMismatch("fiber derivative: xi dim");
    return AlgebraCovector(m_inertia * xi.coords);
  }
  if (m_gradient) {
    Eigen::VectorXd g = m_gradient(xi.coords);
    require_finite(g, "Lagrangian gradient oracle");
    return AlgebraCovector(std::move(g));
  }
  return AlgebraCovector(central_gradient(m_value, xi.coords));
}

Eigen::MatrixXd ReducedLagrangian::hessian(const AlgebraVector& xi) const {
  if (m_quadratic) return m_inertia;
  if (m_hessian) {
    Eigen::MatrixXd h = m_hessian(xi.coords);
    if (!h.allFinite()) throw GradientFailure("Lagrangian Hessian oracle is non-finite");
    return h;
  }
  auto grad = [this](const Eigen::VectorXd& v) {
    return fiber_derivative(AlgebraVector(v)).coords;
  };
  return central_jacobian(grad, xi.coords, fd_hessian_step(xi.coords));
}

ProductHamiltonian ProductHamiltonian::quadratic(const Eigen::MatrixXd& w,
                                                 const Eigen::VectorXd& b,
                                                 const Eigen::MatrixXd& wp,
                                                 const Eigen::MatrixXd& k_quad,
                                                 const Eigen::VectorXd& k_lin) {
  if ((w - w.transpose()).cwiseAbs().maxCoeff() > kSymmetryTol ||
      (wp - wp.transpose()).cwiseAbs().maxCoeff() > kSymmetryTol ||
      (k_quad - k_quad.transpose()).cwiseAbs().maxCoeff() > kSymmetryTol)
    throw DimensionMismatch("product Hamiltonian: quadratic blocks must be symmetric");
  if (wp.rows() != k_quad.rows() || k_lin.size() != k_quad.rows() ||
      (b.size() && b.size() != w.rows()))
    throw DimensionMismatch("product Hamiltonian: block sizes disagree");
  ProductHamiltonian h;
  h.m_quadratic = true;
  h.m_w = w;
  h.m_b = b.size() ? b : Eigen::VectorXd::Zero(w.rows());
  h.m_wp = wp;
  h.m_k_quad = k_quad;
  h.m_k_lin = k_lin;
  return h;
}

ProductHamiltonian ProductHamiltonian::custom(ValueFn value, SlotGradFn grad_pi,
                                              SlotGradFn grad_x, SlotGradFn grad_p) {
  if (!value) throw ConfigError("custom product Hamiltonian needs a value oracle");
  ProductHamiltonian h;
  h.m_value = std::move(value);
  h.m_grad_pi = std::move(grad_pi);
  h.m_grad_x = std::move(grad_x);
  h.m_grad_p = std::move(grad_p);
  return h;
}

double ProductHamiltonian::value(const ProductState& s) const {
  if (m_quadratic) {
    return 0.5 * s.pi.coords.dot(m_w * s.pi.coords) + m_b.dot(s.pi.coords) +
           0.5 * s.p.dot(m_wp * s.p) + 0.5 * s.x.dot(m_k_quad * s.x) + m_k_lin.dot(s.x);
  }
  return m_value(s.pi.coords, s.x, s.p);
}

namespace {

/// Central differences in one slot of a three-slot function.
Eigen::VectorXd slot_gradient(const ProductHamiltonian::ValueFn& f, const Eigen::VectorXd& pi,
                              const Eigen::VectorXd& x, const Eigen::VectorXd& p, int slot) {
  const Eigen::VectorXd* target = slot == 0 ? &pi : slot == 1 ? &x : &p;
  Eigen::VectorXd joint(pi.size() + x.size() + p.size());
  joint << pi, x, p;
  const double step = fd_gradient_step(joint);
  Eigen::VectorXd probe = *target;
  Eigen::VectorXd g(target->size());
  auto eval = [&](const Eigen::VectorXd& v) {
    return slot == 0 ? f(v, x, p) : slot == 1 ? f(pi, v, p) : f(pi, x, v);
  };
  for (int i = 0; i < target->size(); ++i) {
    probe[i] = (*target)[i] + step;
    const double hi = eval(probe);
    probe[i] = (*target)[i] - step;
    const double lo = eval(probe);
    probe[i] = (*target)[i];
    g[i] = (hi - lo) / (2.0 * step);
  }
  if (!g.allFinite()) throw GradientFailure("finite-difference slot gradient is non-finite");
  return g;
}

}  // namespace

AlgebraVector ProductHamiltonian::grad_pi(const ProductState& s) const {
  if (m_quadratic) return AlgebraVector(m_w * s.pi.coords + m_b);
  if (m_grad_pi) return AlgebraVector(m_grad_pi(s.pi.coords, s.x, s.p));
  return AlgebraVector(slot_gradient(m_value, s.pi.coords, s.x, s.p, 0));
}

Eigen::VectorXd ProductHamiltonian::grad_x(const ProductState& s) const {
  if (m_quadratic) return m_k_quad * s.x + m_k_lin;
  if (m_grad_x) return m_grad_x(s.pi.coords, s.x, s.p);
  return slot_gradient(m_value, s.pi.coords, s.x, s.p, 1);
}

Eigen::VectorXd ProductHamiltonian::grad_p(const ProductState& s) const {
  if (m_quadratic) return m_wp * s.p;
  if (m_grad_p) return m_grad_p(s.pi.coords, s.x, s.p);
  return slot_gradient(m_value, s.pi.coords, s.x, s.p, 2);
}

AlgebraCovector legendre(const ReducedLagrangian& l, const AlgebraVector& xi) {
  return l.fiber_derivative(xi);
}

double reduced_energy(const ReducedLagrangian& l, const AlgebraVector& xi) {
  return pair(l.fiber_derivative(xi), xi) - l.value(xi);
}

namespace {

/// Newton inversion of the fiber derivative: find xi with F_l(xi) = pi.
Eigen::VectorXd invert_legendre(const ReducedLagrangian& l, const Eigen::VectorXd& pi) {
  Eigen::VectorXd xi = Eigen::VectorXd::Zero(pi.size());
  for (int it = 0; it < kNewtonMaxIter; ++it) {
    const Eigen::VectorXd residual = l.fiber_derivative(AlgebraVector(xi)).coords - pi;
    if (residual.cwiseAbs().maxCoeff() <= kNewtonTol) return xi;
    Eigen::MatrixXd hess = l.hessian(AlgebraVector(xi));
    Eigen::FullPivLU<Eigen::MatrixXd> lu(hess);
    if (!lu.isInvertible())
      throw DegenerateLagrangian("fiber Hessian is singular during Legendre inversion");
    xi -= lu.solve(residual);
    if (!xi.allFinite()) throw NewtonDivergence("Legendre inversion produced non-finite iterate");
  }
  throw NewtonDivergence("Legendre inversion did not converge in 50 iterations");
}

}  // namespace

ReducedHamiltonian hamiltonian_from_lagrangian(const ReducedLagrangian& l) {
  if (l.is_quadratic()) {
    const Eigen::MatrixXd& inertia = l.inertia();
    Eigen::LLT<Eigen::MatrixXd> llt(inertia);
    Eigen::MatrixXd w = llt.solve(Eigen::MatrixXd::Identity(inertia.rows(), inertia.cols()));
    w = 0.5 * (w + w.transpose()).eval();  // symmetrize solve roundoff
    return ReducedHamiltonian::quadratic(w);
  }
  auto value = [l](const Eigen::VectorXd& pi) {
    Eigen::VectorXd xi = invert_legendre(l, pi);
    return pi.dot(xi) - l.value(AlgebraVector(xi));
  };
  // dh/dpi = F_l^-1(pi): differentiating e_l(F_l^-1(pi)) cancels the dl term
  auto gradient = [l](const Eigen::VectorXd& pi) { return invert_legendre(l, pi); };
  return ReducedHamiltonian::custom(value, gradient);
}

double gradient_consistency(const ReducedHamiltonian& h, const AlgebraCovector& pi) {
  const int n = pi.dim();
  const AlgebraVector g = h.gradient(pi);
  double worst = 0.0;
  const double t = 10.0 * fd_gradient_step(pi.coords);
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd dir = Eigen::VectorXd::Zero(n);
    dir[i] = 1.0;
    auto along = [&](double s) { return h.value(AlgebraCovector(pi.coords + s * dir)); };
    // Richardson: combine steps t and t/2 to cancel the O(t^2) term
    const double d1 = (along(t) - along(-t)) / (2.0 * t);
    const double d2 = (along(t / 2) - along(-t / 2)) / t;
    const double refined = (4.0 * d2 - d1) / 3.0;
    worst = std::max(worst, std::abs(refined - g.coords[i]));
  }
  return worst;
}

}  // namespace symred
