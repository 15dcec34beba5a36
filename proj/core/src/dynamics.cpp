#include "symred/dynamics.hpp"

#include <cmath>
#include <cstdio>

#include <Eigen/Dense>

namespace symred {

namespace {

constexpr int kOrthonormalizeEvery = 1000;

long steps_for(const IntegratorConfig& cfg) {
  return std::max(1L, std::lround(cfg.t_final / cfg.dt));
}

[[noreturn]] void throw_non_finite(long step) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "non-finite state after step %ld", step);
  throw NonFiniteState(buf);
}

Eigen::VectorXd rk4_step(const Rhs& f, const Eigen::VectorXd& y, double dt) {
  const Eigen::VectorXd k1 = f(y);
  const Eigen::VectorXd k2 = f(y + 0.5 * dt * k1);
  const Eigen::VectorXd k3 = f(y + 0.5 * dt * k2);
  const Eigen::VectorXd k4 = f(y + dt * k3);
  return y + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Eigen::VectorXd midpoint_step(const Rhs& f, const Eigen::VectorXd& yn,
                              const IntegratorConfig& cfg) {
  const int n = static_cast<int>(yn.size());
  const double dt = cfg.dt;
  Eigen::VectorXd y = yn + dt * f(yn);  // explicit predictor
  for (int it = 0; it < cfg.newton_max_iter; ++it) {
    const Eigen::VectorXd mid = 0.5 * (yn + y);
    const Eigen::VectorXd residual = y - yn - dt * f(mid);
    if (residual.cwiseAbs().maxCoeff() <= cfg.newton_tol) return y;

    // finite-difference Jacobian of f at the midpoint
    const double step = 1e-6 * std::max(1.0, mid.norm());
    Eigen::MatrixXd jac(n, n);
    Eigen::VectorXd probe = mid;
    for (int j = 0; j < n; ++j) {
      probe[j] = mid[j] + step;
      const Eigen::VectorXd hi = f(probe);
      probe[j] = mid[j] - step;
      const Eigen::VectorXd lo = f(probe);
      probe[j] = mid[j];
      jac.col(j) = (hi - lo) / (2.0 * step);
    }
    const Eigen::MatrixXd newton_mat =
        Eigen::MatrixXd::Identity(n, n) - 0.5 * dt * jac;
    y -= newton_mat.partialPivLu().solve(residual);
    if (!y.allFinite()) throw NewtonDivergence("midpoint Newton produced non-finite iterate");
  }
  throw NewtonDivergence("midpoint Newton did not converge within the iteration budget");
}

/// Project a square block onto the nearest rotation via polar decomposition.
void orthonormalize_rotation(Eigen::Ref<Eigen::MatrixXd> block) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(block, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::MatrixXd r = svd.matrixU() * svd.matrixV().transpose();
  if (r.determinant() < 0) {
    Eigen::MatrixXd u = svd.matrixU();
    u.col(u.cols() - 1) *= -1.0;
    r = u * svd.matrixV().transpose();
  }
  block = r;
}

void orthonormalize_for(const LieAlgebra& a, Eigen::MatrixXd& ad) {
  if (a.name() == "so3") {
    orthonormalize_rotation(ad);
  } else if (a.name() == "se3") {
    orthonormalize_rotation(ad.topLeftCorner(3, 3));
    orthonormalize_rotation(ad.bottomRightCorner(3, 3));
  }
}

}  // namespace

void validate(const IntegratorConfig& cfg) {
  if (cfg.method != "rk4" && cfg.method != "midpoint")
    throw ConfigError("integrator method must be rk4 or midpoint, got '" + cfg.method + "'");
  if (!(cfg.dt > 0.0)) throw ConfigError("dt must be positive");
  if (!(cfg.t_final > 0.0)) throw ConfigError("t_final must be positive");
  if (cfg.dt > cfg.t_final) throw ConfigError("dt must not exceed t_final");
  if (!(cfg.newton_tol > 0.0)) throw ConfigError("newton_tol must be positive");
  if (cfg.newton_max_iter <= 0) throw ConfigError("newton_max_iter must be positive");
}

AlgebraCovector lie_poisson_rhs(const LieAlgebra& a, const ReducedHamiltonian& h,
                                const AlgebraCovector& pi) {
  if (pi.dim() != a.dim()) throw DimensionMismatch("lie_poisson_rhs: pi dim");
  return ad_star(a, h.gradient(pi), pi);
}

ProductRate hp_product_rhs(const LieAlgebra& a, const ProductHamiltonian& h,
                           const ProductState& state) {
  if (state.pi.dim() != a.dim()) throw DimensionMismatch("hp_product_rhs: pi dim");
  if (state.x.size() != state.p.size())
    throw DimensionMismatch("hp_product_rhs: x and p lengths differ");
  ProductRate rate;
  rate.pidot = ad_star(a, h.grad_pi(state), state.pi);
  rate.xdot = h.grad_p(state);
  rate.pdot = -h.grad_x(state);
  return rate;
}

AlgebraVector euler_poincare_rhs(const LieAlgebra& a, const ReducedLagrangian& l,
                                 const AlgebraVector& xi) {
  if (xi.dim() != a.dim()) throw DimensionMismatch("euler_poincare_rhs: xi dim");
  const AlgebraCovector momentum = l.fiber_derivative(xi);
  const AlgebraCovector force = ad_star(a, xi, momentum);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(l.hessian(xi));
  if (!lu.isInvertible())
    throw DegenerateLagrangian("fiber Hessian is singular; Lagrangian is not hyperregular here");
  return AlgebraVector(lu.solve(force.coords));
}

Trajectory integrate(const Rhs& rhs, const Eigen::VectorXd& y0, const IntegratorConfig& cfg) {
  validate(cfg);
  const long nsteps = steps_for(cfg);
  Trajectory traj;
  traj.method = cfg.method;
  traj.dt = cfg.dt;
  traj.times.reserve(nsteps + 1);
  traj.states.reserve(nsteps + 1);
  traj.times.push_back(0.0);
  traj.states.push_back(y0);

  Eigen::VectorXd y = y0;
  for (long k = 0; k < nsteps; ++k) {
    y = cfg.method == "rk4" ? rk4_step(rhs, y, cfg.dt) : midpoint_step(rhs, y, cfg);
    if (!y.allFinite()) throw_non_finite(k + 1);
    traj.times.push_back(static_cast<double>(k + 1) * cfg.dt);
    traj.states.push_back(y);
  }
  return traj;
}

namespace {

std::vector<std::string> numbered(const std::string& prefix, int n) {
  std::vector<std::string> names;
  names.reserve(n);
  for (int i = 1; i <= n; ++i) names.push_back(prefix + "_" + std::to_string(i));
  return names;
}

void attach_casimirs(const LieAlgebra& a, Trajectory& traj,
                     const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& pi_of) {
  if (a.name() == "so3") {
    auto& col = traj.diagnostics["casimir_so3"];
    for (const auto& s : traj.states) col.push_back(pi_of(s).squaredNorm());
  } else if (a.name() == "heisenberg3") {
    auto& col = traj.diagnostics["casimir_heis"];
    for (const auto& s : traj.states) col.push_back(pi_of(s)[2]);
  }
}

}  // namespace

Trajectory simulate_lie_poisson(const LieAlgebra& a, const ReducedHamiltonian& h,
                                const AlgebraCovector& pi0, const IntegratorConfig& cfg) {
  if (pi0.dim() != a.dim()) throw DimensionMismatch("simulate_lie_poisson: pi0 dim");
  auto rhs = [&a, &h](const Eigen::VectorXd& y) {
    return lie_poisson_rhs(a, h, AlgebraCovector(y)).coords;
  };
  Trajectory traj = integrate(rhs, pi0.coords, cfg);
  traj.state_names = numbered("pi", a.dim());
  auto& energy = traj.diagnostics["energy"];
  for (const auto& s : traj.states) energy.push_back(h.value(AlgebraCovector(s)));
  attach_casimirs(a, traj, [](const Eigen::VectorXd& s) { return s; });
  return traj;
}

Trajectory simulate_euler_poincare(const LieAlgebra& a, const ReducedLagrangian& l,
                                   const AlgebraVector& xi0, const IntegratorConfig& cfg) {
  if (xi0.dim() != a.dim()) throw DimensionMismatch("simulate_euler_poincare: xi0 dim");
  auto rhs = [&a, &l](const Eigen::VectorXd& y) {
    return euler_poincare_rhs(a, l, AlgebraVector(y)).coords;
  };
  Trajectory traj = integrate(rhs, xi0.coords, cfg);
  traj.state_names = numbered("xi", a.dim());
  auto& energy = traj.diagnostics["energy"];
  for (const auto& s : traj.states) energy.push_back(reduced_energy(l, AlgebraVector(s)));
  return traj;
}

Trajectory simulate_hp_product(const LieAlgebra& a, const ProductHamiltonian& h,
                               const ProductState& s0, const IntegratorConfig& cfg) {
  if (s0.pi.dim() != a.dim()) throw DimensionMismatch("simulate_hp_product: pi0 dim");
  if (s0.x.size() != s0.p.size()) throw DimensionMismatch("simulate_hp_product: x/p lengths");
  const int n = a.dim();
  const int m = static_cast<int>(s0.x.size());

  auto unpack = [n, m](const Eigen::VectorXd& y) {
    return ProductState{AlgebraCovector(y.head(n)), y.segment(n, m), y.tail(m)};
  };
  auto rhs = [&a, &h, unpack, n, m](const Eigen::VectorXd& y) {
    ProductRate rate = hp_product_rhs(a, h, unpack(y));
    Eigen::VectorXd out(n + 2 * m);
    out << rate.pidot.coords, rate.xdot, rate.pdot;
    return out;
  };

  Eigen::VectorXd y0(n + 2 * m);
  y0 << s0.pi.coords, s0.x, s0.p;
  Trajectory traj = integrate(rhs, y0, cfg);
  traj.state_names = numbered("pi", n);
  for (const auto& name : numbered("x", m)) traj.state_names.push_back(name);
  for (const auto& name : numbered("p", m)) traj.state_names.push_back(name);
  auto& energy = traj.diagnostics["energy"];
  for (const auto& s : traj.states) energy.push_back(h.value(unpack(s)));
  attach_casimirs(a, traj, [n](const Eigen::VectorXd& s) { return s.head(n).eval(); });
  return traj;
}

Trajectory reconstruct(const LieAlgebra& a, const Trajectory& traj, const ReducedHamiltonian& h,
                       const GroupElement& g0) {
  if (traj.method != "rk4" && traj.method != "midpoint")
    throw MethodMismatch("reconstruct: trajectory carries method '" + traj.method +
                         "', expected rk4 or midpoint");
  if (traj.size() < 2) throw TooFewSamples("reconstruct: need at least two samples");
  if (g0.dim() != a.dim()) throw DimensionMismatch("reconstruct: g0 dim");
  const int n = a.dim();
  if (traj.states.front().size() != n)
    throw DimensionMismatch("reconstruct: trajectory states are not algebra covectors");
  const double dt = traj.dt;

  auto omega_at = [&](const Eigen::VectorXd& pi) {
    return h.gradient(AlgebraCovector(pi)).coords;
  };
  auto lp = [&](const Eigen::VectorXd& pi) {
    return lie_poisson_rhs(a, h, AlgebraCovector(pi)).coords;
  };

  Trajectory out;
  out.method = traj.method;
  out.dt = dt;
  out.times = traj.times;
  out.state_names.reserve(n * n);
  for (int r = 1; r <= n; ++r)
    for (int c = 1; c <= n; ++c)
      out.state_names.push_back("ad_" + std::to_string(r) + std::to_string(c));

  Eigen::MatrixXd ad = g0.ad();
  std::vector<Eigen::MatrixXd> mats;
  mats.reserve(traj.size());
  mats.push_back(ad);

  for (std::size_t k = 0; k + 1 < traj.size(); ++k) {
    const Eigen::VectorXd& pi = traj.states[k];
    if (traj.method == "rk4") {
      // the same four stage velocities the state integrator used
      const Eigen::VectorXd k1 = lp(pi);
      const Eigen::VectorXd k2 = lp(pi + 0.5 * dt * k1);
      const Eigen::VectorXd k3 = lp(pi + 0.5 * dt * k2);
      const Eigen::MatrixXd m1 = ad_matrix(a, AlgebraVector(omega_at(pi)));
      const Eigen::MatrixXd m2 = ad_matrix(a, AlgebraVector(omega_at(pi + 0.5 * dt * k1)));
      const Eigen::MatrixXd m3 = ad_matrix(a, AlgebraVector(omega_at(pi + 0.5 * dt * k2)));
      const Eigen::MatrixXd m4 = ad_matrix(a, AlgebraVector(omega_at(pi + dt * k3)));
      const Eigen::MatrixXd j1 = ad * m1;
      const Eigen::MatrixXd j2 = (ad + 0.5 * dt * j1) * m2;
      const Eigen::MatrixXd j3 = (ad + 0.5 * dt * j2) * m3;
      const Eigen::MatrixXd j4 = (ad + dt * j3) * m4;
      ad += dt / 6.0 * (j1 + 2.0 * j2 + 2.0 * j3 + j4);
    } else {
      // midpoint on the linear group equation is the Cayley update
      const Eigen::VectorXd mid = 0.5 * (pi + traj.states[k + 1]);
      const Eigen::MatrixXd x = ad_matrix(a, AlgebraVector(omega_at(mid)));
      const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
      const Eigen::MatrixXd cayley =
          (eye - 0.5 * dt * x).partialPivLu().solve(eye + 0.5 * dt * x);
      ad = (ad * cayley).eval();
    }
    if (!ad.allFinite()) throw_non_finite(static_cast<long>(k + 1));
    if ((k + 1) % kOrthonormalizeEvery == 0) orthonormalize_for(a, ad);
    mats.push_back(ad);
  }

  out.states.reserve(mats.size());
  for (const auto& m : mats) {
    Eigen::MatrixXd row_major = m.transpose();  // row-major flatten
    out.states.push_back(Eigen::Map<Eigen::VectorXd>(row_major.data(), n * n));
  }

  for (int i = 1; i <= n; ++i) out.diagnostics["spatial_momentum_" + std::to_string(i)] = {};
  for (std::size_t k = 0; k < mats.size(); ++k) {
    // mu = (A^{-1})^T pi, i.e. the solution of A^T mu = pi
    const Eigen::VectorXd mu = mats[k].transpose().partialPivLu().solve(traj.states[k]);
    for (int i = 0; i < n; ++i)
      out.diagnostics["spatial_momentum_" + std::to_string(i + 1)].push_back(mu[i]);
  }
  return out;
}

}  // namespace symred
