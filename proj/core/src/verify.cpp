#include "symred/verify.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <map>

#include <Eigen/Dense>

namespace symred {

namespace {

constexpr double kMomentumFlatTol = 1e-12;
constexpr double kIsotropyQuadraticTol = 1e-12;
constexpr double kIsotropyFdTol = 1e-10;
constexpr double kTripleTol = 1e-12;
constexpr double kZeroLevelTol = 1e-13;
constexpr double kDegenerateError = 1e-15;

std::string fmt_vec(const Eigen::VectorXd& v) {
  std::string s = "[";
  char buf[32];
  for (int i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.6g", v[i]);
    s += buf;
    if (i + 1 < v.size()) s += ", ";
  }
  return s + "]";
}

CheckReport finish(std::string name, int samples, double max_residual, double tolerance,
                   std::string worst) {
  CheckReport r;
  r.name = std::move(name);
  r.samples = samples;
  r.max_residual = max_residual;
  r.tolerance = tolerance;
  r.pass = max_residual <= tolerance;
  r.worst_case = samples ? std::move(worst) : "no samples";
  return r;
}

}  // namespace

CheckReport check_momentum_flat_relation(const LieAlgebra& algebra,
                                         const std::vector<GrpTTstar>& samples) {
  double worst = 0.0;
  std::string echo;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const GrpTTstar& pt = samples[i];
    const AlgebraCovector lhs = momentum_tstar_tstar_g(algebra, grp_flat(algebra, pt));
    const AlgebraCovector rhs = momentum_ttstar_g(algebra, pt);
    const double res = (lhs.coords + rhs.coords).cwiseAbs().maxCoeff();
    if (res >= worst) {
      worst = res;
      echo = "sample " + std::to_string(i) + ": pi=" + fmt_vec(pt.pi.coords) +
             ", omega=" + fmt_vec(pt.omega.coords) + ", pidot=" + fmt_vec(pt.pidot.coords);
    }
  }
  return finish("momentum_flat_relation", static_cast<int>(samples.size()), worst,
                kMomentumFlatTol, std::move(echo));
}

CheckReport check_graph_isotropy(const ReducedHamiltonian& h,
                                 const std::vector<AlgebraCovector>& points,
                                 const std::vector<DirectionPair>& directions) {
  if (points.size() != directions.size())
    throw DimensionMismatch("graph isotropy: need one direction pair per point");
  const double tol = h.is_quadratic() ? kIsotropyQuadraticTol : kIsotropyFdTol;
  double worst = 0.0;
  std::string echo;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Eigen::MatrixXd hess = h.hessian(points[i]);
    const Eigen::VectorXd& d1 = directions[i].first;
    const Eigen::VectorXd& d2 = directions[i].second;
    if (d1.size() != points[i].dim() || d2.size() != points[i].dim())
      throw DimensionMismatch("graph isotropy: direction length");
    // symplectic pairing of (d1, H d1) with (d2, H d2)
    const double res = std::abs(d1.dot(hess * d2) - d2.dot(hess * d1));
    if (res >= worst) {
      worst = res;
      echo = "sample " + std::to_string(i) + ": pi=" + fmt_vec(points[i].coords);
    }
  }
  return finish("graph_isotropy", static_cast<int>(points.size()), worst, tol, std::move(echo));
}

CheckReport check_tangent_lift(const LieAlgebra& algebra, const Trajectory& traj,
                               const ReducedHamiltonian& h) {
  if (traj.size() < 3)
    throw TooFewSamples("tangent lift check needs at least 3 trajectory samples");
  const double dt = traj.dt;
  const double tol = std::max(10.0 * dt * dt, 1e-9);
  double worst = 0.0;
  std::string echo;
  int count = 0;
  for (std::size_t k = 1; k + 1 < traj.size(); ++k, ++count) {
    const AlgebraCovector pi(traj.states[k]);
    const ReducedTangent lifted = xi(algebra, ReducedPoint{pi, h.gradient(pi)});
    const Eigen::VectorXd fd = (traj.states[k + 1] - traj.states[k - 1]) / (2.0 * dt);
    const double res = (lifted.pidot.coords - fd).cwiseAbs().maxCoeff();
    if (res >= worst) {
      worst = res;
      char buf[48];
      std::snprintf(buf, sizeof(buf), "t=%.6g", traj.times[k]);
      echo = std::string(buf) + ": pi=" + fmt_vec(pi.coords);
    }
  }
  return finish("tangent_lift", count, worst, tol, std::move(echo));
}

namespace {

Eigen::VectorXd potential_gradient(const Eigen::MatrixXd& k_quad, const Eigen::VectorXd& k_lin,
                                   const Eigen::VectorXd& q) {
  // gradient of 1/2 q^T K q + k^T q, robust to an asymmetric K
  return Eigen::VectorXd(0.5 * (k_quad * q + k_quad.transpose() * q) + k_lin);
}

}  // namespace

CheckReport check_vs_triple_points(const Eigen::MatrixXd& mass, const Eigen::MatrixXd& k_quad,
                                   const Eigen::VectorXd& k_lin,
                                   const std::vector<VSPoint4>& points) {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(mass);
  if (!lu.isInvertible()) throw SingularMass("mass matrix is singular");
  double worst = 0.0;
  std::string echo;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const VSPoint4& pt = points[i];
    const Eigen::VectorXd dvdq = potential_gradient(k_quad, k_lin, pt.q);

    // A-image in T*TQ against dL at (q, qdot)
    const VSPoint4 a_img = vs_tulczyjew_a(pt);
    double res = (a_img.qdot + dvdq).cwiseAbs().maxCoeff();  // dL/dq = -V'(q)
    res = std::max(res, (a_img.pdot - mass * pt.qdot).cwiseAbs().maxCoeff());

    // flat-image in T*T*Q against dH at (q, p)
    const VSPoint4 b_img = vs_flat(pt);
    res = std::max(res, (b_img.qdot - dvdq).cwiseAbs().maxCoeff());
    res = std::max(res, (b_img.pdot - lu.solve(pt.p)).cwiseAbs().maxCoeff());

    if (res >= worst) {
      worst = res;
      echo = "sample " + std::to_string(i) + ": q=" + fmt_vec(pt.q) + ", p=" + fmt_vec(pt.p);
    }
  }
  return finish("vs_triple", static_cast<int>(points.size()), worst, kTripleTol,
                std::move(echo));
}

CheckReport check_vs_triple(
    const Eigen::MatrixXd& mass, const Eigen::MatrixXd& k_quad, const Eigen::VectorXd& k_lin,
    const std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>>& samples) {
  std::vector<VSPoint4> points;
  points.reserve(samples.size());
  for (const auto& [q, qdot] : samples) {
    points.emplace_back(VsSpace::tangent_cotangent, q, Eigen::VectorXd(mass * qdot), qdot,
                        Eigen::VectorXd(-potential_gradient(k_quad, k_lin, q)));
  }
  return check_vs_triple_points(mass, k_quad, k_lin, points);
}

GrpTstarTstar invariant_graph_point(const LieAlgebra& algebra, const ReducedHamiltonian& h,
                                    const GroupElement& g, const AlgebraCovector& pi) {
  return GrpTstarTstar{g, pi, AlgebraCovector(Eigen::VectorXd::Zero(algebra.dim())),
                       h.gradient(pi)};
}

CheckReport check_invariant_graph_zero_level(const LieAlgebra& algebra,
                                             const std::vector<GrpTstarTstar>& points) {
  double worst = 0.0;
  std::string echo;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Eigen::VectorXd j = momentum_tstar_tstar_g(algebra, points[i]).coords;
    const double res = j.size() ? j.cwiseAbs().maxCoeff() : 0.0;
    if (res >= worst) {
      worst = res;
      echo = "sample " + std::to_string(i) + ": pi=" + fmt_vec(points[i].pi.coords) +
             ", pitilde=" + fmt_vec(points[i].pitilde.coords);
    }
  }
  return finish("invariant_graph_zero_level", static_cast<int>(points.size()), worst,
                kZeroLevelTol, std::move(echo));
}

std::vector<CheckReport> drift_report(const Trajectory& traj,
                                      const std::vector<std::string>& quantities) {
  static const std::map<std::string, double> tolerances = {
      {"energy", 1e-8},
      {"casimir_so3", 1e-8},
      {"casimir_heis", 0.0},
      {"spatial_momentum", 1e-8},
  };

  auto column_drift = [&traj](const std::vector<double>& col, double& drift, std::size_t& at) {
    for (std::size_t k = 0; k < col.size(); ++k) {
      const double d = std::abs(col[k] - col.front());
      if (d >= drift) {
        drift = d;
        at = k;
      }
    }
  };

  std::vector<CheckReport> reports;
  for (const std::string& q : quantities) {
    auto tol = tolerances.find(q);
    if (tol == tolerances.end())
      throw UnknownQuantity("unknown drift quantity '" + q + "'");

    double drift = 0.0;
    std::size_t at = 0;
    std::string column;
    if (q == "spatial_momentum") {
      bool found = false;
      for (const auto& [name, col] : traj.diagnostics) {
        if (name.rfind("spatial_momentum_", 0) != 0) continue;
        found = true;
        double d = 0.0;
        std::size_t k = 0;
        column_drift(col, d, k);
        if (d >= drift) {
          drift = d;
          at = k;
          column = name;
        }
      }
      if (!found)
        throw UnknownQuantity("trajectory has no spatial_momentum diagnostics");
    } else {
      auto col = traj.diagnostics.find(q);
      if (col == traj.diagnostics.end())
        throw UnknownQuantity("trajectory has no diagnostic '" + q + "'");
      column = q;
      column_drift(col->second, drift, at);
    }

    char buf[96];
    std::snprintf(buf, sizeof(buf), "%s at t=%.6g", column.c_str(),
                  at < traj.times.size() ? traj.times[at] : 0.0);
    reports.push_back(
        finish("drift_" + q, static_cast<int>(traj.size()), drift, tol->second, buf));
  }
  return reports;
}

ConvergenceResult convergence_order(const Rhs& rhs, const Eigen::VectorXd& y0,
                                    const std::string& method, const std::vector<double>& dts,
                                    double t_final,
                                    std::function<Eigen::VectorXd(double)> reference) {
  if (dts.size() < 3)
    throw InsufficientData("convergence study needs at least 3 step sizes");
  ConvergenceResult result;
  result.dts = dts;
  for (double dt : dts) {
    IntegratorConfig cfg;
    cfg.method = method;
    cfg.dt = dt;
    cfg.t_final = t_final;
    const Trajectory traj = integrate(rhs, y0, cfg);
    Eigen::VectorXd ref;
    if (reference) {
      ref = reference(traj.times.back());
    } else {
      IntegratorConfig fine = cfg;
      fine.dt = dt / 4.0;
      fine.t_final = traj.times.back();
      ref = integrate(rhs, y0, fine).states.back();
    }
    result.errors.push_back((traj.states.back() - ref).cwiseAbs().maxCoeff());
  }

  for (double e : result.errors) {
    if (e < kDegenerateError) {
      result.degenerate = true;
      result.order = std::numeric_limits<double>::quiet_NaN();
      return result;
    }
  }

  // least-squares slope of log(error) against log(dt)
  const int n = static_cast<int>(dts.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = std::log(dts[i]);
    const double y = std::log(result.errors[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  result.order = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return result;
}

}  // namespace symred
