// symred-cli: batch front-end for the reduced-dynamics library.
//
// Subcommands: simulate, verify, equivalence, list-algebras. Configuration
// comes from a JSON file (--config); the flags listed in --help override
// config fields one-for-one. Outputs are CSV trajectories, JSON reports,
// and optional two-column plot data, all re-parseable by the library's own
// readers.
//
// Exit codes: 0 success (all checks pass / run completes), 1 check failure,
// 2 configuration error, 3 numerical failure, 4 I/O error.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Dense>
#include <json.hpp>

#include "symred/algebra.hpp"
#include "symred/dynamics.hpp"
#include "symred/errors.hpp"
#include "symred/io.hpp"
#include "symred/models.hpp"
#include "symred/rng.hpp"
#include "symred/tulczyjew.hpp"
#include "symred/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace symred;

namespace {

constexpr double kEquivalenceTol = 1e-8;
constexpr double kConvergenceTol = 0.2;

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

// ---------------------------------------------------------------------------
// run configuration: defaults <- config file <- flags

struct RunConfig {
  std::string mode;
  json algebra_spec = "so3";
  json model_spec = json::object();
  IntegratorConfig integrator;
  std::vector<double> initial;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  bool plot_data = false;
  std::vector<std::string> checks;  // empty = full battery
};

json parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  json doc;
  try {
    doc = json::parse(text.str());
  } catch (const json::parse_error& e) {
    // nlohmann messages carry "parse error at line L, column C"
    throw ConfigError("config '" + path + "': " + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config '" + path + "' must be a JSON object");
  return doc;
}

void apply_config(RunConfig& rc, const json& doc) {
  try {
    if (doc.contains("mode")) rc.mode = doc.at("mode").get<std::string>();
    if (doc.contains("algebra")) rc.algebra_spec = doc.at("algebra");
    if (doc.contains("model")) rc.model_spec = doc.at("model");
    if (doc.contains("integrator")) {
      const json& ig = doc.at("integrator");
      if (!ig.is_object()) throw ConfigError("config field 'integrator' must be an object");
      if (ig.contains("method")) rc.integrator.method = ig.at("method").get<std::string>();
      if (ig.contains("dt")) rc.integrator.dt = ig.at("dt").get<double>();
      if (ig.contains("t_final")) rc.integrator.t_final = ig.at("t_final").get<double>();
      if (ig.contains("newton_tol")) rc.integrator.newton_tol = ig.at("newton_tol").get<double>();
      if (ig.contains("newton_max_iter"))
        rc.integrator.newton_max_iter = ig.at("newton_max_iter").get<int>();
    }
    if (doc.contains("initial")) rc.initial = doc.at("initial").get<std::vector<double>>();
    if (doc.contains("seed")) rc.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("out")) rc.out_dir = doc.at("out").get<std::string>();
    if (doc.contains("plot_data")) rc.plot_data = doc.at("plot_data").get<bool>();
    if (doc.contains("checks")) rc.checks = doc.at("checks").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// algebra and model resolution

LieAlgebra resolve_algebra(const json& spec) {
  if (spec.is_object()) return algebra_from_json_text(spec.dump());
  if (!spec.is_string())
    throw ConfigError("algebra must be a builtin name, a .json path, or an inline object");
  const std::string name = spec.get<std::string>();
  if (name.size() > 5 && name.substr(name.size() - 5) == ".json") return load_algebra_json(name);
  return builtin_algebra(name);
}

// Named analytic models selectable from configs as {"custom": "<name>"}.
// Each carries an analytic gradient (and Hessian where the dynamics needs
// one), so downstream checks are not limited by finite-difference noise.
struct NamedHamiltonian {
  const char* name;
  const char* formula;
  int min_dim;
  std::function<ReducedHamiltonian(int)> make;
};

struct NamedLagrangian {
  const char* name;
  const char* formula;
  std::function<ReducedLagrangian(int)> make;
};

const std::vector<NamedHamiltonian>& hamiltonian_registry() {
  static const std::vector<NamedHamiltonian> reg = {
      {"cubic", "h(pi) = pi_1^2 pi_2", 2,
       [](int) {
         return ReducedHamiltonian::custom(
             [](const Eigen::VectorXd& p) { return p[0] * p[0] * p[1]; },
             [](const Eigen::VectorXd& p) {
               Eigen::VectorXd g = Eigen::VectorXd::Zero(p.size());
               g[0] = 2.0 * p[0] * p[1];
               g[1] = p[0] * p[0];
               return g;
             });
       }},
      {"quartic", "h(pi) = |pi|^4 / 4", 1,
       [](int) {
         return ReducedHamiltonian::custom(
             [](const Eigen::VectorXd& p) {
               double s = p.squaredNorm();
               return 0.25 * s * s;
             },
             [](const Eigen::VectorXd& p) { return Eigen::VectorXd(p.squaredNorm() * p); });
       }},
      {"exp_well", "h(pi) = -exp(-|pi|^2 / 2)", 1,
       [](int) {
         return ReducedHamiltonian::custom(
             [](const Eigen::VectorXd& p) { return -std::exp(-0.5 * p.squaredNorm()); },
             [](const Eigen::VectorXd& p) {
               return Eigen::VectorXd(std::exp(-0.5 * p.squaredNorm()) * p);
             });
       }},
  };
  return reg;
}

const std::vector<NamedLagrangian>& lagrangian_registry() {
  static const std::vector<NamedLagrangian> reg = {
      {"aniso_quartic",
       "l(xi) = sum_i (1 + i/2) xi_i^4 / 4 + i xi_i^2 / 2 (hyperregular, anisotropic)",
       [](int) {
         auto a = [](int i) { return 1.0 + 0.5 * (i + 1); };
         auto b = [](int i) { return static_cast<double>(i + 1); };
         return ReducedLagrangian::custom(
             [a, b](const Eigen::VectorXd& x) {
               double s = 0.0;
               for (int i = 0; i < x.size(); ++i)
                 s += 0.25 * a(i) * std::pow(x[i], 4) + 0.5 * b(i) * x[i] * x[i];
               return s;
             },
             [a, b](const Eigen::VectorXd& x) {
               Eigen::VectorXd g(x.size());
               for (int i = 0; i < x.size(); ++i) g[i] = a(i) * x[i] * x[i] * x[i] + b(i) * x[i];
               return g;
             },
             [a, b](const Eigen::VectorXd& x) {
               Eigen::MatrixXd h = Eigen::MatrixXd::Zero(x.size(), x.size());
               for (int i = 0; i < x.size(); ++i) h(i, i) = 3.0 * a(i) * x[i] * x[i] + b(i);
               return h;
             });
       }},
      {"quartic_plus", "l(xi) = |xi|^4 / 4 + |xi|^2 / 2 (hyperregular)",
       [](int) {
         return ReducedLagrangian::custom(
             [](const Eigen::VectorXd& x) {
               double s = x.squaredNorm();
               return 0.25 * s * s + 0.5 * s;
             },
             [](const Eigen::VectorXd& x) { return Eigen::VectorXd((x.squaredNorm() + 1.0) * x); },
             [](const Eigen::VectorXd& x) {
               int n = static_cast<int>(x.size());
               return Eigen::MatrixXd((x.squaredNorm() + 1.0) *
                                          Eigen::MatrixXd::Identity(n, n) +
                                      2.0 * x * x.transpose());
             });
       }},
  };
  return reg;
}

ReducedHamiltonian named_hamiltonian(const std::string& name, int dim) {
  for (const auto& e : hamiltonian_registry()) {
    if (name == e.name) {
      if (dim < e.min_dim)
        throw ConfigError("model '" + name + "' needs dimension >= " +
                          std::to_string(e.min_dim));
      return e.make(dim);
    }
  }
  std::string known;
  for (const auto& e : hamiltonian_registry()) known += std::string(" ") + e.name;
  throw ConfigError("unknown custom hamiltonian '" + name + "'; available:" + known);
}

ReducedLagrangian named_lagrangian(const std::string& name, int dim) {
  for (const auto& e : lagrangian_registry())
    if (name == e.name) return e.make(dim);
  std::string known;
  for (const auto& e : lagrangian_registry()) known += std::string(" ") + e.name;
  throw ConfigError("unknown custom lagrangian '" + name + "'; available:" + known);
}

Eigen::MatrixXd matrix_from_json(const json& rows, int dim, const char* what) {
  if (!rows.is_array() || rows.empty())
    throw ConfigError(std::string(what) + " must be a non-empty array of rows");
  Eigen::MatrixXd m(rows.size(), rows.at(0).size());
  if (m.rows() != dim || m.cols() != dim)
    throw ConfigError(std::string(what) + " must be " + std::to_string(dim) + "x" +
                      std::to_string(dim));
  for (int i = 0; i < m.rows(); ++i) {
    const json& row = rows.at(i);
    if (!row.is_array() || static_cast<int>(row.size()) != m.cols())
      throw ConfigError(std::string(what) + " rows must all have length " +
                        std::to_string(m.cols()));
    for (int j = 0; j < m.cols(); ++j) m(i, j) = row.at(j).get<double>();
  }
  return m;
}

Eigen::MatrixXd inertia_from_json(const json& arr, int dim) {
  auto vals = arr.get<std::vector<double>>();
  if (static_cast<int>(vals.size()) != dim)
    throw ConfigError("inertia must list " + std::to_string(dim) + " principal moments");
  for (double v : vals)
    if (!(v > 0.0)) throw ConfigError("inertia moments must be positive");
  return Eigen::VectorXd::Map(vals.data(), dim).asDiagonal();
}

struct ResolvedModel {
  bool lagrangian = false;
  std::optional<ReducedHamiltonian> h;
  std::optional<ReducedLagrangian> l;
};

// Model spec fields: type (hamiltonian|lagrangian), and exactly one of
//   inertia: [I_1..I_n]      diagonal inertia tensor; the hamiltonian form
//                            uses its inverse, the lagrangian form uses it
//   matrix: [[..]..]         the model's own quadratic form
//   custom: "name"           registry lookup (see list in --help)
// plus optional b: [..] (linear term, quadratic hamiltonians only).
// An empty spec defaults to the quadratic form with identity matrix.
ResolvedModel resolve_model(const json& spec, const LieAlgebra& a, bool want_lagrangian) {
  if (!spec.is_object()) throw ConfigError("model must be a JSON object");
  const int n = a.dim();

  std::string type = want_lagrangian ? "lagrangian" : "hamiltonian";
  if (spec.contains("type")) type = spec.at("type").get<std::string>();
  if (type != "hamiltonian" && type != "lagrangian")
    throw ConfigError("model type must be 'hamiltonian' or 'lagrangian', got '" + type + "'");
  if (want_lagrangian && type != "lagrangian")
    throw ConfigError("equivalence mode requires a lagrangian model");

  const int picks = static_cast<int>(spec.contains("inertia")) +
                    static_cast<int>(spec.contains("matrix")) +
                    static_cast<int>(spec.contains("custom"));
  if (picks > 1) throw ConfigError("model takes at most one of inertia, matrix, custom");

  ResolvedModel out;
  out.lagrangian = (type == "lagrangian");

  if (spec.contains("custom")) {
    if (spec.contains("b")) throw ConfigError("custom models take no linear term");
    const std::string name = spec.at("custom").get<std::string>();
    if (out.lagrangian)
      out.l = named_lagrangian(name, n);
    else
      out.h = named_hamiltonian(name, n);
    return out;
  }

  Eigen::MatrixXd form = Eigen::MatrixXd::Identity(n, n);
  if (spec.contains("inertia")) {
    Eigen::MatrixXd inertia = inertia_from_json(spec.at("inertia"), n);
    form = out.lagrangian ? inertia : Eigen::MatrixXd(inertia.inverse());
  } else if (spec.contains("matrix")) {
    form = matrix_from_json(spec.at("matrix"), n, "model matrix");
  }

  if (out.lagrangian) {
    if (spec.contains("b")) throw ConfigError("lagrangian models take no linear term");
    out.l = ReducedLagrangian::quadratic(form);
  } else {
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    if (spec.contains("b")) {
      auto vals = spec.at("b").get<std::vector<double>>();
      if (static_cast<int>(vals.size()) != n)
        throw ConfigError("model field 'b' must have length " + std::to_string(n));
      b = Eigen::VectorXd::Map(vals.data(), n);
    }
    out.h = ReducedHamiltonian::quadratic(form, b);
  }
  return out;
}

Eigen::VectorXd require_initial(const RunConfig& rc, int dim) {
  if (rc.initial.empty())
    throw ConfigError("initial state is required (config field 'initial')");
  if (static_cast<int>(rc.initial.size()) != dim)
    throw ConfigError("initial state has length " + std::to_string(rc.initial.size()) +
                      ", algebra dimension is " + std::to_string(dim));
  return Eigen::VectorXd::Map(rc.initial.data(), dim);
}

void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
}

// ---------------------------------------------------------------------------
// simulate

std::vector<std::string> available_drift_quantities(const Trajectory& traj) {
  std::vector<std::string> qs;
  for (const char* q : {"energy", "casimir_so3", "casimir_heis"})
    if (traj.diagnostics.count(q)) qs.push_back(q);
  for (const auto& [name, col] : traj.diagnostics)
    if (name.rfind("spatial_momentum_", 0) == 0) {
      qs.push_back("spatial_momentum");
      break;
    }
  return qs;
}

int run_simulate(const RunConfig& rc, std::ostream& log) {
  LieAlgebra a = resolve_algebra(rc.algebra_spec);
  ResolvedModel model = resolve_model(rc.model_spec, a, false);
  Eigen::VectorXd y0 = require_initial(rc, a.dim());

  Trajectory traj =
      model.lagrangian
          ? simulate_euler_poincare(a, *model.l, AlgebraVector(y0), rc.integrator)
          : simulate_lie_poisson(a, *model.h, AlgebraCovector(y0), rc.integrator);

  ensure_out_dir(rc.out_dir);
  const fs::path out(rc.out_dir);
  write_trajectory_csv(traj, (out / "trajectory.csv").string());

  std::vector<CheckReport> drift = drift_report(traj, available_drift_quantities(traj));
  write_reports_json(drift, (out / "diagnostics.json").string());

  std::vector<std::string> plots;
  if (rc.plot_data) plots = write_plot_data(traj, rc.out_dir, "trajectory");

  log << a.name() << " " << (model.lagrangian ? "euler-poincare" : "lie-poisson") << ", "
      << rc.integrator.method << " dt=" << fmt("%g", rc.integrator.dt) << ": " << traj.size()
      << " rows -> " << (out / "trajectory.csv").string() << "\n";
  log << reports_table(drift);
  for (const auto& p : plots) log << "plot data: " << p << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// verify

struct BatteryTask {
  std::string label;
  std::function<std::vector<CheckReport>()> run;
};

// Builds the full check battery for one algebra. Samples are drawn
// sequentially from one seeded generator (deterministic), then the checks
// themselves run concurrently; they share nothing but read-only samples.
std::vector<BatteryTask> build_battery(const LieAlgebra& a, std::uint64_t seed) {
  const int n = a.dim();
  Rng rng(seed);
  std::vector<BatteryTask> tasks;

  auto single = [](CheckReport r) { return std::vector<CheckReport>{std::move(r)}; };

  {  // momentum maps intertwined by the symplectomorphism to T*T*G
    auto pts = std::make_shared<std::vector<GrpTTstar>>();
    pts->reserve(1000);
    for (int i = 0; i < 1000; ++i)
      pts->push_back({GroupElement::from_exp(a, AlgebraVector(rng.vector(n))),
                      AlgebraCovector(rng.vector(n)), AlgebraVector(rng.vector(n)),
                      AlgebraCovector(rng.vector(n))});
    tasks.push_back({"momentum_flat", [&a, pts, single] {
                       return single(check_momentum_flat_relation(a, *pts));
                     }});
  }

  ReducedHamiltonian h_quad = ReducedHamiltonian::quadratic(rng.spd_matrix(n));

  auto draw_pis = [&rng, n](int count) {
    auto pis = std::make_shared<std::vector<AlgebraCovector>>();
    pis->reserve(count);
    for (int i = 0; i < count; ++i) pis->push_back(AlgebraCovector(rng.vector(n)));
    return pis;
  };
  auto draw_dirs = [&rng, n](int count) {
    auto dirs = std::make_shared<std::vector<DirectionPair>>();
    dirs->reserve(count);
    for (int i = 0; i < count; ++i)
      dirs->push_back({rng.vector(n), rng.vector(n)});
    return dirs;
  };

  {
    auto pis = draw_pis(200);
    auto dirs = draw_dirs(200);
    tasks.push_back({"isotropy_quadratic", [h_quad, pis, dirs, single] {
                       CheckReport r = check_graph_isotropy(h_quad, *pis, *dirs);
                       r.name += "_quadratic";
                       return single(r);
                     }});
  }
  {
    ReducedHamiltonian h_custom = named_hamiltonian(n >= 2 ? "cubic" : "quartic", n);
    auto pis = draw_pis(200);
    auto dirs = draw_dirs(200);
    tasks.push_back({"isotropy_custom", [h_custom, pis, dirs, single] {
                       CheckReport r = check_graph_isotropy(h_custom, *pis, *dirs);
                       r.name += "_custom";
                       return single(r);
                     }});
  }

  {  // graphs of invariant Hamiltonians sit in the zero level of the momentum map
    auto pts = std::make_shared<std::vector<GrpTstarTstar>>();
    pts->reserve(200);
    for (int i = 0; i < 200; ++i) {
      GroupElement g = GroupElement::from_exp(a, AlgebraVector(rng.vector(n)));
      pts->push_back(invariant_graph_point(a, h_quad, g, AlgebraCovector(rng.vector(n))));
    }
    tasks.push_back({"zero_level", [&a, pts, single] {
                       return single(check_invariant_graph_zero_level(a, *pts));
                     }});
  }

  {  // vector-space triple on a generic mechanical system (dim fixed at 3)
    Eigen::MatrixXd mass = rng.spd_matrix(3);
    Eigen::MatrixXd k_quad = rng.spd_matrix(3);
    Eigen::VectorXd k_lin = rng.vector(3);
    auto pts = std::make_shared<std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>>>();
    pts->reserve(1000);
    for (int i = 0; i < 1000; ++i) pts->emplace_back(rng.vector(3), rng.vector(3));
    tasks.push_back({"vs_triple", [mass, k_quad, k_lin, pts, single] {
                       return single(check_vs_triple(mass, k_quad, k_lin, *pts));
                     }});
  }

  // One reference trajectory feeds the flow-based checks. The tangent-lift
  // tolerance budgets for central-difference truncation on an O(1) orbit,
  // so the trajectory gets a unit start, a mildly anisotropic form, and a
  // window short enough that hyperbolic coadjoint flows (sl2) stay O(1).
  ReducedHamiltonian h_traj = ReducedHamiltonian::quadratic(
      0.7 * Eigen::MatrixXd::Identity(n, n) + 0.3 * h_quad.w());
  Eigen::VectorXd pi0_dir = rng.vector(n);
  AlgebraCovector pi0(pi0_dir / pi0_dir.norm());
  IntegratorConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_final = 0.5;
  auto traj = std::make_shared<Trajectory>(simulate_lie_poisson(a, h_traj, pi0, cfg));

  tasks.push_back({"tangent_lift", [&a, traj, h_traj, single] {
                     return single(check_tangent_lift(a, *traj, h_traj));
                   }});
  tasks.push_back({"drift", [traj] {
                     return drift_report(*traj, available_drift_quantities(*traj));
                   }});
  tasks.push_back({"reconstruction", [&a, traj, h_traj] {
                     Trajectory recon =
                         reconstruct(a, *traj, h_traj, GroupElement::identity(a));
                     return drift_report(recon, {"spatial_momentum"});
                   }});

  // The convergence study needs errors well above the rounding floor, so it
  // uses a strongly anisotropic form and an energetic start instead of the
  // sampled model above.
  Eigen::VectorXd aniso(n);
  for (int i = 0; i < n; ++i) aniso[i] = i + 1.0;
  ReducedHamiltonian h_conv = ReducedHamiltonian::quadratic(aniso.asDiagonal());
  // deterministic start: big enough to clear the rounding floor, small
  // enough that noncompact algebras (sl2) stay in the asymptotic regime
  Eigen::VectorXd pi0_conv(n);
  for (int i = 0; i < n; ++i) pi0_conv[i] = 1.0 / (1.0 + 0.5 * i);
  pi0_conv *= 1.5 / pi0_conv.norm();

  for (const char* method : {"rk4", "midpoint"}) {
    const double target = method == std::string("rk4") ? 4.0 : 2.0;
    std::string label = std::string("convergence_") + method;
    tasks.push_back({label, [&a, h_conv, pi0_conv, method, target, label, single] {
                       Rhs rhs = [&a, h_conv](const Eigen::VectorXd& y) {
                         return lie_poisson_rhs(a, h_conv, AlgebraCovector(y)).coords;
                       };
                       ConvergenceResult cr = convergence_order(
                           rhs, pi0_conv, method, {2e-2, 1e-2, 5e-3}, 0.5);
                       CheckReport r;
                       r.name = label;
                       r.samples = static_cast<int>(cr.dts.size());
                       r.tolerance = kConvergenceTol;
                       if (cr.degenerate) {
                         // errors at the rounding floor: the flow is resolved
                         // exactly, so no order is measurable and none is owed
                         r.max_residual = 0.0;
                         r.pass = true;
                         r.worst_case = "errors at rounding floor; order not measurable";
                       } else {
                         r.max_residual = std::abs(cr.order - target);
                         r.pass = r.max_residual <= r.tolerance;
                         r.worst_case = "measured order " + fmt("%.3f", cr.order);
                       }
                       return single(r);
                     }});
  }

  return tasks;
}

int run_verify(const RunConfig& rc, std::ostream& log) {
  LieAlgebra a = resolve_algebra(rc.algebra_spec);
  std::vector<BatteryTask> tasks = build_battery(a, rc.seed);

  if (!rc.checks.empty()) {
    std::vector<std::string> known;
    for (const auto& t : tasks) known.push_back(t.label);
    for (const auto& want : rc.checks)
      if (std::find(known.begin(), known.end(), want) == known.end()) {
        std::string list;
        for (const auto& k : known) list += " " + k;
        throw ConfigError("unknown check '" + want + "'; available:" + list);
      }
    std::vector<BatteryTask> kept;
    for (auto& t : tasks)
      if (std::find(rc.checks.begin(), rc.checks.end(), t.label) != rc.checks.end())
        kept.push_back(std::move(t));
    tasks = std::move(kept);
  }

  std::vector<std::future<std::vector<CheckReport>>> futures;
  futures.reserve(tasks.size());
  for (auto& t : tasks) futures.push_back(std::async(std::launch::async, std::move(t.run)));

  std::vector<CheckReport> reports;
  for (auto& f : futures)
    for (auto& r : f.get()) reports.push_back(std::move(r));
  std::sort(reports.begin(), reports.end(),
            [](const CheckReport& x, const CheckReport& y) { return x.name < y.name; });

  ensure_out_dir(rc.out_dir);
  const std::string path = (fs::path(rc.out_dir) / "checks.json").string();
  write_reports_json(reports, path);

  log << "algebra " << a.name() << " (dim " << a.dim() << "), seed " << rc.seed << "\n";
  log << reports_table(reports);
  const bool ok = std::all_of(reports.begin(), reports.end(),
                              [](const CheckReport& r) { return r.pass; });
  log << (ok ? "all checks passed" : "CHECKS FAILED") << " -> " << path << "\n";
  return ok ? 0 : 1;
}

// ---------------------------------------------------------------------------
// equivalence: the reduced Lagrangian and Hamiltonian pictures generate the
// same flow once composed with the fiber derivative

int run_equivalence(const RunConfig& rc, std::ostream& log) {
  LieAlgebra a = resolve_algebra(rc.algebra_spec);
  ResolvedModel model = resolve_model(rc.model_spec, a, true);
  Eigen::VectorXd xi0 = require_initial(rc, a.dim());

  Trajectory ep = simulate_euler_poincare(a, *model.l, AlgebraVector(xi0), rc.integrator);
  ReducedHamiltonian h = hamiltonian_from_lagrangian(*model.l);
  AlgebraCovector pi0 = legendre(*model.l, AlgebraVector(xi0));
  Trajectory lp = simulate_lie_poisson(a, h, pi0, rc.integrator);

  double worst = 0.0;
  double worst_t = 0.0;
  for (std::size_t k = 0; k < ep.size(); ++k) {
    const double dev =
        (legendre(*model.l, AlgebraVector(ep.states[k])).coords - lp.states[k]).norm();
    if (dev >= worst) {
      worst = dev;
      worst_t = ep.times[k];
    }
  }

  CheckReport report;
  report.name = "ep_lp_equivalence";
  report.samples = static_cast<int>(ep.size());
  report.max_residual = worst;
  report.tolerance = kEquivalenceTol;
  report.pass = worst <= kEquivalenceTol;
  report.worst_case = "t=" + fmt("%.6g", worst_t);

  ensure_out_dir(rc.out_dir);
  const fs::path out(rc.out_dir);
  write_trajectory_csv(ep, (out / "euler_poincare.csv").string());
  write_trajectory_csv(lp, (out / "lie_poisson.csv").string());
  write_reports_json({report}, (out / "equivalence.json").string());
  if (rc.plot_data) {
    write_plot_data(ep, rc.out_dir, "euler_poincare");
    write_plot_data(lp, rc.out_dir, "lie_poisson");
  }

  log << "algebra " << a.name() << ", " << rc.integrator.method
      << " dt=" << fmt("%g", rc.integrator.dt) << " t_final=" << fmt("%g", rc.integrator.t_final)
      << "\n";
  log << "max |F_l(xi(t)) - pi(t)| = " << fmt("%.3e", worst) << " at t=" << fmt("%.6g", worst_t)
      << " (tolerance " << fmt("%.0e", kEquivalenceTol) << "): "
      << (report.pass ? "pass" : "FAIL") << "\n";
  return report.pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// list-algebras

int run_list(std::ostream& log) {
  log << "builtin algebras:\n";
  for (const auto& [name, dim] : builtin_algebra_names()) {
    log << "  " << name;
    for (std::size_t i = name.size(); i < 14; ++i) log << ' ';
    if (dim > 0)
      log << "dim " << dim << "\n";
    else
      log << "dim n (any n >= 1)\n";
  }
  log << "custom hamiltonians (model {\"custom\": name}):\n";
  for (const auto& e : hamiltonian_registry()) {
    log << "  " << e.name;
    for (std::size_t i = std::string(e.name).size(); i < 14; ++i) log << ' ';
    log << e.formula << "\n";
  }
  log << "custom lagrangians:\n";
  for (const auto& e : lagrangian_registry()) {
    log << "  " << e.name;
    for (std::size_t i = std::string(e.name).size(); i < 14; ++i) log << ' ';
    log << e.formula << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// dispatch, error mapping, sweeps

int dispatch(const RunConfig& rc, std::ostream& log) {
  if (rc.mode == "simulate") return run_simulate(rc, log);
  if (rc.mode == "verify") return run_verify(rc, log);
  if (rc.mode == "equivalence") return run_equivalence(rc, log);
  if (rc.mode == "list-algebras") return run_list(log);
  throw ConfigError("unknown mode '" + rc.mode + "'");
}

// The numerical-failure family covers every way the math itself can break
// at runtime; everything else under Error is a configuration problem,
// except I/O.
int exit_code_for(const std::exception_ptr& ep) {
  try {
    std::rethrow_exception(ep);
  } catch (const NonFiniteState&) {
    return 3;
  } catch (const NewtonDivergence&) {
    return 3;
  } catch (const DegenerateLagrangian&) {
    return 3;
  } catch (const GradientFailure&) {
    return 3;
  } catch (const SingularMass&) {
    return 3;
  } catch (const IoError&) {
    return 4;
  } catch (const Error&) {
    return 2;
  } catch (const std::exception&) {
    return 1;
  }
}

int guarded(const std::function<int()>& body, std::ostream& log) {
  try {
    return body();
  } catch (const std::exception& e) {
    const int code = exit_code_for(std::current_exception());
    log << "error: " << e.what() << "\n";
    return code;
  }
}

struct SweepSpec {
  std::string param;
  double start = 0.0;
  double stop = 0.0;
  int count = 0;
};

SweepSpec parse_sweep(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos)
    throw ConfigError("sweep must look like param=start:stop:count, got '" + text + "'");
  SweepSpec s;
  s.param = text.substr(0, eq);
  if (s.param != "dt" && s.param != "t_final" && s.param != "seed")
    throw ConfigError("sweep parameter must be dt, t_final, or seed, got '" + s.param + "'");
  const std::string rest = text.substr(eq + 1);
  const auto c1 = rest.find(':');
  const auto c2 = rest.find(':', c1 == std::string::npos ? c1 : c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos)
    throw ConfigError("sweep must look like param=start:stop:count, got '" + text + "'");
  try {
    s.start = std::stod(rest.substr(0, c1));
    s.stop = std::stod(rest.substr(c1 + 1, c2 - c1 - 1));
    s.count = std::stoi(rest.substr(c2 + 1));
  } catch (const std::exception&) {
    throw ConfigError("sweep values must be numeric: '" + text + "'");
  }
  if (s.count < 1) throw ConfigError("sweep count must be at least 1");
  return s;
}

void set_sweep_param(RunConfig& rc, const std::string& param, double value) {
  if (param == "dt")
    rc.integrator.dt = value;
  else if (param == "t_final")
    rc.integrator.t_final = value;
  else
    rc.seed = static_cast<std::uint64_t>(std::llround(value));
}

int run_sweep(const RunConfig& base, const SweepSpec& sweep, std::ostream& log) {
  ensure_out_dir(base.out_dir);

  struct Run {
    RunConfig rc;
    double value = 0.0;
    std::string dir;
  };
  std::vector<Run> runs;
  for (int i = 0; i < sweep.count; ++i) {
    const double value =
        sweep.count == 1
            ? sweep.start
            : sweep.start + (sweep.stop - sweep.start) * i / (sweep.count - 1);
    Run run;
    run.rc = base;
    run.value = value;
    set_sweep_param(run.rc, sweep.param, value);
    char name[32];
    std::snprintf(name, sizeof(name), "run_%03d", i);
    run.dir = (fs::path(base.out_dir) / name).string();
    run.rc.out_dir = run.dir;
    runs.push_back(std::move(run));
  }

  // independent configs, independent output directories; logs are buffered
  // per run and replayed in order
  std::vector<std::future<std::pair<int, std::string>>> futures;
  futures.reserve(runs.size());
  for (const auto& run : runs)
    futures.push_back(std::async(std::launch::async, [run] {
      std::ostringstream buffer;
      const int code = guarded([&] { return dispatch(run.rc, buffer); }, buffer);
      return std::make_pair(code, buffer.str());
    }));

  json index = json::array();
  int worst = 0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    auto [code, text] = futures[i].get();
    worst = std::max(worst, code);
    log << "[" << runs[i].dir << "] " << sweep.param << "=" << fmt("%g", runs[i].value)
        << " -> exit " << code << "\n";
    std::istringstream lines(text);
    for (std::string line; std::getline(lines, line);) log << "  " << line << "\n";
    index.push_back({{"dir", runs[i].dir},
                     {"param", sweep.param},
                     {"value", runs[i].value},
                     {"exit", code}});
  }

  const std::string index_path = (fs::path(base.out_dir) / "sweep_index.json").string();
  std::ofstream out(index_path);
  if (!out) throw IoError("cannot write '" + index_path + "'");
  out << index.dump(2) << "\n";
  log << "sweep index -> " << index_path << "\n";
  return worst;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"reduced Lie-Poisson / Euler-Poincare dynamics toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, algebra, method, out_dir, sweep_text;
  std::uint64_t seed = 0;
  double dt = 0.0, t_final = 0.0;
  bool plot = false;
  std::vector<std::string> checks;

  auto* opt_config = app.add_option("--config", config_path, "JSON config file");
  auto* opt_algebra =
      app.add_option("--algebra", algebra, "builtin name, abelian(n), or algebra .json path");
  auto* opt_seed = app.add_option("--seed", seed, "RNG seed for sampled checks");
  auto* opt_dt = app.add_option("--dt", dt, "integrator step size");
  auto* opt_tf = app.add_option("--t-final", t_final, "integration end time");
  auto* opt_method = app.add_option("--method", method, "integrator: rk4 or midpoint");
  auto* opt_out = app.add_option("--out", out_dir, "output directory (default .)");
  auto* opt_plot = app.add_flag("--plot-data", plot, "write two-column (t, value) plot files");
  auto* opt_sweep = app.add_option(
      "--sweep", sweep_text, "param=start:stop:count over dt, t_final, or seed; runs concurrently");

  app.add_subcommand("simulate", "integrate one reduced trajectory");
  auto* cmd_verify = app.add_subcommand("verify", "run the structural check battery");
  app.add_subcommand(
      "equivalence", "compare Euler-Poincare and Lie-Poisson flows through the fiber derivative");
  app.add_subcommand("list-algebras", "print builtin algebras and named models");

  cmd_verify->add_flag("--all", "run every check (the default)");
  cmd_verify->add_option("--checks", checks, "comma-separated subset of checks")
      ->delimiter(',');

  return guarded(
      [&]() -> int {
        try {
          app.parse(argc, argv);
        } catch (const CLI::ParseError& e) {
          const int rc = app.exit(e);
          return rc == 0 ? 0 : 2;
        }

        RunConfig rc;
        if (opt_config->count()) apply_config(rc, parse_config_file(config_path));
        rc.mode = app.get_subcommands().front()->get_name();
        if (opt_algebra->count()) rc.algebra_spec = algebra;
        if (opt_seed->count()) rc.seed = seed;
        if (opt_dt->count()) rc.integrator.dt = dt;
        if (opt_tf->count()) rc.integrator.t_final = t_final;
        if (opt_method->count()) rc.integrator.method = method;
        if (opt_out->count()) rc.out_dir = out_dir;
        if (opt_plot->count()) rc.plot_data = plot;
        if (!checks.empty()) rc.checks = checks;

        if (rc.mode == "simulate" || rc.mode == "equivalence") validate(rc.integrator);

        if (opt_sweep->count()) {
          if (rc.mode == "list-algebras")
            throw ConfigError("list-algebras takes no sweep");
          return run_sweep(rc, parse_sweep(sweep_text), std::cout);
        }
        return dispatch(rc, std::cout);
      },
      std::cerr);
}
