#pragma once

#include <string>
#include <vector>

#include "symred/verify.hpp"

namespace symred {

/// Algebra from a JSON object {"name": ..., "dim": n, "c": [[i,j,k,value], ...]}
/// with one-based indices. Entries are completed antisymmetrically
/// (c^k_{ji} = -c^k_{ij}); an entry that contradicts an earlier one is a
/// ConfigError. The result passes the usual antisymmetry and Jacobi checks.
LieAlgebra algebra_from_json_text(const std::string& text);

/// algebra_from_json_text on a file's contents. Throws IoError when the
/// file cannot be read.
LieAlgebra load_algebra_json(const std::string& path);

/// Trajectory as CSV: a `# method=... dt=...` comment, a header line
/// `t,<states...>,<diagnostics...>`, then one `%.17g` row per sample, so
/// values round-trip bitwise. Diagnostics follow states in sorted name
/// order. Missing state names are synthesized as y_1..y_n.
void write_trajectory_csv(const Trajectory& traj, const std::string& path);

/// Inverse of write_trajectory_csv. Columns with canonical diagnostic
/// names (energy, casimir_so3, casimir_heis, spatial_momentum_*) become
/// diagnostics; everything else is state.
Trajectory read_trajectory_csv(const std::string& path);

/// Reports as a JSON array of objects with fields name, samples,
/// max_residual, tolerance, pass, worst_case.
void write_reports_json(const std::vector<CheckReport>& reports, const std::string& path);
std::vector<CheckReport> read_reports_json(const std::string& path);

/// Fixed-width table of reports for standard output.
std::string reports_table(const std::vector<CheckReport>& reports);

/// Two-column (t, value) file per diagnostic: <dir>/<stem>_<name>.dat.
/// Returns the paths written.
std::vector<std::string> write_plot_data(const Trajectory& traj, const std::string& dir,
                                         const std::string& stem);

}  // namespace symred
