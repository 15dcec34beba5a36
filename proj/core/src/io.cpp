#include "symred/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace symred {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream out;
  out << in.rdbuf();
  if (in.bad()) throw IoError("read failure on '" + path + "'");
  return out.str();
}

std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

bool is_diagnostic_name(const std::string& name) {
  return name == "energy" || name == "casimir_so3" || name == "casimir_heis" ||
         name.rfind("spatial_momentum_", 0) == 0;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) out.push_back(field);
  return out;
}

}  // namespace

LieAlgebra algebra_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("algebra JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("dim"))
    throw ConfigError("algebra JSON needs an object with a 'dim' field");
  const int dim = j["dim"].get<int>();
  if (dim <= 0) throw ConfigError("algebra JSON: dim must be positive");
  const std::string name = j.value("name", std::string("custom"));

  std::vector<double> c(static_cast<std::size_t>(dim) * dim * dim, 0.0);
  std::vector<bool> set(c.size(), false);
  auto slot = [dim](int i, int j_, int k) {
    return (static_cast<std::size_t>(i) * dim + j_) * dim + k;
  };
  auto place = [&](int i, int j_, int k, double v) {
    const std::size_t s = slot(i, j_, k);
    if (set[s] && c[s] != v) {
      throw ConfigError("algebra JSON: conflicting entries for c[" + std::to_string(i + 1) +
                        "][" + std::to_string(j_ + 1) + "][" + std::to_string(k + 1) + "]");
    }
    c[s] = v;
    set[s] = true;
  };

  for (const auto& entry : j.value("c", json::array())) {
    if (!entry.is_array() || entry.size() != 4)
      throw ConfigError("algebra JSON: each 'c' entry must be [i, j, k, value]");
    const int i = entry[0].get<int>(), jj = entry[1].get<int>(), k = entry[2].get<int>();
    const double v = entry[3].get<double>();
    if (i < 1 || i > dim || jj < 1 || jj > dim || k < 1 || k > dim)
      throw ConfigError("algebra JSON: index out of range in entry [" + std::to_string(i) +
                        ", " + std::to_string(jj) + ", " + std::to_string(k) + "]");
    place(i - 1, jj - 1, k - 1, v);
    place(jj - 1, i - 1, k - 1, -v);  // antisymmetric completion
  }
  return make_algebra(dim, c, name);
}

LieAlgebra load_algebra_json(const std::string& path) {
  return algebra_from_json_text(read_file(path));
}

void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
  const int n = traj.states.empty() ? 0 : static_cast<int>(traj.states.front().size());
  std::vector<std::string> state_names = traj.state_names;
  if (state_names.empty()) {
    for (int i = 1; i <= n; ++i) state_names.push_back("y_" + std::to_string(i));
  }
  if (static_cast<int>(state_names.size()) != n)
    throw DimensionMismatch("trajectory CSV: state name count does not match state size");
  for (const auto& [dname, col] : traj.diagnostics) {
    if (col.size() != traj.size())
      throw DimensionMismatch("trajectory CSV: diagnostic '" + dname + "' length");
  }

  std::ofstream out = open_for_write(path);
  out << "# method=" << traj.method << " dt=" << fmt17(traj.dt) << "\n";
  out << "t";
  for (const auto& s : state_names) out << "," << s;
  for (const auto& [dname, col] : traj.diagnostics) out << "," << dname;
  out << "\n";
  for (std::size_t k = 0; k < traj.size(); ++k) {
    out << fmt17(traj.times[k]);
    for (int i = 0; i < n; ++i) out << "," << fmt17(traj.states[k][i]);
    for (const auto& [dname, col] : traj.diagnostics) out << "," << fmt17(col[k]);
    out << "\n";
  }
  if (!out) throw IoError("write failure on '" + path + "'");
}

Trajectory read_trajectory_csv(const std::string& path) {
  std::istringstream in(read_file(path));
  std::string line;
  Trajectory traj;

  if (!std::getline(in, line)) throw IoError("trajectory CSV '" + path + "' is empty");
  if (line.rfind("#", 0) == 0) {
    std::istringstream meta(line.substr(1));
    std::string field;
    while (meta >> field) {
      if (field.rfind("method=", 0) == 0) traj.method = field.substr(7);
      if (field.rfind("dt=", 0) == 0) traj.dt = std::stod(field.substr(3));
    }
    if (!std::getline(in, line)) throw IoError("trajectory CSV '" + path + "' has no header");
  }

  const std::vector<std::string> columns = split(line, ',');
  if (columns.empty() || columns[0] != "t")
    throw IoError("trajectory CSV '" + path + "': header must start with 't'");
  std::vector<int> state_cols, diag_cols;
  for (int i = 1; i < static_cast<int>(columns.size()); ++i) {
    if (is_diagnostic_name(columns[i])) {
      diag_cols.push_back(i);
      traj.diagnostics[columns[i]] = {};
    } else {
      state_cols.push_back(i);
      traj.state_names.push_back(columns[i]);
    }
  }

  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const std::vector<std::string> fields = split(line, ',');
    if (fields.size() != columns.size())
      throw IoError("trajectory CSV '" + path + "': row " + std::to_string(row) + " has " +
                    std::to_string(fields.size()) + " fields, expected " +
                    std::to_string(columns.size()));
    try {
      traj.times.push_back(std::stod(fields[0]));
      Eigen::VectorXd state(state_cols.size());
      for (std::size_t i = 0; i < state_cols.size(); ++i)
        state[static_cast<int>(i)] = std::stod(fields[state_cols[i]]);
      traj.states.push_back(std::move(state));
      for (int col : diag_cols) traj.diagnostics[columns[col]].push_back(std::stod(fields[col]));
    } catch (const std::invalid_argument&) {
      throw IoError("trajectory CSV '" + path + "': non-numeric field in row " +
                    std::to_string(row));
    }
  }
  return traj;
}

void write_reports_json(const std::vector<CheckReport>& reports, const std::string& path) {
  json arr = json::array();
  for (const CheckReport& r : reports) {
    arr.push_back({{"name", r.name},
                   {"samples", r.samples},
                   {"max_residual", r.max_residual},
                   {"tolerance", r.tolerance},
                   {"pass", r.pass},
                   {"worst_case", r.worst_case}});
  }
  std::ofstream out = open_for_write(path);
  out << arr.dump(2) << "\n";
  if (!out) throw IoError("write failure on '" + path + "'");
}

std::vector<CheckReport> read_reports_json(const std::string& path) {
  json arr;
  try {
    arr = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw IoError("reports JSON '" + path + "': " + e.what());
  }
  if (!arr.is_array()) throw IoError("reports JSON '" + path + "' must be an array");
  std::vector<CheckReport> reports;
  for (const auto& j : arr) {
    CheckReport r;
    try {
      r.name = j.at("name").get<std::string>();
      r.samples = j.at("samples").get<int>();
      r.max_residual = j.at("max_residual").get<double>();
      r.tolerance = j.at("tolerance").get<double>();
      r.pass = j.at("pass").get<bool>();
      r.worst_case = j.at("worst_case").get<std::string>();
    } catch (const json::exception& e) {
      throw IoError("reports JSON '" + path + "': " + e.what());
    }
    reports.push_back(std::move(r));
  }
  return reports;
}

std::string reports_table(const std::vector<CheckReport>& reports) {
  std::size_t name_width = 4;
  for (const CheckReport& r : reports) name_width = std::max(name_width, r.name.size());
  std::ostringstream out;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%-*s  %8s  %12s  %12s  %s\n",
                static_cast<int>(name_width), "name", "samples", "max_resid", "tolerance",
                "status");
  out << buf;
  for (const CheckReport& r : reports) {
    std::snprintf(buf, sizeof(buf), "%-*s  %8d  %12.3e  %12.3e  %s\n",
                  static_cast<int>(name_width), r.name.c_str(), r.samples, r.max_residual,
                  r.tolerance, r.pass ? "pass" : "FAIL");
    out << buf;
  }
  return out.str();
}

std::vector<std::string> write_plot_data(const Trajectory& traj, const std::string& dir,
                                         const std::string& stem) {
  std::vector<std::string> paths;
  for (const auto& [name, col] : traj.diagnostics) {
    if (col.size() != traj.size())
      throw DimensionMismatch("plot data: diagnostic '" + name + "' length");
    const std::string path = dir + "/" + stem + "_" + name + ".dat";
    std::ofstream out = open_for_write(path);
    for (std::size_t k = 0; k < traj.size(); ++k)
      out << fmt17(traj.times[k]) << " " << fmt17(col[k]) << "\n";
    if (!out) throw IoError("write failure on '" + path + "'");
    paths.push_back(path);
  }
  return paths;
}

}  // namespace symred
