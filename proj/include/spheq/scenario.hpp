#pragma once

// Scenario files: one JSON document describing the kernel, the field and a task.
// run_scenario computes tables and a summary in memory; write_outputs stores them as
// CSV (17 significant digits) and JSON.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "axis_field.hpp"
#include "cap_measure.hpp"
#include "errors.hpp"
#include "oracle.hpp"
#include "params.hpp"
#include "point_field.hpp"

namespace spheq::scenario {

using json = nlohmann::json;

inline constexpr int kCsvVersion = 1;

enum class Task { density, potential, phi_curve, solve_support, verify, particles, figure, newton_distance };

inline const std::map<std::string, Task>& task_names() {
  static const std::map<std::string, Task> names{
      {"density", Task::density},       {"potential", Task::potential},
      {"phi-curve", Task::phi_curve},   {"solve-support", Task::solve_support},
      {"verify", Task::verify},         {"particles", Task::particles},
      {"figure", Task::figure},         {"newton-distance", Task::newton_distance}};
  return names;
}

inline std::string to_string(Task t) {
  for (const auto& [name, task] : task_names())
    if (task == t) return name;
  return "?";
}

struct Scenario {
  std::string name;
  Task task = Task::solve_support;
  Params params;
  AxisMeasure field;
  std::optional<double> t;         ///< cap height for density/potential; default: solved t0
  std::vector<double> t_values;    ///< figure panels; default t0 - 0.2, t0, t0 + 0.2
  int grid = 201;
  double tol = 1e-5;
  std::uint64_t seed = 1;
  int particles = 800;
  int iterations = 2000;
  int bins = 0;                    ///< histogram bins; 0 picks oracle::default_histogram_bins
  int verify_grid = 40;
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct RunResult {
  json summary;
  std::map<std::string, Table> tables;  ///< file stem -> table
};

namespace detail {

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw config_error(std::string("field '") + key + "' has the wrong type");
  }
}

inline Params parse_params(const json& j) {
  if (!j.is_object()) throw config_error("'params' must be an object");
  const int d = get_or<int>(j, "d", 2);
  const std::string kernel = get_or<std::string>(j, "kernel", "riesz");
  try {
    if (kernel == "log") return Params::log(d);
    if (kernel != "riesz") throw config_error("params.kernel must be 'riesz' or 'log'");
    if (!j.contains("s")) throw config_error("params.s is required for the Riesz kernel");
    return Params::riesz(d, get_or<double>(j, "s", 0.0));
  } catch (const domain_error& e) {
    throw config_error(e.what());
  }
}

inline AxisMeasure parse_field(const json& j, const Params& p) {
  if (!j.is_object()) throw config_error("'field' must be an object");
  std::vector<AxisAtom> atoms;
  if (j.contains("charge")) {
    const auto& c = j.at("charge");
    if (!c.is_object() || !c.contains("R")) throw config_error("field.charge needs R");
    atoms.push_back({get_or<double>(c, "R", 0.0), get_or<double>(c, "q", 1.0)});
  } else if (j.contains("atoms")) {
    if (!j.at("atoms").is_array()) throw config_error("field.atoms must be an array");
    for (const auto& a : j.at("atoms")) {
      if (!a.is_object() || !a.contains("R") || !a.contains("mass"))
        throw config_error("each atom needs R and mass");
      atoms.push_back({get_or<double>(a, "R", 0.0), get_or<double>(a, "mass", 0.0)});
    }
  } else {
    throw config_error("field needs 'charge' or 'atoms'");
  }
  try {
    return make_axis(std::move(atoms), p);
  } catch (const domain_error& e) {
    throw config_error(e.what());
  }
}

inline std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
  return v;
}

/// (u, density) on [-1, t); the edge itself is included when the density is finite there.
inline Table density_table(const CapMeasure& m, int n) {
  Table tab{{"u", "density"}, {}};
  const double t = m.t;
  for (int i = 0; i < n; ++i) {
    const double gap = (t + 1.0) * (n - i) / n;
    const double u = t - gap;
    tab.rows.push_back({i == 0 ? -1.0 : u, m.density_gap(u, gap)});
  }
  if (m.edge_exponent == 0.0) tab.rows.push_back({t, m.density_gap(t, 0.0)});
  return tab;
}

inline double measure_min_density(const Table& density) {
  double v = std::numeric_limits<double>::infinity();
  for (const auto& r : density.rows) v = std::min(v, r[1]);
  return v;
}

inline json atoms_json(const AxisMeasure& f) {
  json a = json::array();
  for (const auto& at : f.atoms) a.push_back({{"R", at.R}, {"mass", at.mass}});
  return a;
}

/// Quantity with the sign of the edge behaviour of η_t: Δ, Δ̄ or 1 + ‖λ‖ - Σ m (R+1)^2/r^2.
inline double edge_balance(double t, const AxisMeasure& f, const Params& p) {
  switch (axis_field::regime(p)) {
    case axis_field::Regime::riesz:
      return cap_riesz::delta(t, f, p);
    case axis_field::Regime::exceptional:
      return cap_exceptional::deltabar(t, f, p);
    case axis_field::Regime::log:
      return cap_exceptional::log_edge_balance(t, f);
  }
  return 0.0;
}

inline json report_json(const oracle::VariationalReport& r, double tol) {
  return {{"F_estimate", r.F_estimate},
          {"max_violation_on_support", r.max_violation_on_support},
          {"min_margin_off_support", r.min_margin_off_support},
          {"min_density", r.min_density},
          {"grid", r.grid},
          {"tolerance", tol},
          {"passed", r.passed(tol)}};
}

}  // namespace detail

/// Parses a scenario document. Throws config_error for anything malformed or missing.
inline Scenario parse_scenario(const json& j) {
  using detail::get_or;
  if (!j.is_object()) throw config_error("scenario must be a JSON object");
  Scenario sc;
  sc.name = get_or<std::string>(j, "name", "");
  if (!j.contains("task")) throw config_error("'task' is required");
  const auto tname = get_or<std::string>(j, "task", "");
  const auto it = task_names().find(tname);
  if (it == task_names().end()) throw config_error("unknown task '" + tname + "'");
  sc.task = it->second;
  if (sc.task == Task::newton_distance) {
    sc.params.d = get_or<int>(j, "d", j.contains("params") ? get_or<int>(j.at("params"), "d", 2) : 2);
    if (sc.params.d < 2) throw config_error("d must be at least 2");
    return sc;
  }
  if (!j.contains("params")) throw config_error("'params' is required");
  if (!j.contains("field")) throw config_error("'field' is required");
  sc.params = detail::parse_params(j.at("params"));
  sc.field = detail::parse_field(j.at("field"), sc.params);
  try {
    axis_field::regime(sc.params);
  } catch (const domain_error& e) {
    throw config_error(e.what());
  }
  if (j.contains("t")) {
    sc.t = get_or<double>(j, "t", 0.0);
    if (!(*sc.t > -1.0 && *sc.t <= 1.0)) throw config_error("t must lie in (-1, 1]");
  }
  if (j.contains("t_values")) {
    sc.t_values = get_or<std::vector<double>>(j, "t_values", {});
    for (double t : sc.t_values)
      if (!(t > -1.0 && t <= 1.0)) throw config_error("t_values must lie in (-1, 1]");
  }
  sc.grid = get_or<int>(j, "grid", sc.grid);
  sc.tol = get_or<double>(j, "tol", sc.tol);
  sc.seed = get_or<std::uint64_t>(j, "seed", sc.seed);
  sc.verify_grid = get_or<int>(j, "verify_grid", sc.verify_grid);
  if (j.contains("particles")) {
    const auto& pj = j.at("particles");
    if (!pj.is_object()) throw config_error("'particles' must be an object");
    sc.particles = get_or<int>(pj, "n", sc.particles);
    sc.iterations = get_or<int>(pj, "iterations", sc.iterations);
    sc.bins = get_or<int>(pj, "bins", sc.bins);
  }
  if (sc.grid < 2) throw config_error("grid must be at least 2");
  if (!(sc.tol > 0.0)) throw config_error("tol must be positive");
  if (sc.verify_grid < 4) throw config_error("verify_grid must be at least 4");
  if (sc.task == Task::particles) {
    if (sc.params.d != 2) throw config_error("the particles task needs d = 2");
    if (sc.particles < 50) throw config_error("particles.n must be at least 50");
    if (sc.iterations < 1) throw config_error("particles.iterations must be positive");
    if (sc.bins != 0 && sc.bins < 2) throw config_error("particles.bins must be at least 2");
  }
  return sc;
}

inline Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open scenario file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw config_error(std::string("malformed JSON: ") + e.what());
  }
  return parse_scenario(j);
}

/// Runs the task. Numeric failures surface as domain_error or convergence_error.
inline RunResult run_scenario(const Scenario& sc) {
  using namespace detail;
  RunResult out;
  json& s = out.summary;
  s["csv_version"] = kCsvVersion;
  s["task"] = to_string(sc.task);
  if (!sc.name.empty()) s["name"] = sc.name;

  if (sc.task == Task::newton_distance) {
    const double rho = point_field::gonchar_root(sc.params.d);
    s["d"] = sc.params.d;
    s["rho_plus"] = rho;
    s["critical_distance"] = 1.0 + rho;
    s["polynomial_residual"] = point_field::gonchar_polynomial(sc.params.d, rho);
    return out;
  }

  const Params& p = sc.params;
  const AxisMeasure& f = sc.field;
  s["params"] = {{"d", p.d}, {"kernel", p.is_log() ? "log" : "riesz"}, {"s", p.s}};
  s["atoms"] = atoms_json(f);

  const auto sol = axis_field::axis_solve_t(f, p);
  s["t0"] = sol.t0;
  s["phi_at_t0"] = sol.phi_at_t0;
  s["solved_by"] = to_string(sol.solved_by);
  const double t = sc.t.value_or(sol.t0);

  switch (sc.task) {
    case Task::density: {
      const auto m = t == sol.t0 ? sol.equilibrium : axis_field::axis_eta(t, f, p);
      out.tables["density"] = density_table(m, sc.grid);
      s["t"] = t;
      s["boundary_coeff"] = m.boundary_coeff;
      s["edge_exponent"] = m.edge_exponent;
      s["mass"] = m.quadrature_mass();
      break;
    }
    case Task::potential: {
      const double F = axis_field::axis_phi(t, f, p);
      Table tab{{"xi", "weighted_potential", "F"}, {}};
      for (double xi : linspace(-1.0, 1.0, sc.grid))
        tab.rows.push_back({xi, axis_field::axis_weighted_potential(xi, t, f, p), F});
      out.tables["potential"] = std::move(tab);
      s["t"] = t;
      s["F"] = F;
      break;
    }
    case Task::phi_curve: {
      Table tab{{"t", "phi", "edge_balance"}, {}};
      for (int i = 1; i <= sc.grid; ++i) {
        const double ti = -1.0 + 2.0 * i / sc.grid;
        tab.rows.push_back({ti, axis_field::axis_phi(ti, f, p), edge_balance(ti, f, p)});
      }
      out.tables["phi_curve"] = std::move(tab);
      break;
    }
    case Task::solve_support: {
      out.tables["density"] = density_table(sol.equilibrium, sc.grid);
      s["mass"] = sol.equilibrium.quadrature_mass();
      s["boundary_coeff"] = sol.equilibrium.boundary_coeff;
      s["edge_balance"] = edge_balance(sol.t0, f, p);
      if (p.is_log() && sol.t0 < 1.0) s["edge_density"] = axis_field::axis_log_edge_density(sol.t0, f);
      break;
    }
    case Task::verify: {
      const auto rep = oracle::check_variational(sol, sc.verify_grid);
      s["report"] = report_json(rep, sc.tol);
      s["passed"] = rep.passed(sc.tol);
      Table tab{{"xi", "weighted_potential_quadrature"}, {}};
      for (std::size_t i = 0; i < rep.grid.size(); ++i) tab.rows.push_back({rep.grid[i], rep.values[i]});
      out.tables["verify"] = std::move(tab);
      break;
    }
    case Task::particles: {
      const auto sys = oracle::minimize_particles(sc.particles, p, f, sc.seed, sc.iterations);
      const int bins = sc.bins ? sc.bins : oracle::default_histogram_bins(sc.particles, sol.t0);
      const auto hist = oracle::compare_histogram(sys, sol.equilibrium, bins);
      Table pts{{"x", "y", "z"}, {}};
      for (const auto& x : sys.points) pts.rows.push_back({x[0], x[1], x[2]});
      Table h{{"lo", "hi", "fraction", "expected"}, {}};
      for (int b = 0; b < bins; ++b) h.rows.push_back({hist.edges[b], hist.edges[b + 1], hist.counts[b], hist.expected[b]});
      out.tables["particles"] = std::move(pts);
      out.tables["histogram"] = std::move(h);
      s["seed"] = sc.seed;
      s["n"] = sc.particles;
      s["iterations"] = sys.iterations;
      s["accepted"] = sys.accepted;
      s["stalled"] = sys.stalled;
      s["energy_initial"] = sys.energy_history.front();
      s["energy_final"] = sys.energy();
      s["support_estimate"] = oracle::empirical_support_height(sys);
      s["bins"] = bins;
      s["rank_correlation"] = hist.rank_correlation;
      break;
    }
    case Task::figure: {
      std::vector<double> ts = sc.t_values;
      if (ts.empty()) {
        for (double dt : {-0.2, 0.0, 0.2}) {
          const double ti = sol.t0 + dt;
          if (ti > -1.0 && ti <= 1.0) ts.push_back(ti);
        }
      }
      json panels = json::array();
      for (std::size_t k = 0; k < ts.size(); ++k) {
        const double ti = ts[k];
        const auto m = ti == sol.t0 ? sol.equilibrium : axis_field::axis_eta(ti, f, p);
        const double F = axis_field::axis_phi(ti, f, p);
        Table pot{{"xi", "weighted_potential", "F"}, {}};
        double min_margin = std::numeric_limits<double>::infinity();
        for (double xi : linspace(-1.0, 1.0, sc.grid)) {
          const double v = axis_field::axis_weighted_potential(xi, ti, f, p);
          pot.rows.push_back({xi, v, F});
          if (xi > ti) min_margin = std::min(min_margin, v - F);
        }
        const auto dens = density_table(m, sc.grid);
        const std::string tag = std::to_string(k);
        out.tables["potential_" + tag] = std::move(pot);
        out.tables["density_" + tag] = dens;
        panels.push_back({{"index", k},
                          {"t", ti},
                          {"t_minus_t0", ti - sol.t0},
                          {"F", F},
                          {"boundary_coeff", m.boundary_coeff},
                          {"min_density", measure_min_density(dens)},
                          {"min_margin_off_cap", std::isfinite(min_margin) ? min_margin : 0.0}});
      }
      s["panels"] = panels;
      break;
    }
    case Task::newton_distance:
      break;
  }
  return out;
}

/// One number in the CSV/JSON-independent text form used by every output file.
inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string to_csv(const Table& t) {
  std::string s;
  for (std::size_t i = 0; i < t.columns.size(); ++i) s += (i ? "," : "") + t.columns[i];
  s += '\n';
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) s += (i ? "," : "") + format_number(r[i]);
    s += '\n';
  }
  return s;
}

/// Parses a CSV written by to_csv.
inline Table read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open " + path.string());
  Table t;
  std::string line;
  if (!std::getline(in, line)) throw config_error("empty CSV " + path.string());
  std::size_t pos = 0;
  while (true) {
    const auto next = line.find(',', pos);
    t.columns.push_back(line.substr(pos, next - pos));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    pos = 0;
    while (true) {
      const auto next = line.find(',', pos);
      row.push_back(std::stod(line.substr(pos, next - pos)));
      if (next == std::string::npos) break;
      pos = next + 1;
    }
    if (row.size() != t.columns.size()) throw config_error("ragged CSV " + path.string());
    t.rows.push_back(std::move(row));
  }
  return t;
}

/// Writes <stem>.csv for every table and summary.json into dir.
inline void write_outputs(const RunResult& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& [stem, table] : r.tables) {
    std::ofstream out(dir / (stem + ".csv"), std::ios::binary);
    out << to_csv(table);
  }
  std::ofstream out(dir / "summary.json", std::ios::binary);
  out << r.summary.dump(2) << '\n';
}

}  // namespace spheq::scenario
