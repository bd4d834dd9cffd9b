// spheq run <scenario.json> [--out DIR] [--tol X] [--grid N] [--seed S]
// spheq newton-distance --d N
//
// Exit status: 0 success, 2 usage or configuration error, 3 numeric failure.
// Failures print one line "spheq: error=<kind> message=<text>" on stderr.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "spheq/scenario.hpp"

namespace {

int fail(const char* kind, const std::string& msg, int code) {
  std::string flat = msg;
  for (char& c : flat)
    if (c == '\n') c = ' ';
  std::cerr << "spheq: error=" << kind << " message=" << flat << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace spheq;
  CLI::App app{"Extremal measures on the sphere in axis-supported external fields"};
  app.require_subcommand(1);

  std::string scenario_path, out_dir = "out";
  std::optional<double> tol;
  std::optional<int> grid;
  std::optional<std::uint64_t> seed;
  auto* run = app.add_subcommand("run", "Run a scenario file");
  run->add_option("scenario", scenario_path, "Scenario JSON")->required();
  run->add_option("--out", out_dir, "Output directory")->capture_default_str();
  run->add_option("--tol", tol, "Tolerance for verification tasks");
  run->add_option("--grid", grid, "Grid size for curves");
  run->add_option("--seed", seed, "Seed for the particle task");

  int d = 0;
  auto* newton = app.add_subcommand("newton-distance", "Critical distance 1 + rho_+ for s = d - 1, q = 1");
  newton->add_option("--d", d, "Sphere dimension")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what(), 2);
  }

  try {
    scenario::Scenario sc;
    if (*newton) {
      if (d < 2) return fail("usage", "--d must be at least 2", 2);
      sc.task = scenario::Task::newton_distance;
      sc.params.d = d;
    } else {
      sc = scenario::load_scenario(scenario_path);
      if (tol) sc.tol = *tol;
      if (grid) sc.grid = *grid;
      if (seed) sc.seed = *seed;
      if (!(sc.tol > 0.0)) return fail("usage", "--tol must be positive", 2);
      if (sc.grid < 2) return fail("usage", "--grid must be at least 2", 2);
    }
    const auto result = scenario::run_scenario(sc);
    if (*run) scenario::write_outputs(result, out_dir);
    std::cout << result.summary.dump(2) << '\n';
    if (sc.task == scenario::Task::verify && !result.summary.at("passed").get<bool>()) return 1;
  } catch (const config_error& e) {
    return fail("usage", e.what(), 2);
  } catch (const domain_error& e) {
    return fail("domain", e.what(), 3);
  } catch (const convergence_error& e) {
    return fail("convergence", e.what(), 3);
  } catch (const std::exception& e) {
    return fail("internal", e.what(), 3);
  }
  return 0;
}
