#include "snake/cli_io.hpp"
#include "snake/validation.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

namespace fs = std::filesystem;
using namespace snake;

namespace {

int verify(const std::string& suite) {
  const std::vector<CheckResult> results = run_suites(suite);
  bool ok = true;
  std::printf("%-44s %12s %12s  %s\n", "check", "residual", "bound", "status");
  for (const auto& r : results) {
    std::printf("%-44s %12.3e %12.3e  %s\n", r.name.c_str(), r.residual, r.bound,
                r.pass() ? "PASS" : "FAIL");
    ok = ok && r.pass();
  }
  return ok ? exit_code::kOk : exit_code::kVerification;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cosserat rod dynamics on SE(3)"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::string scenario, suite, run_dir;
  std::vector<std::string> axes;

  auto* run = app.add_subcommand("run", "simulate a scenario");
  run->add_option("scenario", scenario, "scenario JSON file")->required();

  auto* ver = app.add_subcommand("verify", "run verification suites (all when omitted)");
  ver->add_option("suite", suite, "algebra | connection | rigid | elasticity | stationarity");

  auto* sweep = app.add_subcommand("sweep", "run a scenario over a parameter grid");
  sweep->add_option("scenario", scenario, "scenario JSON file")->required();
  sweep->add_option("--axis", axes, "key=start:stop:n, at most twice")->required();

  auto* exp = app.add_subcommand("export", "write column text files for plotting");
  exp->add_option("rundir", run_dir, "run directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_code::kConfig;
  }

  try {
    if (*run) {
      const Scenario s = load_scenario(scenario);
      const fs::path dir = run_directory(s);
      const RunSummary r = run_scenario(s, dir);
      std::printf("%s: %zu steps, %zu snapshots, final energy %.6e J\n", dir.string().c_str(),
                  r.steps, r.outputs, r.final_energy);
    } else if (*ver) {
      return verify(suite);
    } else if (*sweep) {
      const Scenario s = load_scenario(scenario);
      std::vector<SweepAxis> parsed;
      for (const auto& a : axes) parsed.push_back(parse_axis(a));
      const fs::path dir = run_directory(s) / "sweep";
      const auto results = run_sweep(s, parsed, dir);
      std::printf("%s: %zu points, summary in summary.csv\n", dir.string().c_str(), results.size());
    } else if (*exp) {
      for (const auto& f : export_plot_data(run_dir)) std::printf("%s\n", f.string().c_str());
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return exit_code::kConfig;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return exit_code::kConfig;
  } catch (const NonFiniteState& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return exit_code::kNumerical;
  } catch (const MeshTooCoarse& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return exit_code::kNumerical;
  } catch (const ControlError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return exit_code::kNumerical;
  } catch (const InvariantViolation& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return exit_code::kNumerical;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return exit_code::kOk;
}
