#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "snake/cli_io.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <unistd.h>

using namespace snake;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json base_config() {
  return json::parse(R"({
    "rod": {"length": 1.0, "n_nodes": 9,
            "mass_model": {"kind": "cylinder", "radius": 0.05, "density": 1000}},
    "stiffness": {"kind": "cylinder", "youngs_modulus": 1e6, "shear_modulus": 3.3e5},
    "initial": {"shape": {"kind": "screw", "twist": [1, 0, 0, 0, 0, 1]}},
    "solver": {"t_end": 0.02},
    "output": {"stride": 5}
  })");
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("snake_cli_io_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string config_error(const json& raw) {
  try {
    parse_scenario(raw, ".");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

std::size_t line_count(const fs::path& p) {
  std::ifstream in(p);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);) ++n;
  return n;
}

}  // namespace

TEST_CASE("normalized config round trips") {
  const Scenario s = parse_scenario(base_config(), ".");
  CHECK(s.config["solver"]["dt"] == "auto");
  CHECK(s.config["solver"]["scheme"] == "rk4");
  CHECK(s.config["conventions"]["action_convention"] == "inverse");
  CHECK(s.config["control"]["kind"] == "none");
  const Scenario again = parse_scenario(serialize(s), ".");
  CHECK(again.config == s.config);
  CHECK(serialize(again) == serialize(s));
}

TEST_CASE("config errors name the key") {
  json missing = base_config();
  missing.erase("stiffness");
  CHECK(config_error(missing).find("stiffness") != std::string::npos);

  json no_modulus = base_config();
  no_modulus["stiffness"].erase("youngs_modulus");
  CHECK(config_error(no_modulus).find("stiffness.youngs_modulus") != std::string::npos);

  json unit = base_config();
  unit["rod"]["length"] = "1 m";
  CHECK(config_error(unit).find("rod.length") != std::string::npos);

  json unknown = base_config();
  unknown["solver"]["tend"] = 1.0;
  CHECK(config_error(unknown).find("solver.tend") != std::string::npos);

  json coarse = base_config();
  coarse["rod"]["n_nodes"] = 2;
  CHECK(config_error(coarse).find("rod.n_nodes") != std::string::npos);

  json scheme = base_config();
  scheme["solver"]["scheme"] = "euler";
  CHECK(config_error(scheme).find("solver.scheme") != std::string::npos);

  json stiff = base_config();
  stiff["stiffness"] = json{{"kind", "diagonal"}, {"EI1", 1}, {"EI2", 1}, {"GJ", 1},
                            {"GA1", 1}, {"GA2", 1}, {"EA", 0}};
  CHECK_THROWS_AS(build_setup(parse_scenario(stiff, ".")), ConfigError);
}

TEST_CASE("sweep axis syntax") {
  const SweepAxis a = parse_axis("control.amplitude=0:0.2:3");
  CHECK(a.key == "control.amplitude");
  CHECK(a.start == 0.0);
  CHECK(a.stop == 0.2);
  CHECK(a.count == 3);
  CHECK_THROWS_AS(parse_axis("control.amplitude"), ConfigError);
  CHECK_THROWS_AS(parse_axis("x=0:1:0"), ConfigError);
  CHECK_THROWS_AS(parse_axis("x=0:b:2"), ConfigError);
}

TEST_CASE("output root override") {
  ::setenv(kOutputRootEnv, "/tmp/elsewhere", 1);
  CHECK(output_root() == fs::path("/tmp/elsewhere"));
  const Scenario s = parse_scenario(base_config(), ".", "bend");
  CHECK(run_directory(s) == fs::path("/tmp/elsewhere") / "bend");
  ::unsetenv(kOutputRootEnv);
  CHECK(output_root() == fs::path("runs"));
}

TEST_CASE("rest scenario produces constant snapshots") {
  TempDir tmp;
  json raw = base_config();
  raw["initial"]["shape"] = json{{"kind", "straight"}};
  const RunSummary r = run_scenario(parse_scenario(raw, "."), tmp.path / "rest");
  CHECK(r.final_energy == 0.0);
  const auto snaps = read_snapshots(tmp.path / "rest" / "snapshots.csv");
  REQUIRE(snaps.size() == r.outputs);
  for (const auto& s : snaps)
    for (std::size_t i = 0; i < s.nodes.size(); ++i) {
      CHECK(s.nodes[i].p == snaps.front().nodes[i].p);
      CHECK(s.nodes[i].W.isZero());
    }
}

TEST_CASE("run writes manifest, snapshots and energy") {
  TempDir tmp;
  const Scenario s = parse_scenario(base_config(), ".", "bend");
  const fs::path dir = tmp.path / "bend";
  const RunSummary r = run_scenario(s, dir);
  const json manifest = json::parse(slurp(dir / "manifest.json"));
  CHECK(manifest["version"] == kVersion);
  CHECK(manifest["scenario"] == s.config);
  CHECK(manifest["resolved_dt"].get<double>() > 0.0);
  // a run reproduces from its manifest alone
  const Scenario from_manifest = parse_scenario(manifest["scenario"], ".", "bend");
  CHECK(from_manifest.config == s.config);

  CHECK(line_count(dir / "energy.csv") == r.outputs + 1);
  CHECK(r.outputs == r.steps / 5 + 1 + (r.steps % 5 != 0));

  const auto snaps = read_snapshots(dir / "snapshots.csv");
  REQUIRE(snaps.size() == r.outputs);
  CHECK(snaps.front().t == 0.0);
  CHECK(snaps.front().nodes.size() == 9);
  // reader and writer agree to the last bit
  std::string rewritten = snapshot_header() + "\n";
  for (const auto& rec : snaps) rewritten += snapshot_rows(rec);
  CHECK(rewritten == slurp(dir / "snapshots.csv"));
}

TEST_CASE("runs are deterministic") {
  TempDir tmp;
  const Scenario s = parse_scenario(base_config(), ".");
  run_scenario(s, tmp.path / "a");
  run_scenario(s, tmp.path / "b");
  CHECK(slurp(tmp.path / "a" / "snapshots.csv") == slurp(tmp.path / "b" / "snapshots.csv"));
  CHECK(slurp(tmp.path / "a" / "energy.csv") == slurp(tmp.path / "b" / "energy.csv"));
}

TEST_CASE("initial shape from a snapshot file") {
  TempDir tmp;
  const Scenario s = parse_scenario(base_config(), ".");
  run_scenario(s, tmp.path / "first");
  json raw = base_config();
  raw["initial"]["shape"] = json{{"kind", "file"}, {"path", (tmp.path / "first" / "snapshots.csv").string()}};
  const Setup a = build_setup(s);
  const Setup b = build_setup(parse_scenario(raw, "."));
  for (std::size_t i = 0; i < a.g0.size(); ++i)
    CHECK((a.g0[i].matrix() - b.g0[i].matrix()).norm() <= 1e-14);
}

TEST_CASE("sweep") {
  TempDir tmp;
  json raw = base_config();
  raw["initial"]["shape"] = json{{"kind", "straight"}};
  raw["control"] = json{{"kind", "cpg"}, {"amplitude", 0.0}, {"omega", 20.0}, {"wavenumber", 6.0}};
  const Scenario s = parse_scenario(raw, ".");
  const auto results = run_sweep(s, {parse_axis("control.amplitude=0:0.01:2")}, tmp.path / "sweep");
  REQUIRE(results.size() == 2);
  CHECK(results[0].mean_forward_displacement == 0.0);
  CHECK(results[0].final_energy == 0.0);
  CHECK(results[1].final_energy > 0.0);
  CHECK(line_count(tmp.path / "sweep" / "summary.csv") == 3);

  // one point equals a plain run
  const auto one = run_sweep(parse_scenario(base_config(), "."), {parse_axis("solver.cfl_number=0.5:0.5:1")},
                             tmp.path / "one");
  const RunSummary plain = run_scenario(parse_scenario(base_config(), "."), tmp.path / "plain");
  CHECK(one.at(0).final_energy == plain.final_energy);
  CHECK(slurp(tmp.path / "one" / "point_0000" / "snapshots.csv") == slurp(tmp.path / "plain" / "snapshots.csv"));

  CHECK_THROWS_AS(run_sweep(s, {parse_axis("rod.colour=0:1:2")}, tmp.path / "bad"), ConfigError);
}

TEST_CASE("export") {
  TempDir tmp;
  const RunSummary r = run_scenario(parse_scenario(base_config(), "."), tmp.path / "run");
  const auto files = export_plot_data(tmp.path / "run");
  REQUIRE(!files.empty());
  const fs::path energy = tmp.path / "run" / "export" / "energy.dat";
  CHECK(fs::exists(energy));
  std::ifstream in(energy);
  std::string header;
  std::getline(in, header);
  CHECK(header.rfind("#", 0) == 0);
  CHECK(line_count(energy) == r.outputs + 1);
  CHECK_THROWS_AS(export_plot_data(tmp.path / "missing"), ConfigError);
}
