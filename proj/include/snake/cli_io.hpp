#pragma once

#include "snake/dynamics.hpp"

#include <json.hpp>

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace snake {

inline constexpr const char* kVersion = "0.1.0";

/// Environment variable that overrides the output root (default "runs").
inline constexpr const char* kOutputRootEnv = "SNAKE_OUTPUT_ROOT";

/// Invalid or unreadable scenario. Maps to exit status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kConfig = 2;
inline constexpr int kNumerical = 3;
inline constexpr int kVerification = 4;
}  // namespace exit_code

/// A validated scenario in normalized form: every section present, every
/// default spelled out, file paths absolute.
struct Scenario {
  nlohmann::json config;
  std::string name;  // default output directory name
};

/// Everything a run needs, built from a Scenario.
struct Setup {
  Grid grid;
  RodProperties props;
  StiffnessLaw law;
  ControlLaw control;
  WrenchForm form;
  SolverConfig solver;
  ActionConvention convention;
  PoseField g0;
  TwistField W0;
};

/// Validates and normalizes. Relative file paths resolve against base_dir.
/// Throws ConfigError naming the offending key.
Scenario parse_scenario(const nlohmann::json& raw, const std::filesystem::path& base_dir,
                        std::string name = "scenario");
Scenario load_scenario(const std::filesystem::path& path);
nlohmann::json serialize(const Scenario& s);

Setup build_setup(const Scenario& s);

std::filesystem::path output_root();
std::filesystem::path run_directory(const Scenario& s);

struct NodeRecord {
  double z = 0.0;
  Eigen::Quaterniond q = Eigen::Quaterniond::Identity();
  Vec3 u = Vec3::Zero();
  Vec3 p = Vec3::Zero();
  Twistd W, xi;
};

struct SnapshotRecord {
  double t = 0.0;
  std::vector<NodeRecord> nodes;
};

SnapshotRecord make_snapshot(const SimState& s, const Setup& setup);

/// CSV with one row per (t, node) and the header line snapshot_header().
const std::string& snapshot_header();
std::string snapshot_rows(const SnapshotRecord& rec);
std::vector<SnapshotRecord> read_snapshots(const std::filesystem::path& path);

struct RunSummary {
  double final_energy = 0.0;
  double max_abs_xi = 0.0;
  double mean_forward_displacement = 0.0;
  std::size_t steps = 0;
  std::size_t outputs = 0;
};

/// Simulates and writes manifest.json, snapshots.csv and energy.csv into dir.
RunSummary run_scenario(const Scenario& s, const std::filesystem::path& dir);

/// key=start:stop:n
struct SweepAxis {
  std::string key;
  double start = 0.0, stop = 0.0;
  std::size_t count = 1;
};
SweepAxis parse_axis(const std::string& text);

/// One run directory per point under dir, then dir/summary.csv.
std::vector<RunSummary> run_sweep(const Scenario& s, const std::vector<SweepAxis>& axes,
                                  const std::filesystem::path& dir);

/// Column text files under dir/export: energy.dat and centerline_<k>.dat for a
/// few snapshot times. Returns the files written.
std::vector<std::filesystem::path> export_plot_data(const std::filesystem::path& run_dir);

}  // namespace snake
