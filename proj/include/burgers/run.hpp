#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "burgers/config.hpp"

namespace burgers {

/// Doubles as the process exit code.
enum class RunStatus { kOk = 0, kError = 1, kInvariantFailure = 2 };

std::string to_string(RunStatus status);

struct InvariantCheck {
  std::string name;
  bool passed = true;
  std::string detail;
};

struct RunReport {
  ScenarioConfig config;
  nlohmann::ordered_json results = nlohmann::ordered_json::object();
  std::vector<InvariantCheck> invariants;
  RunStatus status = RunStatus::kOk;
  std::string error;  // set when status is kError
  double wall_time = 0.0;
  /// Extra artifacts as (file name, contents), e.g. cycles.csv.
  std::vector<std::pair<std::string, std::string>> files;

  int exit_code() const { return static_cast<int>(status); }
};

/// "burgers <version>".
std::string version_stamp();

/// Runs one experiment. Solver and precondition errors are caught and reported
/// with status kError; failed invariants give kInvariantFailure.
RunReport run(const ScenarioConfig& cfg);

/// Report with the resolved config, results, invariants, status, version and
/// wall_time (the only field that varies between identical runs).
nlohmann::ordered_json report_json(const RunReport& r);

/// Writes report.json and the extra files into dir (created if needed).
void write_artifacts(const RunReport& r, const std::filesystem::path& dir);

/// Sweep file: {"runs": [config, ...]} or {"base": config, "vary": {"key": [v, ...]}},
/// optionally with "parallelism". Keys under vary are JSON pointers into the
/// base ("/nu", "/grid/n_cells"); a bare name is read as "/name". Several keys
/// expand to their Cartesian product, the first key varying slowest.
struct SweepPlan {
  std::vector<ScenarioConfig> configs;
  std::vector<nlohmann::ordered_json> labels;  // varied values per run
  int parallelism = 0;                         // 0 means hardware concurrency
};

/// patch is merged into every expanded config before validation (CLI overrides).
SweepPlan parse_sweep(const nlohmann::json& j, const nlohmann::json& patch = nlohmann::json::object());

struct SweepResult {
  std::vector<RunReport> runs;  // in plan order
  std::vector<nlohmann::ordered_json> labels;

  /// Worst outcome: an error beats an invariant failure beats success.
  RunStatus status() const;
};

/// Runs the configs on up to `parallelism` threads; results keep plan order.
SweepResult sweep(const SweepPlan& plan);

/// Aggregate table, one row per run in plan order.
nlohmann::ordered_json sweep_json(const SweepResult& s);

/// Writes dir/run_XXX/ per run and dir/sweep.json.
void write_sweep(const SweepResult& s, const std::filesystem::path& dir);

}  // namespace burgers
