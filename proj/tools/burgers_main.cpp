#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "burgers/run.hpp"

namespace {

using burgers::ExperimentKind;
using nlohmann::json;

struct Options {
  std::string config;
  std::string out;
  std::string preset;
  std::optional<std::uint64_t> seed;
  std::optional<int> n_cells;
  std::optional<double> dt;
  bool fields = false;
  int parallelism = 0;
};

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw burgers::ConfigError({"--config: cannot open " + path});
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return json::parse(text.str());
  } catch (const json::parse_error& e) {
    throw burgers::ConfigError({path + ": not valid JSON: " + e.what()});
  }
}

// Command-line flags as a JSON merge patch over the config file.
json overrides(const Options& o) {
  json patch = json::object();
  if (!o.preset.empty()) patch["preset"] = o.preset;
  if (o.seed) patch["seed"] = *o.seed;
  if (o.n_cells) patch["grid"]["n_cells"] = *o.n_cells;
  if (o.dt) patch["grid"]["dt"] = *o.dt;
  if (!o.out.empty()) patch["output"]["dir"] = o.out;
  if (o.fields) patch["output"]["fields"] = true;
  return patch;
}

void print_report(const burgers::RunReport& r, const std::string& dir) {
  std::cout << burgers::to_string(r.config.experiment) << ": " << burgers::to_string(r.status)
            << " (" << r.wall_time << " s), report in " << dir << "/report.json\n";
  for (const burgers::InvariantCheck& c : r.invariants)
    std::cout << "  " << (c.passed ? "pass " : "FAIL ") << c.name << ": " << c.detail << "\n";
  if (!r.error.empty()) std::cerr << "error: " << r.error << "\n";
}

int run_single(ExperimentKind kind, const Options& o) {
  json j = o.config.empty() ? json::object() : read_json_file(o.config);
  if (!j.is_object()) throw burgers::ConfigError({"config: expected an object"});
  if (j.contains("experiment") && j["experiment"].is_string()) {
    const auto named = burgers::parse_experiment(j["experiment"].get<std::string>());
    if (named && *named != kind)
      throw burgers::ConfigError({"experiment: config names '" + burgers::to_string(*named) +
                                  "' but the subcommand is '" + burgers::to_string(kind) + "'"});
  }
  j["experiment"] = burgers::to_string(kind);
  j.merge_patch(overrides(o));
  const burgers::ScenarioConfig cfg = burgers::parse_config(j);
  const burgers::RunReport r = burgers::run(cfg);
  burgers::write_artifacts(r, cfg.output.dir);
  print_report(r, cfg.output.dir);
  return r.exit_code();
}

int run_sweep(const Options& o) {
  if (o.config.empty()) throw burgers::ConfigError({"--config: sweep needs a sweep file"});
  burgers::SweepPlan plan = burgers::parse_sweep(read_json_file(o.config), overrides(o));
  if (o.parallelism > 0) plan.parallelism = o.parallelism;
  const burgers::SweepResult s = burgers::sweep(plan);
  const std::string dir = o.out.empty() ? "out" : o.out;
  burgers::write_sweep(s, dir);
  std::cout << "sweep: " << s.runs.size() << " runs, " << burgers::to_string(s.status())
            << ", table in " << dir << "/sweep.json\n";
  for (std::size_t i = 0; i < s.runs.size(); ++i)
    if (s.runs[i].status != burgers::RunStatus::kOk)
      std::cout << "  run " << i << ": " << burgers::to_string(s.runs[i].status)
                << (s.runs[i].error.empty() ? "" : " (" + s.runs[i].error + ")") << "\n";
  return static_cast<int>(s.status());
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--config", o.config, "JSON scenario file");
  sub->add_option("--out", o.out, "output directory");
  sub->add_option("--seed", o.seed, "run seed");
  sub->add_option("--n-cells", o.n_cells, "grid cells")->check(CLI::PositiveNumber);
  sub->add_option("--dt", o.dt, "output time step")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Controlled viscous Burgers experiments"};
  app.set_version_flag("--version", burgers::version_stamp());
  app.require_subcommand(1);

  Options opts;
  std::optional<ExperimentKind> chosen;
  bool sweep_chosen = false;

  const std::pair<const char*, const char*> experiments[] = {
      {"simulate", "solve the forced Burgers equation"},
      {"stabilize", "alternating-cycle control towards a reference solution"},
      {"dichotomy", "contraction/mass dichotomy over a random coefficient ensemble"},
      {"harnack", "Harnack ratio and sup bound over a non-negative ensemble"},
      {"barrier", "global barrier bounds for large data"},
      {"noncontrol", "adversarial controls right of a against the left barrier bound"},
      {"contraction", "L1 contraction between solutions and for the linearised equation"},
  };
  for (const auto& [name, help] : experiments) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_common(sub, opts);
    sub->add_option("--preset", opts.preset, "paper-demo or non-controllability");
    sub->add_flag("--fields", opts.fields, "also write fields.csv");
    sub->callback([&chosen, name = std::string(name)] { chosen = burgers::parse_experiment(name); });
  }
  CLI::App* sw = app.add_subcommand("sweep", "run a batch of configs and aggregate the results");
  add_common(sw, opts);
  sw->add_option("--parallelism", opts.parallelism, "worker threads (0: all cores)")
      ->check(CLI::NonNegativeNumber);
  sw->callback([&sweep_chosen] { sweep_chosen = true; });

  CLI11_PARSE(app, argc, argv);

  try {
    if (sweep_chosen) return run_sweep(opts);
    return run_single(*chosen, opts);
  } catch (const burgers::ConfigError& e) {
    for (const std::string& v : e.violations()) std::cerr << "config error: " << v << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
