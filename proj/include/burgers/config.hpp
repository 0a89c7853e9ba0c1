#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "burgers/grid.hpp"
#include "burgers/solver.hpp"

namespace burgers {

enum class ExperimentKind {
  kSimulate,
  kStabilize,
  kDichotomy,
  kHarnack,
  kBarrier,
  kNoncontrol,
  kContraction,
};

std::string to_string(ExperimentKind kind);
/// Accepts the names printed by to_string plus "non-controllability".
std::optional<ExperimentKind> parse_experiment(std::string_view name);

/// Forcing presets:
///   zero
///   sine      amp * sin(k pi x)
///   sine-cos  amp * sin(k pi x) * cos(omega pi t)
struct ForcingSpec {
  std::string preset = "zero";
  int k = 1;
  double amp = 0.0;
  double omega = 1.0;
};

/// ||h||_inf of the preset.
double sup_norm(const ForcingSpec& spec);
/// Empty function for the zero preset.
SpaceTimeFn make_forcing(const ForcingSpec& spec);

/// Initial data presets:
///   sine            amp * sin(k pi x)
///   random-fourier  random_fourier_field(seed, n_modes, amp)
///   constant-clip   amp in the interior, clipped to 0 at both ends
struct InitialSpec {
  std::string preset = "sine";
  int k = 1;
  double amp = 1.0;
  std::uint64_t seed = 0;  // resolved from the run seed when not given
  int n_modes = 8;
};

Field make_initial(const InitialSpec& spec, const Grid& grid);

struct ScenarioConfig {
  ExperimentKind experiment = ExperimentKind::kSimulate;
  std::string preset;  // "" when none was applied
  double nu = 0.1;
  int n_cells = 128;
  double dt = 0.0;  // resolved to dx when not given
  double t_end = 1.0;
  int n_cycles = 10;
  Interval control_support{0.3, 0.7};
  Interval inner{0.4, 0.6};  // resolved to the middle half of control_support when not given
  ForcingSpec forcing;
  InitialSpec u0{"sine", 1, 0.8};
  InitialSpec u_hat0{"sine", 3, -0.5};
  std::uint64_t seed = 1;

  struct Ensemble {
    int n = 100;
    double rho = 2.0;
    double q = 0.5;
    double eps = 0.05;
    double amp = 4.0;  // data amplitude for the contraction pairs
  } ensemble;

  struct Harnack {
    Interval K{0.25, 0.75};
    double tau = 0.0;  // 0 means 2 t_end / 3
  } harnack;

  struct BarrierRun {
    double eps = 0.01;
    std::vector<double> amplitudes{10.0, 100.0, 1000.0};
  } barrier;

  struct Noncontrol {
    double delta = 0.25;
    double a = 0.5;
    double R = 10.0;
    double eps = 0.01;
    Interval control_support{0.5, 0.8};
    std::vector<double> control_amplitudes{1000.0, -1000.0, 300.0, -300.0, 100.0,
                                           -100.0, 30.0,    -30.0, 10.0,   -10.0};
    std::vector<double> data_amplitudes{10.0, 100.0, 1000.0};
  } noncontrol;

  struct Tolerances {
    double theta_max = 0.999;
    double max_principle = 0.02;
    double contraction_slack = 1e-6;
    double comparison = 1e-3;
    double bound = 0.05;
  } tolerances;

  struct Output {
    std::string dir = "out";
    bool fields = false;
  } output;
};

/// Raised by parse_config with every violation found, each naming its key.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

/// Schema (all keys optional except experiment, which a preset may supply):
///   experiment, preset, nu, t_end, n_cycles, seed,
///   grid {n_cells, dt}, control_support [a, b], inner [a', b'],
///   forcing {preset, k, amp, omega}, u0 / u_hat0 {preset, k, amp, seed, n_modes},
///   ensemble {n, rho, q, eps, amp}, harnack {K, tau}, barrier {eps, amplitudes},
///   noncontrol {delta, a, R, eps, control_support, control_amplitudes, data_amplitudes},
///   tolerances {theta_max, max_principle, contraction_slack, comparison, bound},
///   output {dir, fields}.
/// Presets "paper-demo" and "non-controllability" set defaults that explicit
/// keys then override.
ScenarioConfig parse_config(const nlohmann::json& j);
ScenarioConfig parse_config(std::string_view text);

/// Fully resolved config, suitable for echoing into a report.
nlohmann::ordered_json to_json(const ScenarioConfig& cfg);

}  // namespace burgers
