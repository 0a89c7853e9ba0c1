#include "burgers/run.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "burgers/analysis.hpp"
#include "burgers/barriers.hpp"
#include "burgers/control.hpp"
#include "burgers/errors.hpp"
#include "burgers/random_fields.hpp"

#ifndef BURGERS_VERSION
#define BURGERS_VERSION "dev"
#endif

namespace burgers {

using nlohmann::json;
using oj = nlohmann::ordered_json;

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

oj interval_json(const Interval& iv) { return oj::array({iv.lo, iv.hi}); }

std::mt19937_64 stream_rng(std::uint64_t seed, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    stream};
  return std::mt19937_64(seq);
}

void check(RunReport& r, std::string name, bool passed, std::string detail) {
  r.invariants.push_back({std::move(name), passed, std::move(detail)});
}

template <class Write>
std::string capture(Write&& write) {
  std::ostringstream os;
  write(os);
  return os.str();
}

EnsembleSpec ensemble_spec(const ScenarioConfig& c, bool nonnegative) {
  EnsembleSpec spec;
  spec.rho = c.ensemble.rho;
  spec.n = c.ensemble.n;
  spec.n_cells = c.n_cells;
  spec.dt = c.dt;
  spec.horizon = c.t_end;
  spec.seed = c.seed;
  spec.nonnegative = nonnegative;
  return spec;
}

ProbeSettings probe_settings(const ScenarioConfig& c) {
  ProbeSettings ps;
  ps.nu = c.nu;
  ps.T = c.t_end;
  return ps;
}

void run_simulate(const ScenarioConfig& c, RunReport& r) {
  const Grid g(c.n_cells);
  const Field u0 = make_initial(c.u0, g);
  const Trajectory u = solve_burgers({.nu = c.nu,
                                      .forcing = make_forcing(c.forcing),
                                      .control = {},
                                      .u0 = u0,
                                      .t_start = 0.0,
                                      .t_end = c.t_end,
                                      .dt = c.dt});
  const double h_inf = sup_norm(c.forcing);
  const double l0 = norm_linf(u0);
  double linf_max = 0.0;
  double excess = -1.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double m = norm_linf(u[k]);
    linf_max = std::max(linf_max, m);
    excess = std::max(excess, m - (l0 + u.time(k) * h_inf + c.tolerances.max_principle * (1.0 + l0)));
  }
  r.results["n_frames"] = u.size();
  r.results["dt"] = u.dt();
  r.results["h_inf"] = h_inf;
  r.results["linf_initial"] = l0;
  r.results["linf_final"] = norm_linf(u.back());
  r.results["linf_max"] = linf_max;
  r.results["l1_final"] = norm_l1(u.back());
  check(r, "max_principle", excess <= 0.0,
        "max_t ||u(t)||_inf - (||u0||_inf + t ||h||_inf + tol) = " + fmt(excess));
  if (c.output.fields)
    r.files.emplace_back("fields.csv", capture([&](std::ostream& os) { write_csv(os, u); }));
}

void run_stabilize(const ScenarioConfig& c, RunReport& r) {
  const Grid g(c.n_cells);
  const ControlProblem p{make_initial(c.u0, g),
                         make_initial(c.u_hat0, g),
                         make_forcing(c.forcing),
                         c.nu,
                         CutoffSystem(c.control_support, c.inner),
                         c.n_cycles,
                         c.dt,
                         {}};
  const ControlledRun run = build_controlled_trajectory(p);
  const std::vector<double> errors = cycle_errors(run);
  const DecayFit fit = fit_decay(errors);

  r.results["theta"] = fit.theta;
  r.results["gamma"] = fit.gamma;
  r.results["C"] = fit.C;
  r.results["zero_error"] = fit.zero_error;
  r.results["short_circuited"] = run.short_circuited;
  r.results["cycle_errors"] = errors;
  r.results["zeta_h1_per_cycle"] = zeta_h1_per_cycle(run);
  oj cycles = oj::array();
  for (const CycleRecord& rec : run.cycles)
    cycles.push_back({{"k", rec.k},
                      {"kind", to_string(rec.kind)},
                      {"l1_start", rec.l1_start},
                      {"l1_end", rec.l1_end},
                      {"ratio", rec.ratio()}});
  r.results["cycles"] = std::move(cycles);

  check(r, "theta_below_max", fit.zero_error || fit.theta < c.tolerances.theta_max,
        "theta = " + fmt(fit.theta) + ", limit " + fmt(c.tolerances.theta_max));
  check(r, "gamma_positive", fit.stabilised(), "gamma = " + fmt(fit.gamma));

  r.files.emplace_back("cycles.csv", capture([&](std::ostream& os) { write_cycles_csv(os, run.cycles); }));
  if (c.output.fields)
    r.files.emplace_back("fields.csv", capture([&](std::ostream& os) { write_csv(os, run.u); }));
}

void run_dichotomy(const ScenarioConfig& c, RunReport& r) {
  const EnsembleSpec spec = ensemble_spec(c, false);
  const DichotomyReport d = ensemble_dichotomy(random_ensemble(spec), probe_settings(c), c.inner,
                                               spec.rho, c.ensemble.q, c.ensemble.eps);
  std::size_t covered = 0;
  for (const DichotomyVerdict& v : d.verdicts)
    if (v.q_side <= d.q_star || v.mass_side >= d.eps_star) ++covered;
  oj frontier = oj::array();
  for (const FrontierPoint& p : d.frontier) frontier.push_back({p.q, p.eps});

  r.results["n"] = d.verdicts.size();
  r.results["q"] = d.q;
  r.results["eps"] = d.eps;
  r.results["uncovered_fraction"] = d.uncovered_fraction;
  r.results["q_star"] = d.q_star;
  r.results["eps_star"] = d.eps_star;
  r.results["frontier"] = std::move(frontier);

  check(r, "q_star_below_one", d.q_star < 1.0, "q* = " + fmt(d.q_star));
  check(r, "eps_star_positive", d.eps_star > 0.0, "eps* = " + fmt(d.eps_star));
  check(r, "frontier_coverage", covered == d.verdicts.size(),
        std::to_string(covered) + " of " + std::to_string(d.verdicts.size()) + " covered");
  r.files.emplace_back("dichotomy.csv",
                       capture([&](std::ostream& os) { write_dichotomy_csv(os, d.verdicts); }));
}

void run_harnack(const ScenarioConfig& c, RunReport& r) {
  const EnsembleSpec spec = ensemble_spec(c, true);
  const ProbeSettings ps = probe_settings(c);
  double C_emp = 0.0, M_emp = 0.0;
  try {
    for (int i = 0; i < spec.n; ++i) {
      const LinearScenario s = ensemble_member(spec, i);
      C_emp = std::max(C_emp, harnack_probe(s, ps, c.harnack.K, c.harnack.tau).ratio);
      M_emp = std::max(M_emp, sup_bound_probe(s, ps, c.harnack.tau));
    }
  } catch (const PositivityViolation& e) {
    check(r, "positivity", false, e.what());
    return;
  }
  r.results["n"] = spec.n;
  r.results["K"] = interval_json(c.harnack.K);
  r.results["tau"] = c.harnack.tau;
  r.results["C_emp"] = C_emp;
  r.results["M_emp"] = M_emp;
  check(r, "positivity", true, "inf over K of w(T) > 0 for every member");
  check(r, "finite_constants", std::isfinite(C_emp) && std::isfinite(M_emp) && C_emp >= 1.0,
        "C_emp = " + fmt(C_emp) + ", M_emp = " + fmt(M_emp));
}

void run_barrier(const ScenarioConfig& c, RunReport& r) {
  const Grid g(c.n_cells);
  const Field shape = make_initial(c.u0, g);
  const double peak = norm_linf(shape);
  if (!(peak > 0.0)) throw PreconditionError("barrier: u0 must not vanish");
  const SpaceTimeFn h = make_forcing(c.forcing);
  const double h_inf = sup_norm(c.forcing);
  const double limit = global_bound_limit(h_inf, c.t_end);

  bool ordered = true;
  double worst_residual = 0.0;
  double linf_final_max = 0.0;
  oj runs = oj::array();
  for (double L : c.barrier.amplitudes) {
    const Trajectory u = solve_burgers({.nu = c.nu, .forcing = h, .control = {},
                                        .u0 = shape.scaled(L / peak), .t_start = 0.0,
                                        .t_end = c.t_end, .dt = c.dt});
    const Barrier up = Barrier::global_super(c.nu, h_inf, c.t_end, L, c.barrier.eps);
    const Barrier down = Barrier::global_sub(c.nu, h_inf, c.t_end, L, c.barrier.eps);
    const ComparisonReport cu = comparison_check(&up, &u, {0.0, 1.0}, c.t_end, c.tolerances.comparison);
    const ComparisonReport cl = comparison_check(&u, &down, {0.0, 1.0}, c.t_end, c.tolerances.comparison);
    const ResidualLattice lat = refined_lattice(g, u.dt(), {0.0, 1.0}, 0.0, c.t_end);
    worst_residual = std::min({worst_residual, check_supersolution(up, h, lat),
                               -check_subsolution(down, h, lat)});
    ordered = ordered && cu.passed() && cl.passed();
    const double lf = norm_linf(u.back());
    linf_final_max = std::max(linf_final_max, lf);
    runs.push_back({{"L", L},
                    {"linf_final", lf},
                    {"upper_violation", cu.max_violation},
                    {"lower_violation", cl.max_violation},
                    {"tol", std::max(cu.tol, cl.tol)}});
  }
  r.results["h_inf"] = h_inf;
  r.results["eps"] = c.barrier.eps;
  r.results["bound_limit"] = limit;
  r.results["linf_final_max"] = linf_final_max;
  r.results["min_barrier_residual"] = worst_residual;
  r.results["runs"] = std::move(runs);

  check(r, "barrier_residual", worst_residual >= -1e-10,
        "min over lattice of the signed barrier residual = " + fmt(worst_residual));
  check(r, "barrier_ordering", ordered, "sub <= u <= super on every frame");
  check(r, "bound_limit", linf_final_max <= limit + c.tolerances.bound,
        "max ||u(T)||_inf = " + fmt(linf_final_max) + ", limit " + fmt(limit));
}

void run_noncontrol(const ScenarioConfig& c, RunReport& r) {
  const auto& nc = c.noncontrol;
  const Grid g(c.n_cells);
  NoncontrolSetup s;
  s.T = c.t_end;
  s.delta = nc.delta;
  s.a = nc.a;
  s.nu = c.nu;
  s.forcing = make_forcing(c.forcing);
  s.h_inf = sup_norm(c.forcing);
  s.dt = c.dt;
  s.R = nc.R;
  s.eps = nc.eps;
  std::mt19937_64 rng = stream_rng(c.seed, 2);
  for (double amp : nc.control_amplitudes)
    s.controls.push_back(random_localized_control(rng, nc.control_support, s.T, amp));
  for (double amp : nc.data_amplitudes) {
    s.initial_data.push_back(
        Field::sample_dirichlet(g, [amp](double x) { return amp * std::sin(std::numbers::pi * x); }));
    const Field f = random_fourier_field(g, rng, 8, 1.0);
    s.initial_data.push_back(f.scaled(amp / norm_linf(f)));
  }
  const NoncontrolReport rep = non_controllability_experiment(s);

  r.results["T0"] = s.T;
  r.results["delta"] = s.delta;
  r.results["a"] = s.a;
  r.results["nu"] = s.nu;
  r.results["rho_emp"] = rep.rho_emp;
  r.results["rho_formula"] = rep.rho_formula;
  r.results["n_runs"] = rep.n_runs;
  r.results["seed"] = c.seed;
  r.results["linf_emp"] = rep.linf_emp;
  r.results["lambda"] = rep.lambda;
  r.results["min_target_distance"] = rep.min_target_distance;
  r.results["max_barrier_violation"] = rep.max_barrier_violation;

  check(r, "rho_bound", rep.rho_emp <= rep.rho_formula,
        "rho_emp = " + fmt(rep.rho_emp) + ", formula " + fmt(rep.rho_formula));
  check(r, "target_distance", rep.min_target_distance >= s.R,
        "min L2 distance " + fmt(rep.min_target_distance) + ", R = " + fmt(s.R));
  check(r, "left_barrier", rep.barrier_ok,
        "max violation " + fmt(rep.max_barrier_violation));
}

void run_contraction(const ScenarioConfig& c, RunReport& r) {
  const Grid g(c.n_cells);
  const SpaceTimeFn h = make_forcing(c.forcing);
  const double slack = c.tolerances.contraction_slack;
  std::mt19937_64 rng = stream_rng(c.seed, 3);
  double worst_pair = 0.0, worst_linear = 0.0;
  int pair_failures = 0, linear_failures = 0;
  for (int i = 0; i < c.ensemble.n; ++i) {
    auto solve = [&](const Field& u0) {
      return solve_burgers({.nu = c.nu, .forcing = h, .control = {}, .u0 = u0, .t_start = 0.0,
                            .t_end = c.t_end, .dt = c.dt});
    };
    const Trajectory u = solve(random_fourier_field(g, rng, 8, c.ensemble.amp));
    const Trajectory v = solve(random_fourier_field(g, rng, 8, c.ensemble.amp));
    const double inc = max_l1_increase(u, v);
    worst_pair = std::max(worst_pair, inc);
    if (inc > slack) ++pair_failures;
  }
  const EnsembleSpec spec = ensemble_spec(c, false);
  for (int i = 0; i < spec.n; ++i) {
    const LinearScenario s = ensemble_member(spec, i);
    const Trajectory w = solve_linear({.nu = c.nu, .coeff = s.coeff, .initial = s.w0,
                                       .direction = Direction::kForward, .t_start = 0.0,
                                       .t_end = c.t_end, .dt = s.coeff.dt()});
    const double inc = max_l1_increase(w);
    worst_linear = std::max(worst_linear, inc);
    if (inc > slack) ++linear_failures;
  }
  r.results["n"] = c.ensemble.n;
  r.results["max_increase_nonlinear"] = worst_pair;
  r.results["max_increase_linear"] = worst_linear;
  r.results["failures_nonlinear"] = pair_failures;
  r.results["failures_linear"] = linear_failures;
  check(r, "l1_contraction_nonlinear", pair_failures == 0,
        std::to_string(pair_failures) + " pairs with an L1 increase above " + fmt(slack));
  check(r, "l1_contraction_linear", linear_failures == 0,
        std::to_string(linear_failures) + " linear runs with an L1 increase above " + fmt(slack));
}

}  // namespace

std::string to_string(RunStatus status) {
  switch (status) {
    case RunStatus::kOk: return "ok";
    case RunStatus::kError: return "error";
    case RunStatus::kInvariantFailure: return "invariant_failure";
  }
  return "unknown";
}

std::string version_stamp() { return std::string("burgers ") + BURGERS_VERSION; }

RunReport run(const ScenarioConfig& cfg) {
  RunReport r;
  r.config = cfg;
  const auto start = std::chrono::steady_clock::now();
  try {
    switch (cfg.experiment) {
      case ExperimentKind::kSimulate: run_simulate(cfg, r); break;
      case ExperimentKind::kStabilize: run_stabilize(cfg, r); break;
      case ExperimentKind::kDichotomy: run_dichotomy(cfg, r); break;
      case ExperimentKind::kHarnack: run_harnack(cfg, r); break;
      case ExperimentKind::kBarrier: run_barrier(cfg, r); break;
      case ExperimentKind::kNoncontrol: run_noncontrol(cfg, r); break;
      case ExperimentKind::kContraction: run_contraction(cfg, r); break;
    }
    const bool all_passed = std::all_of(r.invariants.begin(), r.invariants.end(),
                                        [](const InvariantCheck& c) { return c.passed; });
    r.status = all_passed ? RunStatus::kOk : RunStatus::kInvariantFailure;
  } catch (const SolverError& e) {
    r.status = RunStatus::kError;
    r.error = std::string("solver error at t=") + fmt(e.time()) + ": " + e.what();
  } catch (const std::exception& e) {
    r.status = RunStatus::kError;
    r.error = e.what();
  }
  r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

oj report_json(const RunReport& r) {
  oj j;
  j["version"] = version_stamp();
  j["experiment"] = to_string(r.config.experiment);
  j["status"] = to_string(r.status);
  j["exit_code"] = r.exit_code();
  if (!r.error.empty()) j["error"] = r.error;
  j["config"] = to_json(r.config);
  j["results"] = r.results;
  oj inv = oj::array();
  for (const InvariantCheck& c : r.invariants)
    inv.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  j["invariants"] = std::move(inv);
  j["wall_time"] = r.wall_time;
  return j;
}

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << text;
}

}  // namespace

void write_artifacts(const RunReport& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_text(dir / "report.json", report_json(r).dump(2) + "\n");
  for (const auto& [name, contents] : r.files) write_text(dir / name, contents);
}

SweepPlan parse_sweep(const json& j, const json& patch) {
  if (!j.is_object()) throw ConfigError({"sweep: expected an object"});
  std::vector<std::string> errors;
  for (const auto& [key, value] : j.items())
    if (key != "runs" && key != "base" && key != "vary" && key != "parallelism")
      errors.push_back(key + ": unknown key");

  SweepPlan plan;
  if (j.contains("parallelism")) {
    const json& p = j.at("parallelism");
    if (!p.is_number_integer() || p.get<std::int64_t>() < 0)
      errors.push_back("parallelism: expected a non-negative integer");
    else
      plan.parallelism = p.get<int>();
  }

  std::vector<json> raw;
  if (j.contains("runs")) {
    if (j.contains("base") || j.contains("vary")) errors.push_back("runs: cannot be combined with base/vary");
    if (!j.at("runs").is_array()) {
      errors.push_back("runs: expected an array of configs");
    } else {
      for (std::size_t i = 0; i < j.at("runs").size(); ++i) {
        raw.push_back(j.at("runs")[i]);
        plan.labels.push_back({{"index", i}});
      }
    }
  } else if (j.contains("base")) {
    const json& base = j.at("base");
    const json vary = j.value("vary", json::object());
    if (!vary.is_object()) errors.push_back("vary: expected an object of arrays");
    struct Axis {
      std::string name;
      std::string ptr;
      std::vector<json> values;
    };
    std::vector<Axis> axes;
    if (vary.is_object())
      for (const auto& [key, values] : vary.items()) {
        if (!values.is_array()) {
          errors.push_back("vary." + key + ": expected an array");
          continue;
        }
        axes.push_back({key, key.starts_with('/') ? key : "/" + key,
                        std::vector<json>(values.begin(), values.end())});
      }
    std::size_t total = 1;
    for (const auto& axis : axes) total *= axis.values.size();
    for (std::size_t n = 0; n < total && errors.empty(); ++n) {
      json cfg = base;
      oj label;
      std::size_t rest = n;
      for (std::size_t a = axes.size(); a-- > 0;) {
        const Axis& axis = axes[a];
        const json& v = axis.values[rest % axis.values.size()];
        rest /= axis.values.size();
        try {
          cfg[json::json_pointer(axis.ptr)] = v;
        } catch (const json::exception& e) {
          errors.push_back("vary." + axis.name + ": " + e.what());
        }
        label[axis.name] = v;
      }
      raw.push_back(std::move(cfg));
      plan.labels.push_back(std::move(label));
    }
  }

  for (std::size_t i = 0; i < raw.size(); ++i) {
    json cfg = raw[i];
    if (cfg.is_object()) cfg.merge_patch(patch);
    try {
      plan.configs.push_back(parse_config(cfg));
    } catch (const ConfigError& e) {
      for (const std::string& v : e.violations())
        errors.push_back("run " + std::to_string(i) + ": " + v);
    }
  }
  if (!errors.empty()) throw ConfigError(std::move(errors));
  return plan;
}

RunStatus SweepResult::status() const {
  RunStatus worst = RunStatus::kOk;
  for (const RunReport& r : runs) {
    if (r.status == RunStatus::kError) return RunStatus::kError;
    if (r.status == RunStatus::kInvariantFailure) worst = RunStatus::kInvariantFailure;
  }
  return worst;
}

SweepResult sweep(const SweepPlan& plan) {
  SweepResult out;
  out.labels = plan.labels;
  out.runs.resize(plan.configs.size());
  if (plan.configs.empty()) return out;
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t threads = std::min<std::size_t>(
      plan.parallelism > 0 ? static_cast<std::size_t>(plan.parallelism) : hw, plan.configs.size());
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < plan.configs.size(); i = next++)
          out.runs[i] = run(plan.configs[i]);
      });
  }
  return out;
}

oj sweep_json(const SweepResult& s) {
  oj rows = oj::array();
  for (std::size_t i = 0; i < s.runs.size(); ++i) {
    const RunReport& r = s.runs[i];
    oj summary = oj::object();
    for (const auto& [key, value] : r.results.items())
      if (value.is_primitive()) summary[key] = value;
    oj row;
    row["index"] = i;
    row["label"] = i < s.labels.size() ? s.labels[i] : oj::object();
    row["experiment"] = to_string(r.config.experiment);
    row["status"] = to_string(r.status);
    row["exit_code"] = r.exit_code();
    if (!r.error.empty()) row["error"] = r.error;
    row["results"] = std::move(summary);
    rows.push_back(std::move(row));
  }
  oj j;
  j["version"] = version_stamp();
  j["n_runs"] = s.runs.size();
  j["status"] = to_string(s.status());
  j["exit_code"] = static_cast<int>(s.status());
  j["runs"] = std::move(rows);
  return j;
}

void write_sweep(const SweepResult& s, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (std::size_t i = 0; i < s.runs.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "run_%03zu", i);
    write_artifacts(s.runs[i], dir / name);
  }
  write_text(dir / "sweep.json", sweep_json(s).dump(2) + "\n");
}

}  // namespace burgers
