#include "burgers/config.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "burgers/control.hpp"
#include "burgers/random_fields.hpp"

namespace burgers {

using nlohmann::json;
using std::numbers::pi;

namespace {

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const std::string& p : parts) out += (out.empty() ? "" : "; ") + p;
  return out;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

// Walks one JSON object, records type errors and unknown keys under a dotted path.
class Reader {
 public:
  Reader(const json& obj, std::string path, std::vector<std::string>& errors)
      : obj_(obj), path_(std::move(path)), errors_(errors) {
    if (!obj_.is_object()) fail("", "expected an object");
  }

  bool has(const std::string& key) const { return obj_.is_object() && obj_.contains(key); }

  void number(const std::string& key, double& out) {
    const json* v = take(key);
    if (!v) return;
    if (!v->is_number()) return fail(key, "expected a number");
    out = v->get<double>();
    if (!std::isfinite(out)) fail(key, "must be finite");
  }

  void integer(const std::string& key, int& out) {
    const json* v = take(key);
    if (!v) return;
    if (!v->is_number_integer()) return fail(key, "expected an integer");
    out = v->get<int>();
  }

  void seed(const std::string& key, std::uint64_t& out) {
    const json* v = take(key);
    if (!v) return;
    if (!v->is_number_integer() || (!v->is_number_unsigned() && v->get<std::int64_t>() < 0))
      return fail(key, "expected a non-negative integer");
    out = v->get<std::uint64_t>();
  }

  void boolean(const std::string& key, bool& out) {
    const json* v = take(key);
    if (!v) return;
    if (!v->is_boolean()) return fail(key, "expected true or false");
    out = v->get<bool>();
  }

  void string(const std::string& key, std::string& out) {
    const json* v = take(key);
    if (!v) return;
    if (!v->is_string()) return fail(key, "expected a string");
    out = v->get<std::string>();
  }

  void interval(const std::string& key, Interval& out) {
    const json* v = take(key);
    if (!v) return;
    if (!v->is_array() || v->size() != 2 || !(*v)[0].is_number() || !(*v)[1].is_number())
      return fail(key, "expected [lo, hi]");
    out = {(*v)[0].get<double>(), (*v)[1].get<double>()};
  }

  void numbers(const std::string& key, std::vector<double>& out) {
    const json* v = take(key);
    if (!v) return;
    if (!v->is_array()) return fail(key, "expected an array of numbers");
    std::vector<double> tmp;
    for (const json& e : *v) {
      if (!e.is_number()) return fail(key, "expected an array of numbers");
      tmp.push_back(e.get<double>());
    }
    out = std::move(tmp);
  }

  /// Nested section; nullopt when absent or not an object (the latter is reported).
  std::optional<Reader> section(const std::string& key) {
    const json* v = take(key);
    if (!v) return std::nullopt;
    if (!v->is_object()) {
      fail(key, "expected an object");
      return std::nullopt;
    }
    return Reader(*v, name(key), errors_);
  }

  void finish() const {
    if (!obj_.is_object()) return;
    for (const auto& [key, value] : obj_.items())
      if (!seen_.contains(key)) errors_.push_back(name(key) + ": unknown key");
  }

  void fail(const std::string& key, const std::string& what) const {
    errors_.push_back((key.empty() ? path_ : name(key)) + ": " + what);
  }

  std::string name(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

 private:
  const json* take(const std::string& key) {
    seen_.insert(key);
    if (!obj_.is_object() || !obj_.contains(key)) return nullptr;
    return &obj_.at(key);
  }

  const json& obj_;
  std::string path_;
  std::vector<std::string>& errors_;
  std::set<std::string> seen_;
};

void apply_preset(const std::string& name, ScenarioConfig& cfg, std::vector<std::string>& errors) {
  if (name == "paper-demo") {
    cfg.experiment = ExperimentKind::kStabilize;
    cfg.nu = 0.1;
    cfg.n_cycles = 10;
    cfg.control_support = {0.3, 0.7};
    cfg.forcing = {"sine", 2, 0.5, 1.0};
    cfg.u0 = {"sine", 1, 0.8};
    cfg.u_hat0 = {"sine", 3, -0.5};
  } else if (name == "non-controllability" || name == "noncontrol") {
    cfg.experiment = ExperimentKind::kNoncontrol;
    cfg.nu = 0.1;
    cfg.t_end = 1.0;
    cfg.forcing = {};
    cfg.noncontrol = ScenarioConfig::Noncontrol{};
  } else {
    errors.push_back("preset: unknown preset '" + name +
                     "' (known: paper-demo, non-controllability)");
  }
}

void read_forcing(Reader& r, ForcingSpec& f) {
  r.string("preset", f.preset);
  r.integer("k", f.k);
  r.number("amp", f.amp);
  r.number("omega", f.omega);
  r.finish();
  if (f.preset != "zero" && f.preset != "sine" && f.preset != "sine-cos")
    r.fail("preset", "unknown forcing preset '" + f.preset + "' (known: zero, sine, sine-cos)");
  if (f.k < 1) r.fail("k", "must be >= 1");
}

void read_initial(Reader& r, InitialSpec& s, bool& seed_given) {
  r.string("preset", s.preset);
  r.integer("k", s.k);
  r.number("amp", s.amp);
  seed_given = r.has("seed");
  r.seed("seed", s.seed);
  r.integer("n_modes", s.n_modes);
  r.finish();
  if (s.preset != "sine" && s.preset != "random-fourier" && s.preset != "constant-clip")
    r.fail("preset",
           "unknown initial data preset '" + s.preset + "' (known: sine, random-fourier, constant-clip)");
  if (s.k < 1) r.fail("k", "must be >= 1");
  if (s.n_modes < 1) r.fail("n_modes", "must be >= 1");
}

std::uint64_t derived_seed(std::uint64_t seed, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    stream};
  std::mt19937_64 rng(seq);
  return rng();
}

bool check_unit_interval(const Interval& iv, const std::string& key,
                         std::vector<std::string>& errors) {
  if (!(iv.lo < iv.hi)) {
    errors.push_back(key + ": " + key + " reversed (lo=" + fmt(iv.lo) + " must be < hi=" +
                     fmt(iv.hi) + ")");
    return false;
  }
  if (!(iv.lo > 0.0 && iv.hi < 1.0)) {
    errors.push_back(key + ": must lie strictly inside (0, 1)");
    return false;
  }
  return true;
}

void validate(const ScenarioConfig& c, std::vector<std::string>& e) {
  auto positive = [&e](double v, const std::string& key) {
    if (!(v > 0.0)) e.push_back(key + ": must be positive");
  };
  positive(c.nu, "nu");
  positive(c.t_end, "t_end");
  positive(c.dt, "grid.dt");
  if (c.n_cells < 4) e.push_back("grid.n_cells: must be >= 4");
  if (c.n_cycles < 1) e.push_back("n_cycles: must be >= 1");

  if (check_unit_interval(c.control_support, "control_support", e)) {
    if (c.inner.lo >= c.inner.hi)
      e.push_back("inner: inner reversed (lo=" + fmt(c.inner.lo) + " must be < hi=" +
                  fmt(c.inner.hi) + ")");
    else if (!(c.control_support.lo < c.inner.lo && c.inner.hi < c.control_support.hi))
      e.push_back("inner: must lie strictly inside control_support");
  }

  positive(c.ensemble.rho, "ensemble.rho");
  positive(c.ensemble.q, "ensemble.q");
  positive(c.ensemble.eps, "ensemble.eps");
  positive(c.ensemble.amp, "ensemble.amp");
  if (c.ensemble.n < 1) e.push_back("ensemble.n: must be >= 1");

  check_unit_interval(c.harnack.K, "harnack.K", e);
  if (c.harnack.tau < 0.0 || c.harnack.tau >= c.t_end)
    e.push_back("harnack.tau: need 0 <= tau < t_end (0 selects 2 t_end / 3)");

  positive(c.barrier.eps, "barrier.eps");
  if (c.barrier.amplitudes.empty()) e.push_back("barrier.amplitudes: must not be empty");
  for (double a : c.barrier.amplitudes)
    if (!(a > 0.0)) e.push_back("barrier.amplitudes: entries must be positive");

  const auto& n = c.noncontrol;
  check_unit_interval(n.control_support, "noncontrol.control_support", e);
  if (!(0.0 < n.delta && n.delta < n.a))
    e.push_back("noncontrol.delta: need 0 < delta < a");
  if (!(n.a < 1.0)) e.push_back("noncontrol.a: must be < 1");
  if (n.control_support.lo < n.a)
    e.push_back("noncontrol.control_support: must lie to the right of a");
  positive(n.R, "noncontrol.R");
  positive(n.eps, "noncontrol.eps");
  if (n.control_amplitudes.empty()) e.push_back("noncontrol.control_amplitudes: must not be empty");
  if (n.data_amplitudes.empty()) e.push_back("noncontrol.data_amplitudes: must not be empty");

  const auto& t = c.tolerances;
  if (!(t.theta_max > 0.0 && t.theta_max <= 1.0))
    e.push_back("tolerances.theta_max: need 0 < theta_max <= 1");
  positive(t.max_principle, "tolerances.max_principle");
  positive(t.contraction_slack, "tolerances.contraction_slack");
  positive(t.comparison, "tolerances.comparison");
  positive(t.bound, "tolerances.bound");

  if (c.experiment == ExperimentKind::kStabilize && c.n_cycles < 3)
    e.push_back("n_cycles: stabilize needs at least 3 cycles for the decay fit");
  if (c.output.dir.empty()) e.push_back("output.dir: must not be empty");
}

json interval_json(const Interval& iv) { return json::array({iv.lo, iv.hi}); }

}  // namespace

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kSimulate: return "simulate";
    case ExperimentKind::kStabilize: return "stabilize";
    case ExperimentKind::kDichotomy: return "dichotomy";
    case ExperimentKind::kHarnack: return "harnack";
    case ExperimentKind::kBarrier: return "barrier";
    case ExperimentKind::kNoncontrol: return "noncontrol";
    case ExperimentKind::kContraction: return "contraction";
  }
  return "unknown";
}

std::optional<ExperimentKind> parse_experiment(std::string_view name) {
  for (ExperimentKind k :
       {ExperimentKind::kSimulate, ExperimentKind::kStabilize, ExperimentKind::kDichotomy,
        ExperimentKind::kHarnack, ExperimentKind::kBarrier, ExperimentKind::kNoncontrol,
        ExperimentKind::kContraction})
    if (name == to_string(k)) return k;
  if (name == "non-controllability") return ExperimentKind::kNoncontrol;
  return std::nullopt;
}

double sup_norm(const ForcingSpec& spec) {
  return spec.preset == "zero" ? 0.0 : std::abs(spec.amp);
}

SpaceTimeFn make_forcing(const ForcingSpec& spec) {
  const double amp = spec.amp, k = spec.k, omega = spec.omega;
  if (spec.preset == "sine")
    return [amp, k](double, double x) { return amp * std::sin(k * pi * x); };
  if (spec.preset == "sine-cos")
    return [amp, k, omega](double t, double x) {
      return amp * std::sin(k * pi * x) * std::cos(omega * pi * t);
    };
  return {};
}

Field make_initial(const InitialSpec& spec, const Grid& grid) {
  if (spec.preset == "random-fourier") {
    std::mt19937_64 rng(spec.seed);
    return random_fourier_field(grid, rng, spec.n_modes, spec.amp);
  }
  if (spec.preset == "constant-clip") {
    const double amp = spec.amp;
    return Field::sample_dirichlet(grid, [amp](double) { return amp; });
  }
  const double amp = spec.amp, k = spec.k;
  return Field::sample_dirichlet(grid, [amp, k](double x) { return amp * std::sin(k * pi * x); });
}

ConfigError::ConfigError(std::vector<std::string> violations)
    : std::invalid_argument("invalid config: " + join(violations)),
      violations_(std::move(violations)) {}

ScenarioConfig parse_config(const json& j) {
  std::vector<std::string> errors;
  ScenarioConfig c;
  Reader r(j, "", errors);
  if (!j.is_object()) throw ConfigError(errors);

  r.string("preset", c.preset);
  if (!c.preset.empty()) apply_preset(c.preset, c, errors);

  const bool kind_from_preset = !c.preset.empty() && errors.empty();
  if (r.has("experiment")) {
    std::string name;
    r.string("experiment", name);
    if (auto k = parse_experiment(name))
      c.experiment = *k;
    else if (!name.empty() || j.at("experiment").is_string())
      errors.push_back("experiment: unknown experiment '" + name + "'");
  } else if (!kind_from_preset) {
    errors.push_back("experiment: required (or give a preset)");
  }

  r.number("nu", c.nu);
  r.number("t_end", c.t_end);
  r.integer("n_cycles", c.n_cycles);
  r.seed("seed", c.seed);

  bool dt_given = false;
  if (auto g = r.section("grid")) {
    g->integer("n_cells", c.n_cells);
    dt_given = g->has("dt");
    g->number("dt", c.dt);
    g->finish();
  }
  if (!dt_given && c.n_cells > 0) c.dt = 1.0 / c.n_cells;

  r.interval("control_support", c.control_support);
  const bool inner_given = r.has("inner");
  r.interval("inner", c.inner);
  if (!inner_given) c.inner = middle_half(c.control_support);

  if (auto f = r.section("forcing")) read_forcing(*f, c.forcing);
  bool u0_seed = false, u_hat0_seed = false;
  if (auto s = r.section("u0")) read_initial(*s, c.u0, u0_seed);
  if (auto s = r.section("u_hat0")) read_initial(*s, c.u_hat0, u_hat0_seed);
  if (!u0_seed) c.u0.seed = derived_seed(c.seed, 0);
  if (!u_hat0_seed) c.u_hat0.seed = derived_seed(c.seed, 1);

  if (auto s = r.section("ensemble")) {
    s->integer("n", c.ensemble.n);
    s->number("rho", c.ensemble.rho);
    s->number("q", c.ensemble.q);
    s->number("eps", c.ensemble.eps);
    s->number("amp", c.ensemble.amp);
    s->finish();
  }
  if (auto s = r.section("harnack")) {
    s->interval("K", c.harnack.K);
    s->number("tau", c.harnack.tau);
    s->finish();
  }
  if (c.harnack.tau == 0.0) c.harnack.tau = 2.0 * c.t_end / 3.0;
  if (auto s = r.section("barrier")) {
    s->number("eps", c.barrier.eps);
    s->numbers("amplitudes", c.barrier.amplitudes);
    s->finish();
  }
  if (auto s = r.section("noncontrol")) {
    auto& n = c.noncontrol;
    s->number("delta", n.delta);
    s->number("a", n.a);
    s->number("R", n.R);
    s->number("eps", n.eps);
    s->interval("control_support", n.control_support);
    s->numbers("control_amplitudes", n.control_amplitudes);
    s->numbers("data_amplitudes", n.data_amplitudes);
    s->finish();
  }
  if (auto s = r.section("tolerances")) {
    auto& t = c.tolerances;
    s->number("theta_max", t.theta_max);
    s->number("max_principle", t.max_principle);
    s->number("contraction_slack", t.contraction_slack);
    s->number("comparison", t.comparison);
    s->number("bound", t.bound);
    s->finish();
  }
  if (auto s = r.section("output")) {
    s->string("dir", c.output.dir);
    s->boolean("fields", c.output.fields);
    s->finish();
  }
  r.finish();

  validate(c, errors);
  if (!errors.empty()) throw ConfigError(std::move(errors));
  return c;
}

ScenarioConfig parse_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError({std::string("config is not valid JSON: ") + e.what()});
  }
  return parse_config(j);
}

nlohmann::ordered_json to_json(const ScenarioConfig& c) {
  using oj = nlohmann::ordered_json;
  auto initial = [](const InitialSpec& s) {
    return oj{{"preset", s.preset}, {"k", s.k}, {"amp", s.amp}, {"seed", s.seed},
              {"n_modes", s.n_modes}};
  };
  oj j;
  j["experiment"] = to_string(c.experiment);
  j["preset"] = c.preset;
  j["nu"] = c.nu;
  j["t_end"] = c.t_end;
  j["n_cycles"] = c.n_cycles;
  j["seed"] = c.seed;
  j["grid"] = oj{{"n_cells", c.n_cells}, {"dt", c.dt}};
  j["control_support"] = interval_json(c.control_support);
  j["inner"] = interval_json(c.inner);
  j["forcing"] = oj{{"preset", c.forcing.preset}, {"k", c.forcing.k}, {"amp", c.forcing.amp},
                    {"omega", c.forcing.omega}};
  j["u0"] = initial(c.u0);
  j["u_hat0"] = initial(c.u_hat0);
  j["ensemble"] = oj{{"n", c.ensemble.n}, {"rho", c.ensemble.rho}, {"q", c.ensemble.q},
                     {"eps", c.ensemble.eps}, {"amp", c.ensemble.amp}};
  j["harnack"] = oj{{"K", interval_json(c.harnack.K)}, {"tau", c.harnack.tau}};
  j["barrier"] = oj{{"eps", c.barrier.eps}, {"amplitudes", c.barrier.amplitudes}};
  const auto& n = c.noncontrol;
  j["noncontrol"] = oj{{"delta", n.delta},
                       {"a", n.a},
                       {"R", n.R},
                       {"eps", n.eps},
                       {"control_support", interval_json(n.control_support)},
                       {"control_amplitudes", n.control_amplitudes},
                       {"data_amplitudes", n.data_amplitudes}};
  const auto& t = c.tolerances;
  j["tolerances"] = oj{{"theta_max", t.theta_max},
                       {"max_principle", t.max_principle},
                       {"contraction_slack", t.contraction_slack},
                       {"comparison", t.comparison},
                       {"bound", t.bound}};
  j["output"] = oj{{"dir", c.output.dir}, {"fields", c.output.fields}};
  return j;
}

}  // namespace burgers
