// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "burgers/analysis.hpp"
#include "burgers/barriers.hpp"
#include "burgers/control.hpp"
#include "burgers/random_fields.hpp"
#include "burgers/solver.hpp"

using namespace burgers;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

template <class... Args>
std::string str(const Args&... args) {
  std::ostringstream os;
  os << std::setprecision(4);
  (os << ... << args);
  return os.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Field sine(const Grid& g, double amp) {
  return Field::sample_dirichlet(g, [amp](double x) { return amp * std::sin(pi * x); });
}

Field scaled_to(const Field& f, double amp) { return f.scaled(amp / norm_linf(f)); }

double sampled_sup(const SpaceTimeFn& h, const Grid& g, double T, int nt) {
  double m = 0.0;
  for (int j = 0; j <= nt; ++j)
    for (std::size_t i = 0; i < g.n_nodes(); ++i) m = std::max(m, std::abs(h(T * j / nt, g.x(i))));
  return m;
}

Trajectory burgers_run(const Field& u0, const SpaceTimeFn& h, const SpaceTimeFn& zeta, double T,
                       double dt) {
  return solve_burgers({.nu = 0.1, .forcing = h, .control = zeta, .u0 = u0, .t_start = 0.0,
                        .t_end = T, .dt = dt});
}

// 1. Manufactured solution e^{-t} sin(pi x), joint (dx, dt) halving.
Outcome manufactured_convergence() {
  const auto t0 = std::chrono::steady_clock::now();
  const double nu = 0.1;
  auto exact = [](double t, double x) { return std::exp(-t) * std::sin(pi * x); };
  const SpaceTimeFn source = [nu](double t, double x) {
    const double e = std::exp(-t), s = std::sin(pi * x), c = std::cos(pi * x);
    return -e * s + nu * pi * pi * e * s + e * s * e * pi * c;
  };
  std::vector<double> err;
  for (int n : {64, 128, 256, 512}) {
    const Grid g(n);
    const Trajectory u = solve_burgers({.nu = nu, .forcing = source, .control = {},
                                        .u0 = Field::sample_dirichlet(g, [&](double x) { return exact(0, x); }),
                                        .t_start = 0.0, .t_end = 1.0, .dt = g.dx()});
    double e = 0.0;
    for (std::size_t i = 0; i < g.n_nodes(); ++i)
      e = std::max(e, std::abs(u.back()[i] - exact(1.0, g.x(i))));
    err.push_back(e);
  }
  double min_order = 1e9;
  std::string orders;
  for (std::size_t i = 1; i < err.size(); ++i) {
    const double p = std::log2(err[i - 1] / err[i]);
    min_order = std::min(min_order, p);
    orders += str(i > 1 ? ", " : "", p);
  }
  const double elapsed = seconds_since(t0);
  return {min_order >= 1.9 && elapsed < 30.0,
          str("orders ", orders, " (need >= 1.9), ", elapsed, " s (need < 30 s)")};
}

// 2. Maximum principle over random (u0, h).
Outcome maximum_principle() {
  std::mt19937_64 rng(2002);
  std::uniform_real_distribution<double> amp(0.5, 20.0), hamp(0.0, 5.0);
  const Grid g(128);
  int failures = 0;
  double worst = -1e9;
  for (int s = 0; s < 50; ++s) {
    const Field u0 = scaled_to(random_fourier_field(g, rng, 8, 1.0), amp(rng));
    const RandomSpaceTimeSeries series(rng, 4, 2, 1.0);
    const double scale = hamp(rng);
    const SpaceTimeFn h = [series, scale](double t, double x) { return scale * series(t, x); };
    const double h_inf = sampled_sup(h, g, 1.0, 256);
    const Trajectory u = burgers_run(u0, h, {}, 1.0, g.dx());
    const double l0 = norm_linf(u0);
    bool ok = true;
    for (std::size_t k = 0; k < u.size(); ++k) {
      const double excess = norm_linf(u[k]) - (l0 + u.time(k) * h_inf + 0.02 * (1.0 + l0));
      worst = std::max(worst, excess);
      ok = ok && excess <= 0.0;
    }
    if (!ok) ++failures;
  }
  return {failures == 0, str(failures, " of 50 scenarios fail; max excess over the bound ", worst)};
}

// 3. Universal bound for large data with h = 0.
Outcome universal_bound() {
  const Grid g(256);
  double worst = 0.0;
  std::string values;
  for (double amp : {10.0, 100.0, 1000.0}) {
    const double v = norm_linf(burgers_run(sine(g, amp), {}, {}, 1.0, g.dx()).back());
    worst = std::max(worst, v);
    values += str(values.empty() ? "" : ", ", v);
  }
  return {worst <= 2.05, str("||u(1)||_inf = ", values, " (need <= 2.05, limit ",
                             global_bound_limit(0.0, 1.0), ")")};
}

// 4. L1 contraction for nonlinear pairs and for the linearised equation.
Outcome l1_contraction() {
  std::mt19937_64 rng(4004);
  const Grid g(128);
  int failures = 0;
  double worst = 0.0;
  for (int s = 0; s < 50; ++s) {
    const RandomSpaceTimeSeries series(rng, 4, 2, 1.0);
    const SpaceTimeFn h = series.as_function();
    const Trajectory u = burgers_run(random_fourier_field(g, rng, 8, 4.0), h, {}, 1.0, g.dx());
    const Trajectory v = burgers_run(random_fourier_field(g, rng, 8, 4.0), h, {}, 1.0, g.dx());
    const double inc = max_l1_increase(u, v);
    worst = std::max(worst, inc);
    if (inc > 1e-6) ++failures;
  }
  EnsembleSpec spec;
  spec.n = 50;
  spec.seed = 4005;
  double worst_linear = 0.0;
  for (int i = 0; i < spec.n; ++i) {
    const LinearScenario s = ensemble_member(spec, i);
    const Trajectory w = solve_linear({.nu = 0.1, .coeff = s.coeff, .initial = s.w0,
                                       .direction = Direction::kForward, .t_start = 0.0,
                                       .t_end = 1.0, .dt = s.coeff.dt()});
    const double inc = max_l1_increase(w);
    worst_linear = std::max(worst_linear, inc);
    if (inc > 1e-6) ++failures;
  }
  return {failures == 0, str(failures, " of 100 runs fail; max step increase ", worst,
                             " (nonlinear), ", worst_linear, " (linear)")};
}

// 5. Stabilisation over random (u0, u_hat0) pairs at n = 256.
Outcome stabilisation() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(5005);
  std::uniform_real_distribution<double> amp(0.5, 5.0);
  const int n = 256;
  const Grid g(n);
  const CutoffSystem cs({0.3, 0.7});
  double theta_emp = 0.0, min_gamma = 1e9, max_ratio = 0.0, worst_decay = 0.0;
  bool support_ok = true;
  std::vector<ControlledRun> runs;
  std::vector<DecayFit> fits;
  for (int s = 0; s < 20; ++s) {
    ControlProblem p{scaled_to(random_fourier_field(g, rng, 6, 1.0), amp(rng)),
                     scaled_to(random_fourier_field(g, rng, 6, 1.0), amp(rng)),
                     [](double, double x) { return 0.5 * std::sin(2.0 * pi * x); },
                     0.1,
                     cs,
                     10,
                     1.0 / n,
                     {}};
    ControlledRun run = build_controlled_trajectory(p);
    const DecayFit fit = fit_decay(cycle_errors(run));
    theta_emp = std::max(theta_emp, fit.theta);
    min_gamma = std::min(min_gamma, fit.gamma);
    for (const CycleRecord& c : run.cycles)
      if (c.kind == CycleKind::kControlled) max_ratio = std::max(max_ratio, c.ratio());

    for (std::size_t k = 0; k < run.zeta_cycles.size(); ++k) {
      const Trajectory& z = run.zeta_cycles[k];
      for (std::size_t j = 0; j < z.size(); ++j) {
        const bool quiet = k % 2 == 1 || z.time(j) - static_cast<double>(k) <= 0.5;
        for (std::size_t i = 0; i < g.n_nodes(); ++i)
          if ((quiet || !cs.support().contains(g.x(i))) && z[j][i] != 0.0) support_ok = false;
      }
    }
    const std::vector<double> zh1 = zeta_h1_per_cycle(run);
    for (std::size_t k = 0; k < zh1.size(); k += 2)
      worst_decay = std::max(worst_decay,
                             zh1[k] / (zh1[0] * std::pow(fit.theta, 0.5 * static_cast<double>(k))));
  }
  const double elapsed = seconds_since(t0);
  const bool pass = max_ratio <= theta_emp && theta_emp < 0.999 && min_gamma > 0.0 && support_ok &&
                    worst_decay <= 10.0 && elapsed < 300.0;
  return {pass, str("theta_emp ", theta_emp, ", max even-cycle ratio ", max_ratio, ", min gamma ",
                    min_gamma, ", zeta support ", support_ok ? "exact" : "VIOLATED",
                    ", max Z_k / (Z_0 theta^(k/2)) ", worst_decay, " (need <= 10), ", elapsed,
                    " s (need < 300 s)")};
}

// 6. Interpolation inequality over random smooth Dirichlet fields.
Outcome interpolation() {
  std::mt19937_64 rng(6006);
  std::uniform_int_distribution<int> modes(1, 12);
  std::uniform_real_distribution<double> amp(0.1, 50.0);
  const Grid g(256);
  double c3 = 0.0, worst_rel = 0.0;
  for (int s = 0; s < 200; ++s) {
    const Field f = random_fourier_field(g, rng, modes(rng), amp(rng));
    const double r = interpolation_ratio(f);
    c3 = std::max(c3, r);
    for (double lambda : {1e-3, 3.7, 1e4})
      worst_rel = std::max(worst_rel, std::abs(interpolation_ratio(f.scaled(lambda)) - r) / r);
  }
  return {std::isfinite(c3) && c3 > 0.0 && worst_rel <= 1e-10,
          str("C3_emp = ", c3, ", max relative change under scaling ", worst_rel, " (need <= 1e-10)")};
}

// 7. Harnack ratio for the heat eigenfunction and ensemble stability.
Outcome harnack() {
  const Grid g(256);
  const LinearScenario heat{constant_trajectory(Field::zeros(g), 0.0, 1.0 / 768, 768), sine(g, 1.0)};
  ProbeSettings unit;
  unit.nu = 1.0;
  const double ratio = harnack_probe(heat, unit, {0.25, 0.75}).ratio;
  const double expected = std::sqrt(2.0) * std::exp(pi * pi / 3.0);
  const double rel = std::abs(ratio - expected) / expected;

  EnsembleSpec spec;
  ProbeSettings cfg;
  spec.n_cells = 64;
  spec.dt = 1.0 / 64;
  const double coarse = harnack_sup_summary(spec, cfg, {0.25, 0.75}).C_emp;
  spec.n_cells = 128;
  spec.dt = 1.0 / 128;
  const double fine = harnack_sup_summary(spec, cfg, {0.25, 0.75}).C_emp;
  const double change = std::abs(coarse - fine) / fine;
  return {rel <= 0.01 && change <= 0.2,
          str("heat ratio ", ratio, " vs ", expected, " (rel ", rel, "), C_emp ", coarse, " -> ",
              fine, " (change ", 100 * change, "%, need <= 20%)")};
}

// 8. Dichotomy frontier for the rho = 2 ensemble.
Outcome dichotomy() {
  EnsembleSpec spec;  // rho = 2, n = 100
  ProbeSettings cfg;
  const Interval inner{0.4, 0.6};
  auto frontier = [&](std::uint64_t seed) {
    spec.seed = seed;
    return ensemble_dichotomy(random_ensemble(spec), cfg, inner, spec.rho, 0.5, 0.05);
  };
  const DichotomyReport a = frontier(1);
  const DichotomyReport b = frontier(2);
  int uncovered = 0;
  for (const DichotomyVerdict& v : a.verdicts)
    if (!(v.q_side <= a.q_star || v.mass_side >= a.eps_star)) ++uncovered;
  const double dq = std::abs(b.q_star - a.q_star) / a.q_star;
  const double de = std::abs(b.eps_star - a.eps_star) / a.eps_star;
  return {a.q_star < 1.0 && a.eps_star > 0.0 && uncovered == 0 && dq < 0.25 && de < 0.25,
          str("(q*, eps*) = (", a.q_star, ", ", a.eps_star, "), coverage ",
              100 - uncovered, "%, new seed (", b.q_star, ", ", b.eps_star, "), change ",
              100 * dq, "% / ", 100 * de, "% (need < 25%)")};
}

// 9. Non-controllability from the right of a.
Outcome non_controllability() {
  std::mt19937_64 rng(9009);
  const Grid g(256);
  NoncontrolSetup s;  // T = 1, delta = 0.25, a = 0.5, nu = 0.1, dt = 1/256, R = 10
  for (double amp : {1000.0, -1000.0, 300.0, -300.0, 100.0, -100.0, 30.0, -30.0, 10.0, -10.0})
    s.controls.push_back(random_localized_control(rng, {0.5, 0.8}, s.T, amp));
  for (double amp : {10.0, 100.0, 1000.0}) {
    s.initial_data.push_back(sine(g, amp));
    s.initial_data.push_back(sine(g, -amp));
    s.initial_data.push_back(scaled_to(random_fourier_field(g, rng, 8, 1.0), amp));
  }
  const NoncontrolReport r = non_controllability_experiment(s);
  return {r.rho_emp <= 21.2 + 0.5 && r.min_target_distance >= s.R,
          str("rho_emp ", r.rho_emp, " (formula ", r.rho_formula, ", need <= 21.7), min L2 distance ",
              r.min_target_distance, " (need >= ", s.R, "), ", r.n_runs, " runs, two-sided sup ",
              r.linf_emp)};
}

// 10. Duality pairing drift for a random coefficient.
Outcome duality_drift() {
  std::mt19937_64 rng(1010);
  const Grid g(256);
  const RandomSpaceTimeSeries series(rng, 6, 3, 1.0);
  const double peak = sampled_sup(series.as_function(), g, 1.0, 256);
  const SpaceTimeFn a = [series, peak](double t, double x) { return 2.0 * series(t, x) / peak; };
  const Field w0 = random_fourier_field(g, rng, 6, 1.0);
  const Field z0 = random_fourier_field(g, rng, 6, 1.0);
  auto drift = [&](double dt) {
    const Trajectory coeff = sample_trajectory(g, a, 0.0, dt, step_count(0.0, 1.0, dt));
    const Trajectory w = solve_linear({.nu = 0.1, .coeff = coeff, .initial = w0,
                                       .direction = Direction::kForward, .t_start = 0.0,
                                       .t_end = 1.0, .dt = dt});
    const Trajectory z = solve_dual({.nu = 0.1, .coeff = coeff, .initial = z0,
                                     .direction = Direction::kBackwardDual, .t_start = 0.0,
                                     .t_end = 1.0, .dt = dt});
    return duality_pairing_drift(w, z);
  };
  const double coarse = drift(1e-3);
  const double fine = drift(5e-4);
  return {coarse <= 1e-2 && fine <= 0.5 * coarse,
          str("drift ", coarse, " at dt = 1e-3 (need <= 1e-2), ", fine,
              " at dt = 5e-4 (ratio ", fine / coarse, ", need <= 0.5)")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"manufactured-solution convergence", manufactured_convergence},
      {"maximum principle", maximum_principle},
      {"universal bound", universal_bound},
      {"L1 contraction", l1_contraction},
      {"stabilisation", stabilisation},
      {"interpolation inequality", interpolation},
      {"Harnack probe", harnack},
      {"dichotomy frontier", dichotomy},
      {"non-controllability", non_controllability},
      {"duality drift", duality_drift},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << "AC" << i + 1 << ' ' << (o.pass ? "PASS" : "FAIL") << ' ' << criteria[i].first
              << ": " << o.detail << " [" << std::fixed << std::setprecision(1)
              << seconds_since(t0) << " s]" << std::defaultfloat << std::endl;
  }
  std::cout << (criteria.size() - failed) << '/' << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
