#include "burgers/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "burgers/errors.hpp"
#include "burgers/random_fields.hpp"

namespace burgers {

namespace {

Trajectory solve_scenario(const LinearScenario& s, const ProbeSettings& cfg, const Field& w0) {
  if (!(cfg.T > 0.0)) throw PreconditionError("probe: T must be positive");
  LinearProblem p{.nu = cfg.nu,
                  .coeff = s.coeff,
                  .initial = w0,
                  .direction = Direction::kForward,
                  .t_start = s.coeff.t0(),
                  .t_end = s.coeff.t0() + cfg.T,
                  .dt = s.coeff.dt()};
  return solve_linear(p, cfg.solver);
}

double require_nonzero_l1(const Field& w0, const char* who) {
  const double m = norm_l1(w0);
  if (!(m > 0.0)) throw PreconditionError(std::string(who) + ": w0 must not vanish");
  return m;
}

Trajectory scaled(const Trajectory& tr, double lambda) {
  Trajectory out(tr.grid(), tr.t0(), tr.dt());
  for (const Field& f : tr.frames()) out.push_back(f.scaled(lambda));
  return out;
}

}  // namespace

CoefficientBound coefficient_bound(const Trajectory& a, double s) {
  if (a.empty()) throw PreconditionError("coefficient_bound: empty trajectory");
  if (!(s > 0.0 && s < 1.0)) throw PreconditionError("coefficient_bound: need 0 < s < 1");
  const Grid& g = a.grid();
  const std::size_t n = g.n_nodes();
  const std::size_t m = a.size();

  std::vector<double> inv_dx(n), inv_dt(m);
  for (std::size_t d = 1; d < n; ++d) inv_dx[d] = std::pow(static_cast<double>(d) * g.dx(), -s);
  for (std::size_t d = 1; d < m; ++d) inv_dt[d] = std::pow(static_cast<double>(d) * a.dt(), -s);

  CoefficientBound b;
  for (const Field& f : a.frames()) {
    b.sup_abs = std::max(b.sup_abs, norm_linf(f));
    for (double v : d_dx(f)) b.sup_dx = std::max(b.sup_dx, std::abs(v));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        b.holder_x = std::max(b.holder_x, std::abs(f[i] - f[j]) * inv_dx[j - i]);
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t l = k + 1; l < m; ++l)
        b.holder_t = std::max(b.holder_t, std::abs(a[k][i] - a[l][i]) * inv_dt[l - k]);
  return b;
}

Trajectory random_coefficient(const Grid& grid, std::mt19937_64& rng, double rho,
                              double horizon, double dt) {
  if (!(rho > 0.0)) throw PreconditionError("random_coefficient: rho must be positive");
  const RandomSpaceTimeSeries series(rng, 6, 3, horizon);
  const std::size_t steps = step_count(0.0, horizon, dt);
  const Trajectory raw = sample_trajectory(grid, series.as_function(), 0.0,
                                           horizon / static_cast<double>(steps), steps);
  const double total = coefficient_bound(raw).total();
  if (!(total > 0.0)) return raw;
  return scaled(raw, rho / total * (1.0 - 1e-12));
}

DichotomyVerdict dichotomy_probe(const LinearScenario& s, const ProbeSettings& cfg,
                                 Interval inner, double q, double eps) {
  const double m0 = require_nonzero_l1(s.w0, "dichotomy_probe");
  const Trajectory w = solve_scenario(s, cfg, s.w0);
  DichotomyVerdict v;
  v.q_side = norm_l1(w.back()) / m0;
  v.mass_side = norm_l1_on(w.back(), inner) / m0;
  v.q = q;
  v.eps = eps;
  return v;
}

double required_q(std::span<const DichotomyVerdict> verdicts, double eps) {
  double q = 0.0;
  for (const DichotomyVerdict& v : verdicts)
    if (v.mass_side < eps) q = std::max(q, v.q_side);
  return q;
}

DichotomyReport ensemble_dichotomy(std::span<const LinearScenario> scenarios,
                                   const ProbeSettings& cfg, Interval inner, double rho,
                                   double q, double eps) {
  DichotomyReport r;
  r.q = q;
  r.eps = eps;
  if (scenarios.empty()) return r;
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    const double total = coefficient_bound(scenarios[i].coeff).total();
    if (total > rho * (1.0 + 1e-9))
      throw PreconditionError("ensemble_dichotomy: scenario " + std::to_string(i) +
                              " violates the coefficient bound (" + std::to_string(total) +
                              " > " + std::to_string(rho) + ")");
    r.verdicts.push_back(dichotomy_probe(scenarios[i], cfg, inner, q, eps));
  }
  const auto uncovered = std::count_if(r.verdicts.begin(), r.verdicts.end(),
                                       [](const DichotomyVerdict& v) { return !v.holds(); });
  r.uncovered_fraction = static_cast<double>(uncovered) / static_cast<double>(r.verdicts.size());

  std::vector<double> masses;
  for (const DichotomyVerdict& v : r.verdicts) masses.push_back(v.mass_side);
  std::sort(masses.begin(), masses.end());
  masses.erase(std::unique(masses.begin(), masses.end()), masses.end());
  // Raising eps past a mass value can only raise the required q, so each
  // distinct mass gives one candidate; keep those that strictly improve q.
  for (auto it = masses.rbegin(); it != masses.rend(); ++it) {
    if (!(*it > 0.0)) continue;
    const FrontierPoint p{required_q(r.verdicts, *it), *it};
    if (r.frontier.empty() || p.q < r.frontier.back().q) r.frontier.push_back(p);
  }
  std::reverse(r.frontier.begin(), r.frontier.end());

  std::vector<double> all;
  for (const DichotomyVerdict& v : r.verdicts) all.push_back(v.mass_side);
  std::sort(all.begin(), all.end());
  const std::size_t n = all.size();
  r.eps_star = n % 2 == 1 ? all[n / 2] : 0.5 * (all[n / 2 - 1] + all[n / 2]);
  r.q_star = required_q(r.verdicts, r.eps_star);
  return r;
}

double decomposition_defect(const LinearScenario& s, const ProbeSettings& cfg) {
  const Trajectory w = solve_scenario(s, cfg, s.w0);
  const Trajectory wp = solve_scenario(s, cfg, s.w0.positive_part());
  const Trajectory wm = solve_scenario(s, cfg, s.w0.negative_part());
  double d = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k)
    d = std::max(d, norm_linf(w[k] - (wp[k] - wm[k])));
  return d;
}

HarnackEstimate harnack_probe(const LinearScenario& s, const ProbeSettings& cfg, Interval K,
                              double T_prime) {
  if (!(0.0 < K.lo && K.lo < K.hi && K.hi < 1.0))
    throw PreconditionError("harnack_probe: K must lie strictly inside (0,1)");
  const auto vals = s.w0.values();
  if (std::any_of(vals.begin(), vals.end(), [](double v) { return v < 0.0; }))
    throw PreconditionError("harnack_probe: w0 must be non-negative");
  require_nonzero_l1(s.w0, "harnack_probe");
  const double tp = T_prime > 0.0 ? T_prime : 2.0 * cfg.T / 3.0;
  if (!(tp < cfg.T)) throw PreconditionError("harnack_probe: need 0 < T' < T");

  const Grid& g = s.w0.grid();
  const auto lo = static_cast<std::size_t>(std::ceil(K.lo / g.dx() - 1e-9));
  const auto hi = static_cast<std::size_t>(std::floor(K.hi / g.dx() + 1e-9));
  if (lo > hi) throw PreconditionError("harnack_probe: K contains no grid node");

  const Trajectory w = solve_scenario(s, cfg, s.w0);
  const std::vector<double> early = w.at(s.coeff.t0() + tp);
  const Field& late = w.back();
  double sup = 0.0;
  double inf = late[lo];
  for (std::size_t i = lo; i <= hi; ++i) {
    sup = std::max(sup, early[i]);
    inf = std::min(inf, late[i]);
  }
  if (!(inf > 0.0))
    throw PositivityViolation("harnack_probe: inf over K of w(T) is " + std::to_string(inf) +
                              ", expected a positive solution");
  return {{g.x(lo), g.x(hi)}, tp, cfg.T, sup / inf};
}

double sup_bound_probe(const LinearScenario& s, const ProbeSettings& cfg, double tau) {
  if (!(tau > 0.0 && tau < cfg.T)) throw PreconditionError("sup_bound_probe: need 0 < tau < T");
  const double m0 = require_nonzero_l1(s.w0, "sup_bound_probe");
  const Trajectory w = solve_scenario(s, cfg, s.w0);
  double sup = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k)
    if (w.time(k) - w.t0() >= tau - 1e-9 * w.dt()) sup = std::max(sup, norm_linf(w[k]));
  return sup / m0;
}

LinearScenario ensemble_member(const EnsembleSpec& spec, int index) {
  std::seed_seq seq{static_cast<std::uint32_t>(spec.seed),
                    static_cast<std::uint32_t>(spec.seed >> 32),
                    static_cast<std::uint32_t>(index)};
  std::mt19937_64 rng(seq);
  const Grid g(spec.n_cells);
  Trajectory coeff = random_coefficient(g, rng, spec.rho, spec.horizon, spec.dt);
  Field w0 = spec.nonnegative ? random_nonnegative_field(g, rng, 6, 1.0)
                              : random_fourier_field(g, rng, 8, 1.0);
  return {std::move(coeff), std::move(w0)};
}

std::vector<LinearScenario> random_ensemble(const EnsembleSpec& spec) {
  if (spec.n < 1) throw PreconditionError("random_ensemble: n must be >= 1");
  std::vector<LinearScenario> out;
  out.reserve(static_cast<std::size_t>(spec.n));
  for (int i = 0; i < spec.n; ++i) out.push_back(ensemble_member(spec, i));
  return out;
}

EnsembleSummary harnack_sup_summary(const EnsembleSpec& spec, const ProbeSettings& cfg,
                                    Interval K) {
  EnsembleSpec nonneg = spec;
  nonneg.nonnegative = true;
  EnsembleSummary out;
  for (int i = 0; i < nonneg.n; ++i) {
    const LinearScenario s = ensemble_member(nonneg, i);
    out.C_emp = std::max(out.C_emp, harnack_probe(s, cfg, K).ratio);
    out.M_emp = std::max(out.M_emp, sup_bound_probe(s, cfg, 2.0 * cfg.T / 3.0));
  }
  return out;
}

void write_dichotomy_csv(std::ostream& os, std::span<const DichotomyVerdict> verdicts) {
  const auto old = os.precision(17);
  os << "index,q_side,mass_side,holds\n";
  for (std::size_t i = 0; i < verdicts.size(); ++i)
    os << i << ',' << verdicts[i].q_side << ',' << verdicts[i].mass_side << ','
       << (verdicts[i].holds() ? 1 : 0) << '\n';
  os.precision(old);
}

double max_l1_increase(const Trajectory& a, const Trajectory& b) {
  if (a.size() != b.size() || a.grid().n_cells() != b.grid().n_cells())
    throw PreconditionError("max_l1_increase: trajectories do not share frames");
  double worst = 0.0;
  for (std::size_t k = 1; k < a.size(); ++k)
    worst = std::max(worst, norm_l1(a[k] - b[k]) - norm_l1(a[k - 1] - b[k - 1]));
  return worst;
}

double max_l1_increase(const Trajectory& w) {
  double worst = 0.0;
  for (std::size_t k = 1; k < w.size(); ++k)
    worst = std::max(worst, norm_l1(w[k]) - norm_l1(w[k - 1]));
  return worst;
}

}  // namespace burgers
