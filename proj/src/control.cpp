#include "burgers/control.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "burgers/errors.hpp"

namespace burgers {

namespace {

double smoothstep(double s) { return s * s * s * (10.0 + s * (-15.0 + 6.0 * s)); }
double smoothstep_d1(double s) { return 30.0 * s * s * (s - 1.0) * (s - 1.0); }
double smoothstep_d2(double s) { return 60.0 * s * (2.0 * s - 1.0) * (s - 1.0); }

// Rethrows a solver failure with the cycle index in front of the message,
// keeping the concrete type.
template <class Fn>
Trajectory with_cycle_context(int k, Fn&& fn) {
  const std::string prefix = "cycle " + std::to_string(k) + ": ";
  try {
    return fn();
  } catch (const StepFailure& e) {
    throw StepFailure(prefix + e.what(), e.time());
  } catch (const NumericBlowup& e) {
    throw NumericBlowup(prefix + e.what(), e.time());
  } catch (const SingularSystem& e) {
    throw SingularSystem(prefix + e.what(), e.time());
  }
}

Field weighted_abs_difference(const Field& v, const Field& u_hat, const CutoffSystem& cs) {
  const Grid& g = v.grid();
  std::vector<double> out(g.n_nodes());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = cs.chi0(g.x(i)) * std::abs(v[i] - u_hat[i]);
  return Field(g, std::move(out));
}

}  // namespace

Interval middle_half(Interval support) {
  const double q = 0.25 * support.length();
  return {support.lo + q, support.hi - q};
}

CutoffSystem::CutoffSystem(Interval support, Interval inner)
    : support_(support), inner_(inner) {
  if (!(0.0 < support.lo && support.lo < inner.lo && inner.lo < inner.hi &&
        inner.hi < support.hi && support.hi < 1.0))
    throw PreconditionError(
        "CutoffSystem: need 0 < a < a' < b' < b < 1 for support [a,b] and inner [a',b']");
}

CutoffSystem::CutoffSystem(Interval support)
    : CutoffSystem(support, middle_half(support)) {}

double CutoffSystem::chi0(double x) const {
  if (x <= support_.lo || x >= support_.hi) return 1.0;
  if (x < inner_.lo) return 1.0 - smoothstep((x - support_.lo) / (inner_.lo - support_.lo));
  if (x <= inner_.hi) return 0.0;
  return smoothstep((x - inner_.hi) / (support_.hi - inner_.hi));
}

double CutoffSystem::chi0_dx(double x) const {
  if (x <= support_.lo || x >= support_.hi) return 0.0;
  if (x < inner_.lo) {
    const double len = inner_.lo - support_.lo;
    return -smoothstep_d1((x - support_.lo) / len) / len;
  }
  if (x <= inner_.hi) return 0.0;
  const double len = support_.hi - inner_.hi;
  return smoothstep_d1((x - inner_.hi) / len) / len;
}

double CutoffSystem::chi0_dxx(double x) const {
  if (x <= support_.lo || x >= support_.hi) return 0.0;
  if (x < inner_.lo) {
    const double len = inner_.lo - support_.lo;
    return -smoothstep_d2((x - support_.lo) / len) / (len * len);
  }
  if (x <= inner_.hi) return 0.0;
  const double len = support_.hi - inner_.hi;
  return smoothstep_d2((x - inner_.hi) / len) / (len * len);
}

double CutoffSystem::beta(double t) const {
  if (t <= 0.5) return 0.0;
  if (t >= 1.0) return 1.0;
  return smoothstep(2.0 * (t - 0.5));
}

double CutoffSystem::beta_dt(double t) const {
  if (t <= 0.5 || t >= 1.0) return 0.0;
  return 2.0 * smoothstep_d1(2.0 * (t - 0.5));
}

CutoffValue CutoffSystem::chi(double t, double x) const {
  const double b = beta(t);
  if (b == 0.0) return {};
  const double c0 = chi0(x);
  return {1.0 - b * (1.0 - c0), b * chi0_dx(x), b * chi0_dxx(x), -beta_dt(t) * (1.0 - c0)};
}

std::string to_string(CycleKind kind) {
  return kind == CycleKind::kControlled ? "controlled" : "free";
}

Trajectory reconstruct_zeta(const Trajectory& v, const Trajectory& u_hat,
                            const CutoffSystem& cs, double nu, int k) {
  if (k < 0 || k % 2 != 0)
    throw PreconditionError("reconstruct_zeta: k must be a non-negative even cycle index");
  if (!(v.grid() == u_hat.grid()) || v.size() != u_hat.size() || v.empty())
    throw PreconditionError("reconstruct_zeta: v and u_hat must share grid and frames");
  const Grid& g = v.grid();
  const double t0 = static_cast<double>(k);
  Trajectory zeta(g, v.t0(), v.dt());
  std::vector<double> z(g.n_nodes());
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double s = v.time(j) - t0;
    const Field w = v[j] - u_hat[j];
    const std::vector<double> wx = d_dx(w);
    for (std::size_t i = 0; i < z.size(); ++i) {
      const CutoffValue c = cs.chi(s, g.x(i));
      const double wi = w[i];
      z[i] = -(c.value * (1.0 - c.value) * wi + 2.0 * nu * c.dx) * wx[i] +
             (c.dt - nu * c.dxx + u_hat[j][i] * c.dx + c.value * wi * c.dx) * wi;
    }
    zeta.push_back(Field(g, z));
  }
  return zeta;
}

ControlledRun build_controlled_trajectory(const ControlProblem& p) {
  if (!(p.u0.grid() == p.u_hat0.grid()))
    throw PreconditionError("build_controlled_trajectory: u0 and u_hat0 grids differ");
  if (p.n_cycles < 1) throw PreconditionError("build_controlled_trajectory: n_cycles must be >= 1");
  if (!(p.dt > 0.0 && p.dt <= 1.0))
    throw PreconditionError("build_controlled_trajectory: dt must lie in (0, 1]");
  if (!(p.nu > 0.0)) throw PreconditionError("build_controlled_trajectory: nu must be positive");

  const Grid& g = p.u0.grid();
  const std::size_t steps = step_count(0.0, 1.0, p.dt);
  const double dt = 1.0 / static_cast<double>(steps);
  const double horizon = static_cast<double>(p.n_cycles);

  const BurgersProblem ref{.nu = p.nu, .forcing = p.forcing, .control = {}, .u0 = p.u_hat0,
                           .t_start = 0.0, .t_end = horizon, .dt = dt};

  ControlledRun run{Trajectory(g, 0.0, dt), solve_burgers(ref, p.solver),
                    Trajectory(g, 0.0, dt), {}, {}, false};
  const Trajectory& u_hat = run.u_hat;

  if (norm_l1(p.u0 - p.u_hat0) < 1e-13) {
    run.short_circuited = true;
    for (std::size_t j = 0; j < u_hat.size(); ++j) {
      run.u.push_back(u_hat[j]);
      run.zeta.push_back(Field::zeros(g));
    }
    for (int k = 0; k < p.n_cycles; ++k) {
      run.zeta_cycles.push_back(constant_trajectory(Field::zeros(g), k, dt, steps));
      run.cycles.push_back({k, k % 2 == 0 ? CycleKind::kControlled : CycleKind::kFree,
                            0.0, 0.0, 0.0});
    }
    return run;
  }

  Field current = p.u0;
  for (int k = 0; k < p.n_cycles; ++k) {
    const std::size_t base = static_cast<std::size_t>(k) * steps;
    const BurgersProblem free{.nu = p.nu, .forcing = p.forcing, .control = {}, .u0 = current,
                              .t_start = static_cast<double>(k),
                              .t_end = static_cast<double>(k + 1), .dt = dt};
    const Trajectory v = with_cycle_context(k, [&] { return solve_burgers(free, p.solver); });

    Trajectory u_hat_k(g, free.t_start, dt);
    for (std::size_t j = 0; j <= steps; ++j) u_hat_k.push_back(u_hat[base + j]);

    const bool controlled = k % 2 == 0;
    CycleRecord rec;
    rec.k = k;
    rec.kind = controlled ? CycleKind::kControlled : CycleKind::kFree;
    rec.l1_start = norm_l1(current - u_hat_k.front());

    Trajectory u_k(g, free.t_start, dt);
    if (controlled) {
      run.zeta_cycles.push_back(reconstruct_zeta(v, u_hat_k, p.cutoffs, p.nu, k));
      std::vector<double> frame(g.n_nodes());
      for (std::size_t j = 0; j <= steps; ++j) {
        const double s = v.time(j) - free.t_start;
        for (std::size_t i = 0; i < frame.size(); ++i) {
          const double c = p.cutoffs.chi(s, g.x(i)).value;
          frame[i] = c == 1.0 ? v[j][i] : u_hat_k[j][i] + c * (v[j][i] - u_hat_k[j][i]);
        }
        u_k.push_back(Field(g, frame));
      }
      rec.l1_end_cutoff = norm_l1(weighted_abs_difference(v.back(), u_hat_k.back(), p.cutoffs));
    } else {
      run.zeta_cycles.push_back(constant_trajectory(Field::zeros(g), free.t_start, dt, steps));
      u_k = v;
    }
    rec.l1_end = norm_l1(u_k.back() - u_hat_k.back());
    if (!controlled) rec.l1_end_cutoff = rec.l1_end;
    run.cycles.push_back(rec);

    const Trajectory& z_k = run.zeta_cycles.back();
    for (std::size_t j = k == 0 ? 0 : 1; j <= steps; ++j) {
      run.u.push_back(u_k[j]);
      run.zeta.push_back(z_k[j]);
    }
    current = u_k.back();
  }
  return run;
}

void write_cycles_csv(std::ostream& os, const std::vector<CycleRecord>& cycles) {
  const auto old = os.precision(std::numeric_limits<double>::max_digits10);
  os << "k,kind,l1_start,l1_end,ratio\n";
  for (const CycleRecord& c : cycles)
    os << c.k << ',' << to_string(c.kind) << ',' << c.l1_start << ',' << c.l1_end << ','
       << c.ratio() << '\n';
  os.precision(old);
}

std::vector<double> cycle_errors(const ControlledRun& run) {
  std::vector<double> e;
  if (run.cycles.empty()) return e;
  e.push_back(run.cycles.front().l1_start);
  for (const CycleRecord& c : run.cycles) e.push_back(c.l1_end);
  return e;
}

std::vector<double> zeta_h1_per_cycle(const ControlledRun& run) {
  std::vector<double> out;
  for (const Trajectory& z : run.zeta_cycles) {
    double m = 0.0;
    for (const Field& f : z.frames()) m = std::max(m, norm_h1(f));
    out.push_back(m);
  }
  return out;
}

double zeta_time_lipschitz(const ControlledRun& run) {
  double l = 0.0;
  for (const Trajectory& z : run.zeta_cycles)
    for (std::size_t j = 1; j < z.size(); ++j)
      l = std::max(l, norm_h1(z[j] - z[j - 1]) / z.dt());
  return l;
}

DecayFit fit_decay(std::span<const double> errors) {
  if (errors.size() < 4)
    throw PreconditionError("fit_decay: need at least 4 cycle errors");
  for (double e : errors)
    if (!(e >= 0.0) || !std::isfinite(e))
      throw PreconditionError("fit_decay: errors must be finite and non-negative");

  DecayFit fit;
  fit.n_cycles = static_cast<int>(errors.size()) - 1;
  if (std::all_of(errors.begin(), errors.end(), [](double e) { return e == 0.0; })) {
    fit.zero_error = true;
    return fit;
  }

  for (std::size_t k = 0; k + 1 < errors.size(); k += 2)
    if (errors[k] > 0.0) fit.theta = std::max(fit.theta, errors[k + 1] / errors[k]);

  auto collect = [&](std::size_t from) {
    std::vector<std::pair<double, double>> pts;
    for (std::size_t k = from; k < errors.size(); ++k)
      if (errors[k] > 0.0) pts.emplace_back(static_cast<double>(k), std::log(errors[k]));
    return pts;
  };
  auto pts = collect(2);
  if (pts.size() < 2) pts = collect(0);
  if (pts.size() < 2) {
    // A single positive error; everything after it vanished.
    fit.C = pts.empty() ? 0.0 : std::exp(pts.front().second);
    fit.gamma = std::numeric_limits<double>::infinity();
    return fit;
  }
  double sk = 0.0, sy = 0.0;
  for (const auto& [k, y] : pts) {
    sk += k;
    sy += y;
  }
  const double n = static_cast<double>(pts.size());
  const double mk = sk / n, my = sy / n;
  double skk = 0.0, sky = 0.0;
  for (const auto& [k, y] : pts) {
    skk += (k - mk) * (k - mk);
    sky += (k - mk) * (y - my);
  }
  const double slope = sky / skk;
  fit.gamma = -slope;
  fit.C = std::exp(my - slope * mk);
  return fit;
}

}  // namespace burgers
