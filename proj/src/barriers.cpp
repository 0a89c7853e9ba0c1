#include "burgers/barriers.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "burgers/errors.hpp"

namespace burgers {

namespace {

std::string at(double t, double x) {
  return "(t=" + std::to_string(t) + ", x=" + std::to_string(x) + ")";
}

double global_b(double h_inf, double T, double eps) {
  return 1.0 + std::cbrt(h_inf) * std::pow(T + eps, 2.0 / 3.0);
}

void check_common(double nu, double h_inf, double T, double L, double eps, const char* who) {
  if (!(nu > 0.0) || !(h_inf >= 0.0) || !(T > 0.0) || !(L >= 0.0) || !(eps >= 0.0))
    throw PreconditionError(std::string(who) +
                            ": need nu > 0, T > 0 and non-negative h_inf, L, eps");
}

}  // namespace

Barrier Barrier::global_super(double nu, double h_inf, double T, double L, double eps) {
  check_common(nu, h_inf, T, L, eps, "Barrier::global_super");
  return {BarrierKind::kGlobalSuper, nu, eps, T, global_b(h_inf, T, eps), 0.0, 0.0, L};
}

Barrier Barrier::global_sub(double nu, double h_inf, double T, double L, double eps) {
  check_common(nu, h_inf, T, L, eps, "Barrier::global_sub");
  return {BarrierKind::kGlobalSub, nu, eps, T, global_b(h_inf, T, eps), 0.0, 0.0, L};
}

Barrier Barrier::left_super(double nu, double h_inf, double T, double a, double L, double N,
                            double eps, double lambda) {
  check_common(nu, h_inf, T, L, eps, "Barrier::left_super");
  if (!(a > 0.0 && a < 1.0) || !(N >= 0.0))
    throw PreconditionError("Barrier::left_super: need 0 < a < 1 and N >= 0");
  const double lam = lambda > 0.0 ? lambda : minimal_lambda(nu, T, a, h_inf);
  const double A = lam + eps * (L * (a + eps) + N * (T + eps));
  return {BarrierKind::kLeftSuper, nu, eps, T, A, lam, a, L};
}

BarrierValue Barrier::eval(double t, double x) const {
  const double s = t + eps_;
  if (!(s > 0.0)) throw DomainError("Barrier: singular at " + at(t, x) + " (t + eps <= 0)");
  const double B = coef_;
  switch (kind_) {
    case BarrierKind::kGlobalSuper: {
      const double u = (B * (B + x) + L_ * eps_) / s;
      return {u, -u / s, B / s, 0.0};
    }
    case BarrierKind::kGlobalSub: {
      const double u = -(B * (B - x) + L_ * eps_) / s;
      return {u, -u / s, B / s, 0.0};
    }
    case BarrierKind::kLeftSuper: {
      const double d = a_ - x + eps_;
      if (!(d > 0.0))
        throw DomainError("Barrier: singular at " + at(t, x) + " (a - x + eps <= 0)");
      const double u = coef_ / (s * d);
      return {u, -u / s, u / d, 2.0 * u / (d * d)};
    }
  }
  return {};
}

double Barrier::residual(double t, double x, double h) const {
  const BarrierValue b = eval(t, x);
  return b.dt - nu_ * b.dxx + b.value * b.dx - h;
}

double minimal_lambda(double nu, double T, double a, double h_inf) {
  const double diffusion = 4.0 * nu * (T + 1.0) + 2.0 * (a + 1.0) * (a + 1.0);
  const double forcing = (T + 1.0) * std::pow(a + 1.0, 1.5) * std::sqrt(2.0 * h_inf);
  return std::max(diffusion, forcing);
}

double global_bound_limit(double h_inf, double T) {
  if (!(T > 0.0)) throw PreconditionError("global_bound_limit: T must be positive");
  const double b0 = global_b(h_inf, T, 0.0);
  return b0 * (b0 + 1.0) / T;
}

double left_bound_formula(double nu, double T, double a, double delta, double h_inf) {
  if (!(0.0 < delta && delta < a)) throw PreconditionError("left_bound_formula: need 0 < delta < a");
  return minimal_lambda(nu, T, a, h_inf) / (T * (a - delta));
}

ResidualLattice refined_lattice(const Grid& grid, double dt, Interval sub, double t0, double t1) {
  ResidualLattice lat;
  lat.sub = sub;
  lat.t0 = t0;
  lat.t1 = t1;
  lat.nx = std::max(1, static_cast<int>(std::ceil(4.0 * sub.length() / grid.dx() - 1e-9)));
  lat.nt = std::max(1, static_cast<int>(4 * step_count(t0, t1, dt)));
  return lat;
}

namespace {

template <class Better>
double scan_residual(const Barrier& b, const SpaceTimeFn& h, const ResidualLattice& lat,
                     double init, Better better) {
  if (!(lat.sub.hi >= lat.sub.lo) || !(lat.t1 >= lat.t0) || lat.nx < 1 || lat.nt < 1)
    throw PreconditionError("residual check: empty lattice");
  double r = init;
  for (int j = 0; j <= lat.nt; ++j) {
    const double t = lat.t0 + (lat.t1 - lat.t0) * j / lat.nt;
    for (int i = 0; i <= lat.nx; ++i) {
      const double x = lat.sub.lo + lat.sub.length() * i / lat.nx;
      r = better(r, b.residual(t, x, h ? h(t, x) : 0.0));
    }
  }
  return r;
}

}  // namespace

double check_supersolution(const Barrier& b, const SpaceTimeFn& h, const ResidualLattice& lat) {
  return scan_residual(b, h, lat, INFINITY, [](double a, double c) { return std::min(a, c); });
}

double check_subsolution(const Barrier& b, const SpaceTimeFn& h, const ResidualLattice& lat) {
  return scan_residual(b, h, lat, -INFINITY, [](double a, double c) { return std::max(a, c); });
}

ComparisonReport comparison_check(Profile upper, Profile lower, Interval sub, double T,
                                  double rel_tol) {
  const Trajectory* grid_source = nullptr;
  for (const Profile* p : {&upper, &lower})
    if (const auto* tr = std::get_if<const Trajectory*>(p)) {
      if (*tr == nullptr) throw PreconditionError("comparison_check: null trajectory");
      if (grid_source && !((*tr)->grid() == grid_source->grid() &&
                           (*tr)->size() == grid_source->size() &&
                           std::abs((*tr)->dt() - grid_source->dt()) <= 1e-12 * grid_source->dt()))
        throw PreconditionError("comparison_check: trajectories do not share grid and frames");
      if (!grid_source) grid_source = *tr;
    }
  if (!grid_source) throw PreconditionError("comparison_check: at least one profile must be a trajectory");
  if (!(0.0 <= sub.lo && sub.lo < sub.hi && sub.hi <= 1.0))
    throw PreconditionError("comparison_check: sub-interval must satisfy 0 <= lo < hi <= 1");

  const Grid& g = grid_source->grid();
  const auto i_lo = static_cast<std::size_t>(std::ceil(sub.lo / g.dx() - 1e-9));
  const auto i_hi = static_cast<std::size_t>(std::floor(sub.hi / g.dx() + 1e-9));
  if (i_lo > i_hi) throw PreconditionError("comparison_check: sub-interval holds no node");

  std::size_t n_frames = 0;
  while (n_frames < grid_source->size() &&
         grid_source->time(n_frames) <= T + 1e-9 * grid_source->dt())
    ++n_frames;
  if (n_frames == 0) throw PreconditionError("comparison_check: no frame with t <= T");

  auto value = [&](const Profile& p, std::size_t j, std::size_t i) {
    if (const auto* tr = std::get_if<const Trajectory*>(&p)) return (**tr)[j][i];
    return (*std::get<const Barrier*>(p))(grid_source->time(j), g.x(i));
  };

  ComparisonReport rep;
  rep.n_frames = n_frames;
  double traj_max = 0.0;
  for (std::size_t j = 0; j < n_frames; ++j)
    for (std::size_t i = i_lo; i <= i_hi; ++i)
      for (const Profile* p : {&upper, &lower})
        if (std::holds_alternative<const Trajectory*>(*p))
          traj_max = std::max(traj_max, std::abs(value(*p, j, i)));
  rep.scale = 1.0 + traj_max;
  rep.tol = rel_tol * rep.scale;

  for (std::size_t i = i_lo; i <= i_hi; ++i)
    if (value(lower, 0, i) - value(upper, 0, i) > rep.tol)
      throw PreconditionError("comparison_check: initial ordering fails at " +
                              at(grid_source->time(0), g.x(i)));
  for (std::size_t j = 0; j < n_frames; ++j)
    for (std::size_t i : {i_lo, i_hi})
      if (value(lower, j, i) - value(upper, j, i) > rep.tol)
        throw PreconditionError("comparison_check: boundary ordering fails at " +
                                at(grid_source->time(j), g.x(i)));

  for (std::size_t j = 0; j < n_frames; ++j) {
    double frame_violation = 0.0;
    for (std::size_t i = i_lo; i <= i_hi; ++i)
      frame_violation = std::max(frame_violation, value(lower, j, i) - value(upper, j, i));
    rep.max_violation = std::max(rep.max_violation, frame_violation);
    if (j + 1 == n_frames) rep.final_violation = frame_violation;
  }
  return rep;
}

SpaceTimeFn random_localized_control(std::mt19937_64& rng, Interval support, double horizon,
                                     double amp) {
  if (!(support.hi > support.lo) || !(horizon > 0.0))
    throw PreconditionError("random_localized_control: bad support or horizon");
  std::normal_distribution<double> n01;
  std::vector<double> c(4);
  for (double& v : c) v = n01(rng);
  c[0] += 1.5 * (c[0] >= 0.0 ? 1.0 : -1.0);
  auto psi = [c, horizon](double t) {
    double s = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j)
      s += c[j] * std::cos(static_cast<double>(j) * std::numbers::pi * t / horizon) /
           static_cast<double>((j + 1) * (j + 1));
    return s;
  };
  double peak = 0.0;
  for (int k = 0; k <= 1000; ++k) peak = std::max(peak, std::abs(psi(horizon * k / 1000.0)));
  const double scale = amp / peak;
  return [=](double t, double x) {
    if (x <= support.lo || x >= support.hi) return 0.0;
    const double s = std::sin(std::numbers::pi * (x - support.lo) / support.length());
    return scale * s * s * psi(t);
  };
}

NoncontrolReport non_controllability_experiment(const NoncontrolSetup& s) {
  if (!(0.0 < s.delta && s.delta < s.a && s.a < 1.0))
    throw PreconditionError("non_controllability_experiment: need 0 < delta < a < 1");
  if (s.controls.empty() || s.initial_data.empty())
    throw PreconditionError("non_controllability_experiment: need controls and initial data");
  const Grid& g = s.initial_data.front().grid();
  const std::size_t steps = step_count(0.0, s.T, s.dt);
  const double dt = s.T / static_cast<double>(steps);

  for (std::size_t c = 0; c < s.controls.size(); ++c)
    for (std::size_t j = 0; j <= steps; ++j)
      for (std::size_t i = 0; g.x(i) < s.a; ++i)
        if (s.controls[c](static_cast<double>(j) * dt, g.x(i)) != 0.0)
          throw PreconditionError("non_controllability_experiment: control " + std::to_string(c) +
                                  " does not vanish at " + at(static_cast<double>(j) * dt, g.x(i)) +
                                  " left of a=" + std::to_string(s.a));

  NoncontrolReport rep;
  rep.lambda = minimal_lambda(s.nu, s.T, s.a, s.h_inf);
  rep.rho_formula = left_bound_formula(s.nu, s.T, s.a, s.delta, s.h_inf);
  rep.min_target_distance = INFINITY;
  const double target = rep.rho_formula + std::sqrt(s.delta) * s.R + 1.0;
  const auto i_delta = static_cast<std::size_t>(std::floor(s.delta / g.dx() + 1e-9));
  const auto i_a = static_cast<std::size_t>(std::floor(s.a / g.dx() + 1e-9));

  for (const SpaceTimeFn& control : s.controls) {
    for (const Field& u0 : s.initial_data) {
      const BurgersProblem p{.nu = s.nu, .forcing = s.forcing, .control = control, .u0 = u0,
                             .t_start = 0.0, .t_end = s.T, .dt = dt};
      const Trajectory u = solve_burgers(p, s.solver);
      const Field& uT = u.back();
      double top = -INFINITY, mag = 0.0;
      for (std::size_t i = 0; i <= i_delta; ++i) {
        top = std::max(top, uT[i]);
        mag = std::max(mag, std::abs(uT[i]));
      }
      rep.rho_emp = std::max(rep.rho_emp, top);
      rep.linf_emp = std::max(rep.linf_emp, mag);

      std::vector<double> gap(g.n_nodes());
      for (std::size_t i = 0; i < gap.size(); ++i) gap[i] = (uT[i] - target) * (uT[i] - target);
      rep.min_target_distance = std::min(
          rep.min_target_distance, std::sqrt(norm_l1_on(Field(g, std::move(gap)), {0.0, s.delta})));

      double L = 0.0, N = 0.0;
      for (std::size_t i = 0; i <= i_a; ++i) L = std::max(L, std::abs(u0[i]));
      for (const Field& f : u.frames()) N = std::max(N, std::abs(f[i_a]));
      const Barrier b = Barrier::left_super(s.nu, s.h_inf, s.T, g.x(i_a), L, N, s.eps);
      const ComparisonReport cmp = comparison_check(&b, &u, {0.0, g.x(i_a)}, s.T);
      rep.max_barrier_violation = std::max(rep.max_barrier_violation, cmp.max_violation);
      rep.barrier_ok = rep.barrier_ok && cmp.passed();
      ++rep.n_runs;
    }
  }
  return rep;
}

}  // namespace burgers
