#include "burgers/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "burgers/errors.hpp"
#include "tridiagonal.hpp"

namespace burgers {

namespace {

enum class Scheme { kCrankNicolson, kBackwardEuler };

double implicit_weight(Scheme s) { return s == Scheme::kCrankNicolson ? 0.5 : 1.0; }

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

std::string at_time(double t) { return " at t=" + std::to_string(t); }

void validate_span(double t_start, double t_end, double dt, const char* who) {
  if (!(t_end > t_start))
    throw PreconditionError(std::string(who) + ": t_end must exceed t_start");
  if (!(dt > 0.0) || dt > (t_end - t_start) * (1.0 + 1e-12))
    throw PreconditionError(std::string(who) +
                            ": dt must satisfy 0 < dt <= t_end - t_start");
}

// Nonlinear Crank-Nicolson / backward-Euler step for the Burgers equation on
// full nodal vectors (endpoints stay zero).
class BurgersStepper {
 public:
  BurgersStepper(const BurgersProblem& p, const SolverOptions& opt)
      : grid_(p.u0.grid()), p_(p), opt_(opt) {
    const std::size_t n = grid_.n_nodes();
    const std::size_t m = n - 2;
    explicit_.assign(n, 0.0);
    residual_.assign(n, 0.0);
    trial_.assign(n, 0.0);
    trial_residual_.assign(n, 0.0);
    lower_.assign(m, 0.0);
    diag_.assign(m, 0.0);
    upper_.assign(m, 0.0);
    rhs_.assign(m, 0.0);
    delta_.assign(m, 0.0);
  }

  // Advances u_old over [t, t+h]; writes u_new. False if Newton fails.
  bool step(std::span<const double> u_old, double t, double h, Scheme scheme,
            std::vector<double>& u_new) {
    const std::size_t n = u_old.size() - 1;
    const double theta = implicit_weight(scheme);
    const double w = theta * h;
    const double t_src = t + theta * h;

    for (std::size_t i = 1; i < n; ++i) {
      const double x = grid_.x(i);
      double f = 0.0;
      if (p_.forcing) f += p_.forcing(t_src, x);
      if (p_.control) f += p_.control(t_src, x);
      explicit_[i] = u_old[i] + h * f;
      if (scheme == Scheme::kCrankNicolson)
        explicit_[i] += (1.0 - theta) * h * spatial(u_old, i);
    }
    if (!all_finite(explicit_))
      throw NumericBlowup("solve_burgers: non-finite state or source" + at_time(t), t);

    u_new.assign(u_old.begin(), u_old.end());
    const double scale = std::max({1.0, max_abs(u_old), max_abs(explicit_)});
    const double tol = opt_.newton_tol * scale;

    double r_norm = residual(u_new, w, residual_);
    for (int iter = 0; iter < opt_.max_newton_iter; ++iter) {
      if (r_norm <= tol) return true;
      assemble_jacobian(u_new, w);
      for (std::size_t i = 1; i < n; ++i) rhs_[i - 1] = -residual_[i];
      if (!detail::solve_tridiagonal(lower_, diag_, upper_, rhs_, delta_, scratch_))
        return false;

      double lambda = 1.0;
      double trial_norm = 0.0;
      for (int damp = 0; damp < 30; ++damp) {
        trial_ = u_new;
        for (std::size_t i = 1; i < n; ++i) trial_[i] += lambda * delta_[i - 1];
        trial_norm = residual(trial_, w, trial_residual_);
        if (trial_norm <= r_norm) break;
        lambda *= 0.5;
      }
      if (!(trial_norm <= r_norm) && !(trial_norm <= tol)) return false;
      u_new.swap(trial_);
      residual_.swap(trial_residual_);
      r_norm = trial_norm;
    }
    return r_norm <= tol;
  }

 private:
  // nu u_xx - (u^2/2)_x at interior node i.
  double spatial(std::span<const double> u, std::size_t i) const {
    const double dx = grid_.dx();
    return p_.nu * (u[i + 1] - 2.0 * u[i] + u[i - 1]) / (dx * dx) -
           (u[i + 1] * u[i + 1] - u[i - 1] * u[i - 1]) / (4.0 * dx);
  }

  double residual(std::span<const double> u, double w, std::vector<double>& out) const {
    const std::size_t n = u.size() - 1;
    double m = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
      out[i] = u[i] - w * spatial(u, i) - explicit_[i];
      if (!std::isfinite(out[i])) return std::numeric_limits<double>::infinity();
      m = std::max(m, std::abs(out[i]));
    }
    return m;
  }

  void assemble_jacobian(std::span<const double> u, double w) {
    const double dx = grid_.dx();
    const double diff = p_.nu / (dx * dx);
    const std::size_t n = u.size() - 1;
    for (std::size_t i = 1; i < n; ++i) {
      lower_[i - 1] = -w * (diff + u[i - 1] / (2.0 * dx));
      diag_[i - 1] = 1.0 + 2.0 * w * diff;
      upper_[i - 1] = -w * (diff - u[i + 1] / (2.0 * dx));
    }
  }

  Grid grid_;
  const BurgersProblem& p_;
  SolverOptions opt_;
  std::vector<double> explicit_, residual_, trial_, trial_residual_;
  std::vector<double> lower_, diag_, upper_, rhs_, delta_, scratch_;
};

// Linear operators on interior nodes, written as tridiagonal rows.
//   forward: nu w_xx - (a w)_x      dual: nu z_xx + a z_x
struct LinearRow {
  double lower, diag, upper;
};

LinearRow linear_row(Direction dir, std::span<const double> a, std::size_t i,
                     double nu, double dx) {
  const double diff = nu / (dx * dx);
  const double adv = 0.5 / dx;
  if (dir == Direction::kForward)
    return {diff + adv * a[i - 1], -2.0 * diff, diff - adv * a[i + 1]};
  return {diff - adv * a[i], -2.0 * diff, diff + adv * a[i]};
}

// One implicit step (I - w A_new) y_new = (I + (h - w) A_old) y_old.
void linear_step(Direction dir, double nu, double dx, std::span<const double> a_old,
                 std::span<const double> a_new, std::span<const double> y_old,
                 double h, Scheme scheme, std::vector<double>& y_new,
                 std::vector<double>& scratch, double t) {
  const std::size_t n = y_old.size() - 1;
  const std::size_t m = n - 1;
  const double w = implicit_weight(scheme) * h;
  const double e = h - w;
  std::vector<double> lower(m), diag(m), upper(m), rhs(m), sol(m);
  for (std::size_t i = 1; i < n; ++i) {
    const LinearRow r_old = linear_row(dir, a_old, i, nu, dx);
    rhs[i - 1] = y_old[i] + e * (r_old.lower * y_old[i - 1] + r_old.diag * y_old[i] +
                                 r_old.upper * y_old[i + 1]);
    const LinearRow r_new = linear_row(dir, a_new, i, nu, dx);
    lower[i - 1] = -w * r_new.lower;
    diag[i - 1] = 1.0 - w * r_new.diag;
    upper[i - 1] = -w * r_new.upper;
  }
  if (!detail::solve_tridiagonal(lower, diag, upper, rhs, sol, scratch))
    throw SingularSystem("linear solver: singular tridiagonal system" + at_time(t), t);
  y_new.assign(n + 1, 0.0);
  for (std::size_t i = 1; i < n; ++i) y_new[i] = sol[i - 1];
  if (!all_finite(y_new))
    throw NumericBlowup("linear solver: non-finite values" + at_time(t), t);
}

void validate_linear(const LinearProblem& p, const char* who) {
  if (!(p.nu > 0.0)) throw PreconditionError(std::string(who) + ": nu must be positive");
  validate_span(p.t_start, p.t_end, p.dt, who);
  if (!(p.coeff.grid() == p.initial.grid()))
    throw PreconditionError(std::string(who) + ": coefficient grid differs from data grid");
  if (p.coeff.empty())
    throw PreconditionError(std::string(who) + ": empty coefficient trajectory");
  const double slack = 1e-9 * p.coeff.dt();
  if (p.coeff.t0() > p.t_start + slack || p.coeff.t_end() < p.t_end - slack)
    throw PreconditionError(std::string(who) + ": coefficient does not cover the time span");
}

}  // namespace

std::size_t step_count(double t_start, double t_end, double dt) {
  const double ratio = (t_end - t_start) / dt;
  return static_cast<std::size_t>(std::max(1.0, std::ceil(ratio - 1e-9)));
}

Trajectory solve_burgers(const BurgersProblem& p, const SolverOptions& opt) {
  if (!(p.nu > 0.0)) throw PreconditionError("solve_burgers: nu must be positive");
  validate_span(p.t_start, p.t_end, p.dt, "solve_burgers");
  if (!p.u0.is_dirichlet())
    throw PreconditionError("solve_burgers: u0 must vanish at x=0 and x=1");

  const std::size_t n_steps = step_count(p.t_start, p.t_end, p.dt);
  const double dt = (p.t_end - p.t_start) / static_cast<double>(n_steps);
  const Grid& grid = p.u0.grid();

  Trajectory out(grid, p.t_start, dt);
  out.push_back(p.u0);

  BurgersStepper stepper(p, opt);
  std::vector<double> u(p.u0.values().begin(), p.u0.values().end());
  std::vector<double> next;
  const double h_min = dt * std::ldexp(1.0, -std::max(0, opt.max_step_halvings));
  double h_try = dt;

  for (std::size_t k = 0; k < n_steps; ++k) {
    const double t_begin = p.t_start + static_cast<double>(k) * dt;
    const double t_target = p.t_start + static_cast<double>(k + 1) * dt;
    const bool startup = static_cast<int>(k) < opt.startup_steps;
    const Scheme scheme = startup ? Scheme::kBackwardEuler : Scheme::kCrankNicolson;
    double t = t_begin;
    double h_cap = startup ? 0.5 * dt : dt;
    h_try = std::min(std::max(h_try, h_min), h_cap);

    while (t_target - t > 1e-12 * dt) {
      double h = std::min(h_try, t_target - t);
      if (opt.max_courant > 0.0) {
        const double umax = max_abs(u);
        if (umax > 0.0) h = std::min(h, std::max(h_min, opt.max_courant * grid.dx() / umax));
      }
      if (t_target - t - h < 1e-9 * dt) h = t_target - t;

      if (stepper.step(u, t, h, scheme, next)) {
        u.swap(next);
        t += h;
        h_try = std::min(2.0 * h, h_cap);
        continue;
      }
      if (opt.max_step_halvings <= 0 || h <= h_min * (1.0 + 1e-12))
        throw StepFailure("solve_burgers: Newton failed to converge in " +
                              std::to_string(opt.max_newton_iter) + " iterations" +
                              at_time(t),
                          t);
      h_try = std::max(0.5 * h, h_min);
    }
    if (!all_finite(u)) throw NumericBlowup("solve_burgers: non-finite values" + at_time(t_target), t_target);
    out.push_back(Field(grid, u));
  }
  return out;
}

Trajectory solve_linear(const LinearProblem& p, const SolverOptions& opt) {
  if (p.direction != Direction::kForward)
    throw PreconditionError("solve_linear: problem direction must be forward");
  validate_linear(p, "solve_linear");
  const std::size_t n_steps = step_count(p.t_start, p.t_end, p.dt);
  const double dt = (p.t_end - p.t_start) / static_cast<double>(n_steps);
  const Grid& grid = p.initial.grid();

  Trajectory out(grid, p.t_start, dt);
  const Field w0 = p.initial.with_dirichlet();
  out.push_back(w0);
  std::vector<double> w(w0.values().begin(), w0.values().end()), next, scratch;
  for (std::size_t k = 0; k < n_steps; ++k) {
    const double t0 = p.t_start + static_cast<double>(k) * dt;
    if (static_cast<int>(k) < opt.startup_steps) {
      const double tm = t0 + 0.5 * dt;
      linear_step(Direction::kForward, p.nu, grid.dx(), p.coeff.at(t0), p.coeff.at(tm), w,
                  0.5 * dt, Scheme::kBackwardEuler, next, scratch, t0);
      w.swap(next);
      linear_step(Direction::kForward, p.nu, grid.dx(), p.coeff.at(tm), p.coeff.at(t0 + dt),
                  w, 0.5 * dt, Scheme::kBackwardEuler, next, scratch, tm);
    } else {
      linear_step(Direction::kForward, p.nu, grid.dx(), p.coeff.at(t0), p.coeff.at(t0 + dt),
                  w, dt, Scheme::kCrankNicolson, next, scratch, t0);
    }
    w.swap(next);
    out.push_back(Field(grid, w));
  }
  return out;
}

Trajectory solve_dual(const LinearProblem& p, const SolverOptions& opt) {
  if (p.direction != Direction::kBackwardDual)
    throw PreconditionError("solve_dual: problem direction must be backward-dual");
  validate_linear(p, "solve_dual");
  const std::size_t n_steps = step_count(p.t_start, p.t_end, p.dt);
  const double dt = (p.t_end - p.t_start) / static_cast<double>(n_steps);
  const Grid& grid = p.initial.grid();

  const Field z_end = p.initial.with_dirichlet();
  std::vector<Field> reversed{z_end};
  std::vector<double> z(z_end.values().begin(), z_end.values().end()), next, scratch;
  for (std::size_t k = 0; k < n_steps; ++k) {
    // Step from t1 down to t0, i.e. forward in s = t_end - t.
    const double t1 = p.t_end - static_cast<double>(k) * dt;
    const double t0 = p.t_end - static_cast<double>(k + 1) * dt;
    if (static_cast<int>(k) < opt.startup_steps) {
      const double tm = t1 - 0.5 * dt;
      linear_step(Direction::kBackwardDual, p.nu, grid.dx(), p.coeff.at(t1), p.coeff.at(tm),
                  z, 0.5 * dt, Scheme::kBackwardEuler, next, scratch, t1);
      z.swap(next);
      linear_step(Direction::kBackwardDual, p.nu, grid.dx(), p.coeff.at(tm), p.coeff.at(t0),
                  z, 0.5 * dt, Scheme::kBackwardEuler, next, scratch, tm);
    } else {
      linear_step(Direction::kBackwardDual, p.nu, grid.dx(), p.coeff.at(t1), p.coeff.at(t0),
                  z, dt, Scheme::kCrankNicolson, next, scratch, t1);
    }
    z.swap(next);
    reversed.push_back(Field(grid, z));
  }

  Trajectory out(grid, p.t_start, dt);
  for (auto it = reversed.rbegin(); it != reversed.rend(); ++it) out.push_back(*it);
  return out;
}

double duality_pairing_drift(const Trajectory& w, const Trajectory& z) {
  if (!(w.grid() == z.grid()))
    throw PreconditionError("duality_pairing_drift: grids differ");
  if (w.size() != z.size() || w.empty() ||
      std::abs(w.t0() - z.t0()) > 1e-12 * std::max(1.0, std::abs(w.t0())) ||
      std::abs(w.dt() - z.dt()) > 1e-12 * w.dt())
    throw PreconditionError("duality_pairing_drift: time windows differ");
  const double p0 = inner_product(w[0], z[0]);
  double drift = 0.0;
  for (std::size_t k = 1; k < w.size(); ++k)
    drift = std::max(drift, std::abs(inner_product(w[k], z[k]) - p0));
  return drift / std::max(std::abs(p0), 1e-30);
}

Trajectory mean_coefficient(const Trajectory& v, const Trajectory& u_hat) {
  if (!(v.grid() == u_hat.grid()) || v.size() != u_hat.size())
    throw PreconditionError("mean_coefficient: trajectories do not match");
  Trajectory a(v.grid(), v.t0(), v.dt());
  for (std::size_t k = 0; k < v.size(); ++k) a.push_back((v[k] + u_hat[k]).scaled(0.5));
  return a;
}

Trajectory constant_trajectory(const Field& f, double t0, double dt, std::size_t n_steps) {
  Trajectory out(f.grid(), t0, dt);
  for (std::size_t k = 0; k <= n_steps; ++k) out.push_back(f);
  return out;
}

Trajectory sample_trajectory(const Grid& grid, const SpaceTimeFn& g, double t0,
                             double dt, std::size_t n_steps) {
  Trajectory out(grid, t0, dt);
  for (std::size_t k = 0; k <= n_steps; ++k) {
    const double t = t0 + static_cast<double>(k) * dt;
    out.push_back(Field::sample(grid, [&](double x) { return g(t, x); }));
  }
  return out;
}

}  // namespace burgers
