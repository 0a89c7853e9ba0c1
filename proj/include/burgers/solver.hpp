#pragma once

#include <functional>

#include "burgers/grid.hpp"

namespace burgers {

/// Source term g(t, x).
using SpaceTimeFn = std::function<double(double t, double x)>;

/// Knobs for the Crank-Nicolson integrators.
struct SolverOptions {
  /// Newton stops once ||residual||_inf <= newton_tol * max(1, ||u||_inf).
  double newton_tol = 1e-11;
  int max_newton_iter = 50;
  /// Times an output step may be halved after a Newton failure. 0 makes the
  /// first failure fatal.
  int max_step_halvings = 24;
  /// Upper bound on max|u| * substep / dx; 0 disables the cap.
  double max_courant = 1.0;
  /// Number of leading output steps taken as two backward-Euler half steps
  /// each (Rannacher start-up), for rough initial data.
  int startup_steps = 2;
};

/// Controlled viscous Burgers problem on (0,1) with homogeneous Dirichlet data:
///   u_t - nu u_xx + (u^2/2)_x = h + zeta.
struct BurgersProblem {
  double nu = 1.0;
  SpaceTimeFn forcing;  // empty means h == 0
  SpaceTimeFn control;  // empty means zeta == 0
  Field u0;
  double t_start = 0.0;
  double t_end = 1.0;
  /// Output step; shortened if needed so that whole steps tile the span.
  double dt = 0.0;
};

enum class Direction { kForward, kBackwardDual };

/// Linearised difference equation  w_t - nu w_xx + (a w)_x = 0  (forward) or
/// its adjoint  z_t + nu z_xx + a z_x = 0  with terminal data (backward).
struct LinearProblem {
  double nu = 1.0;
  Trajectory coeff;
  /// w(t_start) for the forward problem, z(t_end) for the dual.
  Field initial;
  Direction direction = Direction::kForward;
  double t_start = 0.0;
  double t_end = 1.0;
  double dt = 0.0;
};

/// Crank-Nicolson in time, conservative centred flux in space, one Newton
/// solve per step. Frames are at t_start + k*dt.
Trajectory solve_burgers(const BurgersProblem& p, const SolverOptions& opt = {});

Trajectory solve_linear(const LinearProblem& p, const SolverOptions& opt = {});

/// Integrates the dual backward from t_end; frames are returned in increasing t.
Trajectory solve_dual(const LinearProblem& p, const SolverOptions& opt = {});

/// max_k |(w(t_k), z(t_k)) - (w(t_0), z(t_0))| / max(|(w(t_0), z(t_0))|, 1e-30).
double duality_pairing_drift(const Trajectory& w, const Trajectory& z);

/// Coefficient trajectory a = (v + u_hat) / 2 linking two Burgers solutions.
Trajectory mean_coefficient(const Trajectory& v, const Trajectory& u_hat);

/// Trajectory constant in time, frames at t0 + k*dt for k = 0..n_steps.
Trajectory constant_trajectory(const Field& f, double t0, double dt,
                               std::size_t n_steps);

/// Samples g on every node of every frame time.
Trajectory sample_trajectory(const Grid& grid, const SpaceTimeFn& g, double t0,
                             double dt, std::size_t n_steps);

/// Number of whole steps of size <= dt that tile [t_start, t_end].
std::size_t step_count(double t_start, double t_end, double dt);

}  // namespace burgers
