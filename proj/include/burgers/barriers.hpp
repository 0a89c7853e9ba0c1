#pragma once

#include <cstdint>
#include <random>
#include <variant>
#include <vector>

#include "burgers/grid.hpp"
#include "burgers/solver.hpp"

namespace burgers {

enum class BarrierKind { kGlobalSuper, kGlobalSub, kLeftSuper };

struct BarrierValue {
  double value = 0.0;
  double dt = 0.0;
  double dx = 0.0;
  double dxx = 0.0;
};

/// Closed-form super/sub-solutions of u_t - nu u_xx + u u_x = h.
///
/// Global pair, with B = 1 + ||h||^(1/3) (T + eps)^(2/3) and L >= ||u0||_inf:
///   u+ = (B(B + x) + L eps) / (t + eps),   u- = -(B(B - x) + L eps) / (t + eps).
/// Left super-solution on [0, a]:
///   u = A / ((t + eps)(a - x + eps)),  A = Lambda + eps (L (a + eps) + N (T + eps)),
/// with L >= max_{[0,a]} |u0| and N >= max_t |u(t, a)|.
class Barrier {
 public:
  static Barrier global_super(double nu, double h_inf, double T, double L, double eps);
  static Barrier global_sub(double nu, double h_inf, double T, double L, double eps);
  /// lambda <= 0 selects minimal_lambda(nu, T, a, h_inf).
  static Barrier left_super(double nu, double h_inf, double T, double a, double L, double N,
                            double eps, double lambda = 0.0);

  BarrierKind kind() const { return kind_; }
  double nu() const { return nu_; }
  double eps() const { return eps_; }
  double T() const { return T_; }
  /// B for the global pair, A for the left super-solution.
  double coefficient() const { return coef_; }
  double lambda() const { return lambda_; }
  double a() const { return a_; }
  double L() const { return L_; }

  /// Throws DomainError where the closed form is singular (t + eps <= 0, or
  /// a - x + eps <= 0 for the left super-solution).
  BarrierValue eval(double t, double x) const;
  double operator()(double t, double x) const { return eval(t, x).value; }
  /// u_t - nu u_xx + u u_x - h at (t, x) with analytic derivatives.
  double residual(double t, double x, double h) const;

 private:
  Barrier(BarrierKind kind, double nu, double eps, double T, double coef, double lambda,
          double a, double L)
      : kind_(kind), nu_(nu), eps_(eps), T_(T), coef_(coef), lambda_(lambda), a_(a), L_(L) {}

  BarrierKind kind_;
  double nu_;
  double eps_;
  double T_;
  double coef_;
  double lambda_;
  double a_;
  double L_;
};

/// Smallest Lambda meeting both Lambda >= 4 nu (T+1) + 2 (a+1)^2 and
/// Lambda^2 >= 2 (T+1)^2 (a+1)^3 ||h||_inf.
double minimal_lambda(double nu, double T, double a, double h_inf);

/// eps -> 0 limit of the global pair at time T: B0 (B0 + 1) / T.
double global_bound_limit(double h_inf, double T);

/// Upper bound for u(T) on [0, delta]: minimal_lambda / (T (a - delta)).
double left_bound_formula(double nu, double T, double a, double delta, double h_inf);

/// Sampling lattice for residual checks: x in sub and t in [t0, t1].
struct ResidualLattice {
  Interval sub{0.0, 1.0};
  double t0 = 0.0;
  double t1 = 1.0;
  int nx = 4 * 128;  // intervals in x
  int nt = 4 * 128;  // intervals in t
};

/// Lattice with 4x the resolution of (grid, dt) on sub x [t0, t1].
ResidualLattice refined_lattice(const Grid& grid, double dt, Interval sub, double t0, double t1);

/// min of the strong residual over the lattice (>= -1e-10 certifies a
/// super-solution on the samples). An empty h means h == 0.
double check_supersolution(const Barrier& b, const SpaceTimeFn& h, const ResidualLattice& lat);
/// max of the strong residual over the lattice (<= 1e-10 certifies a sub-solution).
double check_subsolution(const Barrier& b, const SpaceTimeFn& h, const ResidualLattice& lat);

/// Either a discrete trajectory or a closed-form barrier.
using Profile = std::variant<const Trajectory*, const Barrier*>;

struct ComparisonReport {
  double max_violation = 0.0;    // max over checked frames and nodes of (lower - upper)+
  double final_violation = 0.0;  // same on the last checked frame
  double scale = 1.0;            // 1 + max |trajectory value| over the checked points
  double tol = 0.0;              // rel_tol * scale
  bool initial_ok = true;
  bool boundary_ok = true;
  std::size_t n_frames = 0;

  bool passed() const { return max_violation <= tol; }
};

/// Checks upper >= lower on the frames with t <= T and the nodes of sub, using
/// the time levels and nodes of whichever profile is a trajectory. The ordering
/// at t = 0 on sub and at the end nodes of sub for all t is a precondition;
/// a breach throws PreconditionError naming (t, x).
ComparisonReport comparison_check(Profile upper, Profile lower, Interval sub, double T,
                                  double rel_tol = 1e-3);

/// Smooth control amp * phi(x) * psi(t) with phi = sin^2 bump on the support
/// and psi a random cosine series in t normalised to max |psi| = 1.
SpaceTimeFn random_localized_control(std::mt19937_64& rng, Interval support, double horizon,
                                     double amp);

struct NoncontrolSetup {
  double T = 1.0;
  double delta = 0.25;
  double a = 0.5;
  double nu = 0.1;
  SpaceTimeFn forcing;  // empty means h == 0
  double h_inf = 0.0;   // ||h||_inf, used by the formulas
  std::vector<SpaceTimeFn> controls;
  std::vector<Field> initial_data;
  double dt = 1.0 / 256;
  double R = 10.0;
  double eps = 0.01;  // barrier parameter for the per-run comparison
  SolverOptions solver{};
};

struct NoncontrolReport {
  /// max over runs of max_{[0, delta]} u(T, .) (the quantity the barrier bounds).
  double rho_emp = 0.0;
  /// max over runs of ||u(T)||_{L inf([0, delta])}, reported for reference.
  double linf_emp = 0.0;
  double rho_formula = 0.0;
  double lambda = 0.0;
  /// Target u_hat = rho_formula + sqrt(delta) R + 1 on (0, delta); minimum over
  /// runs of ||u(T) - u_hat||_{L2(0, delta)}.
  double min_target_distance = 0.0;
  /// Largest comparison violation of u against the left super-solution on [0, a].
  double max_barrier_violation = 0.0;
  bool barrier_ok = true;
  int n_runs = 0;
};

/// Every control must vanish at all nodes x < a (checked on the solver's time
/// levels); otherwise PreconditionError.
NoncontrolReport non_controllability_experiment(const NoncontrolSetup& setup);

}  // namespace burgers
