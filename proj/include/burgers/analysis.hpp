#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <vector>

#include "burgers/grid.hpp"
#include "burgers/solver.hpp"

namespace burgers {

/// Discrete version of ||a||_{C^s} + ||a_x||_inf on the space-time lattice of a
/// trajectory. The Hoelder seminorm is bounded by holder_x + holder_t, the
/// seminorms over all same-time node pairs and all same-node time pairs.
struct CoefficientBound {
  double sup_abs = 0.0;
  double holder_x = 0.0;
  double holder_t = 0.0;
  double sup_dx = 0.0;

  double total() const { return sup_abs + holder_x + holder_t + sup_dx; }
};

CoefficientBound coefficient_bound(const Trajectory& a, double s = 0.5);

/// Smooth random coefficient on [0, horizon] sampled every dt and rescaled so
/// that coefficient_bound(.).total() == rho.
Trajectory random_coefficient(const Grid& grid, std::mt19937_64& rng, double rho,
                              double horizon, double dt);

/// One linear problem w_t - nu w_xx + (a w)_x = 0 on [0, T].
struct LinearScenario {
  Trajectory coeff;
  Field w0;
};

struct ProbeSettings {
  double nu = 0.1;
  double T = 1.0;
  SolverOptions solver{};
};

struct DichotomyVerdict {
  double q_side = 0.0;     // ||w(T)||_{L1} / ||w(0)||_{L1}
  double mass_side = 0.0;  // ||w(T)||_{L1(I')} / ||w(0)||_{L1}
  double q = 0.0;
  double eps = 0.0;

  bool contraction_holds() const { return q_side <= q; }
  bool mass_holds() const { return mass_side >= eps; }
  bool holds() const { return contraction_holds() || mass_holds(); }
};

DichotomyVerdict dichotomy_probe(const LinearScenario& s, const ProbeSettings& cfg,
                                 Interval inner, double q, double eps);

/// Smallest q that covers every verdict together with threshold eps:
/// max of q_side over verdicts with mass_side < eps (0 if there are none).
double required_q(std::span<const DichotomyVerdict> verdicts, double eps);

struct FrontierPoint {
  double q = 0.0;
  double eps = 0.0;
};

struct DichotomyReport {
  std::vector<DichotomyVerdict> verdicts;
  double q = 0.0;
  double eps = 0.0;
  double uncovered_fraction = 0.0;  // for the requested (q, eps)
  /// Pareto-optimal (q, eps) pairs covering every scenario, eps increasing.
  std::vector<FrontierPoint> frontier;
  /// eps_star = median mass_side, q_star = required_q(eps_star).
  double q_star = 0.0;
  double eps_star = 0.0;
};

/// Every scenario must satisfy coefficient_bound(.).total() <= rho.
DichotomyReport ensemble_dichotomy(std::span<const LinearScenario> scenarios,
                                   const ProbeSettings& cfg, Interval inner, double rho,
                                   double q, double eps);

/// max_t ||w(t) - (w+(t) - w-(t))||_inf where w+- start from the positive and
/// negative parts of w0.
double decomposition_defect(const LinearScenario& s, const ProbeSettings& cfg);

struct HarnackEstimate {
  Interval K;  // after rounding inward to nodes
  double T_prime = 0.0;
  double T = 0.0;
  double ratio = 0.0;  // sup_K w(T') / inf_K w(T)
};

/// T_prime <= 0 selects 2T/3. Throws PositivityViolation if inf_K w(T) <= 0.
HarnackEstimate harnack_probe(const LinearScenario& s, const ProbeSettings& cfg, Interval K,
                              double T_prime = 0.0);

/// sup over frames with t in [tau, T] of ||w(t)||_inf, divided by ||w(0)||_{L1}.
double sup_bound_probe(const LinearScenario& s, const ProbeSettings& cfg, double tau);

struct EnsembleSpec {
  double rho = 2.0;
  int n = 100;
  int n_cells = 128;
  double dt = 1.0 / 128;
  double horizon = 1.0;
  std::uint64_t seed = 1;
  /// Draw non-negative initial data only (Harnack probe).
  bool nonnegative = false;
};

/// Scenario i depends only on (seed, i), so members can be produced in any
/// order or in parallel.
LinearScenario ensemble_member(const EnsembleSpec& spec, int index);
std::vector<LinearScenario> random_ensemble(const EnsembleSpec& spec);

struct EnsembleSummary {
  double C_emp = 0.0;  // max Harnack ratio over non-negative members
  double M_emp = 0.0;  // max sup-bound value
};

/// Harnack ratio with K = inner and the sup bound with tau = 2T/3, over the
/// members of a non-negative ensemble.
EnsembleSummary harnack_sup_summary(const EnsembleSpec& spec, const ProbeSettings& cfg,
                                    Interval K);

/// CSV with header "index,q_side,mass_side,holds".
void write_dichotomy_csv(std::ostream& os, std::span<const DichotomyVerdict> verdicts);

/// Largest one-step increase of ||a(t_k) - b(t_k)||_{L1} over the frames, 0 when
/// the distance never grows. The trajectories must share grid and time levels.
double max_l1_increase(const Trajectory& a, const Trajectory& b);
/// Largest one-step increase of ||w(t_k)||_{L1}.
double max_l1_increase(const Trajectory& w);

}  // namespace burgers
