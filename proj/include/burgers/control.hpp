#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "burgers/grid.hpp"
#include "burgers/solver.hpp"

namespace burgers {

/// Value and analytic derivatives of chi(t, x) = 1 - beta(t) (1 - chi0(x)).
struct CutoffValue {
  double value = 1.0;
  double dx = 0.0;
  double dxx = 0.0;
  double dt = 0.0;
};

/// Space cutoff chi0 (1 off [a,b], 0 on the inner interval) and time ramp beta
/// (0 for t <= 1/2, 1 for t >= 1), both built from the quintic smoothstep
/// 6s^5 - 15s^4 + 10s^3, which is C^2 with exact zeros of its first two
/// derivatives at the band edges.
class CutoffSystem {
 public:
  /// Requires 0 < support.lo < inner.lo < inner.hi < support.hi < 1.
  CutoffSystem(Interval support, Interval inner);
  /// Inner interval = middle half of the support.
  explicit CutoffSystem(Interval support);

  Interval support() const { return support_; }
  Interval inner() const { return inner_; }

  double chi0(double x) const;
  double chi0_dx(double x) const;
  double chi0_dxx(double x) const;
  double beta(double t) const;
  double beta_dt(double t) const;

  CutoffValue chi(double t, double x) const;

 private:
  Interval support_;
  Interval inner_;
};

/// Default inner interval: [a + (b-a)/4, b - (b-a)/4].
Interval middle_half(Interval support);

enum class CycleKind { kFree, kControlled };

std::string to_string(CycleKind kind);

struct CycleRecord {
  int k = 0;
  CycleKind kind = CycleKind::kControlled;
  double l1_start = 0.0;  // ||u(k) - u_hat(k)||_{L1}
  double l1_end = 0.0;    // ||u(k+1) - u_hat(k+1)||_{L1}
  /// Same end error computed as int chi0 |v(k+1) - u_hat(k+1)| dx on
  /// controlled cycles; equals l1_end on free cycles.
  double l1_end_cutoff = 0.0;

  double ratio() const { return l1_start > 0.0 ? l1_end / l1_start : 0.0; }
};

struct ControlProblem {
  Field u0;
  Field u_hat0;
  SpaceTimeFn forcing;  // empty means h == 0
  double nu = 0.1;
  CutoffSystem cutoffs;
  int n_cycles = 10;
  /// Shortened so that a whole number of steps fits in each unit cycle.
  double dt = 0.0;
  SolverOptions solver{};
};

struct ControlledRun {
  Trajectory u;       // controlled solution on [0, n_cycles]
  Trajectory u_hat;   // reference solution, zeta == 0
  /// Control on [0, n_cycles]; at an integer time the frame holds the limit
  /// from the left (the cycle that ends there).
  Trajectory zeta;
  /// Control per cycle on [k, k+1], both endpoints included.
  std::vector<Trajectory> zeta_cycles;
  std::vector<CycleRecord> cycles;
  bool short_circuited = false;  // u0 == u_hat0 up to 1e-13 in L1
};

/// Alternating-cycle construction: on every cycle the free solution v starts
/// from u(k); free cycles keep u = v, controlled (even) cycles set
/// u = u_hat + chi(t - k, x) (v - u_hat).
ControlledRun build_controlled_trajectory(const ControlProblem& p);

/// Closed-form control on an even cycle k from the free solution v and the
/// reference u_hat restricted to [k, k+1]; w_x uses central differences.
Trajectory reconstruct_zeta(const Trajectory& v, const Trajectory& u_hat,
                            const CutoffSystem& cs, double nu, int k);

/// CSV with header "k,kind,l1_start,l1_end,ratio".
void write_cycles_csv(std::ostream& os, const std::vector<CycleRecord>& cycles);

/// Cycle-boundary errors e(0), e(1), ..., e(n_cycles).
std::vector<double> cycle_errors(const ControlledRun& run);

/// max over t in [k, k+1] of ||zeta(t)||_{H1}, one entry per cycle.
std::vector<double> zeta_h1_per_cycle(const ControlledRun& run);

/// max over cycles and consecutive frames of ||zeta(t_{j+1}) - zeta(t_j)||_{H1} / dt.
double zeta_time_lipschitz(const ControlledRun& run);

struct DecayFit {
  double C = 0.0;
  double gamma = 0.0;
  double theta = 0.0;
  int n_cycles = 0;
  bool zero_error = false;  // nothing to stabilise

  bool stabilised() const { return zero_error || gamma > 0.0; }
};

/// theta = max over even k of e(k+1)/e(k); (C, gamma) from the least-squares
/// line log e(k) = log C - gamma k over k >= 2. Needs at least 4 entries.
DecayFit fit_decay(std::span<const double> errors);

}  // namespace burgers
