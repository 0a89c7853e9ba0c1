#include "burgers/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "burgers/errors.hpp"

namespace burgers {

namespace {

double trapezoid(std::span<const double> g, double dx) {
  double sum = 0.5 * (g.front() + g.back());
  for (std::size_t i = 1; i + 1 < g.size(); ++i) sum += g[i];
  return sum * dx;
}

double trapezoid_of_squares(std::span<const double> g, double dx) {
  double sum = 0.5 * (g.front() * g.front() + g.back() * g.back());
  for (std::size_t i = 1; i + 1 < g.size(); ++i) sum += g[i] * g[i];
  return sum * dx;
}

// Fractional node index, snapped to the nearest node when within rounding.
double node_position(double x, double dx) {
  const double s = x / dx;
  const double r = std::round(s);
  return std::abs(s - r) < 1e-9 ? r : s;
}

double interpolate(std::span<const double> v, double s) {
  const auto last = v.size() - 1;
  const auto i = std::min(static_cast<std::size_t>(std::floor(s)), last);
  if (i == last) return v[last];
  const double frac = s - static_cast<double>(i);
  return (1.0 - frac) * v[i] + frac * v[i + 1];
}

}  // namespace

Grid::Grid(int n_cells) : n_cells_(n_cells), dx_(0.0) {
  if (n_cells < kMinCells)
    throw PreconditionError("Grid: n_cells must be >= " +
                            std::to_string(kMinCells) + ", got " +
                            std::to_string(n_cells));
  dx_ = 1.0 / static_cast<double>(n_cells);
}

Field::Field(Grid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.n_nodes())
    throw PreconditionError("Field: expected " +
                            std::to_string(grid_.n_nodes()) + " values, got " +
                            std::to_string(values_.size()));
}

Field Field::zeros(const Grid& grid) {
  return Field(grid, std::vector<double>(grid.n_nodes(), 0.0));
}

Field Field::sample(const Grid& grid, const std::function<double(double)>& f) {
  std::vector<double> v(grid.n_nodes());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(grid.x(i));
  return Field(grid, std::move(v));
}

Field Field::sample_dirichlet(const Grid& grid,
                              const std::function<double(double)>& f) {
  return sample(grid, f).with_dirichlet();
}

Field Field::with_dirichlet() const {
  auto v = values_;
  v.front() = 0.0;
  v.back() = 0.0;
  return Field(grid_, std::move(v));
}

Field Field::scaled(double lambda) const {
  auto v = values_;
  for (auto& x : v) x *= lambda;
  return Field(grid_, std::move(v));
}

Field Field::positive_part() const {
  auto v = values_;
  for (auto& x : v) x = std::max(x, 0.0);
  return Field(grid_, std::move(v));
}

Field Field::negative_part() const {
  auto v = values_;
  for (auto& x : v) x = std::max(-x, 0.0);
  return Field(grid_, std::move(v));
}

Field operator+(const Field& a, const Field& b) {
  if (!(a.grid_ == b.grid_)) throw PreconditionError("Field+: grid mismatch");
  auto v = a.values_;
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += b.values_[i];
  return Field(a.grid_, std::move(v));
}

Field operator-(const Field& a, const Field& b) {
  if (!(a.grid_ == b.grid_)) throw PreconditionError("Field-: grid mismatch");
  auto v = a.values_;
  for (std::size_t i = 0; i < v.size(); ++i) v[i] -= b.values_[i];
  return Field(a.grid_, std::move(v));
}

Trajectory::Trajectory(Grid grid, double t0, double dt)
    : grid_(grid), t0_(t0), dt_(dt) {
  if (!(dt > 0.0)) throw PreconditionError("Trajectory: dt must be positive");
}

void Trajectory::push_back(Field frame) {
  if (!(frame.grid() == grid_))
    throw PreconditionError("Trajectory: frame grid differs from trajectory grid");
  frames_.push_back(std::move(frame));
}

std::size_t Trajectory::index_of(double t) const {
  const double s = std::round((t - t0_) / dt_);
  const double clamped =
      std::clamp(s, 0.0, static_cast<double>(frames_.size() - 1));
  return static_cast<std::size_t>(clamped);
}

std::vector<double> Trajectory::at(double t) const {
  if (frames_.empty()) throw PreconditionError("Trajectory::at on empty trajectory");
  const double s = (t - t0_) / dt_;
  const double last = static_cast<double>(frames_.size() - 1);
  if (s < -1e-9 || s > last + 1e-9)
    throw PreconditionError("Trajectory::at: time " + std::to_string(t) +
                            " outside [" + std::to_string(t0_) + ", " +
                            std::to_string(t_end()) + "]");
  const double r = std::round(s);
  if (std::abs(s - r) < 1e-9) {
    const auto v = frames_[static_cast<std::size_t>(std::clamp(r, 0.0, last))].values();
    return {v.begin(), v.end()};
  }
  const auto k = static_cast<std::size_t>(std::floor(s));
  const double frac = s - static_cast<double>(k);
  const auto a = frames_[k].values();
  const auto b = frames_[k + 1].values();
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    out[i] = (1.0 - frac) * a[i] + frac * b[i];
  return out;
}

double norm_l1_on(const Field& f, Interval sub) {
  if (!(sub.lo >= 0.0 && sub.hi <= 1.0 && sub.lo <= sub.hi))
    throw PreconditionError("norm_l1_on: invalid interval [" +
                            std::to_string(sub.lo) + ", " +
                            std::to_string(sub.hi) + "]");
  const double dx = f.grid().dx();
  const auto v = f.values();
  const double s_lo = node_position(sub.lo, dx);
  const double s_hi = node_position(sub.hi, dx);
  const double f_lo = std::abs(interpolate(v, s_lo));
  const double f_hi = std::abs(interpolate(v, s_hi));
  const auto i_lo = static_cast<std::size_t>(std::ceil(s_lo));
  const auto i_hi = static_cast<std::size_t>(std::floor(s_hi));
  if (i_lo > i_hi) return 0.5 * (f_lo + f_hi) * (sub.hi - sub.lo);

  double sum = 0.0;
  sum += 0.5 * (f_lo + std::abs(v[i_lo])) * (static_cast<double>(i_lo) - s_lo) * dx;
  if (i_hi > i_lo) {
    std::vector<double> abs_v(v.begin() + static_cast<std::ptrdiff_t>(i_lo),
                              v.begin() + static_cast<std::ptrdiff_t>(i_hi) + 1);
    for (auto& x : abs_v) x = std::abs(x);
    sum += trapezoid(abs_v, dx);
  }
  sum += 0.5 * (std::abs(v[i_hi]) + f_hi) * (s_hi - static_cast<double>(i_hi)) * dx;
  return sum;
}

double norm_l1(const Field& f) { return norm_l1_on(f, Interval{0.0, 1.0}); }

double norm_l2(const Field& f) {
  return std::sqrt(trapezoid_of_squares(f.values(), f.grid().dx()));
}

double norm_linf(const Field& f) {
  double m = 0.0;
  for (double x : f.values()) m = std::max(m, std::abs(x));
  return m;
}

double inner_product(const Field& f, const Field& g) {
  if (!(f.grid() == g.grid()))
    throw PreconditionError("inner_product: grid mismatch");
  const auto a = f.values();
  const auto b = g.values();
  double sum = 0.5 * (a.front() * b.front() + a.back() * b.back());
  for (std::size_t i = 1; i + 1 < a.size(); ++i) sum += a[i] * b[i];
  return sum * f.grid().dx();
}

std::vector<double> d_dx(const Field& f) {
  const auto v = f.values();
  const auto n = v.size() - 1;
  const double inv2dx = 0.5 / f.grid().dx();
  std::vector<double> d(v.size());
  d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) * inv2dx;
  for (std::size_t i = 1; i < n; ++i) d[i] = (v[i + 1] - v[i - 1]) * inv2dx;
  d[n] = (3.0 * v[n] - 4.0 * v[n - 1] + v[n - 2]) * inv2dx;
  return d;
}

std::vector<double> d2_dx2(const Field& f) {
  const auto v = f.values();
  const auto n = v.size() - 1;
  const double dx = f.grid().dx();
  const double inv = 1.0 / (dx * dx);
  std::vector<double> d(v.size());
  d[0] = (2.0 * v[0] - 5.0 * v[1] + 4.0 * v[2] - v[3]) * inv;
  for (std::size_t i = 1; i < n; ++i)
    d[i] = (v[i + 1] - 2.0 * v[i] + v[i - 1]) * inv;
  d[n] = (2.0 * v[n] - 5.0 * v[n - 1] + 4.0 * v[n - 2] - v[n - 3]) * inv;
  return d;
}

double norm_h1(const Field& f) {
  const double dx = f.grid().dx();
  return std::sqrt(trapezoid_of_squares(f.values(), dx) +
                   trapezoid_of_squares(d_dx(f), dx));
}

double norm_h2(const Field& f) {
  const double dx = f.grid().dx();
  return std::sqrt(trapezoid_of_squares(f.values(), dx) +
                   trapezoid_of_squares(d_dx(f), dx) +
                   trapezoid_of_squares(d2_dx2(f), dx));
}

double interpolation_ratio(const Field& f) {
  const double l1 = norm_l1(f);
  if (l1 == 0.0) throw DomainError("interpolation_ratio: zero field");
  return norm_h1(f) / (std::pow(l1, 0.4) * std::pow(norm_h2(f), 0.6));
}

void write_csv(std::ostream& os, const Field& f) {
  os << "x,value\n";
  const auto v = f.values();
  const auto old = os.precision(std::numeric_limits<double>::max_digits10);
  for (std::size_t i = 0; i < v.size(); ++i) os << f.grid().x(i) << ',' << v[i] << '\n';
  os.precision(old);
}

void write_csv(std::ostream& os, const Trajectory& traj) {
  os << "t,x,value\n";
  const auto old = os.precision(std::numeric_limits<double>::max_digits10);
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const auto v = traj[k].values();
    for (std::size_t i = 0; i < v.size(); ++i)
      os << traj.time(k) << ',' << traj.grid().x(i) << ',' << v[i] << '\n';
  }
  os.precision(old);
}

}  // namespace burgers
