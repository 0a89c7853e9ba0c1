#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

namespace burgers {

/// Closed interval [lo, hi] of the real line.
struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  double length() const { return hi - lo; }
  bool contains(double x) const { return lo <= x && x <= hi; }
  bool operator==(const Interval&) const = default;
};

/// Uniform mesh of the unit interval with nodes x_i = i * dx, i = 0..n_cells.
class Grid {
 public:
  static constexpr int kMinCells = 8;

  explicit Grid(int n_cells);

  int n_cells() const { return n_cells_; }
  std::size_t n_nodes() const { return static_cast<std::size_t>(n_cells_) + 1; }
  double dx() const { return dx_; }
  double x(std::size_t i) const { return static_cast<double>(i) * dx_; }

  bool operator==(const Grid&) const = default;

 private:
  int n_cells_;
  double dx_;
};

/// Nodal samples of a spatial profile at one time.
class Field {
 public:
  Field(Grid grid, std::vector<double> values);

  static Field zeros(const Grid& grid);
  /// Samples f at every node. The Dirichlet variant pins both endpoints to 0.
  static Field sample(const Grid& grid, const std::function<double(double)>& f);
  static Field sample_dirichlet(const Grid& grid,
                                const std::function<double(double)>& f);

  const Grid& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

  bool is_dirichlet() const {
    return values_.front() == 0.0 && values_.back() == 0.0;
  }
  Field with_dirichlet() const;
  Field scaled(double lambda) const;
  Field positive_part() const;
  Field negative_part() const;

  friend Field operator+(const Field& a, const Field& b);
  friend Field operator-(const Field& a, const Field& b);

 private:
  Grid grid_;
  std::vector<double> values_;
};

/// Frames at t0 + k*dt sharing one grid.
class Trajectory {
 public:
  Trajectory(Grid grid, double t0, double dt);

  void push_back(Field frame);

  const Grid& grid() const { return grid_; }
  double t0() const { return t0_; }
  double dt() const { return dt_; }
  double t_end() const { return time(frames_.size() - 1); }
  double time(std::size_t k) const { return t0_ + static_cast<double>(k) * dt_; }
  std::size_t size() const { return frames_.size(); }
  bool empty() const { return frames_.empty(); }
  const Field& operator[](std::size_t k) const { return frames_[k]; }
  const Field& front() const { return frames_.front(); }
  const Field& back() const { return frames_.back(); }
  const std::vector<Field>& frames() const { return frames_; }

  /// Linear interpolation in time; t must lie in [t0, t_end] up to dt*1e-9.
  std::vector<double> at(double t) const;
  /// Index of the frame closest to t.
  std::size_t index_of(double t) const;

 private:
  Grid grid_;
  double t0_;
  double dt_;
  std::vector<Field> frames_;
};

// Discrete norms. Integrals use the trapezoid rule on the nodes; derivatives
// are central differences in the interior and second-order one-sided at the
// endpoints.

double norm_l1(const Field& f);
double norm_l1_on(const Field& f, Interval sub);
double norm_l2(const Field& f);
double norm_linf(const Field& f);
double norm_h1(const Field& f);
double norm_h2(const Field& f);
double inner_product(const Field& f, const Field& g);

std::vector<double> d_dx(const Field& f);
std::vector<double> d2_dx2(const Field& f);

/// ||f||_{H1} / (||f||_{L1}^{2/5} ||f||_{H2}^{3/5}); throws DomainError on a
/// zero field.
double interpolation_ratio(const Field& f);

/// CSV with header "x,value".
void write_csv(std::ostream& os, const Field& f);
/// Long-format CSV with header "t,x,value".
void write_csv(std::ostream& os, const Trajectory& traj);

}  // namespace burgers
