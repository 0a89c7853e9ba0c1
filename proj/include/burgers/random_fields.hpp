#pragma once

#include <random>

#include "burgers/grid.hpp"
#include "burgers/solver.hpp"

namespace burgers {

/// Dirichlet field sum_{m=1}^{n_modes} c_m sin(m pi x), c_m ~ N(0, 1) * amp / m^2.
Field random_fourier_field(const Grid& grid, std::mt19937_64& rng, int n_modes,
                           double amp);

/// Non-negative Dirichlet field: a positive combination of sin(m pi x)^2 bumps
/// and sin(pi x), normalised to sup norm amp.
Field random_nonnegative_field(const Grid& grid, std::mt19937_64& rng, int n_modes,
                               double amp);

/// Smooth space-time function sum_{j,m} c_jm cos(j pi t / T) sin(m pi x) with
/// coefficients decaying like 1/(m^2 (1+j)^2). Evaluated in closed form, so the
/// same draw can be sampled on different grids.
class RandomSpaceTimeSeries {
 public:
  RandomSpaceTimeSeries(std::mt19937_64& rng, int n_space_modes, int n_time_modes,
                        double horizon);
  double operator()(double t, double x) const;
  SpaceTimeFn as_function() const;

 private:
  int n_space_;
  int n_time_;
  double horizon_;
  std::vector<double> coeffs_;
};

}  // namespace burgers
