#include "burgers/random_fields.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace burgers {

using std::numbers::pi;

Field random_fourier_field(const Grid& grid, std::mt19937_64& rng, int n_modes,
                           double amp) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> c(static_cast<std::size_t>(n_modes));
  for (int m = 1; m <= n_modes; ++m)
    c[static_cast<std::size_t>(m - 1)] = normal(rng) * amp / (m * m);
  return Field::sample_dirichlet(grid, [&](double x) {
    double s = 0.0;
    for (int m = 1; m <= n_modes; ++m) s += c[static_cast<std::size_t>(m - 1)] * std::sin(m * pi * x);
    return s;
  });
}

Field random_nonnegative_field(const Grid& grid, std::mt19937_64& rng, int n_modes,
                               double amp) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> c(static_cast<std::size_t>(n_modes));
  for (int m = 1; m <= n_modes; ++m) c[static_cast<std::size_t>(m - 1)] = unit(rng) / m;
  const double base = 0.05 + unit(rng);
  Field raw = Field::sample_dirichlet(grid, [&](double x) {
    double s = base * std::sin(pi * x);
    for (int m = 1; m <= n_modes; ++m) {
      const double b = std::sin(m * pi * x);
      s += c[static_cast<std::size_t>(m - 1)] * b * b;
    }
    return std::max(s, 0.0);
  });
  return raw.scaled(amp / norm_linf(raw));
}

RandomSpaceTimeSeries::RandomSpaceTimeSeries(std::mt19937_64& rng, int n_space_modes,
                                             int n_time_modes, double horizon)
    : n_space_(n_space_modes), n_time_(n_time_modes), horizon_(horizon) {
  std::normal_distribution<double> normal(0.0, 1.0);
  coeffs_.resize(static_cast<std::size_t>(n_space_ * n_time_));
  for (int j = 0; j < n_time_; ++j)
    for (int m = 1; m <= n_space_; ++m)
      coeffs_[static_cast<std::size_t>(j * n_space_ + m - 1)] =
          normal(rng) / (static_cast<double>(m * m) * (1.0 + j) * (1.0 + j));
}

double RandomSpaceTimeSeries::operator()(double t, double x) const {
  double s = 0.0;
  for (int j = 0; j < n_time_; ++j) {
    const double ct = std::cos(j * pi * t / horizon_);
    for (int m = 1; m <= n_space_; ++m)
      s += coeffs_[static_cast<std::size_t>(j * n_space_ + m - 1)] * ct * std::sin(m * pi * x);
  }
  return s;
}

SpaceTimeFn RandomSpaceTimeSeries::as_function() const {
  return [self = *this](double t, double x) { return self(t, x); };
}

}  // namespace burgers
