#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace burgers::detail {

/// Thomas algorithm for lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i].
/// lower[0] and upper[n-1] are ignored. Returns false on a vanishing pivot.
inline bool solve_tridiagonal(std::span<const double> lower,
                              std::span<const double> diag,
                              std::span<const double> upper,
                              std::span<const double> rhs,
                              std::span<double> x,
                              std::vector<double>& scratch) {
  const std::size_t n = diag.size();
  scratch.resize(n);
  double pivot = diag[0];
  if (!(std::abs(pivot) > 0.0)) return false;
  x[0] = rhs[0] / pivot;
  for (std::size_t i = 1; i < n; ++i) {
    scratch[i] = upper[i - 1] / pivot;
    pivot = diag[i] - lower[i] * scratch[i];
    if (!(std::abs(pivot) >
          1e-13 * (std::abs(diag[i]) + std::abs(lower[i] * scratch[i]))))
      return false;
    x[i] = (rhs[i] - lower[i] * x[i - 1]) / pivot;
  }
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= scratch[i + 1] * x[i + 1];
  return true;
}

}  // namespace burgers::detail
