#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "nlsb/errors.hpp"

namespace nlsb {

// Thomas algorithm, no pivoting. Caller guarantees the system is safe for
// elimination in natural order (diagonal dominance, or an M-matrix, or the
// Crank-Nicolson i*I + small*tridiagonal shape whose diagonal can never be
// annihilated). lower[0] and upper[n-1] are ignored.
template <typename T>
void solve_tridiagonal(const std::vector<T>& lower, const std::vector<T>& diag,
                       const std::vector<T>& upper, std::vector<T>& rhs) {
  const std::size_t n = diag.size();
  if (lower.size() != n || upper.size() != n || rhs.size() != n)
    throw dimension_error("tridiagonal: band/rhs sizes disagree");
  if (n == 0) return;

  std::vector<T> scratch(n);
  T d = diag[0];
  if (d == T(0)) throw numeric_error("tridiagonal: zero pivot at row 0");
  rhs[0] /= d;
  if (n == 1) return;
  scratch[0] = upper[0] / d;
  for (std::size_t k = 1; k < n; ++k) {
    d = diag[k] - lower[k] * scratch[k - 1];
    if (d == T(0)) throw numeric_error("tridiagonal: zero pivot");
    scratch[k] = upper[k] / d;
    rhs[k] = (rhs[k] - lower[k] * rhs[k - 1]) / d;
  }
  for (std::size_t k = n - 1; k-- > 0;) rhs[k] -= scratch[k] * rhs[k + 1];
}

}  // namespace nlsb
