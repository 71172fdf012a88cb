#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "nlsb/grid.hpp"
#include "nlsb/tridiagonal.hpp"

namespace nlsb {

// Quadrature and discrete norms. Everything is trapezoid-weighted on the
// uniform grid; fields that carry a bookkeeping zero at the interface node
// (decomposed mode) are normed exactly as stored.

inline double trapezoid(const Grid1D& g, const RealField& f) {
  require_size(g, f.size(), "trapezoid");
  double s = 0.5 * (f.front() + f.back());
  for (std::size_t k = 1; k + 1 < g.n; ++k) s += f[k];
  return s * g.h;
}

inline double l2_norm(const Grid1D& g, const RealField& f) {
  require_size(g, f.size(), "l2_norm");
  double s = 0.5 * (f.front() * f.front() + f.back() * f.back());
  for (std::size_t k = 1; k + 1 < g.n; ++k) s += f[k] * f[k];
  return std::sqrt(s * g.h);
}

inline double l2_norm(const Grid1D& g, const ComplexField& f) {
  require_size(g, f.size(), "l2_norm");
  double s = 0.5 * (std::norm(f.front()) + std::norm(f.back()));
  for (std::size_t k = 1; k + 1 < g.n; ++k) s += std::norm(f[k]);
  return std::sqrt(s * g.h);
}

// Centered first difference in the interior, one-sided at the endpoints.
template <typename T>
std::vector<T> dx_central(const Grid1D& g, const std::vector<T>& f) {
  require_size(g, f.size(), "dx_central");
  std::vector<T> d(g.n);
  const double inv2h = 1.0 / (2.0 * g.h);
  d[0] = (f[1] - f[0]) * (1.0 / g.h);
  for (std::size_t k = 1; k + 1 < g.n; ++k) d[k] = (f[k + 1] - f[k - 1]) * inv2h;
  d[g.n - 1] = (f[g.n - 1] - f[g.n - 2]) * (1.0 / g.h);
  return d;
}

template <typename T>
double h1_norm(const Grid1D& g, const std::vector<T>& f) {
  const auto d = dx_central(g, f);
  const double a = l2_norm(g, f);
  const double b = l2_norm(g, d);
  return std::sqrt(a * a + b * b);
}

// Discrete H^-1 norm: sqrt(<f, w>_h) with (I - D2) w = f on the interior,
// homogeneous Dirichlet ends. The quadratic form is <w, (I - D2) w>_h >= 0,
// so the radicand is nonnegative up to roundoff.
inline double h_minus1_norm(const Grid1D& g, const RealField& f) {
  require_size(g, f.size(), "h_minus1_norm");
  const std::size_t m = g.n - 2;
  const double ih2 = 1.0 / (g.h * g.h);
  std::vector<double> lower(m, -ih2), diag(m, 1.0 + 2.0 * ih2), upper(m, -ih2), w(m);
  for (std::size_t k = 0; k < m; ++k) w[k] = f[k + 1];
  solve_tridiagonal(lower, diag, upper, w);
  double s = 0.0;
  for (std::size_t k = 0; k < m; ++k) s += f[k + 1] * w[k];
  return std::sqrt(std::max(0.0, s * g.h));
}

// Pairing of the measure v = v_tilde + psi * delta with a test field:
// trapezoid of v_tilde * test plus psi * test(0). v_tilde's interface slot
// participates as stored (zero in decomposed mode).
inline double measure_pairing(const Grid1D& g, const RealField& v_tilde, double psi,
                              const RealField& test) {
  require_size(g, v_tilde.size(), "measure_pairing");
  require_size(g, test.size(), "measure_pairing");
  RealField prod(g.n);
  for (std::size_t k = 0; k < g.n; ++k) prod[k] = v_tilde[k] * test[k];
  return trapezoid(g, prod) + psi * test[g.mid()];
}

}  // namespace nlsb
