#pragma once

#include <cmath>
#include <cstddef>

#include "nlsb/grid.hpp"
#include "nlsb/norms.hpp"

namespace nlsb {

// Standard bump mollifier scaled to a given width, plus the smoothed sign
// function built from its primitive. Both are discretely normalized: the
// sampled mollifier has trapezoid integral exactly 1 and the smoothed sign
// is exactly odd, exactly 0 at x = 0, and exactly -/+1 beyond the width.

inline void check_mollifier_width(const Grid1D& g, double width) {
  if (!std::isfinite(width) || width <= 0.0)
    throw domain_error("mollifier: width must be positive");
  if (width < 3.0 * g.h)
    throw resolution_error("mollifier: width must be at least 3 grid cells");
  if (width >= g.x_max)
    throw domain_error("mollifier: width must fit inside the domain");
}

inline RealField mollifier(const Grid1D& g, double width) {
  check_mollifier_width(g, width);
  RealField rho(g.n, 0.0);
  const std::size_t m = g.mid();
  rho[m] = std::exp(-1.0);
  for (std::size_t j = 1; j <= m; ++j) {
    const double y = g.x[m + j] / width;
    const double val = std::abs(y) < 1.0 ? std::exp(1.0 / (y * y - 1.0)) : 0.0;
    rho[m + j] = val;
    rho[m - j] = val;  // exact evenness by construction
  }
  // Normalize with the right-half trapezoid sum; by evenness the full
  // integral is exactly twice it, so trapezoid(rho) == 1 to roundoff and the
  // primitive reaches exactly 1/2 at the center.
  double half = 0.5 * rho[m];
  for (std::size_t k = m + 1; k + 1 < g.n; ++k) half += rho[k];
  half += 0.5 * rho[g.n - 1];
  const double total = 2.0 * half * g.h;
  for (double& v : rho) v /= total;
  return rho;
}

// Smoothed sign: odd, monotone, equal to sign(x) for |x| >= width, built as
// twice the cumulative trapezoid of the mollifier from the center outward.
inline RealField smoothed_sign(const Grid1D& g, double width) {
  const RealField rho = mollifier(g, width);
  RealField s(g.n, 0.0);
  const std::size_t m = g.mid();
  double acc = 0.0;
  for (std::size_t k = m + 1; k < g.n; ++k) {
    acc += 0.5 * (rho[k - 1] + rho[k]) * g.h;
    // Outside the support the primitive equals 1/2 exactly after the
    // discrete normalization; pin the value so the plateau is exact.
    const double v = g.x[k] >= width ? 1.0 : std::min(1.0, 2.0 * acc);
    s[k] = v;
    s[2 * m - k] = -v;
  }
  return s;
}

}  // namespace nlsb
