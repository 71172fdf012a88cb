#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "nlsb/grid.hpp"

namespace nlsb {

// Piecewise-linear interpolant of grid samples, extended by zero outside the
// domain (transported data is compactly supported well inside the grid).
inline double pl_eval(const Grid1D& g, const RealField& f, double xq) {
  require_size(g, f.size(), "pl_eval");
  if (xq <= -g.x_max || xq >= g.x_max) {
    if (xq == -g.x_max) return f.front();
    if (xq == g.x_max) return f.back();
    return 0.0;
  }
  const double s = (xq + g.x_max) / g.h;
  std::size_t j = static_cast<std::size_t>(s);
  if (j >= g.n - 1) j = g.n - 2;
  const double w = s - static_cast<double>(j);
  return f[j] * (1.0 - w) + f[j + 1] * w;
}

// Exact integral of the piecewise-linear interpolant over [a, b] (a <= b),
// again with zero extension. Partial end cells use the trapezoid of the
// interpolated endpoint values, which is exact for a linear segment.
inline double pl_integral(const Grid1D& g, const RealField& f, double a, double b) {
  require_size(g, f.size(), "pl_integral");
  a = std::max(a, -g.x_max);
  b = std::min(b, g.x_max);
  if (b <= a) return 0.0;
  const auto cell = [&](double xq) {
    double s = (xq + g.x_max) / g.h;
    auto j = static_cast<std::size_t>(s);
    return std::min(j, g.n - 2);
  };
  const std::size_t ja = cell(a), jb = cell(b);
  if (ja == jb) return 0.5 * (pl_eval(g, f, a) + pl_eval(g, f, b)) * (b - a);
  double total = 0.5 * (pl_eval(g, f, a) + f[ja + 1]) * (g.x[ja + 1] - a);
  for (std::size_t j = ja + 1; j < jb; ++j) total += 0.5 * (f[j] + f[j + 1]) * g.h;
  total += 0.5 * (f[jb] + pl_eval(g, f, b)) * (b - g.x[jb]);
  return total;
}

}  // namespace nlsb
