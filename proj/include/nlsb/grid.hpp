#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "nlsb/errors.hpp"

namespace nlsb {

using Complex = std::complex<double>;
using RealField = std::vector<double>;
using ComplexField = std::vector<Complex>;

// Uniform symmetric grid on [-x_max, x_max] with an odd node count, so the
// interface x = 0 falls exactly on the middle node. Nodes are integer
// multiples of h measured from the center; x[mid()-j] == -x[mid()+j] holds
// bitwise, which the odd/even symmetry tests rely on.
struct Grid1D {
  double x_max = 0.0;
  std::size_t n = 0;
  double h = 0.0;
  std::vector<double> x;

  std::size_t mid() const { return (n - 1) / 2; }
};

inline Grid1D make_grid(double x_max, std::size_t n) {
  if (!std::isfinite(x_max) || x_max <= 0.0)
    throw domain_error("grid: half-width must be positive and finite");
  if (n < 3 || n % 2 == 0)
    throw dimension_error("grid: node count must be odd and at least 3");
  Grid1D g;
  g.x_max = x_max;
  g.n = n;
  g.h = 2.0 * x_max / static_cast<double>(n - 1);
  g.x.resize(n);
  const double m = static_cast<double>(g.mid());
  for (std::size_t k = 0; k < n; ++k)
    g.x[k] = (static_cast<double>(k) - m) * g.h;
  return g;
}

inline void require_size(const Grid1D& g, std::size_t got, const char* what) {
  if (got != g.n)
    throw dimension_error(std::string(what) + ": field size does not match grid");
}

template <typename F>
RealField sample(const Grid1D& g, F&& f) {
  RealField out(g.n);
  for (std::size_t k = 0; k < g.n; ++k) out[k] = f(g.x[k]);
  return out;
}

template <typename F>
ComplexField sample_complex(const Grid1D& g, F&& f) {
  ComplexField out(g.n);
  for (std::size_t k = 0; k < g.n; ++k) out[k] = f(g.x[k]);
  return out;
}

inline ComplexField to_complex(const RealField& f) {
  ComplexField out(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) out[k] = Complex(f[k], 0.0);
  return out;
}

inline bool all_finite(const RealField& f) {
  for (double v : f)
    if (!std::isfinite(v)) return false;
  return true;
}

inline bool all_finite(const ComplexField& f) {
  for (const Complex& v : f)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

}  // namespace nlsb
