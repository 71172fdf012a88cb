#pragma once

#include <cmath>
#include <cstddef>

#include "nlsb/errors.hpp"
#include "nlsb/grid.hpp"

namespace nlsb {

// Standing-wave reference state: a real bound-state profile r coupled to the
// stationary entropy shock phi(x) = -sign(x) sqrt(eps r^2 + 1). The pair
// (e^{ibt} r, phi) solves the full system exactly, which is what every
// stability experiment perturbs around.
//
// For eps = 0 the profile has trigonometric/exponential closed forms glued
// at x = 0 with matching value A and slope; they only exist for b < 1. For
// eps > 0 the profile solves r'' = b r - sign(x) sqrt(eps r^2 + 1) r - eps r^3
// and is integrated outward from x = 0 cell by cell.

struct WaveParams {
  double b = -1.5;
  double A = 1.0;
  double C = 1.0;
  double eps = 0.0;
};

inline void validate(const WaveParams& p) {
  if (!std::isfinite(p.b) || !std::isfinite(p.A) || !std::isfinite(p.C) || !std::isfinite(p.eps))
    throw config_error("wave: parameters must be finite");
  if (p.b >= 1.0)
    throw unsupported_parameter_error("wave: closed-form profile requires b < 1");
  if (p.eps < 0.0) throw config_error("wave: eps must be nonnegative");
}

// Slope of the profile at x = 0 implied by the gluing conditions. For
// b <= -1 both branches give C sqrt|1+b|; for -1 < b < 1 the left branch is
// the decaying exponential and forces A sqrt(1+b) (C is unused there).
inline double r_slope_at_zero(const WaveParams& p) {
  validate(p);
  if (p.b <= -1.0) return p.C * std::sqrt(std::abs(1.0 + p.b));
  return p.A * std::sqrt(1.0 + p.b);
}

inline double closed_form_r_at(const WaveParams& p, double x) {
  validate(p);
  const double b = p.b, A = p.A, C = p.C;
  if (b <= -1.0) {
    if (x >= 0.0) {
      const double wp = std::sqrt(1.0 - b);
      return C * std::sqrt(std::abs(1.0 + b) / (1.0 - b)) * std::sin(wp * x) +
             A * std::cos(wp * x);
    }
    const double wm = std::sqrt(std::abs(1.0 + b));
    return C * std::sin(wm * x) + A * std::cos(wm * x);
  }
  if (x >= 0.0) {
    const double wp = std::sqrt(1.0 - b);
    return A * std::sqrt((b + 1.0) / (1.0 - b)) * std::sin(wp * x) + A * std::cos(wp * x);
  }
  return A * std::exp(std::sqrt(b + 1.0) * x);
}

inline RealField closed_form_r(const Grid1D& g, const WaveParams& p) {
  validate(p);
  RealField r(g.n);
  for (std::size_t k = 0; k < g.n; ++k) r[k] = closed_form_r_at(p, g.x[k]);
  return r;
}

// Outward integration of r'' = b r - side * sqrt(eps r^2 + 1) r - eps r^3
// from (r, r')(0) = (A, glued slope), RK4 with a fixed number of substeps
// per grid cell (explicit Euler behind the flag, for protocol fidelity).
// Works for eps = 0 too, which is how the closed forms are cross-checked.
inline RealField integrate_r_eps(const Grid1D& g, const WaveParams& p, int substeps = 10,
                                 bool euler = false) {
  validate(p);
  if (substeps < 1) throw config_error("wave: substeps must be positive");

  const double guard = 1e6 * (1.0 + std::abs(p.A) + std::abs(p.C));
  RealField r(g.n, 0.0);
  const std::size_t m = g.mid();
  r[m] = p.A;

  const auto accel = [&](double rv, double side) {
    return p.b * rv - side * std::sqrt(p.eps * rv * rv + 1.0) * rv - p.eps * rv * rv * rv;
  };

  for (const int dir : {+1, -1}) {
    const double side = dir > 0 ? 1.0 : -1.0;  // sign(x) on the half-line being swept
    const double dx = side * g.h / static_cast<double>(substeps);
    double rv = p.A;
    double sv = r_slope_at_zero(p);
    std::size_t k = m;
    while ((dir > 0 && k + 1 < g.n) || (dir < 0 && k > 0)) {
      for (int s = 0; s < substeps; ++s) {
        if (euler) {
          const double a = accel(rv, side);
          rv += dx * sv;
          sv += dx * a;
        } else {
          const double k1r = sv, k1s = accel(rv, side);
          const double k2r = sv + 0.5 * dx * k1s, k2s = accel(rv + 0.5 * dx * k1r, side);
          const double k3r = sv + 0.5 * dx * k2s, k3s = accel(rv + 0.5 * dx * k2r, side);
          const double k4r = sv + dx * k3s, k4s = accel(rv + dx * k3r, side);
          rv += dx / 6.0 * (k1r + 2.0 * k2r + 2.0 * k3r + k4r);
          sv += dx / 6.0 * (k1s + 2.0 * k2s + 2.0 * k3s + k4s);
        }
      }
      k = dir > 0 ? k + 1 : k - 1;
      if (!std::isfinite(rv) || std::abs(rv) > guard)
        throw divergence_error("wave: profile integration diverged", g.x[k]);
      r[k] = rv;
    }
  }
  return r;
}

// Shock potential built from a profile: phi = -sign(x) sqrt(eps r^2 + 1),
// with the interface node pinned to 0 (the one-sided limits enter through
// phi_trace, never through the stored field).
inline RealField phi_of(const Grid1D& g, double eps, const RealField& r) {
  require_size(g, r.size(), "phi_of");
  RealField phi(g.n);
  const std::size_t m = g.mid();
  for (std::size_t k = 0; k < g.n; ++k) {
    const double mag = std::sqrt(eps * r[k] * r[k] + 1.0);
    phi[k] = k == m ? 0.0 : (g.x[k] > 0.0 ? -mag : mag);
  }
  return phi;
}

// One-sided limits of phi at the interface: -/+ sqrt(eps A^2 + 1).
inline double phi_trace(const WaveParams& p, int side) {
  validate(p);
  const double mag = std::sqrt(p.eps * p.A * p.A + 1.0);
  return side > 0 ? -mag : mag;
}

struct ReferenceWave {
  WaveParams params;
  RealField r;
  RealField phi;
};

inline ReferenceWave make_reference(const Grid1D& g, const WaveParams& p, int substeps = 10,
                                    bool euler = false) {
  ReferenceWave ref;
  ref.params = p;
  ref.r = p.eps == 0.0 ? closed_form_r(g, p) : integrate_r_eps(g, p, substeps, euler);
  ref.phi = phi_of(g, p.eps, ref.r);
  return ref;
}

}  // namespace nlsb
