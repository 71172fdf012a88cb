#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "nlsb/errors.hpp"
#include "nlsb/grid.hpp"
#include "nlsb/interp.hpp"
#include "nlsb/tridiagonal.hpp"

namespace nlsb {

// Finite-volume and transport steppers for the real field. Three regimes:
//  - the full quadratic conservation law v_t + (v^2)_x = eps (q)_x, advanced
//    by Lax-Friedrichs with a hard CFL guard (q is the squared modulus of the
//    dispersive field, differenced centrally);
//  - the linear transport equation w_t + (c w)_x = s for the perturbation
//    around a stationary entropy-satisfying jump, where c jumps sign at the
//    center node; characteristics flow into the center from both sides, so
//    the two half-lines decouple and the center-adjacent rows are one-sided
//    upwind while the center slot itself stays pinned (it only bookkeeps the
//    point mass, tracked separately);
//  - an unconditionally stable Crank-Nicolson centered discretization of the
//    same transport equation for runs that refine dt past the CFL limit.

struct Traces {
  double left = 0.0;
  double right = 0.0;
};

// Values of the field extrapolated linearly onto the center from each side,
// skipping the pinned center slot.
inline Traces interface_traces(const Grid1D& g, const RealField& v) {
  require_size(g, v.size(), "interface_traces");
  if (g.n < 7) throw dimension_error("interface_traces: grid too small to extrapolate");
  const std::size_t m = g.mid();
  Traces t;
  t.left = 2.0 * v[m - 1] - v[m - 2];
  t.right = 2.0 * v[m + 1] - v[m + 2];
  return t;
}

// Growth rate of the point mass sitting on the interface: the transport flux
// 2 phi w absorbed from each side. phi_left/phi_right are the one-sided
// values of the background wave's phase-velocity factor at the center.
inline double psi_rate(const Traces& v, double phi_left, double phi_right) {
  return 2.0 * (phi_left * v.left - phi_right * v.right);
}

inline double burgers_max_speed(const RealField& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return 2.0 * m;
}

namespace detail {

inline void check_cfl(double max_speed, double h, double dt) {
  if (max_speed <= 0.0) return;
  const double admissible = h / max_speed;
  if (dt > admissible * (1.0 + 1e-12))
    throw cfl_error("explicit step violates the CFL bound", max_speed, dt, admissible);
}

}  // namespace detail

// One Lax-Friedrichs step for v_t + (v^2)_x = eps (q)_x. q may be empty when
// eps is zero. Endpoint values are held (both ends are inflow for the jump
// profiles this is used on).
inline void lf_step_burgers(const Grid1D& g, RealField& v, const RealField& q, double eps,
                            double dt) {
  require_size(g, v.size(), "lf_step_burgers");
  if (!q.empty()) require_size(g, q.size(), "lf_step_burgers q");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw config_error("lf_step_burgers: dt must be positive");
  detail::check_cfl(burgers_max_speed(v), g.h, dt);

  const double lam = dt / (2.0 * g.h);
  RealField out(g.n);
  out[0] = v[0];
  out[g.n - 1] = v[g.n - 1];
  for (std::size_t k = 1; k + 1 < g.n; ++k) {
    double next = 0.5 * (v[k - 1] + v[k + 1]) - lam * (v[k + 1] * v[k + 1] - v[k - 1] * v[k - 1]);
    if (eps != 0.0 && !q.empty()) next += dt * eps * (q[k + 1] - q[k - 1]) / (2.0 * g.h);
    out[k] = next;
  }
  v.swap(out);
}

// One Lax-Friedrichs step for w_t + (c w)_x = s. s may be empty. When
// interface_rows is set, the rows adjacent to the center use one-sided upwind
// differences (the coefficient jumps there and characteristics leave both
// neighbors toward the center) and the center slot is held.
inline void lf_step_linear(const Grid1D& g, RealField& v, const RealField& c, const RealField& s,
                           double dt, bool interface_rows) {
  require_size(g, v.size(), "lf_step_linear");
  require_size(g, c.size(), "lf_step_linear c");
  if (!s.empty()) require_size(g, s.size(), "lf_step_linear s");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw config_error("lf_step_linear: dt must be positive");
  double cmax = 0.0;
  for (double x : c) cmax = std::max(cmax, std::abs(x));
  detail::check_cfl(cmax, g.h, dt);

  const double lam = dt / g.h;
  const std::size_t m = g.mid();
  RealField out(g.n);
  out[0] = v[0];
  out[g.n - 1] = v[g.n - 1];
  for (std::size_t k = 1; k + 1 < g.n; ++k) {
    double next;
    if (interface_rows && k == m) {
      next = v[k];
    } else if (interface_rows && k == m - 1) {
      next = v[k] - lam * (c[k] * v[k] - c[k - 1] * v[k - 1]);
    } else if (interface_rows && k == m + 1) {
      next = v[k] - lam * (c[k + 1] * v[k + 1] - c[k] * v[k]);
    } else {
      next = 0.5 * (v[k - 1] + v[k + 1]) - 0.5 * lam * (c[k + 1] * v[k + 1] - c[k - 1] * v[k - 1]);
    }
    if (!s.empty() && !(interface_rows && k == m)) next += dt * s[k];
    out[k] = next;
  }
  v.swap(out);
}

// One Crank-Nicolson step for w_t + (c w)_x = s with the centered difference
// for the divergence. Unconditionally stable; endpoints Dirichlet-held. When
// pin_mid is set the center row is frozen (decoupled bookkeeping slot); its
// neighbors may keep their centered stencil because the pinned slot
// contributes c * 0 to the flux.
inline void cn_step_transport(const Grid1D& g, RealField& v, const RealField& c,
                              const RealField& s, double dt, bool pin_mid) {
  require_size(g, v.size(), "cn_step_transport");
  require_size(g, c.size(), "cn_step_transport c");
  if (!s.empty()) require_size(g, s.size(), "cn_step_transport s");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw config_error("cn_step_transport: dt must be positive");

  const std::size_t n = g.n, m = g.mid();
  const double w = dt / (4.0 * g.h);
  std::vector<double> lo(n, 0.0), di(n, 1.0), up(n, 0.0), rhs(n, 0.0);
  rhs[0] = v[0];
  rhs[n - 1] = v[n - 1];
  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (pin_mid && k == m) {
      rhs[k] = v[k];
      continue;
    }
    lo[k] = -w * c[k - 1];
    up[k] = w * c[k + 1];
    rhs[k] = v[k] - w * (c[k + 1] * v[k + 1] - c[k - 1] * v[k - 1]);
    if (!s.empty()) rhs[k] += dt * s[k];
  }
  solve_tridiagonal(lo, di, up, rhs);
  v = rhs;
}

// Exact solution of w_t + (2 phi w)_x = 0 with phi = -sign(x): each half-line
// transports the initial profile toward the center at speed 2 (piecewise
// linear in the data, zero-extended beyond the domain). The center slot stays
// pinned; the absorbed mass lives in the companion spike integral below.
inline RealField exact_interface_transport(const Grid1D& g, const RealField& v0, double t) {
  require_size(g, v0.size(), "exact_interface_transport");
  if (t < 0.0 || !std::isfinite(t)) throw domain_error("exact_interface_transport: bad time");
  if (2.0 * t > g.x_max)
    throw horizon_error("exact_interface_transport: profile history leaves the domain");
  RealField out(g.n, 0.0);
  const std::size_t m = g.mid();
  for (std::size_t k = 0; k < g.n; ++k) {
    if (k == m) continue;
    const double x = g.x[k];
    out[k] = pl_eval(g, v0, x < 0.0 ? x - 2.0 * t : x + 2.0 * t);
  }
  return out;
}

// Mass absorbed by the center through time t for the same exact flow: the
// initial profile integrated over the interval the characteristics swept.
inline double exact_spike_mass(const Grid1D& g, const RealField& v0, double t) {
  require_size(g, v0.size(), "exact_spike_mass");
  if (t < 0.0 || !std::isfinite(t)) throw domain_error("exact_spike_mass: bad time");
  if (2.0 * t > g.x_max) throw horizon_error("exact_spike_mass: profile history leaves the domain");
  return pl_integral(g, v0, -2.0 * t, 2.0 * t);
}

inline double total_variation(const RealField& v) {
  double tv = 0.0;
  for (std::size_t k = 0; k + 1 < v.size(); ++k) tv += std::abs(v[k + 1] - v[k]);
  return tv;
}

}  // namespace nlsb
