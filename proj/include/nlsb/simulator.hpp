#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <string>
#include <vector>

#include "nlsb/errors.hpp"
#include "nlsb/grid.hpp"
#include "nlsb/hyperbolic.hpp"
#include "nlsb/mollifier.hpp"
#include "nlsb/norms.hpp"
#include "nlsb/reference_wave.hpp"
#include "nlsb/schrodinger.hpp"
#include "nlsb/time_series.hpp"

namespace nlsb {

// Coupled runs. Two families:
//
//  - run_full: the nonlinear system
//        i u_t + u_xx = v u - eps |u|^2 u,
//        v_t + (v^2)_x = eps (|u|^2)_x,
//    advanced by operator splitting (implicit midpoint for u, Lax-Friedrichs
//    for v), with the background wave (tapered to honor the Dirichlet ends)
//    plus an optional perturbation as initial data.
//
//  - run_linearized: the first-order system for perturbations (w, y) of the
//    background wave,
//        i w_t + w_xx = (phi + b - 2 eps r^2) w - eps r^2 conj(w) + r ybar,
//        y_t + (2 phi y)_x = 2 eps (r Re w)_x,
//    where ybar = y + Psi(t) * (point mass at the center). In "decomposed"
//    mode the point mass is tracked as the scalar Psi (grown by the flux the
//    transport absorbs at the center) and enters the w-equation through a
//    narrow unit-mass bump; in "regularized" mode the sign jump in phi is
//    mollified and y stays an ordinary field with no point mass.

struct SimConfig {
  double x_max = 22.0;
  std::size_t n = 4001;
  double dt = 2.5e-4;
  double T = 1.0;
  double b = -1.5;
  double A = 1.0;
  double C = 1.0;
  double eps = 0.0;
  double delta = 0.0;          // perturbation amplitude for full runs
  double mollify_width = 0.0;  // 0 = ten cells, chosen at finalize
  std::string v_mode = "decomposed";   // decomposed | regularized
  std::string splitting = "strang";    // strang | lie
  std::string u_scheme = "cn";         // cn | trbdf2
  std::string v_scheme = "lf";         // lf | cn
  std::string perturb_u = "none";      // none | gaussian | gaussian_offset
  std::string perturb_v = "gaussian";  // none | gaussian | gaussian_offset
  double newton_tol = 1e-12;
  int newton_max_iter = 12;
  int substeps = 10;
  bool euler_reference = false;
  int output_every = 20;
  double taper_inner = 14.0;
  double taper_outer = 20.0;
};

namespace detail {

inline void check_enum(const std::string& value, std::initializer_list<const char*> allowed,
                       const std::string& key) {
  for (const char* a : allowed)
    if (value == a) return;
  std::string msg = "config: " + key + " must be one of {";
  bool first = true;
  for (const char* a : allowed) {
    if (!first) msg += ", ";
    msg += a;
    first = false;
  }
  throw config_error(msg + "}, got '" + value + "'");
}

}  // namespace detail

inline void validate_config(const SimConfig& c) {
  if (!(c.x_max > 0.0) || !std::isfinite(c.x_max)) throw config_error("config: x_max must be positive");
  if (c.n < 7 || c.n % 2 == 0) throw config_error("config: n must be odd and at least 7");
  if (!(c.dt > 0.0) || !std::isfinite(c.dt)) throw config_error("config: dt must be positive");
  if (!(c.T > 0.0) || !std::isfinite(c.T)) throw config_error("config: T must be positive");
  const double ratio = c.T / c.dt;
  if (std::abs(ratio - std::round(ratio)) > 1e-8 * std::max(1.0, ratio) || ratio < 0.5)
    throw config_error("config: T must be a positive integer multiple of dt");
  WaveParams wp{c.b, c.A, c.C, c.eps};
  validate(wp);
  if (!std::isfinite(c.delta) || c.delta < 0.0) throw config_error("config: delta must be nonnegative");
  if (!std::isfinite(c.mollify_width) || c.mollify_width < 0.0)
    throw config_error("config: mollify_width must be nonnegative");
  detail::check_enum(c.v_mode, {"decomposed", "regularized"}, "v_mode");
  detail::check_enum(c.splitting, {"strang", "lie"}, "splitting");
  detail::check_enum(c.u_scheme, {"cn", "trbdf2"}, "u_scheme");
  detail::check_enum(c.v_scheme, {"lf", "cn"}, "v_scheme");
  detail::check_enum(c.perturb_u, {"none", "gaussian", "gaussian_offset"}, "perturb_u");
  detail::check_enum(c.perturb_v, {"none", "gaussian", "gaussian_offset"}, "perturb_v");
  if (!(c.newton_tol > 0.0)) throw config_error("config: newton_tol must be positive");
  if (c.newton_max_iter < 1) throw config_error("config: newton_max_iter must be at least 1");
  if (c.substeps < 1) throw config_error("config: substeps must be at least 1");
  if (c.output_every < 1) throw config_error("config: output_every must be at least 1");
  if (!(c.taper_inner > 0.0) || !(c.taper_outer > c.taper_inner) || !(c.taper_outer <= c.x_max))
    throw config_error("config: need 0 < taper_inner < taper_outer <= x_max");
}

// Fills derived defaults (the bump width) and validates everything,
// including the width against the grid it will live on.
inline SimConfig finalize_config(SimConfig c) {
  validate_config(c);
  const Grid1D g = make_grid(c.x_max, c.n);
  if (c.mollify_width == 0.0) c.mollify_width = 10.0 * g.h;
  check_mollifier_width(g, c.mollify_width);
  return c;
}

// Smooth cutoff: identically 1 on |x| <= inner, identically 0 on
// |x| >= outer, infinitely differentiable in between.
inline RealField cinf_cutoff(const Grid1D& g, double inner, double outer) {
  if (!(inner > 0.0) || !(outer > inner)) throw domain_error("cinf_cutoff: need 0 < inner < outer");
  auto f = [](double y) { return y > 0.0 ? std::exp(-1.0 / y) : 0.0; };
  RealField chi(g.n);
  for (std::size_t k = 0; k < g.n; ++k) {
    const double a = std::abs(g.x[k]);
    if (a <= inner) {
      chi[k] = 1.0;
    } else if (a >= outer) {
      chi[k] = 0.0;
    } else {
      const double y = (a - inner) / (outer - inner);
      chi[k] = f(1.0 - y) / (f(y) + f(1.0 - y));
    }
  }
  return chi;
}

inline RealField perturb_shape(const Grid1D& g, const std::string& name) {
  if (name == "none") return RealField(g.n, 0.0);
  if (name == "gaussian") return sample(g, [](double x) { return std::exp(-x * x); });
  if (name == "gaussian_offset")
    return sample(g, [](double x) { return std::exp(-(x - 2.0) * (x - 2.0)); });
  throw config_error("config: unknown perturbation shape '" + name + "'");
}

struct NormSeries {
  std::vector<double> t, mass, h1_u, l2_vtilde, hm1_v, energy, shock_energy;
};

struct RunResult {
  Grid1D grid;
  ReferenceWave wave;
  ComplexField u;   // final dispersive field (perturbation field for linearized runs)
  RealField v;      // final real field (perturbation field for linearized runs)
  TimeSeries psi;   // tracked point mass (identically zero unless decomposed linearized)
  NormSeries norms;
  int steps = 0;
};

using Observer =
    std::function<void(int step, double t, const ComplexField& u, const RealField& v, double psi)>;

struct LinearizedInitialData {
  ComplexField u;
  RealField v;
};

// Unit-amplitude initial perturbation profiles for the linearized run; the
// center slot of the real field is owned by the point-mass bookkeeping in
// decomposed mode and starts empty.
inline LinearizedInitialData make_linearized_initial(const Grid1D& g, const SimConfig& c) {
  LinearizedInitialData ic;
  const RealField su = perturb_shape(g, c.perturb_u);
  ic.u.resize(g.n);
  for (std::size_t k = 0; k < g.n; ++k) ic.u[k] = Complex(su[k], 0.0);
  ic.v = perturb_shape(g, c.perturb_v);
  if (c.v_mode == "decomposed") ic.v[g.mid()] = 0.0;
  return ic;
}

namespace detail {

// eps * d/dx (2 r Re u) with the centered difference; the conservative
// coupling source of the transport equation. Empty when eps vanishes.
inline RealField coupling_source(const Grid1D& g, const RealField& r, const ComplexField& u,
                                 double eps) {
  if (eps == 0.0) return {};
  RealField w(g.n);
  for (std::size_t k = 0; k < g.n; ++k) w[k] = r[k] * u[k].real();
  RealField s(g.n, 0.0);
  for (std::size_t k = 1; k + 1 < g.n; ++k) s[k] = eps * (w[k + 1] - w[k - 1]) / g.h;
  return s;
}

struct RunRecorder {
  const Grid1D& g;
  const SimConfig& cfg;
  RunResult& out;
  const Observer& obs;
  EnergyCoefficients ec;     // linearized energy functional coefficients
  RealField shock_weight;    // sqrt(1 + eps r^2)
  const RealField* phi_ref;  // background to subtract for full runs (else null)
  bool full_energy = false;  // use the nonlinear functional instead

  void record(int step, double t, const ComplexField& u, const RealField& v, double psi) {
    if (!all_finite(u) || !all_finite(v) || !std::isfinite(psi))
      throw divergence_error("run: field left the finite range", step);
    RealField vpart = v;
    if (phi_ref)
      for (std::size_t k = 0; k < g.n; ++k) vpart[k] -= (*phi_ref)[k];
    out.norms.t.push_back(t);
    out.norms.mass.push_back(mass(g, u));
    out.norms.h1_u.push_back(h1_norm(g, u));
    out.norms.l2_vtilde.push_back(l2_norm(g, vpart));
    out.norms.hm1_v.push_back(h_minus1_norm(g, vpart));
    double en = 0.0;
    if (full_energy) {
      double grad = 0.0;
      for (std::size_t k = 0; k + 1 < g.n; ++k) grad += std::norm(u[k + 1] - u[k]);
      grad /= g.h;
      RealField f(g.n);
      for (std::size_t k = 0; k < g.n; ++k) {
        const double m2 = std::norm(u[k]);
        f[k] = v[k] * m2 - 0.5 * cfg.eps * m2 * m2;
      }
      en = grad + trapezoid(g, f);
    } else {
      en = energy_diagnostic(g, u, v, ec);
    }
    out.norms.energy.push_back(en);
    RealField sq(g.n);
    for (std::size_t k = 0; k < g.n; ++k) sq[k] = shock_weight[k] * vpart[k] * vpart[k];
    out.norms.shock_energy.push_back(trapezoid(g, sq));
    out.psi.append(t, psi);
    if (obs) obs(step, t, u, v, psi);
  }
};

}  // namespace detail

// Linearized run. The optional explicit initial data overrides the
// perturb_u/perturb_v shapes (used by scaling experiments).
inline RunResult run_linearized(const SimConfig& cfg_in, const Observer& obs = {},
                                const LinearizedInitialData* ic_override = nullptr) {
  const SimConfig cfg = finalize_config(cfg_in);
  RunResult out;
  out.grid = make_grid(cfg.x_max, cfg.n);
  const Grid1D& g = out.grid;
  WaveParams wp{cfg.b, cfg.A, cfg.C, cfg.eps};
  out.wave = make_reference(g, wp, cfg.substeps, cfg.euler_reference);
  const RealField& r = out.wave.r;
  const bool decomposed = cfg.v_mode == "decomposed";
  const bool track_psi = decomposed;

  // Transport coefficient and the u-equation coefficient fields.
  RealField phi_used = out.wave.phi;  // sharp: sign jump at the center, zero slot
  if (!decomposed) {
    const RealField s = smoothed_sign(g, cfg.mollify_width);
    for (std::size_t k = 0; k < g.n; ++k)
      phi_used[k] = -s[k] * std::sqrt(cfg.eps * r[k] * r[k] + 1.0);
  }
  RealField c_field(g.n);
  for (std::size_t k = 0; k < g.n; ++k) c_field[k] = 2.0 * phi_used[k];

  SchrodingerProblem prob;
  prob.a1.resize(g.n);
  for (std::size_t k = 0; k < g.n; ++k)
    prob.a1[k] = phi_used[k] + cfg.b - 2.0 * cfg.eps * r[k] * r[k];
  if (cfg.eps != 0.0) {
    prob.a2.resize(g.n);
    for (std::size_t k = 0; k < g.n; ++k) prob.a2[k] = -cfg.eps * r[k] * r[k];
  }
  NewtonOptions nopts;
  nopts.tol = cfg.newton_tol;
  nopts.max_iter = cfg.newton_max_iter;

  const RealField rho = mollifier(g, cfg.mollify_width);
  const double phi_l = phi_trace(wp, -1), phi_r = phi_trace(wp, +1);

  // Initial data.
  LinearizedInitialData ic = ic_override ? *ic_override : make_linearized_initial(g, cfg);
  require_size(g, ic.u.size(), "linearized initial u");
  require_size(g, ic.v.size(), "linearized initial v");
  ComplexField u = ic.u;
  RealField v = ic.v;
  double psi = 0.0;

  detail::RunRecorder rec{g, cfg, out, obs, {}, {}, nullptr, false};
  rec.ec.a1 = prob.a1;
  rec.ec.a2 = prob.a2;
  rec.ec.a3 = r;
  if (cfg.eps > 0.0) {
    rec.ec.a4_over_c.resize(g.n);
    for (std::size_t k = 0; k < g.n; ++k) rec.ec.a4_over_c[k] = phi_used[k] / cfg.eps;
  }
  rec.shock_weight.resize(g.n);
  for (std::size_t k = 0; k < g.n; ++k)
    rec.shock_weight[k] = std::sqrt(1.0 + cfg.eps * r[k] * r[k]);

  const int steps = static_cast<int>(std::llround(cfg.T / cfg.dt));
  out.steps = steps;

  auto v_substep = [&](const ComplexField& u_for_source, double dt_sub) {
    const RealField s = detail::coupling_source(g, r, u_for_source, cfg.eps);
    double rate0 = 0.0;
    if (track_psi) rate0 = psi_rate(interface_traces(g, v), phi_l, phi_r);
    if (cfg.v_scheme == "lf")
      lf_step_linear(g, v, c_field, s, dt_sub, decomposed);
    else
      cn_step_transport(g, v, c_field, s, dt_sub, decomposed);
    if (track_psi) {
      const double rate1 = psi_rate(interface_traces(g, v), phi_l, phi_r);
      psi += 0.5 * dt_sub * (rate0 + rate1);
    }
  };
  auto u_substep = [&](double t, double dt_sub) {
    RealField src(g.n);
    for (std::size_t k = 0; k < g.n; ++k)
      src[k] = r[k] * (v[k] + (track_psi ? psi * rho[k] : 0.0));
    prob.source = [&src](double, ComplexField& s_out) {
      for (std::size_t k = 0; k < s_out.size(); ++k) s_out[k] = Complex(src[k], 0.0);
    };
    if (cfg.u_scheme == "cn")
      cn_step(g, prob, u, t, dt_sub, nopts);
    else
      trbdf2_step(g, prob, u, t, dt_sub, nopts);
    prob.source = nullptr;
  };

  rec.record(0, 0.0, u, v, psi);
  for (int s = 0; s < steps; ++s) {
    const double t = s * cfg.dt;
    if (cfg.splitting == "strang") {
      v_substep(u, 0.5 * cfg.dt);
      u_substep(t, cfg.dt);
      v_substep(u, 0.5 * cfg.dt);
    } else {
      v_substep(u, cfg.dt);
      u_substep(t, cfg.dt);
    }
    if ((s + 1) % cfg.output_every == 0 || s + 1 == steps)
      rec.record(s + 1, (s + 1) * cfg.dt, u, v, psi);
    else if (!all_finite(u) || !all_finite(v) || !std::isfinite(psi))
      throw divergence_error("run: field left the finite range", s + 1);
  }
  out.u = u;
  out.v = v;
  return out;
}

// Full nonlinear run around the tapered background wave.
inline RunResult run_full(const SimConfig& cfg_in, const Observer& obs = {}) {
  const SimConfig cfg = finalize_config(cfg_in);
  if (cfg.u_scheme != "cn")
    throw config_error("run_full: the two-stage scheme does not support the cubic term");
  if (cfg.v_scheme != "lf")
    throw config_error("run_full: only the finite-volume scheme supports the quadratic flux");
  RunResult out;
  out.grid = make_grid(cfg.x_max, cfg.n);
  const Grid1D& g = out.grid;
  WaveParams wp{cfg.b, cfg.A, cfg.C, cfg.eps};
  out.wave = make_reference(g, wp, cfg.substeps, cfg.euler_reference);
  const RealField& r = out.wave.r;
  const RealField& phi = out.wave.phi;

  const RealField chi = cinf_cutoff(g, cfg.taper_inner, cfg.taper_outer);
  const RealField su = perturb_shape(g, cfg.perturb_u);
  const RealField sv = perturb_shape(g, cfg.perturb_v);
  ComplexField u(g.n);
  RealField v(g.n);
  for (std::size_t k = 0; k < g.n; ++k) {
    u[k] = Complex(chi[k] * r[k] + cfg.delta * su[k], 0.0);
    v[k] = phi[k] + cfg.delta * sv[k];
  }

  SchrodingerProblem prob;
  prob.cubic = cfg.eps;
  NewtonOptions nopts;
  nopts.tol = cfg.newton_tol;
  nopts.max_iter = cfg.newton_max_iter;

  detail::RunRecorder rec{g, cfg, out, obs, {}, {}, &phi, true};
  rec.shock_weight.resize(g.n);
  for (std::size_t k = 0; k < g.n; ++k)
    rec.shock_weight[k] = std::sqrt(1.0 + cfg.eps * r[k] * r[k]);

  const int steps = static_cast<int>(std::llround(cfg.T / cfg.dt));
  out.steps = steps;

  RealField q(g.n);
  auto fill_q = [&](const ComplexField& uu) {
    for (std::size_t k = 0; k < g.n; ++k) q[k] = std::norm(uu[k]);
  };
  auto v_substep = [&](double dt_sub) {
    lf_step_burgers(g, v, cfg.eps != 0.0 ? q : RealField{}, cfg.eps, dt_sub);
  };
  auto u_substep = [&](double t, double dt_sub) {
    prob.a1 = v;  // frozen over the substep
    cn_step(g, prob, u, t, dt_sub, nopts);
  };

  rec.record(0, 0.0, u, v, 0.0);
  for (int s = 0; s < steps; ++s) {
    const double t = s * cfg.dt;
    if (cfg.splitting == "strang") {
      fill_q(u);
      v_substep(0.5 * cfg.dt);
      u_substep(t, cfg.dt);
      fill_q(u);
      v_substep(0.5 * cfg.dt);
    } else {
      fill_q(u);
      v_substep(cfg.dt);
      u_substep(t, cfg.dt);
    }
    if ((s + 1) % cfg.output_every == 0 || s + 1 == steps)
      rec.record(s + 1, (s + 1) * cfg.dt, u, v, 0.0);
    else if (!all_finite(u) || !all_finite(v))
      throw divergence_error("run: field left the finite range", s + 1);
  }
  out.u = u;
  out.v = v;
  return out;
}

}  // namespace nlsb
