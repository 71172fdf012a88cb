#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "nlsb/csv_io.hpp"
#include "nlsb/experiments.hpp"
#include "nlsb/reference_wave.hpp"
#include "nlsb/simulator.hpp"

namespace nlsb {

// Acceptance suite: ten end-to-end checks with pinned parameters and pinned
// tolerances. Each criterion reports one pass/fail line; none of them adapts
// its bounds to what it measures. The cheap analytic criteria run first, the
// long coupled runs last, so a broken build fails fast.

struct CriterionResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

inline const std::vector<std::string>& acceptance_criteria_names() {
  static const std::vector<std::string> names = {
      "reference-ode-agreement",
      "eps-to-zero-profile-convergence",
      "full-run-mass-conservation",
      "regularized-energy-drift",
      "transport-shift-and-spike-mass",
      "decomposed-vs-regularized-pairing",
      "linearized-scaling-homogeneity",
      "zero-data-stability",
      "perturbation-sweep-stability",
      "source-width-robustness",
  };
  return names;
}

namespace acceptance_detail {

inline std::string g3(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

// 1. The outward profile integration must reproduce the closed-form profiles
// (both the oscillatory family and the monotone family) to 1e-6 everywhere.
inline CriterionResult reference_ode_agreement(const std::string& name, const std::string& art) {
  const Grid1D g = make_grid(22.0, 4001);
  double worst = 0.0;
  for (double b : {-1.5, -0.5}) {
    const WaveParams p{b, 1.0, 1.0, 0.0};
    const RealField num = integrate_r_eps(g, p, 10);
    const RealField ex = closed_form_r(g, p);
    for (std::size_t k = 0; k < g.n; ++k) worst = std::max(worst, std::abs(num[k] - ex[k]));
    if (!art.empty() && b == -1.5)
      write_text_file(art + "/reference.csv",
                      fields_csv(g, to_complex(num), phi_of(g, p.eps, num)));
  }
  CriterionResult r;
  r.name = name;
  r.passed = worst <= 1e-6;
  r.detail = "sup profile gap " + g3(worst) + " (bound 1e-06)";
  return r;
}

// 2. As the coupling strength shrinks, the integrated profile must approach
// the uncoupled closed form on the window |x| <= 2, monotonically, ending
// below 1e-2.
inline CriterionResult eps_to_zero_profile_convergence(const std::string& name,
                                                       const std::string&) {
  const Grid1D g = make_grid(22.0, 4001);
  const WaveParams p0{-1.5, 1.0, 1.0, 0.0};
  const RealField r0 = closed_form_r(g, p0);
  std::vector<double> gaps;
  for (double eps : {0.1, 0.01, 1e-3}) {
    const WaveParams p{-1.5, 1.0, 1.0, eps};
    const RealField re = integrate_r_eps(g, p, 10);
    double worst = 0.0;
    for (std::size_t k = 0; k < g.n; ++k)
      if (std::abs(g.x[k]) <= 2.0) worst = std::max(worst, std::abs(re[k] - r0[k]));
    gaps.push_back(worst);
  }
  CriterionResult r;
  r.name = name;
  r.passed = gaps[0] > gaps[1] && gaps[1] > gaps[2] && gaps[2] <= 1e-2;
  r.detail = "window gap " + g3(gaps[0]) + " -> " + g3(gaps[1]) + " -> " + g3(gaps[2]) +
             " (monotone, last bound 0.01)";
  return r;
}

// 3. A perturbed nonlinear run must conserve the dispersive mass to a
// relative 1e-6 over the whole horizon.
inline CriterionResult full_run_mass_conservation(const std::string& name,
                                                  const std::string& art) {
  SimConfig c;
  c.eps = 0.1;
  c.delta = 0.1;
  const RunResult res = run_full(c);
  const double m0 = res.norms.mass.front();
  double drift = 0.0;
  for (double m : res.norms.mass) drift = std::max(drift, std::abs(m - m0));
  const double rel = drift / m0;
  if (!art.empty()) write_text_file(art + "/full_norms.csv", norms_csv(res.norms));
  CriterionResult r;
  r.name = name;
  r.passed = rel <= 1e-6;
  r.detail = "relative mass drift " + g3(rel) + " (bound 1e-06)";
  return r;
}

// 4. The smoothed-interface linearized run with the two-stage dispersive
// scheme must hold its quadratic energy functional to 1e-3 at dt = 5e-4, and
// halving dt must shrink the drift by at least 3x (second-order or better).
inline CriterionResult regularized_energy_drift(const std::string& name, const std::string&) {
  SimConfig c;
  c.eps = 0.1;
  c.v_mode = "regularized";
  c.u_scheme = "trbdf2";
  c.v_scheme = "cn";
  c.perturb_u = "gaussian";
  c.perturb_v = "gaussian_offset";
  auto drift_at = [&c](double dt) {
    SimConfig cd = c;
    cd.dt = dt;
    const RunResult res = run_linearized(cd);
    const double e0 = res.norms.energy.front();
    double d = 0.0;
    for (double e : res.norms.energy) d = std::max(d, std::abs(e - e0));
    return d;
  };
  const double coarse = drift_at(5e-4);
  const double fine = drift_at(2.5e-4);
  const double ratio = fine > 0.0 ? coarse / fine : std::numeric_limits<double>::infinity();
  CriterionResult r;
  r.name = name;
  r.passed = coarse <= 1e-3 && ratio >= 3.0;
  r.detail = "energy drift " + g3(coarse) + " (bound 0.001), refinement ratio " + g3(ratio) +
             " (bound 3)";
  return r;
}

// 5. Pure transport toward the interface: the finite-volume scheme must
// converge at first order with a stable constant (profile error/h may grow
// by at most 1.4x under mesh doubling), and the absorbed mass must track the
// exactly swept initial mass at first order too: below 0.03 absolute on the
// fine grid at t = 1 (the measured constant is ~1.2h, dominated by the gap
// between the extrapolated interface traces and the scheme's one-sided
// absorbed flux), shrinking by at least 1.7x under mesh doubling.
inline CriterionResult transport_shift_and_spike_mass(const std::string& name,
                                                      const std::string&) {
  const TransportPoint pc = transport_point(22.0, 2001, 0.5, 1.0, 0.9);
  const TransportPoint pf = transport_point(22.0, 4001, 0.5, 1.0, 0.9);
  const double cc = pc.l1_error / pc.h;
  const double cf = pf.l1_error / pf.h;
  const double ratio =
      pf.psi_error > 0.0 ? pc.psi_error / pf.psi_error : std::numeric_limits<double>::infinity();
  CriterionResult r;
  r.name = name;
  r.passed = cf <= 1.4 * cc && pf.psi_error <= 0.03 && ratio >= 1.7;
  r.detail = "l1/h " + g3(cc) + " -> " + g3(cf) + " (factor bound 1.4), mass gap " +
             g3(pf.psi_error) + " (bound 0.03), refinement ratio " + g3(ratio) + " (bound 1.7)";
  return r;
}

// 6. Decomposed and smoothed-interface runs of the same initial data must
// agree as distributions under joint refinement: halving the smoothing
// width, the cell size, and the step together (fixed width/h, fixed Courant
// number) must cut the worst pairing gap against the probe set by at least
// 1.67x per level, ending below 0.15. (On a fixed grid the gap bottoms out
// at the transport scheme's own smearing scale, so only joint refinement is
// a fair convergence test.)
inline CriterionResult decomposed_vs_regularized_pairing(const std::string& name,
                                                         const std::string&) {
  SimConfig c;
  c.eps = 0.1;
  c.T = 1.0;
  c.perturb_u = "none";
  c.perturb_v = "gaussian";
  const struct {
    std::size_t n;
    double dt;
  } levels[] = {{1001, 1e-2}, {2001, 5e-3}, {4001, 2.5e-3}};
  std::vector<double> ms;
  for (const auto& l : levels) {
    SimConfig cl = c;
    cl.n = l.n;
    cl.dt = l.dt;
    const double h = 2.0 * c.x_max / static_cast<double>(l.n - 1);
    ms.push_back(pairing_mismatch(cl, 20.0 * h));
  }
  CriterionResult r;
  r.name = name;
  r.passed = ms[1] <= 0.6 * ms[0] && ms[2] <= 0.6 * ms[1] && ms[2] <= 0.15;
  r.detail = "pairing gap " + g3(ms[0]) + " -> " + g3(ms[1]) + " -> " + g3(ms[2]) +
             " (per-level factor bound 0.6, last bound 0.15)";
  return r;
}

// 7. The linearized flow must be exactly homogeneous: scaling the initial
// data by 2 or 4 must scale the whole solution, including the tracked point
// mass, to a relative 1e-8.
inline CriterionResult linearized_scaling_homogeneity(const std::string& name,
                                                      const std::string&) {
  SimConfig c;
  c.eps = 0.1;
  c.T = 0.25;
  c.perturb_u = "gaussian";
  const Grid1D g = make_grid(c.x_max, c.n);
  const LinearizedInitialData base_ic = make_linearized_initial(g, c);
  auto run_scaled = [&](double a) {
    LinearizedInitialData ic = base_ic;
    for (auto& z : ic.u) z *= a;
    for (auto& y : ic.v) y *= a;
    return run_linearized(c, {}, &ic);
  };
  const RunResult r1 = run_scaled(1.0);
  double ref = std::abs(r1.psi.back());
  for (std::size_t k = 0; k < g.n; ++k) {
    ref = std::max(ref, std::abs(r1.u[k]));
    ref = std::max(ref, std::abs(r1.v[k]));
  }
  double rel = 0.0;
  for (double a : {2.0, 4.0}) {
    const RunResult ra = run_scaled(a);
    double gap = std::abs(ra.psi.back() - a * r1.psi.back());
    for (std::size_t k = 0; k < g.n; ++k) {
      gap = std::max(gap, std::abs(ra.u[k] - a * r1.u[k]));
      gap = std::max(gap, std::abs(ra.v[k] - a * r1.v[k]));
    }
    rel = std::max(rel, gap / (a * ref));
  }
  CriterionResult r;
  r.name = name;
  r.passed = rel <= 1e-8;
  r.detail = "worst scaled gap " + g3(rel) + " (bound 1e-08)";
  return r;
}

// 8. Zero initial perturbation must stay exactly zero: every recorded
// diagnostic of the linearized run stays below 1e-12.
inline CriterionResult zero_data_stability(const std::string& name, const std::string&) {
  SimConfig c;
  c.eps = 0.1;
  c.T = 0.25;
  c.perturb_u = "none";
  c.perturb_v = "none";
  const RunResult res = run_linearized(c);
  double worst = res.psi.max_abs();
  auto fold = [&worst](const std::vector<double>& xs) {
    for (double x : xs) worst = std::max(worst, std::abs(x));
  };
  fold(res.norms.mass);
  fold(res.norms.h1_u);
  fold(res.norms.l2_vtilde);
  fold(res.norms.hm1_v);
  fold(res.norms.energy);
  fold(res.norms.shock_energy);
  CriterionResult r;
  r.name = name;
  r.passed = worst <= 1e-12;
  r.detail = "largest diagnostic " + g3(worst) + " (bound 1e-12)";
  return r;
}

// 9. Perturbation response: over the sweep delta = 0.2, 0.1, 0.05 the gap
// between the nonlinear deviation and the linearized prediction, normalized
// by delta, must be non-increasing as delta shrinks (linear regime).
inline CriterionResult perturbation_sweep_stability(const std::string& name,
                                                    const std::string& art) {
  SimConfig c;
  c.eps = 0.1;
  c.perturb_u = "gaussian";
  c.perturb_v = "gaussian";
  RunResult lin;
  const StabilityReport rep = run_stability_sweep(c, {0.2, 0.1, 0.05}, &lin);
  if (!art.empty()) {
    write_text_file(art + "/stability.csv", rep.csv());
    write_text_file(art + "/linearized_psi.csv", psi_csv(lin.psi));
  }
  CriterionResult r;
  r.name = name;
  r.passed = rep.non_increasing(1e-6) && rep.points.front().normalized > 0.0;
  r.detail = "response/delta " + g3(rep.points[0].normalized) + ", " +
             g3(rep.points[1].normalized) + ", " + g3(rep.points[2].normalized) +
             " (non-increasing)";
  return r;
}

// 10. The width of the bump carrying the point mass into the dispersive
// source is a numerical device: shrinking it from 20 cells to 5 cells may
// move the peak dispersive response by at most 10%.
inline CriterionResult source_width_robustness(const std::string& name, const std::string&) {
  SimConfig c;
  c.eps = 0.0;
  c.dt = 1e-3;
  c.perturb_u = "none";
  c.perturb_v = "gaussian";
  const double h = 2.0 * c.x_max / static_cast<double>(c.n - 1);
  std::vector<double> sups;
  for (double cells : {20.0, 10.0, 5.0}) {
    SimConfig cw = c;
    cw.mollify_width = cells * h;
    const RunResult res = run_linearized(cw);
    sups.push_back(*std::max_element(res.norms.h1_u.begin(), res.norms.h1_u.end()));
  }
  const double mx = *std::max_element(sups.begin(), sups.end());
  const double mn = *std::min_element(sups.begin(), sups.end());
  const double spread = mn > 0.0 ? (mx - mn) / mn : std::numeric_limits<double>::infinity();
  CriterionResult r;
  r.name = name;
  r.passed = mn > 0.0 && spread <= 0.10;
  r.detail = "peak response " + g3(sups[0]) + ", " + g3(sups[1]) + ", " + g3(sups[2]) +
             ", spread " + g3(spread) + " (bound 0.1)";
  return r;
}

}  // namespace acceptance_detail

// Runs the ten criteria in order, streaming one "PASS name: detail" or
// "FAIL name: detail" line each to `log`. With write_artifacts set, the
// reference profile, the conservation series, the stability sweep, and the
// plot scripts land in out_dir.
inline std::vector<CriterionResult> run_acceptance(bool write_artifacts,
                                                   const std::string& out_dir,
                                                   std::ostream& log) {
  const std::string art = write_artifacts ? out_dir : std::string();
  if (!art.empty()) {
    ensure_dir(art);
    emit_gnuplot_scripts(art);
  }
  using Fn = std::function<CriterionResult(const std::string&, const std::string&)>;
  const std::vector<Fn> fns = {
      acceptance_detail::reference_ode_agreement,
      acceptance_detail::eps_to_zero_profile_convergence,
      acceptance_detail::full_run_mass_conservation,
      acceptance_detail::regularized_energy_drift,
      acceptance_detail::transport_shift_and_spike_mass,
      acceptance_detail::decomposed_vs_regularized_pairing,
      acceptance_detail::linearized_scaling_homogeneity,
      acceptance_detail::zero_data_stability,
      acceptance_detail::perturbation_sweep_stability,
      acceptance_detail::source_width_robustness,
  };
  const auto& names = acceptance_criteria_names();
  std::vector<CriterionResult> out;
  for (std::size_t i = 0; i < fns.size(); ++i) {
    CriterionResult r;
    try {
      r = fns[i](names[i], art);
    } catch (const std::exception& e) {
      r.name = names[i];
      r.passed = false;
      r.detail = std::string("exception: ") + e.what();
    }
    log << (r.passed ? "PASS" : "FAIL") << ' ' << r.name << ": " << r.detail << '\n'
        << std::flush;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace nlsb
