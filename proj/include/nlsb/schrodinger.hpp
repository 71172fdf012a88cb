#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "nlsb/banded.hpp"
#include "nlsb/errors.hpp"
#include "nlsb/grid.hpp"
#include "nlsb/norms.hpp"
#include "nlsb/tridiagonal.hpp"

namespace nlsb {

// Implicit steppers for i u_t + u_xx = a1 u + a2 conj(u) + S(t, x) - cubic |u|^2 u
// on homogeneous-Dirichlet endpoints. Crank-Nicolson evaluates everything at
// the step midpoint and solves the (semi)linear system by Newton; because the
// conjugate term makes the system only R-linear, the Jacobian is assembled as
// an interleaved real banded matrix (bandwidth 2) unless a2 and cubic vanish,
// in which case a complex tridiagonal solve suffices. Crank-Nicolson
// preserves the discrete mass and every conserved quadratic functional of the
// frozen-coefficient flow exactly (up to the Newton residual); TR-BDF2 is the
// deliberately dissipative second-order alternative used by the energy-drift
// refinement experiment.

using SourceFn = std::function<void(double t, ComplexField& out)>;

struct SchrodingerProblem {
  RealField a1;    // real potential; empty means zero
  RealField a2;    // conjugate-coupling coefficient; empty means zero
  double cubic = 0.0;
  SourceFn source;  // fills S(t); null means zero
};

struct NewtonOptions {
  double tol = 1e-12;  // on the L2 norm of the dt-scaled residual
  int max_iter = 25;
};

struct StepReport {
  int iterations = 0;
  double residual = 0.0;
};

namespace detail {

inline void eval_source(const Grid1D& g, const SchrodingerProblem& p, double t,
                        ComplexField& s) {
  s.assign(g.n, Complex(0.0, 0.0));
  if (p.source) {
    p.source(t, s);
    require_size(g, s.size(), "schrodinger source");
  }
}

// Residual of the theta-point system
//   F_k = i (w_k - base_k) + weight * (D2 m - a1 m - a2 conj(m) - S + cubic |m|^2 m)_k
// on interior nodes; endpoints are Dirichlet-held. m is the evaluation state
// (midpoint for CN, the endpoint for the BDF2 stage).
inline void residual(const Grid1D& g, const SchrodingerProblem& p, const ComplexField& base,
                     const ComplexField& w, const ComplexField& m, const ComplexField& s,
                     double weight, ComplexField& f) {
  const double ih2 = 1.0 / (g.h * g.h);
  f.assign(g.n, Complex(0.0, 0.0));
  for (std::size_t k = 1; k + 1 < g.n; ++k) {
    Complex rhs = (m[k - 1] - 2.0 * m[k] + m[k + 1]) * ih2 - s[k];
    if (!p.a1.empty()) rhs -= p.a1[k] * m[k];
    if (!p.a2.empty()) rhs -= p.a2[k] * std::conj(m[k]);
    if (p.cubic != 0.0) rhs += p.cubic * std::norm(m[k]) * m[k];
    f[k] = Complex(0.0, 1.0) * (w[k] - base[k]) + weight * rhs;
  }
}

inline double interior_l2(const Grid1D& g, const ComplexField& f) {
  double s = 0.0;
  for (std::size_t k = 1; k + 1 < g.n; ++k) s += std::norm(f[k]);
  return std::sqrt(s * g.h);
}

// Solves [diag_c + offw * (shift by one) + beta * conj] x = rhs on the
// interior nodes. diag_c and beta are per-interior-node; offw is the scalar
// off-diagonal weight. Chooses complex Thomas when the conjugate part is
// absent, otherwise the interleaved real banded factorization.
inline void solve_semilinear(const Grid1D& g, const ComplexField& diag_c, double offw,
                             const ComplexField& beta, bool has_beta, ComplexField& rhs) {
  const std::size_t m = g.n - 2;
  if (!has_beta) {
    std::vector<Complex> lo(m, Complex(offw, 0.0)), up(m, Complex(offw, 0.0));
    std::vector<Complex> di(diag_c), b(rhs);
    solve_tridiagonal(lo, di, up, b);
    rhs = b;
    return;
  }
  BandedMatrix jac(2 * m, 2, 2);
  std::vector<double> b(2 * m);
  for (std::size_t j = 0; j < m; ++j) {
    const double pr = diag_c[j].real(), pi = diag_c[j].imag();
    const double br = beta[j].real(), bi = beta[j].imag();
    const std::size_t re = 2 * j, im = 2 * j + 1;
    jac.at(re, re) = pr + br;
    jac.at(re, im) = -pi + bi;
    jac.at(im, re) = pi + bi;
    jac.at(im, im) = pr - br;
    if (j > 0) {
      jac.at(re, re - 2) = offw;
      jac.at(im, im - 2) = offw;
    }
    if (j + 1 < m) {
      jac.at(re, re + 2) = offw;
      jac.at(im, im + 2) = offw;
    }
    b[re] = rhs[j].real();
    b[im] = rhs[j].imag();
  }
  std::vector<int> piv;
  banded_factor(jac, piv);
  banded_solve(jac, piv, b);
  for (std::size_t j = 0; j < m; ++j) rhs[j] = Complex(b[2 * j], b[2 * j + 1]);
}

}  // namespace detail

// One Crank-Nicolson step from t to t + dt. Newton iterates on the midpoint
// state; for R-linear problems (cubic == 0) the first iteration is already
// exact and the loop only confirms the residual.
inline StepReport cn_step(const Grid1D& g, const SchrodingerProblem& p, ComplexField& u,
                          double t, double dt, const NewtonOptions& opts = {}) {
  require_size(g, u.size(), "cn_step");
  if (!p.a1.empty()) require_size(g, p.a1.size(), "cn_step a1");
  if (!p.a2.empty()) require_size(g, p.a2.size(), "cn_step a2");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw config_error("cn_step: dt must be positive");

  ComplexField s;
  detail::eval_source(g, p, t + 0.5 * dt, s);

  const double scale = std::max(1.0, l2_norm(g, u));
  const std::size_t mi = g.n - 2;
  ComplexField w = u, mid(g.n), f, diag(mi), beta(mi), delta(mi);
  const bool has_beta = !p.a2.empty() || p.cubic != 0.0;
  const double ih2 = 1.0 / (g.h * g.h);
  const double offw = 0.5 * dt * ih2;

  for (int iter = 0; iter <= opts.max_iter; ++iter) {
    for (std::size_t k = 0; k < g.n; ++k) mid[k] = 0.5 * (u[k] + w[k]);
    detail::residual(g, p, u, w, mid, s, dt, f);
    const double res = detail::interior_l2(g, f);
    if (res <= opts.tol * scale) {
      u = w;
      return {iter, res};
    }
    if (iter == opts.max_iter)
      throw newton_error("cn_step: Newton did not reach tolerance", res, iter);
    for (std::size_t j = 0; j < mi; ++j) {
      const std::size_t k = j + 1;
      double a1k = p.a1.empty() ? 0.0 : p.a1[k];
      Complex bk(0.0, 0.0);
      if (!p.a2.empty()) bk -= 0.5 * dt * p.a2[k];
      if (p.cubic != 0.0) {
        a1k -= 2.0 * p.cubic * std::norm(mid[k]);
        bk += 0.5 * dt * p.cubic * mid[k] * mid[k];
      }
      diag[j] = Complex(0.0, 1.0) + 0.5 * dt * Complex(-2.0 * ih2 - a1k, 0.0);
      beta[j] = bk;
      delta[j] = -f[k];
    }
    detail::solve_semilinear(g, diag, offw, beta, has_beta, delta);
    for (std::size_t j = 0; j < mi; ++j) w[j + 1] += delta[j];
  }
  return {};  // unreachable
}

// One TR-BDF2 step (gamma = 2 - sqrt 2): trapezoidal to t + gamma dt, then
// BDF2 to t + dt. Restricted to R-linear problems; both stages are single
// solves of the same semilinear structure as the CN Jacobian.
inline StepReport trbdf2_step(const Grid1D& g, const SchrodingerProblem& p, ComplexField& u,
                              double t, double dt, const NewtonOptions& opts = {}) {
  if (p.cubic != 0.0)
    throw config_error("trbdf2_step: only the linear problem is supported");
  const double gamma = 2.0 - std::sqrt(2.0);
  const ComplexField un = u;
  const StepReport stage1 = cn_step(g, p, u, t, gamma * dt, opts);

  const double c1 = 1.0 / (gamma * (2.0 - gamma));
  const double c2 = -(1.0 - gamma) * (1.0 - gamma) / (gamma * (2.0 - gamma));
  const double c3 = (1.0 - gamma) / (2.0 - gamma);

  ComplexField s;
  detail::eval_source(g, p, t + dt, s);
  const std::size_t mi = g.n - 2;
  const double ih2 = 1.0 / (g.h * g.h);
  const double offw = c3 * dt * ih2;
  ComplexField diag(mi), beta(mi), rhs(mi);
  const bool has_beta = !p.a2.empty();
  for (std::size_t j = 0; j < mi; ++j) {
    const std::size_t k = j + 1;
    const double a1k = p.a1.empty() ? 0.0 : p.a1[k];
    diag[j] = Complex(0.0, 1.0) + c3 * dt * Complex(-2.0 * ih2 - a1k, 0.0);
    beta[j] = p.a2.empty() ? Complex(0.0, 0.0) : Complex(-c3 * dt * p.a2[k], 0.0);
    rhs[j] = Complex(0.0, 1.0) * (c1 * u[k] + c2 * un[k]) + c3 * dt * s[k];
  }
  rhs[0] -= offw * un[0];  // Dirichlet-held endpoint values enter the
  rhs[mi - 1] -= offw * un[g.n - 1];  // first and last interior rows
  detail::solve_semilinear(g, diag, offw, beta, has_beta, rhs);
  ComplexField w = un;  // endpoints keep their Dirichlet values
  for (std::size_t j = 0; j < mi; ++j) w[j + 1] = rhs[j];

  // Confirm the stage equation was solved (guards the assembly).
  ComplexField f;
  ComplexField base(g.n);
  for (std::size_t k = 0; k < g.n; ++k) base[k] = c1 * u[k] + c2 * un[k];
  detail::residual(g, p, base, w, w, s, c3 * dt, f);
  const double res = detail::interior_l2(g, f);
  if (res > std::max(1.0, l2_norm(g, un)) * std::max(opts.tol, 1e-10))
    throw newton_error("trbdf2_step: stage residual too large", res, stage1.iterations);
  u = w;
  return {stage1.iterations + 1, res};
}

inline double mass(const Grid1D& g, const ComplexField& u) {
  const double n = l2_norm(g, u);
  return n * n;
}

// Exact rate of change of the discrete mass implied by the equation:
// d/dt integral |u|^2 = 2 Im integral (a2 conj(u)^2 + S conj(u)). The
// potential, the Laplacian, and the cubic term drop out identically.
inline double mass_rate_diagnostic(const Grid1D& g, const SchrodingerProblem& p,
                                   const ComplexField& u, double t) {
  require_size(g, u.size(), "mass_rate_diagnostic");
  ComplexField s;
  detail::eval_source(g, p, t, s);
  RealField integrand(g.n, 0.0);
  for (std::size_t k = 0; k < g.n; ++k) {
    double val = 0.0;
    if (!p.a2.empty()) val += p.a2[k] * std::imag(std::conj(u[k]) * std::conj(u[k]));
    val += std::imag(s[k] * std::conj(u[k]));
    integrand[k] = 2.0 * val;
  }
  return trapezoid(g, integrand);
}

// Coefficients of the quadratic energy functional
//   E = integral |u_x|^2 + a1 |u|^2 + a2 Re(u^2) + 2 a3 v Re(u) - a4c v^2,
// the conserved combination of the coupled linearized system when a4c is the
// transport coefficient divided by the coupling constant of the v-equation
// source. Empty fields drop their term. The gradient term uses forward
// differences: that is the discretization the Dirichlet Laplacian conserves.
struct EnergyCoefficients {
  RealField a1;
  RealField a2;
  RealField a3;
  RealField a4_over_c;
};

inline double energy_diagnostic(const Grid1D& g, const ComplexField& u, const RealField& v,
                                const EnergyCoefficients& c) {
  require_size(g, u.size(), "energy_diagnostic");
  double grad = 0.0;
  for (std::size_t k = 0; k + 1 < g.n; ++k) grad += std::norm(u[k + 1] - u[k]);
  grad /= g.h;  // h * |du/h|^2 summed over cells

  RealField integrand(g.n, 0.0);
  for (std::size_t k = 0; k < g.n; ++k) {
    double val = 0.0;
    if (!c.a1.empty()) val += c.a1[k] * std::norm(u[k]);
    if (!c.a2.empty()) val += c.a2[k] * std::real(u[k] * u[k]);
    if (!c.a3.empty() && !v.empty()) val += 2.0 * c.a3[k] * v[k] * u[k].real();
    if (!c.a4_over_c.empty() && !v.empty()) val -= c.a4_over_c[k] * v[k] * v[k];
    integrand[k] = val;
  }
  return grad + trapezoid(g, integrand);
}

}  // namespace nlsb
