#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "nlsb/errors.hpp"
#include "nlsb/grid.hpp"
#include "nlsb/norms.hpp"
#include "nlsb/schrodinger.hpp"
#include "test_helpers.hpp"

using namespace nlsb;

namespace {

ComplexField packet(const Grid1D& g, double amp, double k0) {
  return sample_complex(g, [=](double x) {
    return amp * std::exp(-x * x) * std::exp(Complex(0.0, k0 * x));
  });
}

// Smooth test problem with every linear term active and a genuinely
// time-dependent source; used by the refinement and diagnostic tests.
SchrodingerProblem rich_problem(const Grid1D& g) {
  SchrodingerProblem p;
  p.a1 = sample(g, [](double x) { return std::exp(-x * x) - 0.2; });
  p.a2 = sample(g, [](double x) { return 0.35 * std::exp(-0.5 * x * x); });
  RealField envelope = sample(g, [](double x) { return std::exp(-x * x) * (1.0 + 0.2 * std::sin(x)); });
  p.source = [envelope](double t, ComplexField& out) {
    const Complex amp(std::cos(1.3 * t), 0.5 * std::sin(2.1 * t));
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = amp * envelope[k];
  };
  return p;
}

double sup_diff_on_coarse(const ComplexField& coarse, const ComplexField& fine,
                          std::size_t stride) {
  double m = 0.0;
  for (std::size_t k = 0; k < coarse.size(); ++k)
    m = std::max(m, std::abs(coarse[k] - fine[stride * k]));
  return m;
}

template <typename Step>
ComplexField evolve(const Grid1D& g, const SchrodingerProblem& p, ComplexField u, double dt,
                    int steps, Step step, const NewtonOptions& opts = {}) {
  for (int i = 0; i < steps; ++i) step(g, p, u, i * dt, dt, opts);
  return u;
}

}  // namespace

TEST_CASE("midpoint stepper conserves mass for the free evolution", "[schrodinger]") {
  const Grid1D g = make_grid(15.0, 501);
  SchrodingerProblem p;  // a1 = a2 = 0, no source, no cubic term
  ComplexField u = packet(g, 1.0, 2.0);
  const double m0 = mass(g, u);
  double worst_step = 0.0;
  double prev = m0;
  for (int i = 0; i < 200; ++i) {
    const StepReport rep = cn_step(g, p, u, i * 1e-3, 1e-3);
    CHECK(rep.iterations == 1);  // linear problem: one exact solve
    const double m = mass(g, u);
    worst_step = std::max(worst_step, std::abs(m - prev));
    prev = m;
  }
  CHECK(worst_step <= 1e-12 * m0);
  CHECK(std::abs(mass(g, u) - m0) <= 1e-11 * m0);
}

TEST_CASE("midpoint stepper is second order in space and time", "[schrodinger]") {
  const double T = 0.2;
  const std::size_t n0 = 201;
  const double dt0 = 0.01;
  std::vector<ComplexField> sol;
  std::vector<Grid1D> grids;
  for (int lev = 0; lev < 3; ++lev) {
    const std::size_t n = ((n0 - 1) << lev) + 1;
    const Grid1D g = make_grid(10.0, n);
    grids.push_back(g);
    const SchrodingerProblem p = rich_problem(g);
    ComplexField u = sample_complex(g, [](double x) {
      return Complex(1.0, 0.4) * std::exp(-x * x) * std::cos(0.7 * x);
    });
    const double dt = dt0 / (1 << lev);
    const int steps = static_cast<int>(std::lround(T / dt));
    u = evolve(g, p, u, dt, steps,
               [](const Grid1D& gg, const SchrodingerProblem& pp, ComplexField& uu, double t,
                  double ddt, const NewtonOptions& oo) { cn_step(gg, pp, uu, t, ddt, oo); });
    sol.push_back(u);
  }
  const double e01 = sup_diff_on_coarse(sol[0], sol[1], 2);
  const double e12 = sup_diff_on_coarse(sol[1], sol[2], 2);
  CHECK(e01 > 0.0);
  const double ratio = e01 / e12;
  CHECK(ratio > 3.5);
  CHECK(ratio < 4.5);
}

TEST_CASE("two-stage stepper is second order and agrees with the midpoint stepper to third order locally",
          "[schrodinger]") {
  const double T = 0.2;
  const std::size_t n0 = 201;
  const double dt0 = 0.01;
  std::vector<ComplexField> sol;
  for (int lev = 0; lev < 3; ++lev) {
    const std::size_t n = ((n0 - 1) << lev) + 1;
    const Grid1D g = make_grid(10.0, n);
    const SchrodingerProblem p = rich_problem(g);
    ComplexField u = sample_complex(g, [](double x) {
      return Complex(1.0, 0.4) * std::exp(-x * x) * std::cos(0.7 * x);
    });
    const double dt = dt0 / (1 << lev);
    const int steps = static_cast<int>(std::lround(T / dt));
    u = evolve(g, p, u, dt, steps,
               [](const Grid1D& gg, const SchrodingerProblem& pp, ComplexField& uu, double t,
                  double ddt, const NewtonOptions& oo) { trbdf2_step(gg, pp, uu, t, ddt, oo); });
    sol.push_back(u);
  }
  const double e01 = sup_diff_on_coarse(sol[0], sol[1], 2);
  const double e12 = sup_diff_on_coarse(sol[1], sol[2], 2);
  const double ratio = e01 / e12;
  CHECK(ratio > 3.2);
  CHECK(ratio < 4.8);

  // Local third-order agreement between the two one-step maps.
  const Grid1D g = make_grid(10.0, 401);
  const SchrodingerProblem p = rich_problem(g);
  const ComplexField u0 = sample_complex(g, [](double x) {
    return Complex(1.0, 0.4) * std::exp(-x * x) * std::cos(0.7 * x);
  });
  double d[2];
  for (int lev = 0; lev < 2; ++lev) {
    const double dt = 0.02 / (1 << lev);
    ComplexField ua = u0, ub = u0;
    cn_step(g, p, ua, 0.0, dt);
    trbdf2_step(g, p, ub, 0.0, dt);
    double m = 0.0;
    for (std::size_t k = 0; k < g.n; ++k) m = std::max(m, std::abs(ua[k] - ub[k]));
    d[lev] = m;
  }
  const double local_ratio = d[0] / d[1];
  CHECK(local_ratio > 6.0);
  CHECK(local_ratio < 10.0);
}

TEST_CASE("cubic self-interaction keeps the Newton iteration honest and the mass flat",
          "[schrodinger]") {
  const Grid1D g = make_grid(15.0, 801);
  SchrodingerProblem p;
  p.cubic = 2.0;
  ComplexField u = sample_complex(g, [](double x) {
    return 1.3 / std::cosh(1.1 * x) * std::exp(Complex(0.0, 0.25 * x));
  });
  NewtonOptions opts;
  opts.tol = 1e-13;
  const double m0 = mass(g, u);
  int max_iters = 0;
  for (int i = 0; i < 1000; ++i) {
    const StepReport rep = cn_step(g, p, u, i * 1e-3, 1e-3, opts);
    max_iters = std::max(max_iters, rep.iterations);
  }
  CHECK(max_iters >= 2);  // the solve is genuinely nonlinear
  CHECK(std::abs(mass(g, u) - m0) <= 1e-11 * m0);
}

TEST_CASE("linear step maps doubled data to the doubled step exactly", "[schrodinger]") {
  const Grid1D g = make_grid(12.0, 401);
  SchrodingerProblem p;
  p.a1 = sample(g, [](double x) { return std::exp(-x * x) - 0.1; });
  p.a2 = sample(g, [](double x) { return 0.4 * std::cos(x) * std::exp(-0.5 * x * x); });
  const ComplexField u0 = sample_complex(g, [](double x) {
    return 1.5 * Complex(1.0, 0.5) * std::exp(-x * x) * std::cos(x);
  });
  ComplexField ua = u0, ub = u0;
  for (auto& z : ub) z *= 2.0;
  cn_step(g, p, ua, 0.0, 5e-3);
  cn_step(g, p, ub, 0.0, 5e-3);
  double worst = 0.0;
  for (std::size_t k = 0; k < g.n; ++k) worst = std::max(worst, std::abs(ub[k] - 2.0 * ua[k]));
  CHECK(worst == 0.0);  // power-of-two scaling commutes with every arithmetic path
}

TEST_CASE("hopeless Newton budget reports the residual it was left with", "[schrodinger]") {
  const Grid1D g = make_grid(8.0, 201);
  SchrodingerProblem p;
  p.cubic = 5.0;
  ComplexField u = packet(g, 3.0, 1.0);
  NewtonOptions opts;
  opts.tol = 1e-14;
  opts.max_iter = 2;
  try {
    cn_step(g, p, u, 0.0, 0.5, opts);
    FAIL("expected newton_error");
  } catch (const newton_error& e) {
    CHECK(e.iterations == 2);
    CHECK(e.last_residual > 0.0);
  }
}

TEST_CASE("zero data is a fixed point that costs no iterations", "[schrodinger]") {
  const Grid1D g = make_grid(5.0, 101);
  SchrodingerProblem p;
  p.cubic = 3.0;
  p.a1 = sample(g, [](double x) { return std::sin(x); });
  ComplexField u(g.n, Complex(0.0, 0.0));
  for (int i = 0; i < 10; ++i) {
    const StepReport rep = cn_step(g, p, u, i * 0.01, 0.01);
    CHECK(rep.iterations == 0);
  }
  for (const Complex& z : u) CHECK(std::abs(z) == 0.0);
}

TEST_CASE("stepper rejects bad sizes, bad steps, and cubic two-stage requests", "[schrodinger]") {
  const Grid1D g = make_grid(5.0, 101);
  SchrodingerProblem p;
  ComplexField u(g.n, Complex(0.0, 0.0));
  ComplexField wrong(g.n - 1, Complex(0.0, 0.0));
  CHECK_THROWS_AS(cn_step(g, p, wrong, 0.0, 0.01), dimension_error);
  CHECK_THROWS_AS(cn_step(g, p, u, 0.0, 0.0), config_error);
  CHECK_THROWS_AS(cn_step(g, p, u, 0.0, -0.1), config_error);
  SchrodingerProblem pc;
  pc.cubic = 1.0;
  CHECK_THROWS_AS(trbdf2_step(g, pc, u, 0.0, 0.01), config_error);
}

TEST_CASE("conjugate-coupling banded path matches the tridiagonal path when the coupling vanishes",
          "[schrodinger]") {
  const Grid1D g = make_grid(10.0, 301);
  SchrodingerProblem thomas, banded;
  thomas.a1 = sample(g, [](double x) { return std::exp(-x * x) * std::cos(2.0 * x); });
  banded.a1 = thomas.a1;
  banded.a2.assign(g.n, 0.0);  // present but zero: forces the interleaved real solver
  ComplexField ua = packet(g, 1.0, 1.5), ub = ua;
  for (int i = 0; i < 5; ++i) {
    cn_step(g, thomas, ua, i * 0.01, 0.01);
    cn_step(g, banded, ub, i * 0.01, 0.01);
  }
  double worst = 0.0;
  for (std::size_t k = 0; k < g.n; ++k) worst = std::max(worst, std::abs(ua[k] - ub[k]));
  CHECK(worst <= 1e-13);
}

TEST_CASE("mass rate diagnostic vanishes without conjugate coupling or source", "[schrodinger]") {
  const Grid1D g = make_grid(8.0, 201);
  SchrodingerProblem p;
  p.a1 = sample(g, [](double x) { return std::cos(x); });
  p.cubic = 4.0;
  const ComplexField u = packet(g, 2.0, 3.0);
  CHECK(mass_rate_diagnostic(g, p, u, 0.7) == 0.0);
}

TEST_CASE("mass rate diagnostic at the step midpoint reproduces the discrete mass change exactly",
          "[schrodinger]") {
  const Grid1D g = make_grid(10.0, 801);
  const SchrodingerProblem p = rich_problem(g);
  NewtonOptions opts;
  opts.tol = 1e-14;
  const double t = 0.3, dt = 5e-3;
  ComplexField u0 = sample_complex(g, [](double x) {
    return Complex(1.0, 0.3) * std::exp(-x * x) * std::sin(1.3 * x + 0.4);
  });
  ComplexField u1 = u0;
  cn_step(g, p, u1, t, dt, opts);
  ComplexField m(g.n);
  for (std::size_t k = 0; k < g.n; ++k) m[k] = 0.5 * (u0[k] + u1[k]);
  const double rate = mass_rate_diagnostic(g, p, m, t + 0.5 * dt);
  const double observed = (mass(g, u1) - mass(g, u0)) / dt;
  CHECK(std::abs(observed - rate) <= 1e-11);
}

TEST_CASE("mass rate diagnostic matches a centered difference to second order", "[schrodinger]") {
  const Grid1D g = make_grid(10.0, 401);
  const SchrodingerProblem p = rich_problem(g);
  const ComplexField u0 = sample_complex(g, [](double x) {
    return Complex(1.0, 0.3) * std::exp(-x * x) * std::sin(1.3 * x + 0.4);
  });
  double err[2];
  for (int lev = 0; lev < 2; ++lev) {
    const double dt = 0.02 / (1 << lev);
    const int mid_step = 5 * (1 << lev);  // both levels land at t = 0.1
    ComplexField u = u0;
    double m_before = 0.0, m_mid_rate = 0.0;
    for (int i = 0; i < mid_step + 1; ++i) {
      if (i == mid_step - 1) m_before = mass(g, u);
      if (i == mid_step) m_mid_rate = mass_rate_diagnostic(g, p, u, i * dt);
      cn_step(g, p, u, i * dt, dt);
    }
    const double centered = (mass(g, u) - m_before) / (2.0 * dt);
    err[lev] = std::abs(centered - m_mid_rate);
  }
  const double ratio = err[0] / err[1];
  CHECK(ratio > 3.2);
  CHECK(ratio < 4.8);
}

TEST_CASE("quadratic energy functional is conserved by the frozen-coefficient midpoint step",
          "[schrodinger]") {
  const Grid1D g = make_grid(12.0, 601);
  SchrodingerProblem p;
  p.a1 = sample(g, [](double x) { return std::exp(-x * x) - 0.3; });
  p.a2 = sample(g, [](double x) { return 0.4 * std::cos(x) * std::exp(-0.5 * x * x); });
  const RealField a3 = sample(g, [](double x) { return std::exp(-x * x / 3.0); });
  const RealField v = sample(g, [](double x) { return std::sin(x) * std::exp(-x * x / 5.0); });
  RealField sv(g.n);
  for (std::size_t k = 0; k < g.n; ++k) sv[k] = a3[k] * v[k];
  p.source = [sv](double, ComplexField& out) {
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = Complex(sv[k], 0.0);
  };
  EnergyCoefficients ec;
  ec.a1 = p.a1;
  ec.a2 = p.a2;
  ec.a3 = a3;

  ComplexField u = packet(g, 1.0, 1.0);
  const double e0 = energy_diagnostic(g, u, v, ec);
  for (int i = 0; i < 120; ++i) cn_step(g, p, u, i * 4e-3, 4e-3);
  const double e1 = energy_diagnostic(g, u, v, ec);
  CHECK(std::abs(e1 - e0) <= 1e-10 * std::max(1.0, std::abs(e0)));
  CHECK(std::abs(e0) > 0.1);  // the functional is not trivially zero here
}

TEST_CASE("energy functional is quadratic and matches a hand-built integrand", "[schrodinger]") {
  const Grid1D g = make_grid(6.0, 241);
  EnergyCoefficients ec;
  ec.a1 = sample(g, [](double x) { return 1.0 + 0.5 * std::sin(x); });
  ec.a2 = sample(g, [](double x) { return std::cos(0.5 * x); });
  ec.a3 = sample(g, [](double x) { return std::exp(-x * x); });
  ec.a4_over_c = sample(g, [](double x) { return 2.0 - std::cos(x); });
  ComplexField u = sample_complex(g, [](double x) {
    return Complex(std::exp(-x * x), 0.3 * std::sin(x) * std::exp(-0.5 * x * x));
  });
  RealField v = sample(g, [](double x) { return std::exp(-x * x) * (1.0 + x); });

  const double e = energy_diagnostic(g, u, v, ec);
  double grad = 0.0;
  for (std::size_t k = 0; k + 1 < g.n; ++k) grad += std::norm(u[k + 1] - u[k]) / g.h;
  RealField f(g.n);
  for (std::size_t k = 0; k < g.n; ++k)
    f[k] = ec.a1[k] * std::norm(u[k]) + ec.a2[k] * std::real(u[k] * u[k]) +
           2.0 * ec.a3[k] * v[k] * u[k].real() - ec.a4_over_c[k] * v[k] * v[k];
  CHECK(std::abs(e - (grad + trapezoid(g, f))) <= 1e-14 * std::max(1.0, std::abs(e)));

  ComplexField u3 = u;
  RealField v3 = v;
  for (auto& z : u3) z *= 3.0;
  for (auto& y : v3) y *= 3.0;
  const double e9 = energy_diagnostic(g, u3, v3, ec);
  CHECK(std::abs(e9 - 9.0 * e) <= 1e-13 * std::max(1.0, std::abs(e9)));

  const ComplexField zu(g.n, Complex(0.0, 0.0));
  const RealField zv(g.n, 0.0);
  CHECK(energy_diagnostic(g, zu, zv, ec) == 0.0);
}

TEST_CASE("two-stage stepper never amplifies the free evolution", "[schrodinger]") {
  const Grid1D g = make_grid(15.0, 301);
  SchrodingerProblem p;
  ComplexField u = packet(g, 1.0, 4.0);
  double prev = mass(g, u);
  for (int i = 0; i < 50; ++i) {
    trbdf2_step(g, p, u, i * 0.01, 0.01);
    const double m = mass(g, u);
    CHECK(m <= prev * (1.0 + 1e-13));
    prev = m;
  }
}
