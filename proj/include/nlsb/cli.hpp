#pragma once

#include <cmath>
#include <cstddef>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nlsb/config_io.hpp"
#include "nlsb/csv_io.hpp"
#include "nlsb/errors.hpp"
#include "nlsb/experiments.hpp"
#include "nlsb/simulator.hpp"

namespace nlsb {

// Command-line driver. Exit codes: 0 success, 1 a study's built-in criterion
// failed, 2 configuration/setup problem, 3 the numerics diverged or hit a
// stability bound. Every run echoes the fully resolved configuration (every
// key, including untouched defaults) into the output directory.

namespace detail {

inline std::vector<double> parse_sweep(const std::string& s) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const std::size_t comma = s.find(',', pos);
    const std::string tok =
        trim(s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
    if (tok.empty()) throw config_error("sweep: empty entry in '" + s + "'");
    out.push_back(parse_double("sweep", tok));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace detail

inline int run_cli(int argc, char** argv) {
  CLI::App app{
      "Simulator for a dispersive field coupled to a field with an entropy jump:\n"
      "background-wave computation, nonlinear and linearized runs, a perturbation\n"
      "response sweep, and an interface-transport refinement study."};
  app.fallthrough();
  app.require_subcommand(1);

  const double unset = std::numeric_limits<double>::quiet_NaN();
  std::string config_path;
  std::string out_dir = ".";
  std::string mode;
  std::string sweep = "0.2,0.1,0.05";
  double delta = unset, dt = unset, T = unset;
  long long grid = 0;

  app.add_option("--config", config_path, "configuration file (flat 'key = value' lines)");
  app.add_option("--out", out_dir, "output directory (default: current directory)");
  app.add_option("--mode", mode, "interface treatment override: decomposed | regularized");
  app.add_option("--delta", delta, "perturbation amplitude override");
  app.add_option("--sweep", sweep,
                 "comma-separated amplitudes for the stability sweep (default 0.2,0.1,0.05)");
  app.add_option("--grid", grid, "node count override (odd)");
  app.add_option("--dt", dt, "time step override");
  app.add_option("--T", T, "final time override");

  auto* c_ref = app.add_subcommand(
      "reference", "compute the background wave and write its profile snapshot");
  auto* c_full = app.add_subcommand(
      "full", "run the nonlinear coupled system around the tapered background wave");
  auto* c_lin = app.add_subcommand(
      "linearized", "run the linearized system for a perturbation of the background wave");
  auto* c_stab = app.add_subcommand(
      "stability", "sweep perturbation sizes and compare nonlinear deviations against the "
                   "linearized prediction (exit 1 if the normalized response grows)");
  auto* c_conv = app.add_subcommand(
      "convergence", "interface-transport refinement study with absorbed-mass bookkeeping "
                     "(exit 1 if the first-order constant degrades)");
  auto* c_val = app.add_subcommand(
      "validate", "parse and validate the configuration, echo every resolved key");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    SimConfig cfg = config_path.empty() ? SimConfig{} : load_config_file(config_path);
    if (!mode.empty()) cfg.v_mode = mode;
    if (!std::isnan(delta)) cfg.delta = delta;
    if (grid != 0) {
      if (grid < 7) throw config_error("cli: --grid must be at least 7");
      cfg.n = static_cast<std::size_t>(grid);
    }
    if (!std::isnan(dt)) cfg.dt = dt;
    if (!std::isnan(T)) cfg.T = T;

    if (c_val->parsed()) {
      std::cout << echo_config(finalize_config(cfg));
      return 0;
    }

    if (c_ref->parsed()) {
      const SimConfig fin = finalize_config(cfg);
      const Grid1D g = make_grid(fin.x_max, fin.n);
      const ReferenceWave w =
          make_reference(g, {fin.b, fin.A, fin.C, fin.eps}, fin.substeps, fin.euler_reference);
      ensure_dir(out_dir);
      write_text_file(out_dir + "/reference.csv", fields_csv(g, to_complex(w.r), w.phi));
      write_text_file(out_dir + "/config_used.txt", echo_config(fin));
      std::cout << "wrote " << out_dir << "/reference.csv (" << g.n << " nodes)\n";
      return 0;
    }

    if (c_full->parsed()) {
      const SimConfig fin = finalize_config(cfg);
      const RunResult res = run_full(fin);
      ensure_dir(out_dir);
      write_run_outputs(out_dir, "full", res, false, &res.wave.phi);
      write_text_file(out_dir + "/config_used.txt", echo_config(fin));
      const double m0 = res.norms.mass.front();
      double drift = 0.0;
      for (double m : res.norms.mass) drift = std::max(drift, std::abs(m - m0));
      std::cout << "full run: " << res.steps << " steps to T = " << fin.T
                << ", relative mass drift " << (m0 > 0.0 ? drift / m0 : 0.0) << '\n'
                << "wrote " << out_dir << "/full_fields.csv and " << out_dir
                << "/full_norms.csv\n";
      return 0;
    }

    if (c_lin->parsed()) {
      const SimConfig fin = finalize_config(cfg);
      const RunResult res = run_linearized(fin);
      const bool with_psi = fin.v_mode == "decomposed";
      ensure_dir(out_dir);
      write_run_outputs(out_dir, "linearized", res, with_psi);
      write_text_file(out_dir + "/config_used.txt", echo_config(fin));
      std::cout << "linearized run: " << res.steps << " steps to T = " << fin.T
                << ", final H1(u) = " << res.norms.h1_u.back();
      if (with_psi) std::cout << ", point mass = " << res.psi.back();
      std::cout << '\n' << "wrote " << out_dir << "/linearized_fields.csv and "
                << out_dir << "/linearized_norms.csv\n";
      return 0;
    }

    if (c_stab->parsed()) {
      const std::vector<double> deltas = detail::parse_sweep(sweep);
      RunResult lin;
      const StabilityReport rep = run_stability_sweep(cfg, deltas, &lin);
      ensure_dir(out_dir);
      write_text_file(out_dir + "/stability.csv", rep.csv());
      if (cfg.v_mode == "decomposed")
        write_text_file(out_dir + "/linearized_psi.csv", psi_csv(lin.psi));
      write_text_file(out_dir + "/config_used.txt", echo_config(finalize_config(cfg)));
      emit_gnuplot_scripts(out_dir);
      for (const auto& p : rep.points)
        std::cout << "delta " << p.delta << ": response/delta = " << p.normalized << '\n';
      const bool ok = rep.non_increasing(1e-6) && rep.points.front().normalized > 0.0;
      std::cout << "normalized response non-increasing: " << (ok ? "yes" : "NO") << '\n'
                << "wrote " << out_dir << "/stability.csv\n";
      return ok ? 0 : 1;
    }

    if (c_conv->parsed()) {
      validate_config(cfg);
      if ((cfg.n - 1) % 4 != 0)
        throw config_error("convergence: n must be 1 mod 4 so the halved grid stays odd");
      const std::size_t coarse = (cfg.n - 1) / 2 + 1;
      const double t_psi = cfg.T, t_l1 = 0.5 * cfg.T;
      const TransportPoint pc = transport_point(cfg.x_max, coarse, t_l1, t_psi, 0.9);
      const TransportPoint pf = transport_point(cfg.x_max, cfg.n, t_l1, t_psi, 0.9);
      ensure_dir(out_dir);
      write_text_file(out_dir + "/convergence.csv",
                      transport_csv_header() + pc.csv_row() + pf.csv_row());
      write_text_file(out_dir + "/config_used.txt", echo_config(finalize_config(cfg)));
      const double cc = pc.l1_error / pc.h, cf = pf.l1_error / pf.h;
      std::cout << "n " << pc.n << ": L1 error " << pc.l1_error << ", absorbed-mass error "
                << pc.psi_error << '\n'
                << "n " << pf.n << ": L1 error " << pf.l1_error << ", absorbed-mass error "
                << pf.psi_error << '\n';
      const bool ok = cf <= 1.4 * cc;
      std::cout << "first-order constant stable under refinement: " << (ok ? "yes" : "NO")
                << '\n' << "wrote " << out_dir << "/convergence.csv\n";
      return ok ? 0 : 1;
    }
  } catch (const setup_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const numeric_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}

}  // namespace nlsb
