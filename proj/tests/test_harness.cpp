#include <catch2/catch_amalgamated.hpp>

#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "nlsb/acceptance.hpp"
#include "nlsb/cli.hpp"
#include "nlsb/config_io.hpp"
#include "nlsb/csv_io.hpp"
#include "nlsb/experiments.hpp"
#include "test_helpers.hpp"

using namespace nlsb;

namespace {

// Small, fast linearized configuration for I/O and determinism checks.
SimConfig io_box() {
  SimConfig c;
  c.x_max = 10.0;
  c.n = 401;
  c.taper_inner = 6.0;
  c.taper_outer = 9.0;
  c.T = 0.02;
  c.dt = 1e-3;
  return c;
}

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "nlsb");
  std::vector<char*> argv;
  argv.reserve(args.size());
  for (auto& s : args) argv.push_back(s.data());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

std::string fresh_dir(const std::string& name) {
  const std::string dir = "harness_tmp_" + name;
  std::filesystem::remove_all(dir);
  return dir;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string first_line(const std::string& text) {
  return text.substr(0, text.find('\n'));
}

}  // namespace

TEST_CASE("config echo lists every key and round-trips bit for bit", "[harness]") {
  const SimConfig def;
  const std::string echoed = echo_config(def);
  for (const char* key :
       {"x_max", "n", "dt", "T", "b", "A", "C", "eps", "delta", "mollify_width", "v_mode",
        "splitting", "u_scheme", "v_scheme", "perturb_u", "perturb_v", "newton_tol",
        "newton_max_iter", "substeps", "euler_reference", "output_every", "taper_inner",
        "taper_outer"}) {
    INFO("key: " << key);
    CHECK(echoed.find(std::string(key) + " = ") != std::string::npos);
  }
  CHECK(echo_config(parse_config_text(echoed)) == echoed);

  SimConfig odd = def;
  odd.x_max = 13.7;
  odd.n = 4097;
  odd.dt = 1.0 / 3.0;
  odd.T = 2.0 / 3.0;
  odd.b = -1.25;
  odd.eps = 0.1;
  odd.delta = 1e-300;
  odd.mollify_width = 0.123456789012345678;
  odd.v_mode = "regularized";
  odd.u_scheme = "trbdf2";
  odd.newton_tol = 2.2250738585072014e-308;
  odd.euler_reference = true;
  CHECK(echo_config(parse_config_text(echo_config(odd))) == echo_config(odd));
}

TEST_CASE("config parser handles comments and rejects malformed input", "[harness]") {
  const SimConfig c = parse_config_text(
      "# leading comment\n"
      "\n"
      "  eps = 0.25   # trailing comment\n"
      "\tv_mode =  regularized \n"
      "n=801\n");
  CHECK(c.eps == 0.25);
  CHECK(c.v_mode == "regularized");
  CHECK(c.n == 801);
  CHECK(c.dt == SimConfig{}.dt);  // untouched keys keep their defaults

  CHECK_THROWS_AS(parse_config_text("nonsense_key = 3\n"), config_error);
  CHECK_THROWS_AS(parse_config_text("eps = not_a_number\n"), config_error);
  CHECK_THROWS_AS(parse_config_text("eps = 0.1\neps = 0.2\n"), config_error);
  CHECK_THROWS_AS(parse_config_text("euler_reference = maybe\n"), config_error);
  CHECK_THROWS_AS(parse_config_text("just some words\n"), config_error);
  CHECK_THROWS_AS(parse_config_text("= 3\n"), config_error);
  CHECK_THROWS_AS(load_config_file("no_such_file_here.txt"), io_error);
}

TEST_CASE("csv writers pin the three headers and round-trip doubles exactly", "[harness]") {
  const Grid1D g = make_grid(3.0, 7);
  ComplexField u(g.n);
  RealField v(g.n);
  const double nasty[7] = {0.1,   1.0 / 3.0, 1e-300, -0.0,
                           7.25, -13.0 / 7.0, 1e-310};
  for (std::size_t k = 0; k < g.n; ++k) {
    u[k] = Complex(nasty[k], -nasty[(k + 3) % 7]);
    v[k] = nasty[(k + 5) % 7];
  }
  const std::string ftext = fields_csv(g, u, v);
  CHECK(first_line(ftext) == "x,re_u,im_u,v_tilde");
  const CsvTable tab = parse_csv_text(ftext);
  REQUIRE(tab.rows.size() == g.n);
  for (std::size_t k = 0; k < g.n; ++k) {
    REQUIRE(tab.rows[k].size() == 4);
    CHECK(tab.rows[k][0] == g.x[k]);
    CHECK(tab.rows[k][1] == u[k].real());
    CHECK(tab.rows[k][2] == u[k].imag());
    CHECK(tab.rows[k][3] == v[k]);
    CHECK(std::signbit(tab.rows[k][1]) == std::signbit(u[k].real()));
  }

  TimeSeries ts;
  ts.append(0.0, 0.1);
  ts.append(0.1, 1.0 / 3.0);
  const std::string ptext = psi_csv(ts);
  CHECK(first_line(ptext) == "t,psi");
  const CsvTable ptab = parse_csv_text(ptext);
  REQUIRE(ptab.rows.size() == 2);
  CHECK(ptab.rows[1][1] == 1.0 / 3.0);

  NormSeries ns;
  ns.t = {0.0};
  ns.mass = {1e-17};
  ns.h1_u = {2.0};
  ns.l2_vtilde = {3.0};
  ns.hm1_v = {4.0};
  ns.energy = {-5.5};
  ns.shock_energy = {6.25};
  const std::string ntext = norms_csv(ns);
  CHECK(first_line(ntext) == "t,mass,h1_u,l2_vtilde,hm1_v,energy,shock_energy");
  const CsvTable ntab = parse_csv_text(ntext);
  REQUIRE(ntab.rows.size() == 1);
  CHECK(ntab.rows[0][1] == 1e-17);
  CHECK(ntab.rows[0][5] == -5.5);

  CHECK_THROWS_AS(parse_csv_text("t,psi\n0,oops\n"), io_error);
}

TEST_CASE("identical configurations produce byte-identical outputs", "[harness]") {
  const SimConfig c = io_box();
  const RunResult a = run_linearized(c);
  const RunResult b = run_linearized(c);
  CHECK(fields_csv(a.grid, a.u, a.v) == fields_csv(b.grid, b.u, b.v));
  CHECK(norms_csv(a.norms) == norms_csv(b.norms));
  CHECK(psi_csv(a.psi) == psi_csv(b.psi));
}

TEST_CASE("run output writer subtracts the background where asked", "[harness]") {
  SimConfig c = io_box();
  c.delta = 0.1;
  const RunResult res = run_full(c);
  const std::string dir = fresh_dir("writer");
  write_run_outputs(dir, "full", res, false, &res.wave.phi);
  const CsvTable tab = parse_csv_text(slurp(dir + "/full_fields.csv"));
  REQUIRE(tab.rows.size() == res.grid.n);
  for (std::size_t k = 0; k < res.grid.n; k += 97)
    CHECK(tab.rows[k][3] == res.v[k] - res.wave.phi[k]);
  CHECK(first_line(slurp(dir + "/full_norms.csv")) == "t,mass,h1_u,l2_vtilde,hm1_v,energy,shock_energy");
  CHECK_FALSE(std::filesystem::exists(dir + "/full_psi.csv"));

  write_run_outputs(dir, "raw", res, true);
  const CsvTable raw = parse_csv_text(slurp(dir + "/raw_fields.csv"));
  CHECK(raw.rows[0][3] == res.v[0]);
  CHECK(std::filesystem::exists(dir + "/raw_psi.csv"));
}

TEST_CASE("acceptance suite enumerates ten uniquely named criteria", "[harness]") {
  const auto& names = acceptance_criteria_names();
  CHECK(names.size() == 10);
  std::set<std::string> uniq(names.begin(), names.end());
  CHECK(uniq.size() == names.size());
  for (const auto& n : names) {
    INFO("name: " << n);
    for (char ch : n) CHECK((std::islower(static_cast<unsigned char>(ch)) || ch == '-'));
  }
}

TEST_CASE("gnuplot scripts are emitted and reference their data files", "[harness]") {
  const std::string dir = fresh_dir("plots");
  emit_gnuplot_scripts(dir);
  for (const char* f :
       {"fig1_profiles.gp", "fig2_conservation.gp", "fig3_stability.gp", "fig4_spike_mass.gp"}) {
    INFO("script: " << f);
    CHECK(std::filesystem::exists(dir + "/" + std::string(f)));
  }
  CHECK(slurp(dir + "/fig1_profiles.gp").find("reference.csv") != std::string::npos);
  CHECK(slurp(dir + "/fig3_stability.gp").find("stability.csv") != std::string::npos);
}

TEST_CASE("sweep string parsing", "[harness]") {
  const auto xs = detail::parse_sweep(" 0.2, 0.1 ,0.05");
  REQUIRE(xs.size() == 3);
  CHECK(xs[0] == 0.2);
  CHECK(xs[2] == 0.05);
  CHECK_THROWS_AS(detail::parse_sweep("0.2,,0.1"), config_error);
  CHECK_THROWS_AS(detail::parse_sweep("0.2,abc"), config_error);
}

TEST_CASE("study input validation fails before any expensive run", "[harness]") {
  const SimConfig c = io_box();
  CHECK_THROWS_AS(run_stability_sweep(c, {}), config_error);
  CHECK_THROWS_AS(run_stability_sweep(c, {0.1, -0.2}), config_error);
  CHECK_THROWS_AS(run_stability_sweep(c, {0.1, 0.1}), config_error);
  CHECK_THROWS_AS(run_pairing_study(c, {0.5}), config_error);
  CHECK_THROWS_AS(transport_point(10.0, 401, 0.5, 0.25, 0.9), config_error);
  CHECK_THROWS_AS(transport_point(10.0, 401, 0.5, 1.0, 1.5), config_error);
}

TEST_CASE("transport study reports sane errors on a small grid", "[harness]") {
  const TransportPoint p = transport_point(10.0, 801, 0.25, 0.5, 0.9);
  CHECK(p.h == Catch::Approx(20.0 / 800.0));
  CHECK(p.l1_error > 0.0);
  CHECK(p.l1_error < 0.2);
  // The initial bell carries no atom at the interface node, so the piecewise
  // linear data miss one notch triangle of area ~h relative to the smooth
  // integral sqrt(pi) erf(1).
  CHECK(p.psi_exact ==
        Catch::Approx(std::sqrt(std::acos(-1.0)) * std::erf(1.0) - p.h).margin(5e-4));
  CHECK(p.psi_error < 0.05);
}

TEST_CASE("cli maps outcomes to the documented exit codes", "[harness]") {
  const std::string dir = fresh_dir("cli");
  ensure_dir(dir);
  const std::string good = dir + "/good.txt";
  write_text_file(good,
                  "x_max = 10\nn = 201\ndt = 1e-3\nT = 0.01\n"
                  "taper_inner = 6\ntaper_outer = 9\ndelta = 0.1\n");
  const std::string bad = dir + "/bad.txt";
  write_text_file(bad, "definitely_not_a_key = 1\n");

  CHECK(cli({"validate", "--config", good}) == 0);
  CHECK(cli({"validate", "--config", bad}) == 2);
  CHECK(cli({"validate", "--config", dir + "/missing.txt"}) == 2);
  CHECK(cli({"validate", "--config", good, "--dt", "-1"}) == 2);
  CHECK(cli({"validate", "--config", good, "--grid", "3"}) == 2);
  CHECK(cli({"no_such_subcommand"}) == 2);
  CHECK(cli({"validate", "--config", good, "--dt", "abc"}) == 2);
  CHECK(cli({}) == 2);  // a subcommand is required

  // CFL violation surfaces as a numeric failure.
  CHECK(cli({"full", "--config", good, "--dt", "0.1", "--T", "0.2"}) == 3);
}

TEST_CASE("cli subcommands write their documented artifacts", "[harness]") {
  const std::string dir = fresh_dir("cli_art");
  ensure_dir(dir);
  const std::string conf = dir + "/run.txt";
  write_text_file(conf,
                  "x_max = 10\nn = 201\ndt = 1e-3\nT = 0.01\n"
                  "taper_inner = 6\ntaper_outer = 9\ndelta = 0.1\n");

  const std::string ref_dir = dir + "/ref";
  REQUIRE(cli({"reference", "--config", conf, "--out", ref_dir, "--grid", "101"}) == 0);
  CHECK(first_line(slurp(ref_dir + "/reference.csv")) == "x,re_u,im_u,v_tilde");
  const std::string echoed = slurp(ref_dir + "/config_used.txt");
  CHECK(echoed.find("n = 101") != std::string::npos);
  CHECK(echoed.find("newton_tol = ") != std::string::npos);  // defaults echoed too
  CHECK(parse_csv_text(slurp(ref_dir + "/reference.csv")).rows.size() == 101);

  const std::string full_dir = dir + "/full";
  REQUIRE(cli({"full", "--config", conf, "--out", full_dir}) == 0);
  CHECK(std::filesystem::exists(full_dir + "/full_fields.csv"));
  CHECK(std::filesystem::exists(full_dir + "/full_norms.csv"));
  CHECK(std::filesystem::exists(full_dir + "/config_used.txt"));

  const std::string lin_dir = dir + "/lin";
  REQUIRE(cli({"linearized", "--config", conf, "--out", lin_dir}) == 0);
  CHECK(std::filesystem::exists(lin_dir + "/linearized_fields.csv"));
  CHECK(first_line(slurp(lin_dir + "/linearized_psi.csv")) == "t,psi");

  const std::string reg_dir = dir + "/lin_reg";
  REQUIRE(cli({"linearized", "--config", conf, "--out", reg_dir, "--mode", "regularized"}) == 0);
  CHECK(std::filesystem::exists(reg_dir + "/linearized_fields.csv"));
  CHECK_FALSE(std::filesystem::exists(reg_dir + "/linearized_psi.csv"));

  const std::string conv_dir = dir + "/conv";
  REQUIRE(cli({"convergence", "--config", conf, "--out", conv_dir, "--grid", "401", "--T",
               "0.5"}) == 0);
  CHECK(first_line(slurp(conv_dir + "/convergence.csv")) ==
        "n,h,l1_error,l1_error_over_h,psi,psi_exact,psi_error");
  CHECK(parse_csv_text(slurp(conv_dir + "/convergence.csv")).rows.size() == 2);
}

TEST_CASE("cli stability sweep on a tiny box exits by its verdict", "[harness]") {
  const std::string dir = fresh_dir("cli_stab");
  ensure_dir(dir);
  const std::string conf = dir + "/run.txt";
  // Short horizon keeps the three nonlinear runs cheap.
  write_text_file(conf,
                  "x_max = 10\nn = 201\ndt = 1e-3\nT = 0.05\n"
                  "taper_inner = 6\ntaper_outer = 9\n");
  const int code = cli({"stability", "--config", conf, "--out", dir, "--sweep", "0.2,0.1"});
  CHECK(code == 0);
  const CsvTable tab = parse_csv_text(slurp(dir + "/stability.csv"));
  CHECK(first_line(slurp(dir + "/stability.csv")) ==
        "delta,u_mismatch,v_mismatch,spike_mismatch,total,normalized");
  REQUIRE(tab.rows.size() == 2);
  CHECK(tab.rows[0][0] == 0.2);  // descending order
  CHECK(tab.rows[1][0] == 0.1);
  CHECK(std::filesystem::exists(dir + "/fig3_stability.gp"));
  CHECK(std::filesystem::exists(dir + "/linearized_psi.csv"));
}
