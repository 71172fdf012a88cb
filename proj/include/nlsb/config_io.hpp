#pragma once

#include <cstddef>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <unordered_set>

#include "nlsb/csv_io.hpp"
#include "nlsb/errors.hpp"
#include "nlsb/simulator.hpp"

namespace nlsb {

// Flat `key = value` configuration files. `#` starts a comment, blank lines
// are ignored, keys may appear at most once, and unknown keys are rejected.
// echo_config() emits every key in a fixed canonical order with %.17g
// precision, so parse(echo(cfg)) reproduces cfg bit for bit.

namespace detail {

inline std::string trim(const std::string& s) {
  const char* ws = " \t\r\n";
  const std::size_t a = s.find_first_not_of(ws);
  if (a == std::string::npos) return "";
  const std::size_t b = s.find_last_not_of(ws);
  return s.substr(a, b - a + 1);
}

inline double parse_double(const std::string& key, const std::string& v) {
  // strtod, not stod: stod throws on subnormals, which a round-tripped echo
  // may legitimately contain.
  char* endp = nullptr;
  const double x = std::strtod(v.c_str(), &endp);
  if (v.empty() || endp != v.c_str() + v.size())
    throw config_error("config: key '" + key + "' expects a number, got '" + v + "'");
  return x;
}

inline long long parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long long x = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw config_error("config: key '" + key + "' expects an integer, got '" + v + "'");
  }
}

inline bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw config_error("config: key '" + key + "' expects true/false, got '" + v + "'");
}

inline bool apply_config_key(SimConfig& c, const std::string& key, const std::string& value) {
  if (key == "x_max") c.x_max = parse_double(key, value);
  else if (key == "n") {
    const long long v = parse_int(key, value);
    if (v < 0) throw config_error("config: key 'n' must be nonnegative");
    c.n = static_cast<std::size_t>(v);
  } else if (key == "dt") c.dt = parse_double(key, value);
  else if (key == "T") c.T = parse_double(key, value);
  else if (key == "b") c.b = parse_double(key, value);
  else if (key == "A") c.A = parse_double(key, value);
  else if (key == "C") c.C = parse_double(key, value);
  else if (key == "eps") c.eps = parse_double(key, value);
  else if (key == "delta") c.delta = parse_double(key, value);
  else if (key == "mollify_width") c.mollify_width = parse_double(key, value);
  else if (key == "v_mode") c.v_mode = value;
  else if (key == "splitting") c.splitting = value;
  else if (key == "u_scheme") c.u_scheme = value;
  else if (key == "v_scheme") c.v_scheme = value;
  else if (key == "perturb_u") c.perturb_u = value;
  else if (key == "perturb_v") c.perturb_v = value;
  else if (key == "newton_tol") c.newton_tol = parse_double(key, value);
  else if (key == "newton_max_iter") c.newton_max_iter = static_cast<int>(parse_int(key, value));
  else if (key == "substeps") c.substeps = static_cast<int>(parse_int(key, value));
  else if (key == "euler_reference") c.euler_reference = parse_bool(key, value);
  else if (key == "output_every") c.output_every = static_cast<int>(parse_int(key, value));
  else if (key == "taper_inner") c.taper_inner = parse_double(key, value);
  else if (key == "taper_outer") c.taper_outer = parse_double(key, value);
  else return false;
  return true;
}

}  // namespace detail

inline SimConfig parse_config_text(const std::string& text) {
  SimConfig cfg;
  std::unordered_set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error("config: line " + std::to_string(lineno) + " is not 'key = value'");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty()) throw config_error("config: line " + std::to_string(lineno) + " has empty key");
    if (!seen.insert(key).second)
      throw config_error("config: duplicate key '" + key + "'");
    if (!detail::apply_config_key(cfg, key, value))
      throw config_error("config: unknown key '" + key + "'");
  }
  return cfg;
}

inline SimConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

inline std::string echo_config(const SimConfig& c) {
  std::string s;
  auto put = [&s](const char* key, const std::string& value) {
    s += key;
    s += " = ";
    s += value;
    s += '\n';
  };
  put("x_max", fmt17(c.x_max));
  put("n", std::to_string(c.n));
  put("dt", fmt17(c.dt));
  put("T", fmt17(c.T));
  put("b", fmt17(c.b));
  put("A", fmt17(c.A));
  put("C", fmt17(c.C));
  put("eps", fmt17(c.eps));
  put("delta", fmt17(c.delta));
  put("mollify_width", fmt17(c.mollify_width));
  put("v_mode", c.v_mode);
  put("splitting", c.splitting);
  put("u_scheme", c.u_scheme);
  put("v_scheme", c.v_scheme);
  put("perturb_u", c.perturb_u);
  put("perturb_v", c.perturb_v);
  put("newton_tol", fmt17(c.newton_tol));
  put("newton_max_iter", std::to_string(c.newton_max_iter));
  put("substeps", std::to_string(c.substeps));
  put("euler_reference", c.euler_reference ? "true" : "false");
  put("output_every", std::to_string(c.output_every));
  put("taper_inner", fmt17(c.taper_inner));
  put("taper_outer", fmt17(c.taper_outer));
  return s;
}

}  // namespace nlsb
