#pragma once

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "nlsb/errors.hpp"
#include "nlsb/grid.hpp"
#include "nlsb/simulator.hpp"
#include "nlsb/time_series.hpp"

namespace nlsb {

// CSV emission with full round-trip precision. Every number is printed with
// %.17g so that parsing the file recovers the exact double; all writers are
// deterministic (no timestamps, no locale dependence).

inline std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw io_error("cannot create directory '" + dir + "': " + ec.message());
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw io_error("write failed for '" + path + "'");
}

inline std::string fields_csv(const Grid1D& g, const ComplexField& u, const RealField& v) {
  require_size(g, u.size(), "fields_csv u");
  require_size(g, v.size(), "fields_csv v");
  std::string s = "x,re_u,im_u,v_tilde\n";
  for (std::size_t k = 0; k < g.n; ++k) {
    s += fmt17(g.x[k]);
    s += ',';
    s += fmt17(u[k].real());
    s += ',';
    s += fmt17(u[k].imag());
    s += ',';
    s += fmt17(v[k]);
    s += '\n';
  }
  return s;
}

inline std::string norms_csv(const NormSeries& n) {
  std::string s = "t,mass,h1_u,l2_vtilde,hm1_v,energy,shock_energy\n";
  for (std::size_t i = 0; i < n.t.size(); ++i) {
    s += fmt17(n.t[i]);
    s += ',';
    s += fmt17(n.mass[i]);
    s += ',';
    s += fmt17(n.h1_u[i]);
    s += ',';
    s += fmt17(n.l2_vtilde[i]);
    s += ',';
    s += fmt17(n.hm1_v[i]);
    s += ',';
    s += fmt17(n.energy[i]);
    s += ',';
    s += fmt17(n.shock_energy[i]);
    s += '\n';
  }
  return s;
}

inline std::string psi_csv(const TimeSeries& ts) {
  std::string s = "t,psi\n";
  for (std::size_t i = 0; i < ts.t.size(); ++i) {
    s += fmt17(ts.t[i]);
    s += ',';
    s += fmt17(ts.value[i]);
    s += '\n';
  }
  return s;
}

struct CsvTable {
  std::string header;
  std::vector<std::vector<double>> rows;
};

inline CsvTable parse_csv_text(const std::string& text) {
  CsvTable tab;
  std::istringstream in(text);
  if (!std::getline(in, tab.header)) throw io_error("csv: empty content");
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      const std::size_t comma = line.find(',', pos);
      const std::string cell =
          line.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      // strtod, not stod: stod throws on subnormals, which are legitimate
      // round-trip values.
      char* endp = nullptr;
      const double val = std::strtod(cell.c_str(), &endp);
      if (cell.empty() || endp != cell.c_str() + cell.size())
        throw io_error("csv: bad numeric cell '" + cell + "'");
      row.push_back(val);
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    tab.rows.push_back(std::move(row));
  }
  return tab;
}

inline CsvTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_csv_text(ss.str());
}

}  // namespace nlsb
