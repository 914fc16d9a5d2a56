#include "rg2/config.hpp"

#include <fstream>
#include <sstream>

#include "rg2/snapshot_io.hpp"

namespace rg2 {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double to_double(const std::string& v, int line, const std::string& key) {
  std::size_t used = 0;
  double d = 0;
  try {
    d = std::stod(v, &used);
  } catch (...) {
    throw parse_error("not a number: '" + v + "'", line, key);
  }
  if (used != v.size()) throw parse_error("not a number: '" + v + "'", line, key);
  return d;
}

}  // namespace

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open config '" + path + "'");
  RunConfig cfg;
  std::string section = "";
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = trim(raw);
    if (s.empty() || s[0] == '#') continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw parse_error("unterminated section header", line);
      section = trim(s.substr(1, s.size() - 2));
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos)
      throw parse_error("expected 'key = value'", line);
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    const std::string qual = section.empty() ? key : section + "." + key;

    if (qual == "flow.kind") cfg.flow.kind = flow_kind_from_name(value);
    else if (qual == "flow.a") cfg.flow.a = to_double(value, line, qual);
    else if (qual == "geometry.preset") cfg.preset = value;
    else if (qual == "geometry.file") cfg.field_file = value;
    else if (qual == "geometry.n") cfg.n = static_cast<int>(to_double(value, line, qual));
    else if (qual == "geometry.amplitude") cfg.amplitude = to_double(value, line, qual);
    else if (qual == "geometry.k0") cfg.k0 = to_double(value, line, qual);
    else if (qual == "geometry.c0") cfg.c0 = to_double(value, line, qual);
    else if (qual == "time.dt0") cfg.dt0 = to_double(value, line, qual);
    else if (qual == "time.t_end") cfg.t_end = to_double(value, line, qual);
    else if (qual == "time.cfl") cfg.cfl = to_double(value, line, qual);
    else if (qual == "thresholds.eps_par") cfg.eps_par = to_double(value, line, qual);
    else if (qual == "thresholds.m_max") cfg.m_max = to_double(value, line, qual);
    else if (qual == "thresholds.eps_g") cfg.eps_g = to_double(value, line, qual);
    else if (qual == "random.seed") cfg.seed = static_cast<std::uint64_t>(to_double(value, line, qual));
    else if (qual == "output.dir") cfg.out_dir = value;
    else if (qual == "output.snapshot_every") cfg.snapshot_every = static_cast<int>(to_double(value, line, qual));
    else throw parse_error("unknown key", line, qual);
  }
  if (!(cfg.eps_par > 0) || !(cfg.m_max > 0) || !(cfg.eps_g > 0))
    throw parse_error("thresholds must be positive", -1, "thresholds");
  return cfg;
}

void write_config(const std::string& path, const RunConfig& cfg) {
  std::ofstream out(path);
  if (!out) throw parse_error("cannot write config '" + path + "'");
  out << "[flow]\n";
  out << "kind = " << flow_kind_name(cfg.flow.kind) << "\n";
  out << "a = " << format_double(cfg.flow.a) << "\n";
  out << "\n[geometry]\n";
  out << "preset = " << cfg.preset << "\n";
  if (!cfg.field_file.empty()) out << "file = " << cfg.field_file << "\n";
  out << "n = " << cfg.n << "\n";
  out << "amplitude = " << format_double(cfg.amplitude) << "\n";
  out << "k0 = " << format_double(cfg.k0) << "\n";
  out << "c0 = " << format_double(cfg.c0) << "\n";
  out << "\n[time]\n";
  out << "dt0 = " << format_double(cfg.dt0) << "\n";
  out << "t_end = " << format_double(cfg.t_end) << "\n";
  out << "cfl = " << format_double(cfg.cfl) << "\n";
  out << "\n[thresholds]\n";
  out << "eps_par = " << format_double(cfg.eps_par) << "\n";
  out << "m_max = " << format_double(cfg.m_max) << "\n";
  out << "eps_g = " << format_double(cfg.eps_g) << "\n";
  out << "\n[random]\n";
  out << "seed = " << cfg.seed << "\n";
  out << "\n[output]\n";
  out << "dir = " << cfg.out_dir << "\n";
  out << "snapshot_every = " << cfg.snapshot_every << "\n";
}

}  // namespace rg2
