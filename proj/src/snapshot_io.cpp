#include "rg2/snapshot_io.hpp"

#include <cstdio>
#include <fstream>

#include <json.hpp>

namespace rg2 {

namespace {

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw parse_error(std::string("invalid JSON in '") + path + "': " + e.what());
  }
}

SymBilinear3d sym_from_json(const nlohmann::json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 6)
    throw parse_error("expected an array of 6 components", -1, field);
  SymBilinear3d s;
  for (int i = 0; i < 6; ++i) {
    if (!j[i].is_number())
      throw parse_error("component is not a number", -1, field);
    s.coeffs()[i] = j[i].get<double>();
  }
  return s;
}

}  // namespace

void write_snapshot(const std::string& path, const MetricField& field) {
  nlohmann::json j;
  j["grid"] = {{"dim", field.grid().dim},
               {"n", field.grid().n},
               {"period", field.grid().period}};
  j["chart"] = field.chart_name();
  nlohmann::json comps = nlohmann::json::array();
  for (const SymBilinear3d& g : field.data()) {
    nlohmann::json row = nlohmann::json::array();
    for (int i = 0; i < 6; ++i) row.push_back(g.coeffs()[i]);
    comps.push_back(std::move(row));
  }
  j["components"] = std::move(comps);
  std::ofstream out(path);
  if (!out) throw parse_error("cannot write '" + path + "'");
  out << j.dump() << '\n';
}

MetricField read_snapshot(const std::string& path) {
  const nlohmann::json j = load_json(path);
  if (!j.contains("grid")) throw parse_error("missing field", -1, "grid");
  const auto& jg = j["grid"];
  for (const char* key : {"dim", "n", "period"})
    if (!jg.contains(key)) throw parse_error("missing field", -1, std::string("grid.") + key);
  GridSpec grid;
  grid.dim = jg["dim"].get<int>();
  grid.n = jg["n"].get<int>();
  grid.period = jg["period"].get<double>();
  if (!j.contains("components")) throw parse_error("missing field", -1, "components");
  const auto& jc = j["components"];
  if (!jc.is_array() || jc.size() != grid.point_count())
    throw parse_error("components array does not match the grid", -1,
                      "components");
  Sym2Field data(jc.size());
  for (std::size_t p = 0; p < jc.size(); ++p)
    data[p] = sym_from_json(jc[p], "components[" + std::to_string(p) + "]");
  return MetricField(grid, j.value("chart", std::string("snapshot")),
                     std::move(data), /*allow_large_3d=*/true);
}

void write_point_sample(const std::string& path, const PointSample& sample) {
  nlohmann::json j;
  nlohmann::json jg = nlohmann::json::array(), jr = nlohmann::json::array();
  for (int i = 0; i < 6; ++i) {
    jg.push_back(sample.g.coeffs()[i]);
    jr.push_back(sample.ricci.coeffs()[i]);
  }
  j["g"] = std::move(jg);
  j["ricci"] = std::move(jr);
  std::ofstream out(path);
  if (!out) throw parse_error("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

PointSample read_point_sample(const std::string& path) {
  const nlohmann::json j = load_json(path);
  PointSample s;
  if (!j.contains("g")) throw parse_error("missing field", -1, "g");
  s.g = sym_from_json(j["g"], "g");
  if (!j.contains("ricci")) throw parse_error("missing field", -1, "ricci");
  s.ricci = sym_from_json(j["ricci"], "ricci");
  return s;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_diag_csv(const std::string& path, const std::vector<DiagRow>& rows,
                    const Flow& flow) {
  std::ofstream out(path);
  if (!out) throw parse_error("cannot write '" + path + "'");
  out << "t,dt,margin,max_riem,min_eig_g,kind,a\n";
  const std::string kind = flow_kind_name(flow.kind);
  const std::string a = format_double(flow.coupling());
  for (const DiagRow& r : rows)
    out << format_double(r.t) << ',' << format_double(r.dt) << ','
        << format_double(r.margin) << ',' << format_double(r.max_riem) << ','
        << format_double(r.min_eig_g) << ',' << kind << ',' << a << '\n';
}

void write_summary(const std::string& path, StopReason reason, double t_final,
                   long steps, double wall_ms) {
  nlohmann::json j;
  j["stop_reason"] = stop_reason_name(reason);
  j["t_final"] = t_final;
  j["steps"] = steps;
  j["wall_ms"] = wall_ms;
  std::ofstream out(path);
  if (!out) throw parse_error("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

}  // namespace rg2
