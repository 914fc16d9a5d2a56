#pragma once

// File formats:
//   field snapshot — JSON {"grid": {"dim", "n", "period"}, "chart",
//     "components": [[g11, g12, g13, g22, g23, g33], ...]} row-major;
//     doubles round-trip bit-exactly.
//   point sample — JSON {"g": [6], "ricci": [6]}, same component order.
//   diagnostics CSV — header t,dt,margin,max_riem,min_eig_g,kind,a.
//   run summary — JSON {"stop_reason", "t_final", "steps", "wall_ms"}.

#include <string>
#include <vector>

#include "rg2/chart.hpp"
#include "rg2/flow.hpp"
#include "rg2/integrate.hpp"

namespace rg2 {

/// Malformed input file; carries line (when known) and the offending field.
class parse_error : public std::runtime_error {
 public:
  parse_error(const std::string& what, int line = -1,
              const std::string& field = "")
      : std::runtime_error(make(what, line, field)), line_(line), field_(field) {}
  int line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  static std::string make(const std::string& w, int line,
                          const std::string& field) {
    std::string m = w;
    if (line >= 0) m += " (line " + std::to_string(line) + ")";
    if (!field.empty()) m += " (field '" + field + "')";
    return m;
  }
  int line_;
  std::string field_;
};

void write_snapshot(const std::string& path, const MetricField& field);
MetricField read_snapshot(const std::string& path);

struct PointSample {
  SymBilinear3d g;
  SymBilinear3d ricci;
};

void write_point_sample(const std::string& path, const PointSample& sample);
PointSample read_point_sample(const std::string& path);

void write_diag_csv(const std::string& path, const std::vector<DiagRow>& rows,
                    const Flow& flow);

void write_summary(const std::string& path, StopReason reason, double t_final,
                   long steps, double wall_ms);

/// Shortest round-trip decimal formatting shared by the CSV writers.
std::string format_double(double v);

}  // namespace rg2
