#pragma once

// Run configuration: flat key = value text with [section] headers, echoed
// verbatim into every output directory for reproducibility.

#include <cstdint>
#include <string>

#include "rg2/flow.hpp"

namespace rg2 {

struct RunConfig {
  // [flow]
  Flow flow = Flow::rg2(0.01);
  // [geometry]
  std::string preset = "flat-perturbed-1d";  // flat-perturbed-1d | warped-1d |
                                             // constant-curvature-ode | file
  std::string field_file;  // snapshot path when preset = file
  int n = 128;
  double amplitude = 1e-3;  // perturbation / warp amplitude
  double k0 = 1.0;          // constant-curvature preset
  double c0 = 1.0;
  // [time]
  double dt0 = 1e-3;
  double t_end = 0.5;
  double cfl = 0.2;
  // [thresholds]
  double eps_par = 1e-8;
  double m_max = 1e6;
  double eps_g = 1e-8;
  // [random]
  std::uint64_t seed = 42;
  // [output]
  std::string out_dir = "out";
  int snapshot_every = 0;  // 0: final snapshot only
};

RunConfig parse_config(const std::string& path);
void write_config(const std::string& path, const RunConfig& cfg);

}  // namespace rg2
