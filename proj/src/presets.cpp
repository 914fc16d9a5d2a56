#include "rg2/presets.hpp"

#include <cmath>

#include "rg2/random.hpp"

namespace rg2 {

MetricField make_flat_field(int n, int dim) {
  GridSpec grid;
  grid.dim = dim;
  grid.n = n;
  return MetricField::constant(grid, SymBilinear3d::Identity(), "flat");
}

MetricField make_flat_perturbed_1d(int n, double amplitude,
                                   std::uint64_t seed) {
  GridSpec grid;
  grid.dim = 1;
  grid.n = n;
  Rng rng(seed);
  constexpr int mode_lo = 3, mode_hi = 6;
  constexpr int n_modes = mode_hi - mode_lo + 1;
  // coefficients first so the field is independent of n
  double cs[6][n_modes], sn[6][n_modes];
  for (int c = 0; c < 6; ++c)
    for (int m = 0; m < n_modes; ++m) {
      cs[c][m] = rng.uniform(-1.0, 1.0);
      sn[c][m] = rng.uniform(-1.0, 1.0);
    }
  Sym2Field data(grid.point_count());
  for (std::size_t p = 0; p < data.size(); ++p) {
    const double x = grid.coords(p)[0];
    SymBilinear3d h;
    for (int c = 0; c < 6; ++c) {
      double v = 0;
      for (int m = 0; m < n_modes; ++m)
        v += cs[c][m] * std::cos((mode_lo + m) * x) +
             sn[c][m] * std::sin((mode_lo + m) * x);
      h.coeffs()[c] = amplitude * v / (2 * n_modes);
    }
    data[p] = SymBilinear3d::Identity() + h;
  }
  return MetricField(grid, "flat-perturbed-1d", std::move(data));
}

MetricField make_warped_1d(int n, double amplitude) {
  GridSpec grid;
  grid.dim = 1;
  grid.n = n;
  Sym2Field data(grid.point_count());
  for (std::size_t p = 0; p < data.size(); ++p) {
    const double f = 1.0 + amplitude * std::sin(grid.coords(p)[0]);
    data[p] = SymBilinear3d::Diagonal(1.0, f * f, f * f);
  }
  return MetricField(grid, "warped-1d", std::move(data));
}

ConstCurvatureState make_const_curvature_state(double k0, double c0,
                                               const Flow& flow) {
  ConstCurvatureState s;
  s.t = 0.0;
  s.g0 = SymBilinear3d::Identity();
  s.g = c0 * s.g0;
  s.k0 = k0;
  s.flow = flow;
  return s;
}

}  // namespace rg2
