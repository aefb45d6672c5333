#pragma once

#include <span>
#include <vector>

#include "scatsrc/geometry.hpp"
#include "scatsrc/media.hpp"

namespace scatsrc {

// Integral of a from z to the unit circle along theta (composite Simpson with
// step <= `step`). Requires |z| <= 1.
double divergent_beam(const AttenuationField& a, Vec2 z, Vec2 theta, double step);

// Integral of a over the chord {s perp(theta) + t theta}; zero for |s| >= 1.
double radon_line(const AttenuationField& a, double s, Vec2 theta, double step);

// (1/pi) PV int f(t)/(s0 - t) dt for samples of f on a uniform grid over
// [-1, 1] (f = 0 outside). Midpoint values come from the staggered sum, s0
// is reached by cubic interpolation between midpoints.
double hilbert_offset(std::span<const double> samples, double s0);

// Ra(., theta_l^perp) and its Hilbert transform tabulated per direction.
class RadonTable {
 public:
  RadonTable(const AttenuationField& a, int n_dirs, int n_s, double step);

  int n_dirs() const { return n_dirs_; }
  int n_s() const { return n_s_; }
  double ds() const { return ds_; }
  double radon(int l, double s) const;
  double hilbert(int l, double s) const;

 private:
  int n_dirs_;
  int n_s_;
  double ds_;
  std::vector<double> ra_;       // [l][j], s_j = -1 + j ds
  std::vector<double> hilbert_;  // [l][k], midpoints -1 + (k - kPad + 1/2) ds
};

struct HOptions {
  int n_dirs = 360;
  int n_s = 0;           // Radon offsets; 0 -> 4 x grid axis count
  double step = 0.0;     // Da/Ra quadrature step; 0 -> grid spacing
};

// h(z, theta) = Da(z, theta) - (Ra(s, theta^perp) - i H[Ra(., theta^perp)](s)) / 2,
// s = z . theta^perp, evaluated on demand from a RadonTable.
class IntegratingFactor {
 public:
  IntegratingFactor(AttenuationField a, int n_dirs, int n_s, double step);

  int n_dirs() const { return table_.n_dirs(); }
  double angle(int l) const { return 2.0 * kPi * l / table_.n_dirs(); }
  double step() const { return step_; }
  const AttenuationField& attenuation() const { return a_; }
  cplx operator()(Vec2 z, int l) const;

 private:
  AttenuationField a_;
  double step_;
  RadonTable table_;
};

// h sampled at a list of points for all directions.
struct HField {
  int n_dirs = 0;
  std::vector<Vec2> points;
  std::vector<cplx> values;  // [point][direction]

  cplx at(std::size_t p, int l) const { return values[p * n_dirs + l]; }
  std::span<const cplx> row(std::size_t p) const { return {values.data() + p * n_dirs, static_cast<std::size_t>(n_dirs)}; }
};

HField build_h(const IntegratingFactor& factor, std::span<const Vec2> points);
// h at every disc node of the grid (points in disc_nodes() order).
HField build_h(const AttenuationField& a, const Grid& grid, const HOptions& options = {});

// Default options for a grid: n_s = 4n and step = spacing (spacing/4 for the
// discontinuous attenuation).
HOptions default_h_options(const AttenuationField& a, const Grid& grid, int n_dirs);

// Diagnostics over the trusted nodes of the grid.
struct HDiagnostics {
  double transport_residual = 0.0;  // max |theta . grad h + a| by central differences
  double negative_modes = 0.0;      // max |mode m < 0 of h(z, .)|
};
HDiagnostics check_h(const IntegratingFactor& factor, const Grid& grid, double fd_step);

}  // namespace scatsrc
