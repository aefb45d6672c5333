#pragma once

#include <span>
#include <vector>

#include "scatsrc/geometry.hpp"
#include "scatsrc/media.hpp"

namespace scatsrc {

struct ForwardOptions {
  int n_dirs = 360;
  double tol = 1e-8;  // sup-norm change between successive source iterates
  int max_iters = 500;
  // Split off the uncollided radiance (exact ray integration) when the medium
  // scatters; the upwind sweeps then carry only the collided part. About 5x
  // slower for a small accuracy gain on the built-in phantom, hence off.
  bool first_collision = false;
  double ray_step = 0.0;  // step of the ray integration; 0 -> grid spacing
  // Three-point upwind differences for the (smooth) collided part; only
  // used together with first_collision.
  bool second_order_collided = true;
};

// Radiance u(z, theta_l) on every grid node (the full square; nodes outside
// the disc carry vacuum transport) for directions theta_l = 2 pi l / n_dirs.
class AngularFlux {
 public:
  AngularFlux(Grid grid, int n_dirs);

  const Grid& grid() const { return grid_; }
  int n_dirs() const { return n_dirs_; }
  double angle(int l) const { return 2.0 * kPi * l / n_dirs_; }
  double at(std::size_t node, int l) const { return values_[offset(l) + node]; }
  std::span<const double> direction(int l) const { return {values_.data() + offset(l), grid_.size()}; }
  std::span<double> direction(int l) { return {values_.data() + offset(l), grid_.size()}; }
  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

  // Frozen scattering source of the last sweep, same layout as the radiance
  // (empty without scattering).
  std::span<const double> scattering_source(int l) const {
    if (scattering_.empty()) return {};
    return {scattering_.data() + offset(l), grid_.size()};
  }
  std::vector<double>& scattering_storage() { return scattering_; }

  // Medium and source the flux was computed for; used to integrate along rays
  // when reading out boundary values.
  AttenuationField attenuation;
  SourceField source;
  int iterations = 0;
  std::vector<double> residuals;  // sup-norm change per source iteration

 private:
  std::size_t offset(int l) const { return static_cast<std::size_t>(l) * grid_.size(); }
  Grid grid_;
  int n_dirs_;
  std::vector<double> values_;
  std::vector<double> scattering_;
};

// Discrete-ordinates source iteration with first-order upwind sweeps and zero
// inflow. Throws PreconditionError when a - sigma_0 <= 0 somewhere on the disc
// and IterationLimitError (carrying the last change) after max_iters sweeps.
AngularFlux solve_forward(const MediumSpec& medium, const SourceField& source, const Grid& grid,
                          const ForwardOptions& options = {});

// Radiance without scattering at z in direction theta: transport along the
// backward ray through the disc (midpoint exponential rule, step <= step).
// Valid for any z, on or off the disc.
double uncollided(const AttenuationField& a, const SourceField& f, Vec2 z, Vec2 theta, double step);

// Exact radiance for constant a and f without scattering:
// (f/a)(1 - exp(-a tau)) with tau the distance back to the boundary along -theta.
double ballistic_oracle(double a, double f, Vec2 z, Vec2 theta);

// Outgoing radiance sampled on the boundary circle; entries with
// nu . theta <= 0 (incoming or tangential) are exactly zero.
struct BoundaryData {
  int n_boundary = 0;
  int n_dirs = 0;
  std::vector<double> values;  // row = boundary node, column = direction

  BoundaryData() = default;
  BoundaryData(int nb, int nd)
      : n_boundary(nb), n_dirs(nd), values(static_cast<std::size_t>(nb) * nd, 0.0) {}
  double& at(int b, int l) { return values[static_cast<std::size_t>(b) * n_dirs + l]; }
  double at(int b, int l) const { return values[static_cast<std::size_t>(b) * n_dirs + l]; }
  double boundary_angle(int b) const { return 2.0 * kPi * b / n_boundary; }
  double direction_angle(int l) const { return 2.0 * kPi * l / n_dirs; }
};

// Boundary readout: for each outgoing direction the transport equation is
// integrated along the ray ending at the boundary node, starting from the
// entry point (zero inflow) when the chord is shorter than `readout_length`,
// otherwise from the interpolated grid radiance at that depth.
BoundaryData extract_boundary(const AngularFlux& flux, const DiscDomain& domain,
                              double readout_length = 0.4);

// Boundary data of the non-scattering problem by ray integration alone
// (uncollided() at every outgoing pair). Grid-free, so it serves as clean
// reference data for pure absorption.
BoundaryData ray_boundary_data(const AttenuationField& a, const SourceField& f, const DiscDomain& domain, int n_dirs,
                               double step);

}  // namespace scatsrc
