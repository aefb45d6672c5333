#pragma once

#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "scatsrc/geometry.hpp"

namespace scatsrc {

// Disc (cx, cy, r) or axis-aligned rectangle (x0, x1, y0, y1).
struct Shape {
  enum class Kind { disc, rect };
  Kind kind = Kind::disc;
  double p0 = 0, p1 = 0, p2 = 0, p3 = 0;

  static Shape disc(double cx, double cy, double r) { return {Kind::disc, cx, cy, r, 0.0}; }
  static Shape rect(double x0, double x1, double y0, double y1) {
    return {Kind::rect, x0, x1, y0, y1};
  }

  // Negative inside, positive outside, |value| = Euclidean distance to the boundary.
  double signed_distance(Vec2 z) const;
  bool contains(Vec2 z) const { return signed_distance(z) < 0.0; }
};

struct Region {
  Shape shape;
  double value = 0.0;
};

enum class AttenuationVariant { smooth, discontinuous };

// C^2 step: 0 for t <= -1, 1 for t >= 1, antiderivative of the normalised
// quartic bump (15/16)(1 - t^2)^2 in between.
double quartic_step(double t);

// a(z) = mu_s + mu_a(z) with piecewise-constant absorption regions over a
// background value. The smooth variant blends each region boundary across a
// band of half-width epsilon using quartic_step of the signed distance.
struct AttenuationField {
  double mu_s = 5.0;
  double background_mu_a = 0.1;
  std::vector<Region> regions;
  AttenuationVariant variant = AttenuationVariant::smooth;
  double epsilon = 0.025;

  double mu_a(Vec2 z) const { return mu_a(z, variant); }
  double mu_a(Vec2 z, AttenuationVariant v) const;
  double operator()(Vec2 z) const { return mu_s + mu_a(z); }

  // Constant attenuation c: mu_s = 0, background absorption c, no regions.
  static AttenuationField constant(double c);
};

double eval_attenuation(const AttenuationField& field, Vec2 z, AttenuationVariant variant);

// Piecewise-constant source (sum over regions), or samples on a user grid.
struct SourceField {
  std::vector<Region> regions;
  std::optional<Grid> grid;
  std::vector<double> samples;

  double operator()(Vec2 z) const;
  static SourceField constant(double c);
};

double eval_source(const SourceField& field, Vec2 z);

// Phantom used in the numerical experiments: absorbing balls B1, B2, source
// on the rectangle R and on B2.
namespace phantom {
inline constexpr double kB2CenterY = 0.43301270189221932;  // sqrt(3)/4
Shape ball_b1();
Shape ball_b2();
Shape rect_r();
AttenuationField attenuation(AttenuationVariant variant, double mu_s = 5.0, double epsilon = 0.025);
SourceField source();
}  // namespace phantom

struct HenyeyGreenstein {
  double g = 0.5;
  double mu_s = 5.0;
};

// Multipliers sigma_0..sigma_K given directly; sigma_n = 0 for n > K.
struct TabulatedKernel {
  std::vector<double> sigma;
};

using ScatteringKernel = std::variant<HenyeyGreenstein, TabulatedKernel>;

// Value of the 2D Henyey-Greenstein (Poisson) kernel at cos(angle) = c.
double hg_kernel(double g, double mu_s, double c);

// Closed form mu_s * g^|n|: the n-th angular mode of the scattering integral
// of u equals sigma_n * u_n.
double hg_multiplier(double g, double mu_s, int n);

// sigma_0..sigma_N by trapezoidal quadrature of the kernel against e^{-in phi}
// (tabulated kernels are returned as given, zero-padded to N+1 entries).
std::vector<double> kernel_multipliers(const ScatteringKernel& kernel, int N);

// Decay of the tail multipliers beyond order M:
// gamma = sup_{j >= M} (1 + j)^p |sigma_j| and the tail bound gamma^2/(M+1)^{2p-1}.
struct MultiplierDecay {
  double gamma = 0.0;
  double tail_bound = 0.0;
  std::vector<double> ratios;  // sigma_{n+1}/sigma_n for n = 0..N-1 where defined
};
MultiplierDecay multiplier_decay(const ScatteringKernel& kernel, int M, double p, int N = 64);

struct MediumSpec {
  AttenuationField attenuation;
  ScatteringKernel kernel;
};

}  // namespace scatsrc
