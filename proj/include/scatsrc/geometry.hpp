#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace scatsrc {

using cplx = std::complex<double>;
inline constexpr double kPi = std::numbers::pi;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator-() const { return {-x, -y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  double norm() const { return std::hypot(x, y); }
  cplx to_complex() const { return {x, y}; }
};

constexpr Vec2 operator*(double s, Vec2 v) { return v * s; }
constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

inline Vec2 unit_vector(double angle) { return {std::cos(angle), std::sin(angle)}; }

// Rotation by +pi/2. This fixes the orientation of theta^perp everywhere.
constexpr Vec2 perp(Vec2 d) { return {-d.y, d.x}; }

struct BoundaryNode {
  Vec2 z;
  double angle = 0.0;
};

// n uniformly spaced points e^{i 2 pi j / n} on the unit circle, starting at angle 0.
std::vector<BoundaryNode> boundary_nodes(int n);

// The unit disc with a uniform sampling of its boundary circle.
class DiscDomain {
 public:
  // n_boundary must be even and >= 8.
  explicit DiscDomain(int n_boundary);

  int n_boundary() const { return n_boundary_; }
  double angle(int j) const { return 2.0 * kPi * j / n_boundary_; }
  Vec2 node(int j) const { return unit_vector(angle(j)); }
  std::vector<BoundaryNode> nodes() const { return boundary_nodes(n_boundary_); }

 private:
  int n_boundary_;
};

// Distance t >= 0 from z to the unit circle along the ray z + t*dir.
// Throws DomainError when |z| > 1 (beyond a small rounding tolerance).
double exit_distance(Vec2 z, Vec2 dir);

// Uniform cartesian grid on [-1,1]^2 restricted to the unit disc.
//
// Nodes are x_i = -1 + i*h, h = 2/(n-1), stored row-major (index = j*n + i).
// "disc" nodes satisfy |z| <= 1; "trusted" nodes satisfy |z| <= 1 - margin and
// are the ones where boundary-integral formulas are evaluated.
class Grid {
 public:
  Grid(int n, double margin);
  // Margin expressed as a multiple of the spacing.
  static Grid with_margin_cells(int n, double margin_cells = 2.0);

  int n() const { return n_; }
  double spacing() const { return h_; }
  double margin() const { return margin_; }
  std::size_t size() const { return static_cast<std::size_t>(n_) * n_; }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * n_ + i; }
  int col(std::size_t idx) const { return static_cast<int>(idx % n_); }
  int row(std::size_t idx) const { return static_cast<int>(idx / n_); }
  double coord(int i) const { return -1.0 + i * h_; }
  Vec2 node(std::size_t idx) const { return {coord(col(idx)), coord(row(idx))}; }

  bool in_disc(std::size_t idx) const { return in_disc_[idx] != 0; }
  bool trusted(std::size_t idx) const { return trusted_[idx] != 0; }
  std::span<const std::size_t> disc_nodes() const { return disc_nodes_; }
  std::span<const std::size_t> trusted_nodes() const { return trusted_nodes_; }
  std::span<const std::size_t> margin_nodes() const { return margin_nodes_; }

  // Quadrature weights over the disc, indexed by node (zero off the disc).
  // Cell areas clipped to the disc; clipped area of cells centred outside the
  // disc is lumped onto the neighbouring disc node, so the weights sum to pi.
  std::span<const double> weights() const { return weights_; }
  double integrate(std::span<const double> values) const;

  // Bilinear interpolation of a node field at an arbitrary point. Corners off
  // the disc are skipped and the remaining weights renormalised.
  double interpolate(std::span<const double> values, Vec2 p) const;

 private:
  int n_;
  double h_;
  double margin_;
  std::vector<char> in_disc_;
  std::vector<char> trusted_;
  std::vector<std::size_t> disc_nodes_;
  std::vector<std::size_t> trusted_nodes_;
  std::vector<std::size_t> margin_nodes_;
  std::vector<double> weights_;
};

}  // namespace scatsrc
