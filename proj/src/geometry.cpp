#include "scatsrc/geometry.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "scatsrc/errors.hpp"

namespace scatsrc {

std::vector<BoundaryNode> boundary_nodes(int n) {
  if (n < 1) throw DomainError("boundary_nodes: need at least one node");
  std::vector<BoundaryNode> out(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const double beta = 2.0 * kPi * j / n;
    out[j] = {unit_vector(beta), beta};
  }
  return out;
}

DiscDomain::DiscDomain(int n_boundary) : n_boundary_(n_boundary) {
  if (n_boundary < 8 || n_boundary % 2 != 0) {
    throw DomainError("DiscDomain: n_boundary must be even and >= 8, got " +
                      std::to_string(n_boundary));
  }
}

double exit_distance(Vec2 z, Vec2 dir) {
  const double r2 = dot(z, z);
  if (r2 > 1.0 + 1e-12) throw DomainError("exit_distance: point outside the unit disc");
  const double zt = dot(z, dir);
  const double disc = std::max(0.0, 1.0 - r2 + zt * zt);
  return std::max(0.0, -zt + std::sqrt(disc));
}

namespace {

constexpr double kOnCircleTol = 1e-12;
// Area of {0 <= u <= x, 0 <= v <= y} inside the unit circle, x, y >= 0.
double quadrant_area(double x, double y) {
  x = std::min(x, 1.0);
  y = std::min(y, 1.0);
  if (x * x + y * y <= 1.0) return x * y;
  const double u = std::sqrt(1.0 - y * y);  // where the arc crosses v = y
  auto prim = [](double t) { return 0.5 * (t * std::sqrt(std::max(0.0, 1.0 - t * t)) + std::asin(t)); };
  return u * y + prim(x) - prim(u);
}

double corner_area(double x, double y) {
  const double s = (x < 0.0) == (y < 0.0) ? 1.0 : -1.0;
  return s * quadrant_area(std::abs(x), std::abs(y));
}

// Exact fraction of the cell [cx -+ h/2] x [cy -+ h/2] covered by the disc.
double cell_coverage(double cx, double cy, double h) {
  const double half = 0.5 * h;
  const double x0 = cx - half, x1 = cx + half, y0 = cy - half, y1 = cy + half;
  const double area = corner_area(x1, y1) - corner_area(x0, y1) - corner_area(x1, y0) + corner_area(x0, y0);
  return std::clamp(area / (h * h), 0.0, 1.0);
}

}  // namespace

Grid::Grid(int n, double margin) : n_(n), margin_(margin) {
  if (n < 4) throw DomainError("Grid: need at least 4 nodes per axis");
  if (!(margin >= 0.0) || margin >= 1.0) throw DomainError("Grid: margin must lie in [0, 1)");
  h_ = 2.0 / (n - 1);
  const std::size_t total = size();
  in_disc_.assign(total, 0);
  trusted_.assign(total, 0);
  weights_.assign(total, 0.0);
  for (std::size_t idx = 0; idx < total; ++idx) {
    const double r = node(idx).norm();
    if (r <= 1.0 + kOnCircleTol) {
      in_disc_[idx] = 1;
      disc_nodes_.push_back(idx);
      if (r <= 1.0 - margin_) {
        trusted_[idx] = 1;
        trusted_nodes_.push_back(idx);
      } else {
        margin_nodes_.push_back(idx);
      }
    }
  }
  if (trusted_nodes_.empty()) throw DomainError("Grid: margin leaves no trusted nodes");

  for (std::size_t idx = 0; idx < total; ++idx) {
    const Vec2 p = node(idx);
    const double frac = cell_coverage(p.x, p.y, h_);
    if (frac == 0.0) continue;
    const double area = frac * h_ * h_;
    if (in_disc_[idx]) {
      weights_[idx] += area;
      continue;
    }
    // Lump onto the nearest disc neighbour.
    const int i = col(idx), j = row(idx);
    std::size_t best = total;
    double best_d = std::numeric_limits<double>::infinity();
    for (int dj = -1; dj <= 1; ++dj) {
      for (int di = -1; di <= 1; ++di) {
        const int ii = i + di, jj = j + dj;
        if (ii < 0 || jj < 0 || ii >= n_ || jj >= n_) continue;
        const std::size_t k = index(ii, jj);
        if (!in_disc_[k]) continue;
        const double d = std::hypot(di, dj);
        if (d < best_d) {
          best_d = d;
          best = k;
        }
      }
    }
    if (best != total) weights_[best] += area;
  }
}

Grid Grid::with_margin_cells(int n, double margin_cells) {
  if (n < 4) throw DomainError("Grid: need at least 4 nodes per axis");
  return Grid(n, margin_cells * 2.0 / (n - 1));
}

double Grid::integrate(std::span<const double> values) const {
  double sum = 0.0;
  for (std::size_t idx : disc_nodes_) sum += weights_[idx] * values[idx];
  return sum;
}

double Grid::interpolate(std::span<const double> values, Vec2 p) const {
  const double fx = (p.x + 1.0) / h_;
  const double fy = (p.y + 1.0) / h_;
  const int i0 = std::clamp(static_cast<int>(std::floor(fx)), 0, n_ - 2);
  const int j0 = std::clamp(static_cast<int>(std::floor(fy)), 0, n_ - 2);
  const double tx = std::clamp(fx - i0, 0.0, 1.0);
  const double ty = std::clamp(fy - j0, 0.0, 1.0);
  double acc = 0.0, wsum = 0.0;
  for (int dj = 0; dj <= 1; ++dj) {
    for (int di = 0; di <= 1; ++di) {
      const std::size_t k = index(i0 + di, j0 + dj);
      if (!in_disc_[k]) continue;
      const double w = (di ? tx : 1.0 - tx) * (dj ? ty : 1.0 - ty);
      acc += w * values[k];
      wsum += w;
    }
  }
  return wsum > 0.0 ? acc / wsum : 0.0;
}

}  // namespace scatsrc
