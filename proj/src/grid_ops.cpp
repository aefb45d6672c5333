#include "scatsrc/grid_ops.hpp"

namespace scatsrc {

namespace {

// Derivative along one axis. `stride` is the index step, `pos`/`count` locate
// the node on that axis.
template <class OnDisc>
cplx partial(const Field& u, std::size_t p, std::ptrdiff_t stride, int pos, int count, double h, OnDisc on) {
  auto ok = [&](int offset) {
    const int q = pos + offset;
    return q >= 0 && q < count && on(static_cast<std::size_t>(static_cast<std::ptrdiff_t>(p) + offset * stride));
  };
  auto at = [&](int offset) { return u[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(p) + offset * stride)]; };
  const bool plus = ok(1), minus = ok(-1);
  if (plus && minus) return (at(1) - at(-1)) / (2.0 * h);
  if (plus) return ok(2) ? (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h) : (at(1) - at(0)) / h;
  if (minus) return ok(-2) ? (3.0 * at(0) - 4.0 * at(-1) + at(-2)) / (2.0 * h) : (at(0) - at(-1)) / h;
  return 0.0;
}

}  // namespace

Field d_dx(const Grid& grid, const Field& u) {
  Field out(grid.size(), 0.0);
  auto on = [&](std::size_t q) { return grid.in_disc(q); };
  for (std::size_t p : grid.disc_nodes()) out[p] = partial(u, p, 1, grid.col(p), grid.n(), grid.spacing(), on);
  return out;
}

Field d_dy(const Grid& grid, const Field& u) {
  Field out(grid.size(), 0.0);
  auto on = [&](std::size_t q) { return grid.in_disc(q); };
  for (std::size_t p : grid.disc_nodes()) out[p] = partial(u, p, grid.n(), grid.row(p), grid.n(), grid.spacing(), on);
  return out;
}

Field del(const Grid& grid, const Field& u) {
  Field ux = d_dx(grid, u), uy = d_dy(grid, u);
  for (std::size_t p = 0; p < ux.size(); ++p) ux[p] = 0.5 * (ux[p] - cplx(0, 1) * uy[p]);
  return ux;
}

Field delbar(const Grid& grid, const Field& u) {
  Field ux = d_dx(grid, u), uy = d_dy(grid, u);
  for (std::size_t p = 0; p < ux.size(); ++p) ux[p] = 0.5 * (ux[p] + cplx(0, 1) * uy[p]);
  return ux;
}

Field del2(const Grid& grid, const Field& u) {
  Field out = del(grid, del(grid, u));
  const int n = grid.n();
  const double h2 = grid.spacing() * grid.spacing();
  for (std::size_t p : grid.disc_nodes()) {
    const int i = grid.col(p), j = grid.row(p);
    if (i < 1 || j < 1 || i > n - 2 || j > n - 2) continue;
    bool all = true;
    for (int dj = -1; dj <= 1 && all; ++dj)
      for (int di = -1; di <= 1 && all; ++di) all = grid.in_disc(grid.index(i + di, j + dj));
    if (!all) continue;
    auto at = [&](int di, int dj) { return u[grid.index(i + di, j + dj)]; };
    const cplx uxx = (at(1, 0) - 2.0 * at(0, 0) + at(-1, 0)) / h2;
    const cplx uyy = (at(0, 1) - 2.0 * at(0, 0) + at(0, -1)) / h2;
    const cplx uxy = (at(1, 1) - at(-1, 1) - at(1, -1) + at(-1, -1)) / (4.0 * h2);
    out[p] = 0.25 * (uxx - uyy - cplx(0, 2) * uxy);
  }
  return out;
}

Field smooth3(const Grid& grid, const Field& u) {
  const int n = grid.n();
  auto pass = [&](const Field& in, int di, int dj) {
    Field out(grid.size(), 0.0);
    for (std::size_t p : grid.disc_nodes()) {
      const int i = grid.col(p), j = grid.row(p);
      cplx sum = in[p];
      int count = 1;
      for (int s : {-1, 1}) {
        const int ii = i + s * di, jj = j + s * dj;
        if (ii < 0 || jj < 0 || ii >= n || jj >= n) continue;
        const std::size_t q = grid.index(ii, jj);
        if (!grid.in_disc(q)) continue;
        sum += in[q];
        ++count;
      }
      out[p] = sum / static_cast<double>(count);
    }
    return out;
  };
  return pass(pass(u, 1, 0), 0, 1);
}

double integrate_abs2(const Grid& grid, const Field& u) {
  const auto w = grid.weights();
  double sum = 0.0;
  for (std::size_t p : grid.disc_nodes()) sum += w[p] * std::norm(u[p]);
  return sum;
}

}  // namespace scatsrc
