#pragma once

#include <vector>

#include "scatsrc/geometry.hpp"

namespace scatsrc {

// Complex node field over the whole grid (values off the disc are ignored and
// returned as zero).
using Field = std::vector<cplx>;

// Cartesian partial derivatives on the disc nodes. Centred differences where
// both neighbours are on the disc, one-sided (second order when two inward
// nodes exist) otherwise.
Field d_dx(const Grid& grid, const Field& u);
Field d_dy(const Grid& grid, const Field& u);

// del = (d/dx - i d/dy)/2 and delbar = (d/dx + i d/dy)/2.
Field del(const Grid& grid, const Field& u);
Field delbar(const Grid& grid, const Field& u);

// del^2 = (u_xx - u_yy - 2i u_xy)/4 with compact three-point and four-corner
// stencils; falls back to del(del(u)) where a stencil leaves the disc.
Field del2(const Grid& grid, const Field& u);

// One pass of the 3-point average along x and then y (disc neighbours only).
Field smooth3(const Grid& grid, const Field& u);

// sum_p w_p |u_p|^2 with the grid quadrature weights.
double integrate_abs2(const Grid& grid, const Field& u);

}  // namespace scatsrc
