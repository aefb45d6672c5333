#include "scatsrc/forward_rte.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "scatsrc/errors.hpp"
#include "scatsrc/fft.hpp"

namespace scatsrc {

AngularFlux::AngularFlux(Grid grid, int n_dirs)
    : grid_(std::move(grid)), n_dirs_(n_dirs), values_(grid_.size() * static_cast<std::size_t>(n_dirs), 0.0) {}

namespace {

struct SweepWork {
  std::vector<double> b, c;
};

// One upwind sweep for direction angle `phi`; returns the sup-norm change.
// Each row is split into a vectorisable pass and a first-order recurrence
// u_i = b_i + c_i * u_{i-1} along the sweep direction.
double sweep(const Grid& grid, double phi, std::span<const double> att, std::span<const double> f,
             std::span<const double> scat, std::span<double> u, SweepWork& work) {
  const int n = grid.n();
  const double h = grid.spacing();
  const double cs = std::cos(phi), sn = std::sin(phi);
  const double cx = std::abs(cs) / h, cy = std::abs(sn) / h;
  const int di = cs >= 0.0 ? 1 : -1;
  const int dj = sn >= 0.0 ? 1 : -1;
  const int j_begin = dj > 0 ? 0 : n - 1;
  work.b.resize(n);
  work.c.resize(n);
  double change = 0.0;
  for (int jc = 0; jc < n; ++jc) {
    const int j = j_begin + dj * jc;
    const std::size_t row = static_cast<std::size_t>(j) * n;
    const double* up = jc > 0 ? u.data() + static_cast<std::size_t>(j - dj) * n : nullptr;
    for (int i = 0; i < n; ++i) {
      const std::size_t p = row + i;
      const double inv = 1.0 / (att[p] + cx + cy);
      const double q = f[p] + (scat.empty() ? 0.0 : scat[p]);
      work.b[i] = (q + (up ? cy * up[i] : 0.0)) * inv;
      work.c[i] = cx * inv;
    }
    double prev = 0.0;
    for (int ic = 0; ic < n; ++ic) {
      const int i = di > 0 ? ic : n - 1 - ic;
      const double value = work.b[i] + work.c[i] * prev;
      double& slot = u[row + i];
      change = std::max(change, std::abs(value - slot));
      slot = value;
      prev = value;
    }
  }
  return change;
}

// Second-order upwind variant: three-point one-sided differences
// (3u_p - 4u_{p-1} + u_{p-2}) / 2h in each axis, first order on the first
// two lines of the sweep. Not monotone, so only used for smooth fields.
double sweep2(const Grid& grid, double phi, std::span<const double> att, std::span<const double> f,
              std::span<const double> scat, std::span<double> u) {
  const int n = grid.n();
  const double h = grid.spacing();
  const double cs = std::cos(phi), sn = std::sin(phi);
  const double cx = std::abs(cs) / h, cy = std::abs(sn) / h;
  const int di = cs >= 0.0 ? 1 : -1;
  const int dj = sn >= 0.0 ? 1 : -1;
  const int j_begin = dj > 0 ? 0 : n - 1;
  const int i_begin = di > 0 ? 0 : n - 1;
  double change = 0.0;
  for (int jc = 0; jc < n; ++jc) {
    const int j = j_begin + dj * jc;
    const std::size_t row = static_cast<std::size_t>(j) * n;
    const double* up = jc > 0 ? u.data() + static_cast<std::size_t>(j - dj) * n : nullptr;
    const double* up2 = jc > 1 ? u.data() + static_cast<std::size_t>(j - 2 * dj) * n : nullptr;
    const double ky = up2 ? 1.5 * cy : cy;
    double prev = 0.0, prev2 = 0.0;
    for (int ic = 0; ic < n; ++ic) {
      const int i = i_begin + di * ic;
      const std::size_t p = row + i;
      double rhs = f[p] + (scat.empty() ? 0.0 : scat[p]);
      if (up2) rhs += cy * (2.0 * up[i] - 0.5 * up2[i]);
      else if (up) rhs += cy * up[i];
      double kx = cx;
      if (ic > 1) {
        kx = 1.5 * cx;
        rhs += cx * (2.0 * prev - 0.5 * prev2);
      } else {
        rhs += cx * prev;
      }
      const double value = rhs / (att[p] + kx + ky);
      double& slot = u[p];
      change = std::max(change, std::abs(value - slot));
      slot = value;
      prev2 = prev;
      prev = value;
    }
  }
  return change;
}

double bilinear_unmasked(const Grid& grid, std::span<const double> values, Vec2 z) {
  const int n = grid.n();
  const double h = grid.spacing();
  const double fx = (z.x + 1.0) / h, fy = (z.y + 1.0) / h;
  const int i0 = std::clamp(static_cast<int>(std::floor(fx)), 0, n - 2);
  const int j0 = std::clamp(static_cast<int>(std::floor(fy)), 0, n - 2);
  const double tx = std::clamp(fx - i0, 0.0, 1.0), ty = std::clamp(fy - j0, 0.0, 1.0);
  return (1 - tx) * (1 - ty) * values[grid.index(i0, j0)] + tx * (1 - ty) * values[grid.index(i0 + 1, j0)] +
         (1 - tx) * ty * values[grid.index(i0, j0 + 1)] + tx * ty * values[grid.index(i0 + 1, j0 + 1)];
}

}  // namespace

AngularFlux solve_forward(const MediumSpec& medium, const SourceField& source, const Grid& grid,
                          const ForwardOptions& options) {
  const int nd = options.n_dirs;
  if (nd < 4 || nd % 2 != 0) throw DomainError("solve_forward: n_dirs must be even and >= 4");
  if (options.max_iters < 1) throw DomainError("solve_forward: max_iters must be positive");

  const std::size_t nn = grid.size();
  const auto sigma = kernel_multipliers(medium.kernel, nd / 2);

  // Off the disc: vacuum (no attenuation, no source), so outgoing radiance is
  // carried unchanged and incoming radiance stays zero.
  std::vector<double> att(nn, 0.0), f(nn, 0.0);
  for (std::size_t p : grid.disc_nodes()) {
    const Vec2 z = grid.node(p);
    att[p] = medium.attenuation(z);
    f[p] = source(z);
    if (!(att[p] - sigma[0] > 0.0)) {
      throw PreconditionError("solve_forward: medium is not subcritical (a - sigma_0 = " +
                              std::to_string(att[p] - sigma[0]) + ")");
    }
  }
  const bool scattering = std::any_of(sigma.begin(), sigma.end(), [](double v) { return v != 0.0; });

  AngularFlux flux(grid, nd);
  flux.attenuation = medium.attenuation;
  flux.source = source;
  auto& scat = flux.scattering_storage();
  if (scattering) scat.assign(nn * nd, 0.0);

  RealDft dft(nd);
  std::vector<double> samples(nd);
  std::vector<cplx> modes(dft.n_modes());
  SweepWork work;

  // scat[l][p] = sum_m sigma_m u_m(p) e^{i m theta_l} (+ base[l][p])
  auto apply_kernel = [&](const std::vector<double>& u, const std::vector<double>* base) {
    for (std::size_t p : grid.disc_nodes()) {
      for (int l = 0; l < nd; ++l) samples[l] = u[static_cast<std::size_t>(l) * nn + p];
      dft.forward(samples, modes);
      for (int m = 0; m < dft.n_modes(); ++m) modes[m] *= sigma[m];
      dft.backward(modes, samples);
      for (int l = 0; l < nd; ++l) {
        const std::size_t k = static_cast<std::size_t>(l) * nn + p;
        scat[k] = samples[l] + (base ? (*base)[k] : 0.0);
      }
    }
  };

  // With scattering, the uncollided radiance is integrated exactly along rays
  // and the sweeps only carry the collided part, whose source K u_unc is
  // much smoother than the source f itself.
  const bool split = scattering && options.first_collision;
  std::vector<double> collided, first_scatter;
  if (split) {
    const double ds = options.ray_step > 0.0 ? options.ray_step : grid.spacing();
    for (int l = 0; l < nd; ++l) {
      const Vec2 theta = unit_vector(flux.angle(l));
      auto u = flux.direction(l);
      for (std::size_t p = 0; p < nn; ++p) u[p] = uncollided(medium.attenuation, source, grid.node(p), theta, ds);
    }
    apply_kernel(flux.values(), nullptr);
    first_scatter = scat;
    collided.assign(nn * nd, 0.0);
    std::fill(f.begin(), f.end(), 0.0);
  }
  std::vector<double>& unknown = split ? collided : flux.values();

  for (int it = 1;; ++it) {
    double change = 0.0;
    for (int l = 0; l < nd; ++l) {
      std::span<double> u{unknown.data() + static_cast<std::size_t>(l) * nn, nn};
      change = std::max(change, split && options.second_order_collided
                                    ? sweep2(grid, flux.angle(l), att, f, flux.scattering_source(l), u)
                                    : sweep(grid, flux.angle(l), att, f, flux.scattering_source(l), u, work));
    }
    flux.iterations = it;
    flux.residuals.push_back(change);
    if (!scattering || change < options.tol) break;
    if (it >= options.max_iters) {
      throw IterationLimitError("solve_forward: source iteration did not converge in " +
                                    std::to_string(it) + " iterations (last change " +
                                    std::to_string(change) + ")",
                                it, change);
    }
    apply_kernel(unknown, split ? &first_scatter : nullptr);
  }
  if (split) {
    auto& total = flux.values();
    for (std::size_t k = 0; k < total.size(); ++k) total[k] += collided[k];
  }
  return flux;
}

double uncollided(const AttenuationField& a, const SourceField& f, Vec2 z, Vec2 theta, double step) {
  // backward ray z - t theta meets the disc for t in [t_near, t_far]
  const double b = dot(z, theta);
  const double disc = b * b - dot(z, z) + 1.0;
  if (disc <= 0.0) return 0.0;
  const double root = std::sqrt(disc);
  const double t_near = std::max(0.0, b - root), t_far = b + root;
  if (t_far <= t_near) return 0.0;
  const int m = std::max(1, static_cast<int>(std::ceil((t_far - t_near) / step)));
  const double dt = (t_far - t_near) / m;
  double u = 0.0;
  for (int k = 0; k < m; ++k) {
    const Vec2 mid = z - (t_far - (k + 0.5) * dt) * theta;
    const double am = a(mid), q = f(mid);
    if (am > 0.0) {
      const double decay = std::exp(-am * dt);
      u = u * decay + q * (1.0 - decay) / am;
    } else {
      u += q * dt;
    }
  }
  return u;
}

double ballistic_oracle(double a, double f, Vec2 z, Vec2 theta) {
  const double tau = exit_distance(z, -theta);
  if (a == 0.0) return f * tau;
  return f / a * (1.0 - std::exp(-a * tau));
}

BoundaryData extract_boundary(const AngularFlux& flux, const DiscDomain& domain, double readout_length) {
  const Grid& grid = flux.grid();
  const double step = 0.5 * grid.spacing();
  BoundaryData data(domain.n_boundary(), flux.n_dirs());
  for (int b = 0; b < domain.n_boundary(); ++b) {
    const Vec2 zb = domain.node(b);
    for (int l = 0; l < flux.n_dirs(); ++l) {
      const Vec2 theta = unit_vector(flux.angle(l));
      if (dot(zb, theta) <= 0.0) continue;
      const double chord = exit_distance(zb, -theta);
      const bool from_inflow = chord <= readout_length;
      const double len = from_inflow ? chord : readout_length;
      const Vec2 start = zb - len * theta;
      double u = from_inflow ? 0.0 : bilinear_unmasked(grid, flux.direction(l), start);
      const auto scat = flux.scattering_source(l);
      const int steps = std::max(1, static_cast<int>(std::ceil(len / step)));
      const double ds = len / steps;
      for (int k = 0; k < steps; ++k) {
        const Vec2 m = start + ((k + 0.5) * ds) * theta;
        const double a = flux.attenuation(m);
        const double q = flux.source(m) + (scat.empty() ? 0.0 : grid.interpolate(scat, m));
        if (a > 0.0) {
          const double decay = std::exp(-a * ds);
          u = u * decay + q * (1.0 - decay) / a;
        } else {
          u += q * ds;
        }
      }
      data.at(b, l) = u;
    }
  }
  return data;
}

BoundaryData ray_boundary_data(const AttenuationField& a, const SourceField& f, const DiscDomain& domain, int n_dirs,
                               double step) {
  BoundaryData data(domain.n_boundary(), n_dirs);
  for (int b = 0; b < domain.n_boundary(); ++b) {
    const Vec2 zb = domain.node(b);
    for (int l = 0; l < n_dirs; ++l) {
      const Vec2 theta = unit_vector(data.direction_angle(l));
      if (dot(zb, theta) > 0.0) data.at(b, l) = uncollided(a, f, zb, theta, step);
    }
  }
  return data;
}

}  // namespace scatsrc
