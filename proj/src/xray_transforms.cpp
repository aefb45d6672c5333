#include "scatsrc/xray_transforms.hpp"

#include <algorithm>
#include <cmath>

#include "scatsrc/errors.hpp"
#include "scatsrc/fft.hpp"

namespace scatsrc {

namespace {

constexpr int kPad = 2;  // virtual midpoints beyond each end of [-1, 1]

template <class F>
double simpson(F&& f, double length, double step) {
  if (length <= 0.0) return 0.0;
  const int m = 2 * std::max(1, static_cast<int>(std::ceil(length / (2.0 * step))));
  const double dt = length / m;
  double sum = f(0.0) + f(length);
  for (int k = 1; k < m; ++k) sum += (k % 2 ? 4.0 : 2.0) * f(k * dt);
  return sum * dt / 3.0;
}

// 4-point Lagrange interpolation of equispaced data at fractional index u.
double cubic(const double* v, int count, double u) {
  const int k0 = std::clamp(static_cast<int>(std::floor(u)) - 1, 0, count - 4);
  const double t = u - k0;
  const double w0 = -(t - 1) * (t - 2) * (t - 3) / 6.0;
  const double w1 = t * (t - 2) * (t - 3) / 2.0;
  const double w2 = -t * (t - 1) * (t - 3) / 2.0;
  const double w3 = t * (t - 1) * (t - 2) / 6.0;
  return w0 * v[k0] + w1 * v[k0 + 1] + w2 * v[k0 + 2] + w3 * v[k0 + 3];
}

// Staggered PV sums at the midpoints -1 + (k - kPad + 1/2) ds.
void staggered_hilbert(std::span<const double> f, double ds, double* out) {
  const int n = static_cast<int>(f.size());
  for (int k = 0; k < n - 1 + 2 * kPad; ++k) {
    const double m = (k - kPad + 0.5) * ds;  // offset from s_0 = -1
    double sum = 0.0;
    for (int j = 0; j < n; ++j) sum += f[j] / (m - j * ds);
    out[k] = sum * ds / kPi;
  }
}

}  // namespace

double divergent_beam(const AttenuationField& a, Vec2 z, Vec2 theta, double step) {
  const double tau = exit_distance(z, theta);
  if (tau <= 0.0) return 0.0;
  // Simpson panels laid out backwards from the exit point, so points on the
  // same ray share their quadrature nodes; the partial panel next to z is
  // integrated separately.
  const Vec2 exit = z + tau * theta;
  auto along = [&](double t) { return a(exit - t * theta); };
  const int panels = static_cast<int>(std::floor(tau / (2.0 * step)));
  double sum = 0.0;
  if (panels > 0) {
    sum = along(0.0) + along(2.0 * panels * step);
    for (int k = 1; k < 2 * panels; ++k) sum += (k % 2 ? 4.0 : 2.0) * along(k * step);
    sum *= step / 3.0;
  }
  const double t0 = 2.0 * panels * step;
  return sum + simpson([&](double t) { return along(t0 + t); }, tau - t0, step);
}

double radon_line(const AttenuationField& a, double s, Vec2 theta, double step) {
  if (std::abs(s) >= 1.0) return 0.0;
  const double half = std::sqrt(1.0 - s * s);
  const Vec2 start = s * perp(theta) - half * theta;
  return simpson([&](double t) { return a(start + t * theta); }, 2.0 * half, step);
}

double hilbert_offset(std::span<const double> samples, double s0) {
  const int n = static_cast<int>(samples.size());
  if (n < 4) throw DomainError("hilbert_offset: need at least 4 samples");
  const double ds = 2.0 / (n - 1);
  std::vector<double> mid(n - 1 + 2 * kPad);
  staggered_hilbert(samples, ds, mid.data());
  return cubic(mid.data(), static_cast<int>(mid.size()), (s0 + 1.0) / ds - 0.5 + kPad);
}

RadonTable::RadonTable(const AttenuationField& a, int n_dirs, int n_s, double step)
    : n_dirs_(n_dirs), n_s_(n_s), ds_(2.0 / (n_s - 1)) {
  if (n_dirs < 2 || n_dirs % 2 != 0) throw DomainError("RadonTable: n_dirs must be even");
  if (n_s < 8) throw DomainError("RadonTable: need at least 8 offsets");
  if (!(step > 0.0)) throw DomainError("RadonTable: step must be positive");
  ra_.assign(static_cast<std::size_t>(n_dirs) * n_s, 0.0);
  const int half = n_dirs / 2;
  for (int l = 0; l < half; ++l) {
    const Vec2 theta = unit_vector(2.0 * kPi * l / n_dirs);
    double* row = ra_.data() + static_cast<std::size_t>(l) * n_s;
    double* opposite = ra_.data() + static_cast<std::size_t>(l + half) * n_s;
    for (int j = 1; j < n_s - 1; ++j) row[j] = radon_line(a, -1.0 + j * ds_, theta, step);
    // theta -> -theta flips both the line direction and the offset axis
    for (int j = 0; j < n_s; ++j) opposite[j] = row[n_s - 1 - j];
  }
  const int n_mid = n_s - 1 + 2 * kPad;
  hilbert_.assign(static_cast<std::size_t>(n_dirs) * n_mid, 0.0);
  for (int l = 0; l < n_dirs; ++l) {
    staggered_hilbert({ra_.data() + static_cast<std::size_t>(l) * n_s, static_cast<std::size_t>(n_s)}, ds_,
                      hilbert_.data() + static_cast<std::size_t>(l) * n_mid);
  }
}

double RadonTable::radon(int l, double s) const {
  if (std::abs(s) >= 1.0) return 0.0;
  return cubic(ra_.data() + static_cast<std::size_t>(l) * n_s_, n_s_, (s + 1.0) / ds_);
}

double RadonTable::hilbert(int l, double s) const {
  const int n_mid = n_s_ - 1 + 2 * kPad;
  return cubic(hilbert_.data() + static_cast<std::size_t>(l) * n_mid, n_mid, (s + 1.0) / ds_ - 0.5 + kPad);
}

IntegratingFactor::IntegratingFactor(AttenuationField a, int n_dirs, int n_s, double step)
    : a_(std::move(a)), step_(step), table_(a_, n_dirs, n_s, step) {}

cplx IntegratingFactor::operator()(Vec2 z, int l) const {
  const Vec2 theta = unit_vector(angle(l));
  const double s = dot(z, perp(theta));
  const double da = divergent_beam(a_, z, theta, step_);
  return {da - 0.5 * table_.radon(l, s), 0.5 * table_.hilbert(l, s)};
}

HField build_h(const IntegratingFactor& factor, std::span<const Vec2> points) {
  HField out;
  out.n_dirs = factor.n_dirs();
  out.points.assign(points.begin(), points.end());
  out.values.resize(points.size() * out.n_dirs);
  for (std::size_t p = 0; p < points.size(); ++p) {
    for (int l = 0; l < out.n_dirs; ++l) out.values[p * out.n_dirs + l] = factor(points[p], l);
  }
  return out;
}

HOptions default_h_options(const AttenuationField& a, const Grid& grid, int n_dirs) {
  HOptions o;
  o.n_dirs = n_dirs;
  o.n_s = 4 * grid.n();
  o.step = a.variant == AttenuationVariant::discontinuous ? grid.spacing() / 4 : grid.spacing();
  return o;
}

HField build_h(const AttenuationField& a, const Grid& grid, const HOptions& options) {
  const int n_s = options.n_s > 0 ? options.n_s : 4 * grid.n();
  const double step = options.step > 0.0 ? options.step : grid.spacing();
  const IntegratingFactor factor(a, options.n_dirs, n_s, step);
  std::vector<Vec2> points;
  points.reserve(grid.disc_nodes().size());
  for (std::size_t p : grid.disc_nodes()) {
    Vec2 z = grid.node(p);
    // nodes within rounding of the circle are pulled onto it
    const double r = z.norm();
    if (r > 1.0) z = z * (1.0 / r);
    points.push_back(z);
  }
  return build_h(factor, points);
}

HDiagnostics check_h(const IntegratingFactor& factor, const Grid& grid, double fd_step) {
  const int nd = factor.n_dirs();
  Dft dft(nd);
  std::vector<cplx> samples(nd), modes(nd);
  HDiagnostics d;
  for (std::size_t p : grid.trusted_nodes()) {
    const Vec2 z = grid.node(p);
    const double a = factor.attenuation()(z);
    for (int l = 0; l < nd; ++l) {
      const Vec2 theta = unit_vector(factor.angle(l));
      samples[l] = factor(z, l);
      const cplx dh = (factor(z + fd_step * theta, l) - factor(z - fd_step * theta, l)) / (2.0 * fd_step);
      d.transport_residual = std::max(d.transport_residual, std::abs(dh + a));
    }
    dft.forward(samples, modes);
    // indices nd/2+1 .. nd-1 hold modes -nd/2+1 .. -1; the Nyquist mode is ambiguous
    for (int m = nd / 2 + 1; m < nd; ++m) d.negative_modes = std::max(d.negative_modes, std::abs(modes[m]));
  }
  return d;
}

}  // namespace scatsrc
