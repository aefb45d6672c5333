#include "scatsrc/media.hpp"

#include <algorithm>
#include <cmath>

#include "scatsrc/errors.hpp"

namespace scatsrc {

double Shape::signed_distance(Vec2 z) const {
  if (kind == Kind::disc) return std::hypot(z.x - p0, z.y - p1) - p2;
  const double cx = 0.5 * (p0 + p1), cy = 0.5 * (p2 + p3);
  const double hx = 0.5 * (p1 - p0), hy = 0.5 * (p3 - p2);
  const double qx = std::abs(z.x - cx) - hx;
  const double qy = std::abs(z.y - cy) - hy;
  const double outside = std::hypot(std::max(qx, 0.0), std::max(qy, 0.0));
  const double inside = std::min(std::max(qx, qy), 0.0);
  return outside + inside;
}

double quartic_step(double t) {
  if (t <= -1.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double t2 = t * t;
  return 0.5 + (15.0 / 16.0) * t * (1.0 - 2.0 * t2 / 3.0 + t2 * t2 / 5.0);
}

double AttenuationField::mu_a(Vec2 z, AttenuationVariant v) const {
  double value = background_mu_a;
  for (const Region& r : regions) {
    const double sd = r.shape.signed_distance(z);
    const double weight = (v == AttenuationVariant::smooth && epsilon > 0.0)
                              ? quartic_step(-sd / epsilon)
                              : (sd < 0.0 ? 1.0 : 0.0);
    value += (r.value - background_mu_a) * weight;
  }
  return value;
}

AttenuationField AttenuationField::constant(double c) {
  AttenuationField f;
  f.mu_s = 0.0;
  f.background_mu_a = c;
  f.variant = AttenuationVariant::discontinuous;
  f.epsilon = 0.0;
  return f;
}

double eval_attenuation(const AttenuationField& field, Vec2 z, AttenuationVariant variant) {
  return field.mu_s + field.mu_a(z, variant);
}

double SourceField::operator()(Vec2 z) const {
  if (grid) return grid->interpolate(samples, z);
  double value = 0.0;
  for (const Region& r : regions)
    if (r.shape.contains(z)) value += r.value;
  return value;
}

SourceField SourceField::constant(double c) {
  SourceField f;
  f.regions.push_back({Shape::disc(0.0, 0.0, 2.0), c});
  return f;
}

double eval_source(const SourceField& field, Vec2 z) { return field(z); }

namespace phantom {

Shape ball_b1() { return Shape::disc(0.5, 0.0, 0.3); }
Shape ball_b2() { return Shape::disc(-0.25, kB2CenterY, 0.2); }
Shape rect_r() { return Shape::rect(-0.25, 0.5, -0.15, 0.15); }

AttenuationField attenuation(AttenuationVariant variant, double mu_s, double epsilon) {
  AttenuationField f;
  f.mu_s = mu_s;
  f.background_mu_a = 0.1;
  f.regions = {{ball_b1(), 2.0}, {ball_b2(), 1.0}};
  f.variant = variant;
  f.epsilon = epsilon;
  return f;
}

SourceField source() {
  SourceField f;
  f.regions = {{rect_r(), 2.0}, {ball_b2(), 1.0}};
  return f;
}

}  // namespace phantom

double hg_kernel(double g, double mu_s, double c) {
  return mu_s / (2.0 * kPi) * (1.0 - g * g) / (1.0 - 2.0 * g * c + g * g);
}

double hg_multiplier(double g, double mu_s, int n) {
  if (!(g >= 0.0 && g < 1.0)) throw DomainError("hg_multiplier: anisotropy must lie in [0, 1)");
  if (mu_s < 0.0) throw DomainError("hg_multiplier: negative scattering coefficient");
  return mu_s * std::pow(g, std::abs(n));
}

namespace {

std::vector<double> hg_quadrature(const HenyeyGreenstein& k, int N) {
  if (!(k.g >= 0.0 && k.g < 1.0)) throw DomainError("kernel_multipliers: anisotropy must lie in [0, 1)");
  // Aliasing of the trapezoidal rule contributes ~g^(nq - N); push it below 1e-17.
  int nq = std::max(1024, 8 * (N + 1));
  if (k.g > 0.0) {
    const double need = N + std::ceil(std::log(1e-17) / std::log(k.g));
    nq = std::max(nq, static_cast<int>(need) + 1);
  }
  std::vector<double> kern(static_cast<std::size_t>(nq));
  const double dphi = 2.0 * kPi / nq;
  for (int q = 0; q < nq; ++q) kern[q] = hg_kernel(k.g, k.mu_s, std::cos(q * dphi));
  std::vector<double> sigma(static_cast<std::size_t>(N) + 1);
  for (int n = 0; n <= N; ++n) {
    double acc = 0.0;
    for (int q = 0; q < nq; ++q) acc += kern[q] * std::cos(static_cast<double>(n) * q * dphi);
    sigma[n] = acc * dphi;
  }
  return sigma;
}

}  // namespace

std::vector<double> kernel_multipliers(const ScatteringKernel& kernel, int N) {
  if (N < 0) throw DomainError("kernel_multipliers: negative order");
  if (const auto* hg = std::get_if<HenyeyGreenstein>(&kernel)) return hg_quadrature(*hg, N);
  const auto& tab = std::get<TabulatedKernel>(kernel);
  std::vector<double> sigma(static_cast<std::size_t>(N) + 1, 0.0);
  std::copy_n(tab.sigma.begin(), std::min<std::size_t>(tab.sigma.size(), sigma.size()), sigma.begin());
  return sigma;
}

MultiplierDecay multiplier_decay(const ScatteringKernel& kernel, int M, double p, int N) {
  const auto sigma = kernel_multipliers(kernel, std::max(N, M));
  MultiplierDecay out;
  for (std::size_t j = static_cast<std::size_t>(M); j < sigma.size(); ++j)
    out.gamma = std::max(out.gamma, std::pow(1.0 + j, p) * std::abs(sigma[j]));
  out.tail_bound = out.gamma * out.gamma / std::pow(M + 1.0, 2.0 * p - 1.0);
  for (std::size_t n = 0; n + 1 < sigma.size(); ++n)
    if (sigma[n] != 0.0) out.ratios.push_back(sigma[n + 1] / sigma[n]);
  return out;
}

}  // namespace scatsrc
