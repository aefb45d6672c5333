#include "scatsrc/aanalytic.hpp"

#include <algorithm>
#include <cmath>

#include "scatsrc/errors.hpp"
#include "scatsrc/fft.hpp"

namespace scatsrc {

namespace {
constexpr int kExpOversampling = 4;
}

Field ModeTable::mode(int j) const {
  Field out(n_samples_);
  for (std::size_t s = 0; s < n_samples_; ++s) out[s] = at(s, j);
  return out;
}

void ModeTable::set_mode(int j, const Field& values) {
  for (std::size_t s = 0; s < n_samples_; ++s) at(s, j) = values[s];
}

double CoefTable::l1_weighted() const {
  double best = 0.0;
  for (std::size_t s = 0; s < coefs.n_samples(); ++s) {
    double sum = 0.0;
    for (int k = 1; k <= coefs.order(); ++k) sum += k * std::abs(coefs.at(s, k));
    best = std::max(best, sum);
  }
  return best;
}

CoefTable exp_h_coeffs(const HField& h, CoefSign sign, int N) {
  const int nd = h.n_dirs;
  if (N < 0 || nd < 2 * N) throw DomainError("exp_h_coeffs: need at least 2N directions");
  const double sgn = sign == CoefSign::alpha ? -1.0 : 1.0;
  CoefTable out;
  out.sign = sign;
  out.coefs = ModeTable(h.points.size(), N);
  // The exponential is evaluated on an oversampled direction grid so that its
  // slowly decaying high modes (nodes near the boundary) do not alias back.
  const int fine = kExpOversampling * nd;
  Dft dft(nd), dft_fine(fine);
  std::vector<cplx> samples(nd), modes(nd), fine_samples(fine), fine_modes(fine);
  for (std::size_t p = 0; p < h.points.size(); ++p) {
    const auto row = h.row(p);
    std::copy(row.begin(), row.end(), samples.begin());
    dft.forward(samples, modes);
    for (int m = nd / 2; m < nd; ++m) out.discarded_negative = std::max(out.discarded_negative, std::abs(modes[m]));
    std::fill(fine_modes.begin(), fine_modes.end(), cplx(0.0));
    std::copy(modes.begin(), modes.begin() + nd / 2, fine_modes.begin());
    dft_fine.backward(fine_modes, fine_samples);
    for (auto& v : fine_samples) v = std::exp(sgn * v);
    dft_fine.forward(fine_samples, fine_modes);
    for (int k = 0; k <= N; ++k) out.coefs.at(p, k) = fine_modes[k];
  }
  return out;
}

std::vector<cplx> conv_apply(std::span<const cplx> coefs, std::span<const cplx> u) {
  const std::size_t n = std::min(coefs.size(), u.size());
  std::vector<cplx> out(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    cplx sum = 0.0;
    for (std::size_t k = 0; j + k < n; ++k) sum += coefs[k] * u[j + k];
    out[j] = sum;
  }
  return out;
}

ModeTable conv_apply(const ModeTable& coefs, const ModeTable& u) {
  if (coefs.n_samples() != u.n_samples()) throw DomainError("conv_apply: sample counts differ");
  const int order = std::min(coefs.order(), u.order());
  ModeTable out(u.n_samples(), order);
  for (std::size_t s = 0; s < u.n_samples(); ++s) {
    const auto c = coefs.sample(s).first(order + 1);
    const auto v = u.sample(s).first(order + 1);
    const auto r = conv_apply(c, v);
    std::copy(r.begin(), r.end(), out.sample(s).begin());
  }
  return out;
}

std::vector<cplx> left_shift(std::span<const cplx> u, int m) {
  if (m < 0 || m >= static_cast<int>(u.size())) throw DomainError("left_shift: shift exceeds truncation");
  return {u.begin() + m, u.end()};
}

ModeTable left_shift(const ModeTable& u, int m) {
  if (m < 0 || m > u.order()) throw DomainError("left_shift: shift exceeds truncation");
  ModeTable out(u.n_samples(), u.order() - m);
  for (std::size_t s = 0; s < u.n_samples(); ++s)
    for (int j = 0; j <= out.order(); ++j) out.at(s, j) = u.at(s, j + m);
  return out;
}

namespace {

void cauchy_at(const ModeTable& trace, cplx zeta, int j_max, std::span<cplx> out, std::vector<cplx>& work) {
  const int nb = static_cast<int>(trace.n_samples());
  const int N = trace.order();
  std::fill(out.begin(), out.end(), cplx(0.0));
  work.assign(N + 1, 0.0);
  const bool full = j_max < 0 || j_max >= N / 2;
  for (int b = 0; b < nb; ++b) {
    const cplx zb = std::polar(1.0, 2.0 * kPi * b / nb);
    const cplx d = zb - zeta;
    const cplx A = zb / d;
    const cplx w = std::conj(d) / d;
    const double re2 = 2.0 * A.real();
    const auto v = trace.sample(b);
    if (full) {
      // S_n = sum_{j>=1} v_{-n-2j} w^j by Horner from the deepest mode.
      cplx s_even = 0.0, s_odd = 0.0;
      for (int n = N; n >= 0; --n) {
        cplx& s = (n % 2 == 0) ? s_even : s_odd;
        s = n + 2 <= N ? w * (v[n + 2] + s) : cplx(0.0);
        out[n] += A * v[n] + re2 * s;
      }
    } else {
      work[0] = 1.0;
      for (int j = 1; j <= j_max; ++j) work[j] = work[j - 1] * w;
      for (int n = 0; n <= N; ++n) {
        cplx s = 0.0;
        for (int j = 1; j <= j_max && n + 2 * j <= N; ++j) s += v[n + 2 * j] * work[j];
        out[n] += A * v[n] + re2 * s;
      }
    }
  }
  for (auto& x : out) x /= static_cast<double>(nb);
}

void check_point(cplx zeta, double margin) {
  if (std::abs(zeta) > 1.0 - margin + 1e-12) throw DomainError("bukhgeim_cauchy: evaluation point outside the margin disc");
}

}  // namespace

std::vector<cplx> bukhgeim_cauchy(const ModeTable& trace, cplx zeta, int j_max, double margin) {
  check_point(zeta, margin);
  std::vector<cplx> out(trace.n_modes()), work;
  cauchy_at(trace, zeta, j_max, out, work);
  return out;
}

ModeTable bukhgeim_cauchy(const ModeTable& trace, std::span<const cplx> points, int j_max, double margin) {
  for (cplx z : points) check_point(z, margin);
  ModeTable out(points.size(), trace.order());
  std::vector<cplx> work;
  for (std::size_t p = 0; p < points.size(); ++p) cauchy_at(trace, points[p], j_max, out.sample(p), work);
  return out;
}

EnergyIdentity energy_identity_residual(const Grid& grid, const ModeTable& v, const ModeTable& trace,
                                        const ModeTable* f) {
  const int N = v.order();
  if (v.n_samples() != grid.size()) throw DomainError("energy_identity_residual: v must live on the grid");
  if (trace.order() != N) throw DomainError("energy_identity_residual: trace order differs");
  if (f && (f->n_samples() != grid.size() || f->order() != N))
    throw DomainError("energy_identity_residual: f must match v");
  EnergyIdentity e;
  std::vector<Field> dv(N + 1);
  for (int j = 0; j <= N; ++j) {
    dv[j] = del(grid, v.mode(j));
    e.lhs += integrate_abs2(grid, dv[j]);
  }

  // (i/2) oint sum_j <L^{2j} v, d_s L^{2j} v> ds = pi sum_k (1 + floor(k/2)) sum_m m |c_{k,m}|^2
  const int nb = static_cast<int>(trace.n_samples());
  Dft dft(nb);
  std::vector<cplx> samples(nb), modes(nb);
  for (int k = 0; k <= N; ++k) {
    for (int b = 0; b < nb; ++b) samples[b] = trace.at(b, k);
    dft.forward(samples, modes);
    double sum = 0.0;
    for (int m = 1; m < nb; ++m) {
      const int freq = m <= nb / 2 ? m : m - nb;
      if (2 * m == nb) continue;
      sum += freq * std::norm(modes[m]);
    }
    e.boundary_term += kPi * (1 + k / 2) * sum;
  }
  e.rhs = e.boundary_term;

  if (f) {
    const auto w = grid.weights();
    double cross = 0.0, self = 0.0;
    std::vector<Field> fm(N + 1);
    for (int k = 0; k <= N; ++k) {
      fm[k] = f->mode(k);
      self += (1 + k / 2) * integrate_abs2(grid, fm[k]);
    }
    // sum_{j>=1} <L^{2j} dv, L^{2j-2} f> = sum_{j>=1} sum_i dv_{-(i+2j)} conj(f_{-(i+2j-2)})
    for (int j = 1; 2 * j <= N; ++j) {
      for (int i = 0; i + 2 * j <= N; ++i) {
        const Field& a = dv[i + 2 * j];
        const Field& b = fm[i + 2 * j - 2];
        for (std::size_t p : grid.disc_nodes()) cross += w[p] * (a[p] * std::conj(b[p])).real();
      }
    }
    e.rhs += -2.0 * cross + self;
  }
  e.residual = std::abs(e.lhs - e.rhs) / std::max(e.lhs, 1.0);
  return e;
}

double sequence_norm(const Grid& grid, const ModeTable& u, double p, int q) {
  if (q != 0 && q != 1) throw DomainError("sequence_norm: q must be 0 or 1");
  double total = 0.0;
  for (int j = 0; j <= u.order(); ++j) {
    const Field m = u.mode(j);
    double part = integrate_abs2(grid, m);
    if (q == 1) part += integrate_abs2(grid, d_dx(grid, m)) + integrate_abs2(grid, d_dy(grid, m));
    total += std::pow(1.0 + double(j) * j, p) * part;
  }
  return std::sqrt(total);
}

double boundary_norm(const ModeTable& trace, double p) {
  const int nb = static_cast<int>(trace.n_samples());
  Dft dft(nb);
  std::vector<cplx> samples(nb), modes(nb);
  double total = 0.0;
  for (int j = 0; j <= trace.order(); ++j) {
    for (int b = 0; b < nb; ++b) samples[b] = trace.at(b, j);
    dft.forward(samples, modes);
    const double wj = std::pow(1.0 + double(j) * j, p);
    for (int m = 0; m < nb; ++m) {
      const double k = m <= nb / 2 ? m : m - nb;
      total += wj * std::sqrt(1.0 + k * k) * std::norm(modes[m]);
    }
  }
  return std::sqrt(total);
}

}  // namespace scatsrc
