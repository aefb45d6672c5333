#pragma once

#include <span>
#include <vector>

#include "scatsrc/geometry.hpp"
#include "scatsrc/grid_ops.hpp"
#include "scatsrc/xray_transforms.hpp"

namespace scatsrc {

// Nonpositive modes u_0, u_{-1}, ..., u_{-N} at a set of samples (grid nodes
// or boundary nodes). at(s, j) is the mode of index -j.
class ModeTable {
 public:
  ModeTable() = default;
  ModeTable(std::size_t n_samples, int order)
      : n_samples_(n_samples), order_(order), data_(n_samples * (order + 1), 0.0) {}

  std::size_t n_samples() const { return n_samples_; }
  int order() const { return order_; }  // N
  int n_modes() const { return order_ + 1; }
  cplx& at(std::size_t s, int j) { return data_[s * n_modes() + j]; }
  cplx at(std::size_t s, int j) const { return data_[s * n_modes() + j]; }
  std::span<cplx> sample(std::size_t s) { return {data_.data() + s * n_modes(), static_cast<std::size_t>(n_modes())}; }
  std::span<const cplx> sample(std::size_t s) const {
    return {data_.data() + s * n_modes(), static_cast<std::size_t>(n_modes())};
  }
  Field mode(int j) const;
  void set_mode(int j, const Field& values);
  std::vector<cplx>& data() { return data_; }
  const std::vector<cplx>& data() const { return data_; }

 private:
  std::size_t n_samples_ = 0;
  int order_ = 0;
  std::vector<cplx> data_;
};

// Fourier coefficients of exp(-h) (alpha) or exp(+h) (beta) in e^{ik phi}.
enum class CoefSign { alpha = -1, beta = +1 };

struct CoefTable {
  CoefSign sign = CoefSign::alpha;
  ModeTable coefs;                  // at(s, k) = alpha_k or beta_k
  double discarded_negative = 0.0;  // max |negative mode of h| removed before exponentiation
  // max over samples of sum_k k |c_k|
  double l1_weighted() const;
};

// Per sample: h is projected onto its nonnegative angular modes, exponentiated
// on the direction samples and transformed back; modes 0..N are kept.
// Requires h.n_dirs >= 2N.
CoefTable exp_h_coeffs(const HField& h, CoefSign sign, int N);

// (e^{-+G} u)_{-j} = sum_k c_k u_{-j-k}, truncated at the common order.
ModeTable conv_apply(const ModeTable& coefs, const ModeTable& u);
std::vector<cplx> conv_apply(std::span<const cplx> coefs, std::span<const cplx> u);

// Drops the first m modes. Throws DomainError when m > N.
ModeTable left_shift(const ModeTable& u, int m);
std::vector<cplx> left_shift(std::span<const cplx> u, int m);

// Interior values of the L^2-analytic map whose trace is given on uniformly
// spaced boundary nodes (trapezoidal rule in the boundary angle).
// j_max < 0 uses all available deeper modes. Throws DomainError when
// |zeta| > 1 - margin.
std::vector<cplx> bukhgeim_cauchy(const ModeTable& trace, cplx zeta, int j_max = -1, double margin = 0.0);
ModeTable bukhgeim_cauchy(const ModeTable& trace, std::span<const cplx> points, int j_max = -1, double margin = 0.0);

// Both sides of the energy identity with B = 0 for a sequence v sampled on
// the grid (all nodes) and on the boundary, and optional right-hand side f.
struct EnergyIdentity {
  double lhs = 0.0;
  double rhs = 0.0;
  double boundary_term = 0.0;
  double residual = 0.0;  // |lhs - rhs| / max(lhs, 1)
};
EnergyIdentity energy_identity_residual(const Grid& grid, const ModeTable& v, const ModeTable& trace,
                                        const ModeTable* f = nullptr);

// sqrt(sum_j (1 + j^2)^p ||u_{-j}||^2_{H^q}), q in {0, 1}.
double sequence_norm(const Grid& grid, const ModeTable& u, double p, int q);

// sqrt(sum_j sum_k (1 + j^2)^p (1 + k^2)^{1/2} |g_{-j,k}|^2) with
// g_{-j,k} = (1/2pi) int g_{-j} e^{-ik beta} d beta.
double boundary_norm(const ModeTable& trace, double p);

}  // namespace scatsrc
