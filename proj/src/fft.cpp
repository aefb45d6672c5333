#include "scatsrc/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>

#include "scatsrc/errors.hpp"

namespace scatsrc {

namespace {
fftw_complex* cbuf(void* p) { return static_cast<fftw_complex*>(p); }
fftw_plan plan(void* p) { return static_cast<fftw_plan>(p); }
}  // namespace

// FFTW_ESTIMATE keeps plans (and therefore rounding) identical between runs.
Dft::Dft(int n) : n_(n) {
  if (n < 1) throw DomainError("Dft: size must be positive");
  in_ = fftw_malloc(sizeof(fftw_complex) * n);
  out_ = fftw_malloc(sizeof(fftw_complex) * n);
  fwd_ = fftw_plan_dft_1d(n, cbuf(in_), cbuf(out_), FFTW_FORWARD, FFTW_ESTIMATE);
  bwd_ = fftw_plan_dft_1d(n, cbuf(in_), cbuf(out_), FFTW_BACKWARD, FFTW_ESTIMATE);
}

Dft::Dft(Dft&& o) noexcept : n_(o.n_), in_(o.in_), out_(o.out_), fwd_(o.fwd_), bwd_(o.bwd_) {
  o.in_ = o.out_ = o.fwd_ = o.bwd_ = nullptr;
}

Dft::~Dft() {
  if (fwd_) fftw_destroy_plan(plan(fwd_));
  if (bwd_) fftw_destroy_plan(plan(bwd_));
  if (in_) fftw_free(in_);
  if (out_) fftw_free(out_);
}

void Dft::forward(std::span<const cplx> samples, std::span<cplx> modes) {
  std::memcpy(in_, samples.data(), sizeof(fftw_complex) * n_);
  fftw_execute(plan(fwd_));
  const double scale = 1.0 / n_;
  const cplx* out = reinterpret_cast<const cplx*>(out_);
  for (int m = 0; m < n_; ++m) modes[m] = out[m] * scale;
}

void Dft::backward(std::span<const cplx> modes, std::span<cplx> samples) {
  std::memcpy(in_, modes.data(), sizeof(fftw_complex) * n_);
  fftw_execute(plan(bwd_));
  std::memcpy(samples.data(), out_, sizeof(fftw_complex) * n_);
}

RealDft::RealDft(int n) : n_(n) {
  if (n < 2) throw DomainError("RealDft: size must be at least 2");
  real_ = fftw_alloc_real(n);
  spec_ = fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1));
  fwd_ = fftw_plan_dft_r2c_1d(n, real_, cbuf(spec_), FFTW_ESTIMATE);
  bwd_ = fftw_plan_dft_c2r_1d(n, cbuf(spec_), real_, FFTW_ESTIMATE);
}

RealDft::~RealDft() {
  fftw_destroy_plan(plan(fwd_));
  fftw_destroy_plan(plan(bwd_));
  fftw_free(real_);
  fftw_free(spec_);
}

void RealDft::forward(std::span<const double> samples, std::span<cplx> modes) {
  std::copy_n(samples.data(), n_, real_);
  fftw_execute(plan(fwd_));
  const double scale = 1.0 / n_;
  const cplx* spec = reinterpret_cast<const cplx*>(spec_);
  for (int m = 0; m < n_modes(); ++m) modes[m] = spec[m] * scale;
}

void RealDft::backward(std::span<const cplx> modes, std::span<double> samples) {
  // c2r destroys its input.
  std::memcpy(spec_, modes.data(), sizeof(fftw_complex) * n_modes());
  fftw_execute(plan(bwd_));
  std::copy_n(real_, n_, samples.data());
}

}  // namespace scatsrc
