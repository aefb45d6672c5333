#pragma once

#include <span>

#include "scatsrc/geometry.hpp"

namespace scatsrc {

// Fixed-size complex DFT over the direction index.
//
// Normalisation: forward() returns c_m = (1/n) sum_l x_l e^{-2 pi i m l / n},
// so x_l = sum_m c_m e^{i m theta_l} with theta_l = 2 pi l / n (mode m stored
// at index m mod n). This makes the discrete Parseval identity
// (1/n) sum |x_l|^2 = sum |c_m|^2 mirror the continuum one on the circle.
class Dft {
 public:
  explicit Dft(int n);
  ~Dft();
  Dft(const Dft&) = delete;
  Dft& operator=(const Dft&) = delete;
  Dft(Dft&& other) noexcept;
  Dft& operator=(Dft&&) = delete;

  int size() const { return n_; }
  void forward(std::span<const cplx> samples, std::span<cplx> modes);
  // Inverse of forward(): x_l = sum_m c_m e^{2 pi i m l / n}.
  void backward(std::span<const cplx> modes, std::span<cplx> samples);

 private:
  int n_;
  void* in_ = nullptr;
  void* out_ = nullptr;
  void* fwd_ = nullptr;
  void* bwd_ = nullptr;
};

// Real-input counterpart; modes 0..n/2 only (negative modes are conjugates).
class RealDft {
 public:
  explicit RealDft(int n);
  ~RealDft();
  RealDft(const RealDft&) = delete;
  RealDft& operator=(const RealDft&) = delete;

  int size() const { return n_; }
  int n_modes() const { return n_ / 2 + 1; }
  void forward(std::span<const double> samples, std::span<cplx> modes);
  void backward(std::span<const cplx> modes, std::span<double> samples);

 private:
  int n_;
  double* real_ = nullptr;
  void* spec_ = nullptr;
  void* fwd_ = nullptr;
  void* bwd_ = nullptr;
};

}  // namespace scatsrc
