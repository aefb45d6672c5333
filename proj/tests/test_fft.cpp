#include <random>

#include "doctest.h"
#include "scatsrc/fft.hpp"

using namespace scatsrc;

TEST_CASE("DFT normalisation and round trip") {
  const int n = 12;
  Dft dft(n);
  std::vector<cplx> x(n), c(n), y(n);
  for (int l = 0; l < n; ++l) x[l] = std::polar(1.0, 3.0 * 2.0 * kPi * l / n);  // e^{3 i theta}
  dft.forward(x, c);
  CHECK(std::abs(c[3] - 1.0) < 1e-14);
  for (int m = 0; m < n; ++m)
    if (m != 3) CHECK(std::abs(c[m]) < 1e-14);
  dft.backward(c, y);
  for (int l = 0; l < n; ++l) CHECK(std::abs(y[l] - x[l]) < 1e-14);
}

TEST_CASE("real DFT of a cosine") {
  const int n = 16;
  RealDft dft(n);
  std::vector<double> x(n), back(n);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int l = 0; l < n; ++l) x[l] = 0.5 + std::cos(2.0 * 2.0 * kPi * l / n);
  std::vector<cplx> c(dft.n_modes());
  dft.forward(x, c);
  CHECK(std::abs(c[0] - 0.5) < 1e-14);
  CHECK(std::abs(c[2] - 0.5) < 1e-14);
  for (int l = 0; l < n; ++l) x[l] = u(rng);
  dft.forward(x, c);
  dft.backward(c, back);
  for (int l = 0; l < n; ++l) CHECK(back[l] == doctest::Approx(x[l]));
}
