#include <random>

#include "doctest.h"
#include "scatsrc/aanalytic.hpp"
#include "scatsrc/errors.hpp"

using namespace scatsrc;

namespace {

// boundary trace of <conj(z), 0, -z, 0, ...>
ModeTable conj_sequence(int nb, int N) {
  ModeTable t(nb, N);
  for (int b = 0; b < nb; ++b) {
    const cplx z = std::polar(1.0, 2.0 * kPi * b / nb);
    t.at(b, 0) = std::conj(z);
    t.at(b, 2) = -z;
  }
  return t;
}

}  // namespace

TEST_CASE("conv_apply and left_shift") {
  const std::vector<cplx> c{1.0, 2.0}, u{1.0, 1.0, 1.0};
  const auto r = conv_apply(c, u);
  REQUIRE(r.size() == 2);
  CHECK(r[0] == cplx(3.0));
  CHECK(r[1] == cplx(1.0));
  const std::vector<cplx> delta{1.0, 0.0, 0.0, 0.0};
  const std::vector<cplx> x{4.0, -1.0, 2.0, 0.5};
  CHECK(conv_apply(delta, x) == x);
  const auto s = left_shift(x, 2);
  REQUIRE(s.size() == 2);
  CHECK(s[0] == cplx(2.0));
  CHECK_THROWS_AS(left_shift(x, 4), DomainError);
}

TEST_CASE("Cauchy formula reproduces z^2 and the conj(z) sequence") {
  const int nb = 512, N = 8;
  ModeTable sq(nb, N);
  for (int b = 0; b < nb; ++b) sq.at(b, 0) = std::pow(std::polar(1.0, 2.0 * kPi * b / nb), 2);
  const ModeTable seq = conj_sequence(nb, N);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-0.8, 0.8);
  for (int k = 0; k < 20;) {
    const cplx z(u(rng), u(rng));
    if (std::abs(z) > 0.8) continue;
    ++k;
    const auto v = bukhgeim_cauchy(sq, z);
    CHECK(std::abs(v[0] - z * z) < 1e-6);
    for (int j = 1; j <= N; ++j) CHECK(std::abs(v[j]) < 1e-6);
    const auto w = bukhgeim_cauchy(seq, z);
    CHECK(std::abs(w[0] - std::conj(z)) < 1e-6);
    CHECK(std::abs(w[2] + z) < 1e-6);
    CHECK(std::abs(w[1]) < 1e-6);
  }
  CHECK_THROWS_AS(bukhgeim_cauchy(seq, cplx(0.95, 0.0), -1, 0.1), DomainError);
}

TEST_CASE("truncating the Cauchy correction drops the conj(z) term") {
  const ModeTable seq = conj_sequence(256, 8);
  const cplx z(0.3, -0.4);
  const auto full = bukhgeim_cauchy(seq, z);
  const auto none = bukhgeim_cauchy(seq, z, 0);
  CHECK(std::abs(full[0] - std::conj(z)) < 1e-10);
  // plain Cauchy integral of conj(z) on the circle is 0
  CHECK(std::abs(none[0]) < 1e-10);
}

TEST_CASE("energy identity for the conj(z) sequence") {
  const Grid g = Grid::with_margin_cells(128);
  const int N = 8;
  ModeTable v(g.size(), N);
  for (std::size_t p = 0; p < g.size(); ++p) {
    const cplx z = g.node(p).to_complex();
    v.at(p, 0) = std::conj(z);
    v.at(p, 2) = -z;
  }
  const auto e = energy_identity_residual(g, v, conj_sequence(512, N));
  CHECK(e.lhs == doctest::Approx(kPi).epsilon(0.01));
  CHECK(e.rhs == doctest::Approx(kPi).epsilon(0.01));
  CHECK(e.residual < 0.01);
}

TEST_CASE("alpha and beta are inverse under convolution") {
  const Grid g = Grid::with_margin_cells(32);
  const auto a = phantom::attenuation(AttenuationVariant::smooth);
  const HField h = build_h(a, g, default_h_options(a, g, 180));
  const CoefTable al = exp_h_coeffs(h, CoefSign::alpha, 64), be = exp_h_coeffs(h, CoefSign::beta, 64);
  for (std::size_t p = 0; p < h.points.size(); ++p) {
    if (h.points[p].norm() > 1.0 - g.margin()) continue;
    for (int k = 0; k <= 32; ++k) {
      cplx s = 0.0;
      for (int j = 0; j <= k; ++j) s += al.coefs.at(p, j) * be.coefs.at(p, k - j);
      CHECK(std::abs(s - (k == 0 ? 1.0 : 0.0)) < 1e-6);
    }
  }
  CHECK_THROWS_AS(exp_h_coeffs(h, CoefSign::alpha, 91), DomainError);
}

TEST_CASE("exp of a constant-attenuation h has the binomial series") {
  // h = -c conj(z) e^{i phi} has one positive mode, so e^{-h} = sum_k (c conj z)^k / k! e^{ik phi}
  const double c = 1.0;
  const IntegratingFactor f(AttenuationField::constant(c), 64, 801, 0.005);
  const std::vector<Vec2> pts{{0.3, 0.2}};
  const CoefTable al = exp_h_coeffs(build_h(f, pts), CoefSign::alpha, 8);
  const cplx w = c * std::conj(cplx(0.3, 0.2));
  cplx term = 1.0;
  for (int k = 0; k <= 8; ++k) {
    CHECK(std::abs(al.coefs.at(0, k) - term) < 2e-3);
    term *= w / double(k + 1);
  }
}

TEST_CASE("norms") {
  const Grid g = Grid::with_margin_cells(64);
  ModeTable one(g.size(), 2);
  for (std::size_t p = 0; p < g.size(); ++p) one.at(p, 0) = 1.0;
  CHECK(sequence_norm(g, one, 0.0, 0) == doctest::Approx(std::sqrt(kPi)));
  CHECK(sequence_norm(g, one, 1.0, 1) == doctest::Approx(std::sqrt(kPi)).epsilon(1e-10));
  ModeTable t(64, 1);
  for (int b = 0; b < 64; ++b) t.at(b, 1) = 1.0;
  // weight (1 + 1)^p on mode -1, zero frequency
  CHECK(boundary_norm(t, 1.0) == doctest::Approx(std::sqrt(2.0)));
  CHECK_THROWS_AS(sequence_norm(g, one, 0.0, 2), DomainError);
}
