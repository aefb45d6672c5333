#include "doctest.h"
#include "scatsrc/errors.hpp"
#include "scatsrc/fft.hpp"
#include "scatsrc/xray_transforms.hpp"

using namespace scatsrc;

TEST_CASE("divergent beam and Radon transform of a constant") {
  const auto a = AttenuationField::constant(2.0);
  CHECK(divergent_beam(a, {0, 0}, {1, 0}, 0.05) == doctest::Approx(2.0));
  CHECK(divergent_beam(a, {0.3, 0.1}, unit_vector(1.0), 0.05) ==
        doctest::Approx(2.0 * exit_distance({0.3, 0.1}, unit_vector(1.0))));
  CHECK(divergent_beam(a, {1, 0}, {1, 0}, 0.05) == 0.0);
  CHECK(radon_line(a, 0.6, unit_vector(0.3), 0.01) == doctest::Approx(2.0 * 2.0 * 0.8));
  CHECK(radon_line(a, 1.2, unit_vector(0.3), 0.01) == 0.0);
}

TEST_CASE("Hilbert transform of the semicircle is the identity inside") {
  std::vector<double> f(801);
  for (std::size_t j = 0; j < f.size(); ++j) f[j] = std::sqrt(std::max(0.0, 1.0 - std::pow(-1.0 + j * 0.0025, 2)));
  for (double s : {-0.7, -0.2, 0.0, 0.5}) CHECK(hilbert_offset(f, s) == doctest::Approx(s).epsilon(1e-3));
  const std::vector<double> zero(100, 0.0);
  CHECK(hilbert_offset(zero, 0.3) == 0.0);
}

TEST_CASE("h for constant attenuation is -c conj(z) e^{i theta}") {
  const double c = 1.7;
  const IntegratingFactor h(AttenuationField::constant(c), 48, 801, 0.005);
  for (Vec2 z : {Vec2{0.0, 0.0}, Vec2{0.5, -0.1}, Vec2{-0.2, 0.6}})
    for (int l = 0; l < 48; ++l)
      CHECK(std::abs(h(z, l) + c * std::conj(z.to_complex()) * std::polar(1.0, h.angle(l))) < 2e-3);
}

TEST_CASE("h solves the transport equation and has no negative modes") {
  const auto a = phantom::attenuation(AttenuationVariant::smooth, 1.0);
  const Grid g = Grid::with_margin_cells(32);
  const IntegratingFactor h(a, 240, 513, 0.01);
  const HDiagnostics d = check_h(h, g, 1e-3);
  CHECK(d.transport_residual < 5.0 * g.spacing());
  CHECK(d.negative_modes < 1e-3);
}

TEST_CASE("h field on a grid and bad options") {
  const auto a = AttenuationField::constant(1.0);
  const Grid g = Grid::with_margin_cells(16);
  const HField f = build_h(a, g, {16, 129, 0.02});
  CHECK(f.points.size() == g.disc_nodes().size());
  CHECK(f.values.size() == f.points.size() * 16);
  CHECK_THROWS_AS(RadonTable(a, 15, 64, 0.01), DomainError);
  CHECK_THROWS_AS(RadonTable(a, 16, 4, 0.01), DomainError);
  const HOptions o = default_h_options(phantom::attenuation(AttenuationVariant::discontinuous), g, 90);
  CHECK(o.step == doctest::Approx(g.spacing() / 4));
  CHECK(o.n_s == 64);
}
