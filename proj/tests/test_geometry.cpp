#include "doctest.h"
#include "scatsrc/errors.hpp"
#include "scatsrc/geometry.hpp"

using namespace scatsrc;

TEST_CASE("boundary nodes sit on the circle") {
  const auto nodes = boundary_nodes(4);
  REQUIRE(nodes.size() == 4);
  CHECK(std::abs(nodes[1].z.x) < 1e-15);
  CHECK(nodes[1].z.y == doctest::Approx(1.0));
  CHECK(nodes[2].angle == doctest::Approx(kPi));
  for (const auto& b : nodes) CHECK(b.z.norm() == doctest::Approx(1.0));
  CHECK_THROWS_AS(DiscDomain(7), DomainError);
}

TEST_CASE("exit distance") {
  CHECK(exit_distance({0, 0}, {1, 0}) == doctest::Approx(1.0));
  CHECK(exit_distance({1, 0}, {-1, 0}) == doctest::Approx(2.0));
  CHECK(exit_distance({1, 0}, {1, 0}) == doctest::Approx(0.0));
  CHECK(exit_distance({0.5, 0.0}, {0, 1}) == doctest::Approx(std::sqrt(0.75)));
  CHECK_THROWS_AS(exit_distance({1.5, 0}, {1, 0}), DomainError);
}

TEST_CASE("grid weights integrate the disc") {
  for (int n : {17, 64, 129}) {
    const Grid g = Grid::with_margin_cells(n);
    std::vector<double> one(g.size(), 1.0), r2(g.size());
    for (std::size_t p = 0; p < g.size(); ++p) r2[p] = std::pow(g.node(p).norm(), 2);
    CHECK(g.integrate(one) == doctest::Approx(kPi).epsilon(1e-12));
    // int |z|^2 = pi/2; nodal quadrature, so only O(h^2)
    CHECK(g.integrate(r2) == doctest::Approx(kPi / 2).epsilon(4.0 * g.spacing() * g.spacing() + 1e-3));
  }
}

TEST_CASE("trusted and margin nodes partition the disc nodes") {
  const Grid g = Grid::with_margin_cells(64, 2);
  CHECK(g.trusted_nodes().size() + g.margin_nodes().size() == g.disc_nodes().size());
  CHECK(g.margin() == doctest::Approx(2.0 * g.spacing()));
  for (std::size_t p : g.trusted_nodes()) CHECK(g.node(p).norm() <= 1.0 - g.margin() + 1e-12);
  CHECK_THROWS_AS(Grid(64, 1.0), DomainError);
}

TEST_CASE("bilinear interpolation is exact for linear fields") {
  const Grid g = Grid::with_margin_cells(33);
  std::vector<double> f(g.size());
  for (std::size_t p = 0; p < g.size(); ++p) f[p] = 3.0 * g.node(p).x + 0.5 * g.node(p).y - 1.0;
  for (Vec2 z : {Vec2{0.0, 0.0}, Vec2{0.31, -0.47}, Vec2{-0.6, 0.2}})
    CHECK(g.interpolate(f, z) == doctest::Approx(3.0 * z.x + 0.5 * z.y - 1.0));
}
