#include "doctest.h"
#include "scatsrc/errors.hpp"
#include "scatsrc/forward_rte.hpp"

using namespace scatsrc;

namespace {

// relative L2 error over outgoing pairs against the ballistic oracle (a = f = 1)
double ballistic_error(int n, int nd) {
  ForwardOptions opt;
  opt.n_dirs = nd;
  const MediumSpec m{AttenuationField::constant(1.0), TabulatedKernel{}};
  const auto flux = solve_forward(m, SourceField::constant(1.0), Grid::with_margin_cells(n), opt);
  const DiscDomain dom(64);
  const auto d = extract_boundary(flux, dom);
  double num = 0, den = 0;
  for (int b = 0; b < d.n_boundary; ++b)
    for (int l = 0; l < d.n_dirs; ++l) {
      const Vec2 z = dom.node(b), th = unit_vector(d.direction_angle(l));
      if (dot(z, th) <= 0) continue;
      const double e = ballistic_oracle(1.0, 1.0, z, th);
      num += std::pow(d.at(b, l) - e, 2);
      den += e * e;
    }
  return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("ballistic oracle closed form") {
  CHECK(ballistic_oracle(1.0, 1.0, {1, 0}, {1, 0}) == doctest::Approx(1.0 - std::exp(-2.0)));
  CHECK(ballistic_oracle(0.0, 2.0, {0, 0}, {0, 1}) == doctest::Approx(2.0));
  // ray integration is exact for constant coefficients
  for (Vec2 z : {Vec2{1, 0}, Vec2{0.3, 0.2}, Vec2{-0.6, 0.7}})
    CHECK(uncollided(AttenuationField::constant(1.5), SourceField::constant(1.0), z, unit_vector(0.4), 0.1) ==
          doctest::Approx(ballistic_oracle(1.5, 1.0, z, unit_vector(0.4))).epsilon(1e-12));
}

TEST_CASE("ballistic boundary data converges under refinement") {
  const double e32 = ballistic_error(32, 32), e64 = ballistic_error(64, 32);
  CHECK(e64 < 0.03);
  CHECK(e64 < 0.7 * e32);
}

TEST_CASE("incoming boundary entries are zero and zero source gives zero data") {
  ForwardOptions opt;
  opt.n_dirs = 32;
  const MediumSpec m{phantom::attenuation(AttenuationVariant::smooth), HenyeyGreenstein{0.5, 5.0}};
  const auto flux = solve_forward(m, phantom::source(), Grid::with_margin_cells(32), opt);
  const DiscDomain dom(16);
  const auto d = extract_boundary(flux, dom);
  for (int b = 0; b < d.n_boundary; ++b)
    for (int l = 0; l < d.n_dirs; ++l) {
      if (dot(dom.node(b), unit_vector(d.direction_angle(l))) <= 0) CHECK(d.at(b, l) == 0.0);
      else CHECK(d.at(b, l) >= 0.0);
    }
  const auto zero = solve_forward(m, SourceField::constant(0.0), Grid::with_margin_cells(32), opt);
  for (double v : extract_boundary(zero, dom).values) CHECK(v == 0.0);
}

TEST_CASE("source iteration errors") {
  ForwardOptions opt;
  opt.n_dirs = 16;
  const Grid g = Grid::with_margin_cells(16);
  // a - sigma_0 = 1 - 5 < 0
  CHECK_THROWS_AS(solve_forward({AttenuationField::constant(1.0), HenyeyGreenstein{0.5, 5.0}},
                                SourceField::constant(1.0), g, opt),
                  PreconditionError);
  opt.max_iters = 2;
  const MediumSpec m{phantom::attenuation(AttenuationVariant::smooth), HenyeyGreenstein{0.5, 5.0}};
  try {
    solve_forward(m, phantom::source(), g, opt);
    FAIL("expected IterationLimitError");
  } catch (const IterationLimitError& e) {
    CHECK(e.iterations() == 2);
    CHECK(e.residual() > opt.tol);
  }
  opt.n_dirs = 7;
  CHECK_THROWS_AS(solve_forward(m, phantom::source(), g, opt), DomainError);
}

TEST_CASE("scattering adds radiance; quarter-turn symmetry of a centred problem") {
  ForwardOptions opt;
  opt.n_dirs = 32;
  const Grid g = Grid::with_margin_cells(40);
  SourceField f;
  f.regions = {{Shape::disc(0, 0, 0.4), 1.0}};
  const auto absorbing = solve_forward({AttenuationField::constant(2.0), TabulatedKernel{{0.0}}}, f, g, opt);
  AttenuationField a = AttenuationField::constant(2.0);
  const auto scattering = solve_forward({a, HenyeyGreenstein{0.3, 1.5}}, f, g, opt);
  const DiscDomain dom(32);
  const auto d0 = extract_boundary(absorbing, dom, 10.0), d1 = extract_boundary(scattering, dom, 10.0);
  double s0 = 0, s1 = 0, asym = 0, scale = 0;
  for (int b = 0; b < 32; ++b)
    for (int l = 0; l < 32; ++l) {
      s0 += d0.at(b, l);
      s1 += d1.at(b, l);
      asym = std::max(asym, std::abs(d1.at(b, l) - d1.at((b + 8) % 32, (l + 8) % 32)));
      scale = std::max(scale, d1.at(b, l));
    }
  CHECK(s1 > s0);
  CHECK(asym < 1e-3 * scale);
}

TEST_CASE("full-chord readout of a non-scattering problem is the ray integral") {
  ForwardOptions opt;
  opt.n_dirs = 24;
  const auto a = phantom::attenuation(AttenuationVariant::smooth, 1.0);
  const auto flux = solve_forward({a, TabulatedKernel{}}, phantom::source(), Grid::with_margin_cells(32), opt);
  const DiscDomain dom(16);
  const auto d = extract_boundary(flux, dom, 10.0);
  const auto ref = ray_boundary_data(a, phantom::source(), dom, 24, 0.5 * 2.0 / 31);
  for (std::size_t k = 0; k < d.values.size(); ++k) CHECK(d.values[k] == doctest::Approx(ref.values[k]).epsilon(1e-12));
}
