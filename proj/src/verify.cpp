#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>

#include "scatsrc/cli.hpp"
#include "scatsrc/errors.hpp"
#include "scatsrc/poisson_solver.hpp"
#include "scatsrc/xray_transforms.hpp"

// Invariant suites behind `verify`. Each is a handful of cheap checks on
// small grids; the full-size experiments live in the acceptance binary.

namespace scatsrc {

namespace {

struct Report {
  Json checks = Json::array();

  void at_most(const std::string& name, double value, double tolerance) {
    checks.push_back({{"name", name}, {"value", value}, {"tolerance", tolerance}, {"pass", value <= tolerance}});
  }
  void at_least(const std::string& name, double value, double bound) {
    checks.push_back(
        {{"name", name}, {"value", value}, {"tolerance", bound}, {"pass", value >= bound}, {"kind", "lower_bound"}});
  }
};

void geometry_suite(Report& r) {
  const Grid g = Grid::with_margin_cells(64);
  double sum = 0.0;
  for (double w : g.weights()) sum += w;
  r.at_most("grid_weights_sum_minus_pi", std::abs(sum - kPi), 1e-12);
  r.at_most("exit_distance_from_centre", std::abs(exit_distance({0, 0}, {0.6, 0.8}) - 1.0), 1e-14);
  r.at_most("exit_distance_across_diameter", std::abs(exit_distance({1, 0}, {-1, 0}) - 2.0), 1e-14);
  std::vector<double> lin(g.size());
  for (std::size_t p = 0; p < g.size(); ++p) lin[p] = 2.0 * g.node(p).x - g.node(p).y + 0.5;
  const Vec2 q{0.123, -0.311};
  r.at_most("bilinear_reproduces_linear", std::abs(g.interpolate(lin, q) - (2.0 * q.x - q.y + 0.5)), 1e-12);
}

void media_suite(Report& r) {
  double worst = 0.0;
  for (double gg : {0.0, 0.2, 0.5, 0.9}) {
    const auto s = kernel_multipliers(HenyeyGreenstein{gg, 5.0}, 16);
    for (int n = 0; n <= 16; ++n) worst = std::max(worst, std::abs(s[n] - hg_multiplier(gg, 5.0, n)));
  }
  r.at_most("hg_multipliers_vs_closed_form", worst, 1e-10);
  r.at_most("quartic_step_ends", std::abs(quartic_step(-1.0)) + std::abs(quartic_step(1.0) - 1.0), 1e-14);
  const auto a = phantom::attenuation(AttenuationVariant::smooth);
  r.at_most("attenuation_inside_b1", std::abs(a({0.5, 0.0}) - 7.0), 1e-12);
  r.at_most("attenuation_background", std::abs(a({0.0, -0.8}) - 5.1), 1e-12);
  const auto f = phantom::source();
  r.at_most("source_plateaus", std::abs(f({0.1, 0.0}) - 2.0) + std::abs(f({-0.25, phantom::kB2CenterY}) - 1.0), 0.0);
}

void forward_suite(Report& r) {
  const Grid g = Grid::with_margin_cells(64);
  ForwardOptions opt;
  opt.n_dirs = 72;
  const MediumSpec ballistic{AttenuationField::constant(1.0), TabulatedKernel{}};
  const AngularFlux flux = solve_forward(ballistic, SourceField::constant(1.0), g, opt);
  const DiscDomain dom(128);
  const BoundaryData d = extract_boundary(flux, dom);
  double num = 0.0, den = 0.0, incoming = 0.0;
  for (int b = 0; b < d.n_boundary; ++b) {
    for (int l = 0; l < d.n_dirs; ++l) {
      const Vec2 zb = dom.node(b), th = unit_vector(d.direction_angle(l));
      if (dot(zb, th) <= 0.0) {
        incoming = std::max(incoming, std::abs(d.at(b, l)));
        continue;
      }
      const double e = ballistic_oracle(1.0, 1.0, zb, th);
      num += (d.at(b, l) - e) * (d.at(b, l) - e);
      den += e * e;
    }
  }
  r.at_most("ballistic_oracle_rel_l2_64", std::sqrt(num / den), 0.03);
  r.at_most("incoming_entries_zero", incoming, 0.0);

  const MediumSpec hg{phantom::attenuation(AttenuationVariant::smooth), HenyeyGreenstein{0.5, 5.0}};
  const AngularFlux zero = solve_forward(hg, SourceField::constant(0.0), Grid::with_margin_cells(32), opt);
  double zmax = 0.0;
  for (double v : zero.values()) zmax = std::max(zmax, std::abs(v));
  r.at_most("zero_source_zero_flux", zmax, 0.0);

  opt.tol = 1e-8;
  const AngularFlux s = solve_forward(hg, phantom::source(), Grid::with_margin_cells(32), opt);
  r.at_most("source_iteration_final_change", s.residuals.back(), opt.tol);
  bool monotone = true;
  for (std::size_t k = 1; k < s.residuals.size(); ++k) monotone = monotone && s.residuals[k] <= s.residuals[k - 1];
  r.at_most("source_iteration_non_monotone_steps", monotone ? 0.0 : 1.0, 0.0);
}

void transforms_suite(Report& r) {
  // constant attenuation c: h = -c conj(z) e^{i phi}
  const double c = 1.0;
  const IntegratingFactor hc(AttenuationField::constant(c), 64, 257, 0.01);
  double worst = 0.0;
  for (Vec2 z : {Vec2{0.0, 0.0}, Vec2{0.3, -0.2}, Vec2{-0.5, 0.4}, Vec2{0.1, 0.7}}) {
    for (int l = 0; l < hc.n_dirs(); ++l) {
      const cplx expect = -c * std::conj(z.to_complex()) * std::polar(1.0, hc.angle(l));
      worst = std::max(worst, std::abs(hc(z, l) - expect));
    }
  }
  r.at_most("h_constant_attenuation_closed_form", worst, 5e-3);

  double hw = 0.0;
  std::vector<double> semi(401);
  for (int j = 0; j < 401; ++j) semi[j] = std::sqrt(std::max(0.0, 1.0 - std::pow(-1.0 + j * 0.005, 2)));
  for (double s0 : {-0.5, 0.0, 0.3, 0.6}) hw = std::max(hw, std::abs(hilbert_offset(semi, s0) - s0));
  r.at_most("hilbert_of_semicircle_is_identity", hw, 2e-3);

  const Grid g = Grid::with_margin_cells(64);
  const auto a = phantom::attenuation(AttenuationVariant::smooth);
  // tables at the resolution used for a 128 grid, checked on the coarser one
  const HOptions o = default_h_options(a, Grid::with_margin_cells(128), 360);
  const HDiagnostics d = check_h(IntegratingFactor(a, o.n_dirs, o.n_s, o.step), g, 1e-3);
  r.at_most("h_transport_residual_64", d.transport_residual, 5.0 * g.spacing());
  r.at_most("h_negative_modes_64", d.negative_modes, 1e-3);
}

void aanalytic_suite(Report& r) {
  const int nb = 512, N = 8;
  ModeTable sq(nb, N), seq(nb, N);
  for (int b = 0; b < nb; ++b) {
    const cplx z = std::polar(1.0, 2.0 * kPi * b / nb);
    sq.at(b, 0) = z * z;
    seq.at(b, 0) = std::conj(z);
    seq.at(b, 2) = -z;
  }
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-0.8, 0.8);
  double e1 = 0.0, e2 = 0.0;
  for (int k = 0; k < 20;) {
    const cplx z(u(rng), u(rng));
    if (std::abs(z) > 0.8) continue;
    ++k;
    const auto v = bukhgeim_cauchy(sq, z);
    const auto w = bukhgeim_cauchy(seq, z);
    for (int j = 0; j <= N; ++j) {
      e1 = std::max(e1, std::abs(v[j] - (j == 0 ? z * z : cplx(0.0))));
      const cplx ex = j == 0 ? std::conj(z) : j == 2 ? -z : cplx(0.0);
      e2 = std::max(e2, std::abs(w[j] - ex));
    }
  }
  r.at_most("cauchy_z_squared", e1, 1e-6);
  r.at_most("cauchy_conj_z_sequence", e2, 1e-6);

  const Grid g = Grid::with_margin_cells(64);
  ModeTable v(g.size(), N);
  for (std::size_t p = 0; p < g.size(); ++p) {
    const cplx z = g.node(p).to_complex();
    v.at(p, 0) = std::conj(z);
    v.at(p, 2) = -z;
  }
  const EnergyIdentity e = energy_identity_residual(g, v, seq);
  r.at_most("energy_lhs_vs_pi", std::abs(e.lhs - kPi) / kPi, 0.01);
  r.at_most("energy_rhs_vs_pi", std::abs(e.rhs - kPi) / kPi, 0.01);

  const Grid small = Grid::with_margin_cells(32);
  const auto a = phantom::attenuation(AttenuationVariant::smooth);
  HField h = build_h(a, small, default_h_options(a, small, 180));
  const CoefTable al = exp_h_coeffs(h, CoefSign::alpha, 64), be = exp_h_coeffs(h, CoefSign::beta, 64);
  double ab = 0.0;
  for (std::size_t p = 0; p < h.points.size(); ++p) {
    if (h.points[p].norm() > 1.0 - small.margin()) continue;
    for (int k = 0; k <= 32; ++k) {
      cplx s = 0.0;
      for (int j = 0; j <= k; ++j) s += al.coefs.at(p, j) * be.coefs.at(p, k - j);
      ab = std::max(ab, std::abs(s - (k == 0 ? 1.0 : 0.0)));
    }
  }
  r.at_most("alpha_beta_identity", ab, 1e-6);
}

double quadratic_error(int n) {
  const Grid g = Grid::with_margin_cells(n);
  DirichletProblem pr{Field(g.size(), -4.0), std::vector<cplx>(256, 0.0)};
  const Field u = solve_dirichlet(g, pr);
  double e = 0.0;
  for (std::size_t p : g.disc_nodes()) e = std::max(e, std::abs(u[p] - (1.0 - std::pow(g.node(p).norm(), 2))));
  return e;
}

// u = e^x sin(y) + i x y^2 cos(x)
double manufactured_error(int n) {
  const Grid g = Grid::with_margin_cells(n);
  auto exact = [](Vec2 z) { return cplx(std::exp(z.x) * std::sin(z.y), z.x * z.y * z.y * std::cos(z.x)); };
  auto lap = [](Vec2 z) {
    return cplx(0.0, -2.0 * z.y * z.y * std::sin(z.x) - z.x * z.y * z.y * std::cos(z.x) + 2.0 * z.x * std::cos(z.x));
  };
  DirichletProblem pr{Field(g.size(), 0.0), std::vector<cplx>(1024)};
  for (std::size_t p : g.disc_nodes()) pr.rhs[p] = lap(g.node(p));
  for (int b = 0; b < 1024; ++b) pr.boundary[b] = exact(unit_vector(2.0 * kPi * b / 1024));
  const Field u = solve_dirichlet(g, pr);
  double e = 0.0;
  for (std::size_t p : g.disc_nodes()) e = std::max(e, std::abs(u[p] - exact(g.node(p))));
  return e;
}

void poisson_suite(Report& r) {
  const Grid g = Grid::with_margin_cells(64);
  r.at_most("quadratic_exact_solution", quadratic_error(64), 4.0 * g.spacing() * g.spacing());
  r.at_least("manufactured_error_ratio_32_to_64", manufactured_error(32) / manufactured_error(64), 3.0);
}

void reconstruction_suite(Report& r) {
  ReconstructionConfig c;
  c.grid_n = 64;
  c.M = 2;
  c.N = 32;
  c.h_dirs = 180;
  const MediumSpec m{phantom::attenuation(AttenuationVariant::smooth, 0.0), TabulatedKernel{}};
  const BoundaryData zero(256, 90);
  const ReconstructionResult z = reconstruct(zero, m, c);
  double zmax = 0.0;
  for (double v : z.f) zmax = std::max(zmax, std::abs(v));
  r.at_most("zero_data_zero_source", zmax, 1e-12);

  const BoundaryData d = ray_boundary_data(m.attenuation, phantom::source(), DiscDomain(512), 90, 2e-3);
  const ReconstructionResult res = reconstruct(d, m, c);
  const SourceMetrics e = error_metrics(res.grid, res.f, phantom::source());
  r.at_most("absorbing_phantom_rel_l2_64", e.rel_l2, 0.4);
  r.at_most("absorbing_phantom_plateau_r", std::abs(e.plateau_r - 2.0) / 2.0, 0.15);
  r.at_most("absorbing_phantom_plateau_b2", std::abs(e.plateau_b2 - 1.0), 0.15);
  r.at_most("imaginary_residue_ratio", res.diagnostics.imag_ratio, 0.05);
  r.at_most("max_poisson_residual",
            *std::max_element(res.diagnostics.poisson_residuals.begin(), res.diagnostics.poisson_residuals.end()),
            1e-10);
}

const std::map<std::string, std::function<void(Report&)>>& suites() {
  static const std::map<std::string, std::function<void(Report&)>> s = {
      {"geometry", geometry_suite},   {"media", media_suite},     {"forward", forward_suite},
      {"transforms", transforms_suite}, {"aanalytic", aanalytic_suite}, {"poisson", poisson_suite},
      {"reconstruction", reconstruction_suite}};
  return s;
}

}  // namespace

Json cmd_verify(const std::string& suite) {
  Report r;
  if (suite == "all") {
    for (const auto& [name, run] : suites()) {
      Report part;
      run(part);
      for (auto& c : part.checks) {
        c["name"] = name + "." + c["name"].get<std::string>();
        r.checks.push_back(c);
      }
    }
  } else {
    const auto it = suites().find(suite);
    if (it == suites().end()) throw ConfigError("unknown suite " + suite);
    it->second(r);
  }
  bool pass = true;
  for (const auto& c : r.checks) pass = pass && c["pass"].get<bool>();
  return {{"suite", suite}, {"checks", r.checks}, {"pass", pass}};
}

}  // namespace scatsrc
