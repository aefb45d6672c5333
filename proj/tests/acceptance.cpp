// Acceptance run: one PASS/FAIL line per criterion.
//
//   acceptance            all criteria
//   acceptance 1 4 7      a subset
//
// Exit status is 0 only when every selected criterion passes.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>

#include "scatsrc/cli.hpp"
#include "scatsrc/poisson_solver.hpp"
#include "scatsrc/xray_transforms.hpp"

using namespace scatsrc;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

ExperimentConfig load(const char* name) { return load_experiment(std::string(SCATSRC_CONFIG_DIR) + "/" + name); }

// ---- 1: HG multipliers --------------------------------------------------
constexpr double kHgTol = 1e-10;
constexpr double kHgSeconds = 1.0;

Outcome hg_multipliers() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (double g : {0.0, 0.2, 0.5, 0.9}) {
    const auto s = kernel_multipliers(HenyeyGreenstein{g, 5.0}, 16);
    for (int n = 0; n <= 16; ++n) worst = std::max(worst, std::abs(s[n] - 5.0 * std::pow(g, n)));
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  return {worst <= kHgTol && secs < kHgSeconds, fmt("max |sigma_n - mu_s g^n| = %.2e (tol %.0e), %.3f s", worst, kHgTol, secs)};
}

// ---- 2: integrating factor ----------------------------------------------
constexpr double kTransportFactor = 5.0;  // x spacing
constexpr double kNegativeModeTol = 1e-3;
constexpr double kHSeconds = 120.0;

Outcome integrating_factor() {
  const auto t0 = Clock::now();
  const Grid g = Grid::with_margin_cells(128);
  const auto a = phantom::attenuation(AttenuationVariant::smooth);
  const HOptions o = default_h_options(a, g, 360);
  const HDiagnostics d = check_h(IntegratingFactor(a, o.n_dirs, o.n_s, o.step), g, g.spacing() / 4);
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  const double tol = kTransportFactor * g.spacing();
  return {d.transport_residual <= tol && d.negative_modes <= kNegativeModeTol && secs < kHSeconds,
          fmt("max |theta.grad h + a| = %.4f (tol %.4f), max negative mode %.2e (tol %.0e), %.1f s",
              d.transport_residual, tol, d.negative_modes, kNegativeModeTol, secs)};
}

// ---- 3: alpha * beta = delta ---------------------------------------------
constexpr double kAlphaBetaTol = 1e-6;

Outcome alpha_beta() {
  const auto t0 = Clock::now();
  const Grid g = Grid::with_margin_cells(128);
  const auto a = phantom::attenuation(AttenuationVariant::smooth);
  const HField h = build_h(a, g, default_h_options(a, g, 360));
  const CoefTable al = exp_h_coeffs(h, CoefSign::alpha, 64), be = exp_h_coeffs(h, CoefSign::beta, 64);
  double worst = 0.0;
  for (std::size_t p = 0; p < h.points.size(); ++p) {
    for (int k = 0; k <= 32; ++k) {
      cplx s = 0.0;
      for (int j = 0; j <= k; ++j) s += al.coefs.at(p, j) * be.coefs.at(p, k - j);
      worst = std::max(worst, std::abs(s - (k == 0 ? 1.0 : 0.0)));
    }
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  return {worst <= kAlphaBetaTol && secs < 60.0,
          fmt("max |(alpha*beta)_k - delta_k0| over all disc nodes, k <= 32: %.2e (tol %.0e), %.1f s", worst,
              kAlphaBetaTol, secs)};
}

// ---- 4: Bukhgeim-Cauchy ----------------------------------------------------
constexpr double kCauchyTol = 1e-6;

Outcome cauchy() {
  const auto t0 = Clock::now();
  const int nb = 512, N = 16;
  ModeTable sq(nb, N), seq(nb, N);
  for (int b = 0; b < nb; ++b) {
    const cplx z = std::polar(1.0, 2.0 * kPi * b / nb);
    sq.at(b, 0) = z * z;
    seq.at(b, 0) = std::conj(z);
    seq.at(b, 2) = -z;
  }
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-0.8, 0.8);
  double ea = 0.0, eb = 0.0;
  for (int k = 0; k < 20;) {
    const cplx z(u(rng), u(rng));
    if (std::abs(z) > 0.8) continue;
    ++k;
    const auto v = bukhgeim_cauchy(sq, z), w = bukhgeim_cauchy(seq, z);
    for (int j = 0; j <= N; ++j) {
      ea = std::max(ea, std::abs(v[j] - (j == 0 ? z * z : cplx(0.0))));
      eb = std::max(eb, std::abs(w[j] - (j == 0 ? std::conj(z) : j == 2 ? -z : cplx(0.0))));
    }
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  return {ea <= kCauchyTol && eb <= kCauchyTol && secs < 10.0,
          fmt("z^2: %.2e, <conj z, 0, -z, ...>: %.2e (tol %.0e), %.3f s", ea, eb, kCauchyTol, secs)};
}

// ---- 5: energy identity ----------------------------------------------------
constexpr double kEnergyRel = 0.01;

Outcome energy() {
  const Grid g = Grid::with_margin_cells(128);
  const int nb = 512, N = 8;
  ModeTable v(g.size(), N), trace(nb, N);
  for (std::size_t p = 0; p < g.size(); ++p) {
    const cplx z = g.node(p).to_complex();
    v.at(p, 0) = std::conj(z);
    v.at(p, 2) = -z;
  }
  for (int b = 0; b < nb; ++b) {
    const cplx z = std::polar(1.0, 2.0 * kPi * b / nb);
    trace.at(b, 0) = std::conj(z);
    trace.at(b, 2) = -z;
  }
  const auto e = energy_identity_residual(g, v, trace);
  const double dl = std::abs(e.lhs - kPi) / kPi, dr = std::abs(e.rhs - kPi) / kPi;
  return {dl <= kEnergyRel && dr <= kEnergyRel,
          fmt("lhs %.5f, rhs %.5f, pi %.5f (rel tol %.0e)", e.lhs, e.rhs, kPi, kEnergyRel)};
}

// ---- 6: Poisson solver -----------------------------------------------------
constexpr double kPoissonOrder = 3.5;  // error ratio under halving (4 ideal)
constexpr double kQuadraticFactor = 4.0;

Outcome poisson() {
  auto exact = [](Vec2 z) { return cplx(std::exp(z.x) * std::sin(z.y), z.x * z.y * z.y * std::cos(z.x)); };
  auto lap = [](Vec2 z) {
    return cplx(0.0, -2.0 * z.y * z.y * std::sin(z.x) - z.x * z.y * z.y * std::cos(z.x) + 2.0 * z.x * std::cos(z.x));
  };
  std::vector<double> errs;
  for (int n : {32, 64, 128}) {
    const Grid g = Grid::with_margin_cells(n);
    DirichletProblem pr{Field(g.size(), 0.0), std::vector<cplx>(1024)};
    for (std::size_t p : g.disc_nodes()) pr.rhs[p] = lap(g.node(p));
    for (int b = 0; b < 1024; ++b) pr.boundary[b] = exact(unit_vector(2.0 * kPi * b / 1024));
    const Field u = solve_dirichlet(g, pr);
    double e = 0.0;
    for (std::size_t p : g.disc_nodes()) e = std::max(e, std::abs(u[p] - exact(g.node(p))));
    errs.push_back(e);
  }
  const Grid g = Grid::with_margin_cells(128);
  const Field u = solve_dirichlet(g, {Field(g.size(), -4.0), std::vector<cplx>(256, 0.0)});
  double eq = 0.0;
  for (std::size_t p : g.disc_nodes()) eq = std::max(eq, std::abs(u[p] - (1.0 - std::pow(g.node(p).norm(), 2))));
  const double r1 = errs[0] / errs[1], r2 = errs[1] / errs[2], tol = kQuadraticFactor * g.spacing() * g.spacing();
  return {r1 >= kPoissonOrder && r2 >= kPoissonOrder && eq <= tol,
          fmt("manufactured max errors %.2e %.2e %.2e (ratios %.2f %.2f, need >= %.1f); 1-|z|^2 error %.1e (tol %.1e)",
              errs[0], errs[1], errs[2], r1, r2, kPoissonOrder, eq, tol)};
}

// ---- 7: forward solver vs ballistic oracle ---------------------------------
constexpr double kBallisticRel = 0.02;
constexpr double kHalvingRatio = 1.8;

Outcome ballistic() {
  const MediumSpec m{AttenuationField::constant(1.0), TabulatedKernel{}};
  // 360 boundary nodes so that every node has its inward-normal ray among the directions
  const DiscDomain dom(360);
  double rel[2] = {0, 0}, diam[2] = {0, 0};
  int k = 0;
  for (int n : {128, 256}) {
    ForwardOptions o;
    o.n_dirs = 360;
    const auto flux = solve_forward(m, SourceField::constant(1.0), Grid::with_margin_cells(n), o);
    const auto d = extract_boundary(flux, dom);  // readout over the last 0.4 of each ray
    double num = 0, den = 0;
    for (int b = 0; b < 360; ++b)
      for (int l = 0; l < 360; ++l) {
        const Vec2 z = dom.node(b), th = unit_vector(d.direction_angle(l));
        if (dot(z, th) <= 0) continue;
        const double e = ballistic_oracle(1.0, 1.0, z, th), err = std::abs(d.at(b, l) - e);
        num += err * err;
        den += e * e;
        if (b == l) diam[k] = std::max(diam[k], err);
      }
    rel[k++] = std::sqrt(num / den);
  }
  const double ratio = diam[0] / diam[1];
  return {rel[1] <= kBallisticRel && ratio >= kHalvingRatio,
          fmt("rel L2 over outgoing pairs: 128^2 %.4f, 256^2 %.4f (tol %.2f); diametric-ray max error %.2e -> %.2e, "
              "ratio %.2f (need >= %.1f)",
              rel[0], rel[1], kBallisticRel, diam[0], diam[1], ratio, kHalvingRatio)};
}

// ---- 8 / 9: phantom experiments ----------------------------------------------
constexpr double kPlateauTol1 = 0.15;
constexpr double kRelL2Tol = 0.35;
constexpr double kSeconds1 = 15 * 60.0;
constexpr double kPlateauTol2 = 0.20;

Outcome experiment1() {
  const auto t0 = Clock::now();
  const ExperimentConfig c = load("exp1_smooth.json");
  const auto data = run_forward(c).data;
  const auto r = reconstruct(data, c.medium, c.reconstruction);
  const auto m = error_metrics(r.grid, r.f, c.source);
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  const bool ok = std::abs(m.plateau_r - 2.0) <= kPlateauTol1 * 2.0 && std::abs(m.plateau_b2 - 1.0) <= kPlateauTol1 &&
                  m.rel_l2 <= kRelL2Tol && secs <= kSeconds1;
  return {ok, fmt("plateau R %.3f (2 +- %.0f%%), B2 %.3f (1 +- %.0f%%), rel L2 %.3f (tol %.2f), %.0f s", m.plateau_r,
                  100 * kPlateauTol1, m.plateau_b2, 100 * kPlateauTol1, m.rel_l2, kRelL2Tol, secs)};
}

Outcome experiment2() {
  const auto t0 = Clock::now();
  const ExperimentConfig c = load("exp2_discontinuous.json");
  const auto data = run_forward(c).data;
  const auto r = reconstruct(data, c.medium, c.reconstruction);
  const auto m = error_metrics(r.grid, r.f, c.source);
  // plateaus on the cross-section y = -sqrt(3) x: points inside R and B2 away from their edges
  const Shape rect = phantom::rect_r(), b2 = phantom::ball_b2();
  double sr = 0, nr = 0, sb = 0, nbb = 0;
  for (const auto& s : m.cross_section) {
    const Vec2 z = s.t * Vec2{-0.5, std::sqrt(3.0) / 2.0};
    if (rect.signed_distance(z) < -0.05) sr += s.rec, ++nr;
    if (b2.signed_distance(z) < -0.05) sb += s.rec, ++nbb;
  }
  const double cr = sr / nr, cb = sb / nbb;
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  const bool ok = std::abs(m.plateau_r - 2.0) <= kPlateauTol2 * 2.0 && std::abs(m.plateau_b2 - 1.0) <= kPlateauTol2 &&
                  std::abs(cr - 2.0) <= kPlateauTol2 * 2.0 && std::abs(cb - 1.0) <= kPlateauTol2;
  return {ok, fmt("plateau R %.3f, B2 %.3f; cross-section plateaus R %.3f, B2 %.3f (+- %.0f%%); rel L2 %.3f, %.0f s",
                  m.plateau_r, m.plateau_b2, cr, cb, 100 * kPlateauTol2, m.rel_l2, secs)};
}

// ---- 10: convergence in M --------------------------------------------------
Outcome convergence() {
  const auto t0 = Clock::now();
  ExperimentConfig c = load("exp3_convergence_g02.json");
  const auto data = run_forward(c).data;
  std::vector<double> errs;
  std::string list;
  for (int M : {1, 2, 4, 8}) {
    c.reconstruction.M = M;
    const auto r = reconstruct(data, c.medium, c.reconstruction);
    errs.push_back(error_metrics(r.grid, r.f, c.source).rel_l2);
    list += fmt("M=%d %.4f  ", M, errs.back());
  }
  bool ok = errs.back() < errs.front();
  for (std::size_t k = 1; k < errs.size(); ++k) ok = ok && errs[k] <= errs[k - 1];
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  return {ok, fmt("rel L2: %s(non-increasing, last < first), %.0f s", list.c_str(), secs)};
}

// ---- 11: stability under boundary noise -------------------------------------
constexpr double kNoiseGrowth = 1.5;  // allowed multiple of the noise ratio

Outcome stability() {
  const auto t0 = Clock::now();
  const ExperimentConfig c = load("exp4_stability_tabulated.json");
  const auto clean = run_forward(c).data;
  const auto base = reconstruct(clean, c.medium, c.reconstruction);
  const Grid& g = base.grid;
  const auto w = g.weights();
  const auto truth = sample_source(c.source, g);
  double tn = 0.0;
  for (std::size_t p : g.disc_nodes()) tn += w[p] * truth[p] * truth[p];
  std::vector<double> total, induced;
  const double levels[] = {0.001, 0.01, 0.1};
  for (double level : levels) {
    const auto r = reconstruct(add_noise(clean, level, c.noise.seed), c.medium, c.reconstruction);
    total.push_back(error_metrics(g, r.f, c.source).rel_l2);
    double d = 0.0;
    for (std::size_t p : g.disc_nodes()) d += w[p] * std::pow(r.f[p] - base.f[p], 2);
    induced.push_back(std::sqrt(d / tn));
  }
  bool ok = true;
  std::string ratios;
  for (int k = 1; k < 3; ++k) {
    const double allowed = kNoiseGrowth * levels[k] / levels[k - 1];
    const double rt = total[k] / total[k - 1], ri = induced[k] / induced[k - 1];
    ok = ok && rt <= allowed && ri <= allowed;
    ratios += fmt("[%.1f%% -> %.1f%%: total x%.2f, noise-induced x%.2f, allowed x%.1f] ", 100 * levels[k - 1],
                  100 * levels[k], rt, ri, allowed);
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  return {ok, fmt("rel L2 %.4f %.4f %.4f, noise-induced %.2e %.2e %.2e %s%.0f s", total[0], total[1], total[2],
                  induced[0], induced[1], induced[2], ratios.c_str(), secs)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"HG multipliers", hg_multipliers},
      {"integrating factor", integrating_factor},
      {"alpha-beta convolution identity", alpha_beta},
      {"Bukhgeim-Cauchy formula", cauchy},
      {"energy identity", energy},
      {"Poisson solver", poisson},
      {"forward solver ballistic oracle", ballistic},
      {"experiment 1 smooth attenuation", experiment1},
      {"experiment 2 discontinuous attenuation", experiment2},
      {"convergence in M (g = 0.2)", convergence},
      {"stability under boundary noise", stability},
  };
  std::set<int> only;
  for (int k = 1; k < argc; ++k) only.insert(std::atoi(argv[k]));
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k) + 1;
    if (!only.empty() && !only.count(id)) continue;
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", id, criteria[k].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
