#include "scatsrc/reconstruction.hpp"

#include <chrono>
#include <cmath>

#include "scatsrc/errors.hpp"
#include "scatsrc/fft.hpp"
#include "scatsrc/poisson_solver.hpp"
#include "scatsrc/xray_transforms.hpp"

namespace scatsrc {

ModeTable boundary_modes(const BoundaryData& data, int N) {
  if (N < 0 || data.n_dirs < 2 * N + 2) throw DomainError("boundary_modes: need n_dirs >= 2N + 2");
  ModeTable g(data.n_boundary, N);
  RealDft dft(data.n_dirs);
  std::vector<double> samples(data.n_dirs);
  std::vector<cplx> modes(dft.n_modes());
  for (int b = 0; b < data.n_boundary; ++b) {
    for (int l = 0; l < data.n_dirs; ++l) samples[l] = data.at(b, l);
    dft.forward(samples, modes);
    // real data: u_{-n} = conj(u_n)
    for (int n = 0; n <= N; ++n) g.at(b, n) = std::conj(modes[n]);
  }
  return g;
}

ModeTable trace_transform(const ModeTable& g, const CoefTable& alpha, int M) {
  return conv_apply(alpha.coefs, left_shift(g, M));
}

ModeTable recover_deep_modes(const ModeTable& v, const CoefTable& beta) { return conv_apply(beta.coefs, v); }

CascadeOutput poisson_cascade(const Grid& grid, const Field& seed_deep, const Field& seed, const ModeTable& g,
                              const AttenuationField& a, std::span<const double> sigma, int M, bool smoothing) {
  if (M < 1) throw DomainError("poisson_cascade: M must be >= 1");
  if (static_cast<int>(sigma.size()) < M + 1) throw DomainError("poisson_cascade: need sigma_0..sigma_M");
  if (g.order() < M) throw DomainError("poisson_cascade: boundary modes shallower than M");
  if (seed.size() != grid.size() || seed_deep.size() != grid.size())
    throw DomainError("poisson_cascade: seeds must cover the grid");

  std::vector<double> att(grid.size(), 0.0);
  for (std::size_t p : grid.disc_nodes()) att[p] = a(grid.node(p));

  CascadeOutput out;
  out.modes.assign(M + 2, Field(grid.size(), 0.0));
  out.modes[M + 1] = seed_deep;
  out.modes[M] = seed;
  const PoissonSolver solver(grid);
  DirichletProblem problem;
  problem.boundary.resize(g.n_samples());
  // level n = M-1 .. 0: Delta u_{-n} = -4 del^2 u_{-n-2} - 4 del[(a - sigma_{n+1}) u_{-n-1}]
  for (int n = M - 1; n >= 0; --n) {
    const Field& deep = out.modes[n + 2];
    const Field& next = out.modes[n + 1];
    Field weighted(grid.size(), 0.0);
    for (std::size_t p : grid.disc_nodes()) weighted[p] = (att[p] - sigma[n + 1]) * next[p];
    const Field d2 = del2(grid, deep);
    const Field d1 = del(grid, weighted);
    problem.rhs.assign(grid.size(), 0.0);
    for (std::size_t p : grid.disc_nodes()) problem.rhs[p] = -4.0 * (d2[p] + d1[p]);
    if (smoothing) problem.rhs = smooth3(grid, problem.rhs);
    for (std::size_t b = 0; b < g.n_samples(); ++b) problem.boundary[b] = g.at(b, n);
    out.modes[n] = solver.solve(problem);
    out.poisson_residuals.push_back(solver.last_residual());
  }
  return out;
}

std::pair<std::vector<double>, std::vector<double>> assemble_source(const Grid& grid, const Field& u0, const Field& u1,
                                                                    const AttenuationField& a, double sigma0) {
  const Field d = del(grid, u1);
  std::vector<double> re(grid.size(), 0.0), im(grid.size(), 0.0);
  for (std::size_t p : grid.disc_nodes()) {
    const cplx f = 2.0 * d[p].real() + (a(grid.node(p)) - sigma0) * u0[p];
    re[p] = f.real();
    im[p] = f.imag();
  }
  return {re, im};
}

namespace {

using Clock = std::chrono::steady_clock;

template <class F>
auto stage(const char* name, ReconstructionResult& result, F&& body) {
  const auto t0 = Clock::now();
  try {
    if constexpr (std::is_void_v<decltype(body())>) {
      body();
      result.timings.emplace_back(name, std::chrono::duration<double>(Clock::now() - t0).count());
    } else {
      auto value = body();
      result.timings.emplace_back(name, std::chrono::duration<double>(Clock::now() - t0).count());
      return value;
    }
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

double alpha_beta_residual(const CoefTable& alpha, const CoefTable& beta, int kmax) {
  double worst = 0.0;
  for (std::size_t s = 0; s < alpha.coefs.n_samples(); ++s) {
    for (int k = 0; k <= kmax; ++k) {
      cplx sum = 0.0;
      for (int j = 0; j <= k; ++j) sum += alpha.coefs.at(s, j) * beta.coefs.at(s, k - j);
      worst = std::max(worst, std::abs(sum - (k == 0 ? 1.0 : 0.0)));
    }
  }
  return worst;
}

// Nodes whose four neighbours are trusted: there the centred stencils of the
// residual checks stay inside the Cauchy region.
std::vector<std::size_t> deep_nodes(const Grid& grid) {
  std::vector<std::size_t> out;
  const int n = grid.n();
  for (std::size_t p : grid.trusted_nodes()) {
    const int i = grid.col(p), j = grid.row(p);
    if (i < 1 || j < 1 || i > n - 2 || j > n - 2) continue;
    if (grid.trusted(grid.index(i + 1, j)) && grid.trusted(grid.index(i - 1, j)) && grid.trusted(grid.index(i, j + 1)) &&
        grid.trusted(grid.index(i, j - 1)))
      out.push_back(p);
  }
  return out;
}

}  // namespace

ReconstructionResult reconstruct(const BoundaryData& data, const MediumSpec& medium, const ReconstructionConfig& cfg) {
  if (cfg.M < 1 || cfg.M > cfg.N - 2) throw DomainError("reconstruct: need 1 <= M <= N - 2");
  const int M = cfg.M, N = cfg.N;
  ReconstructionResult result{Grid::with_margin_cells(cfg.grid_n, cfg.margin_cells), {}, {}, {}, {}, {}, {}};
  const Grid& grid = result.grid;
  const AttenuationField& a = medium.attenuation;
  auto& diag = result.diagnostics;

  const ModeTable g = stage("boundary_modes", result, [&] { return boundary_modes(data, M + N); });
  const DiscDomain domain(data.n_boundary);

  // Interior evaluation points: trusted nodes, then one ring point per margin node.
  std::vector<Vec2> points;
  for (std::size_t p : grid.trusted_nodes()) points.push_back(grid.node(p));
  const std::size_t n_trusted = points.size();
  const double ring = 1.0 - grid.margin();
  for (std::size_t p : grid.margin_nodes()) {
    const Vec2 z = grid.node(p);
    points.push_back(z * (ring / z.norm()));
  }

  const HOptions hopt = default_h_options(a, grid, cfg.h_dirs);
  const IntegratingFactor factor = stage("integrating_factor", result, [&] {
    return IntegratingFactor(a, hopt.n_dirs, hopt.n_s, hopt.step);
  });

  const ModeTable v_trace = stage("trace_transform", result, [&] {
    std::vector<Vec2> bpts;
    for (int b = 0; b < domain.n_boundary(); ++b) bpts.push_back(domain.node(b));
    const CoefTable alpha = exp_h_coeffs(build_h(factor, bpts), CoefSign::alpha, N);
    diag.alpha_l1 = alpha.l1_weighted();
    return trace_transform(g, alpha, M);
  });

  const ModeTable v_points = stage("extend_interior", result, [&] {
    std::vector<cplx> zs;
    for (const Vec2& z : points) zs.push_back(z.to_complex());
    return bukhgeim_cauchy(v_trace, zs, cfg.j_max, grid.margin());
  });

  const ModeTable deep = stage("recover_deep_modes", result, [&] {
    const HField h = build_h(factor, points);
    const CoefTable beta = exp_h_coeffs(h, CoefSign::beta, N);
    const CoefTable alpha = exp_h_coeffs(h, CoefSign::alpha, N);
    diag.discarded_negative_modes = beta.discarded_negative;
    diag.beta_l1 = beta.l1_weighted();
    diag.alpha_beta_residual = alpha_beta_residual(alpha, beta, N / 2);
    return recover_deep_modes(v_points, beta);
  });

  result.v = ModeTable(grid.size(), N);
  {
    const auto trusted = grid.trusted_nodes();
    for (std::size_t k = 0; k < n_trusted; ++k)
      for (int j = 0; j <= N; ++j) result.v.at(trusted[k], j) = v_points.at(k, j);
  }

  stage("analyticity_check", result, [&] {
    const auto nodes = deep_nodes(grid);
    double num = 0.0, den = 0.0;
    const int top = std::min(N - 2, M + 2);
    for (int n = 0; n <= top; ++n) {
      const Field db = delbar(grid, result.v.mode(n));
      const Field d = del(grid, result.v.mode(n + 2));
      for (std::size_t p : nodes) {
        num += std::norm(db[p] + d[p]);
        den += std::norm(db[p]);
      }
    }
    diag.analyticity_residual = den > 0.0 ? std::sqrt(num / den) : 0.0;
  });

  // Seeds u_{-M} (j = 0) and u_{-M-1} (j = 1) on the whole disc; in the margin
  // band, linear in the radius between the ring value and the boundary mode.
  Field seed(grid.size(), 0.0), seed_deep(grid.size(), 0.0);
  stage("seed_modes", result, [&] {
    const auto trusted = grid.trusted_nodes();
    for (std::size_t k = 0; k < n_trusted; ++k) {
      seed[trusted[k]] = deep.at(k, 0);
      seed_deep[trusted[k]] = deep.at(k, 1);
    }
    std::vector<cplx> g_m(g.n_samples()), g_m1(g.n_samples());
    for (std::size_t b = 0; b < g.n_samples(); ++b) {
      g_m[b] = g.at(b, M);
      g_m1[b] = g.at(b, M + 1);
    }
    const auto margin = grid.margin_nodes();
    for (std::size_t k = 0; k < margin.size(); ++k) {
      const std::size_t p = margin[k];
      const Vec2 z = grid.node(p);
      const double t = std::clamp((z.norm() - ring) / (1.0 - ring), 0.0, 1.0);
      const double phi = std::atan2(z.y, z.x);
      seed[p] = (1.0 - t) * deep.at(n_trusted + k, 0) + t * boundary_value(g_m, phi);
      seed_deep[p] = (1.0 - t) * deep.at(n_trusted + k, 1) + t * boundary_value(g_m1, phi);
    }
  });

  const std::vector<double> sigma = kernel_multipliers(medium.kernel, M);
  CascadeOutput cascade = stage("poisson_cascade", result, [&] {
    return poisson_cascade(grid, seed_deep, seed, g, a, sigma, M, cfg.smoothing);
  });
  diag.poisson_residuals = cascade.poisson_residuals;
  result.modes = std::move(cascade.modes);

  stage("cascade_check", result, [&] {
    const auto nodes = deep_nodes(grid);
    for (int n = M - 1; n >= 0; --n) {
      const Field db = delbar(grid, result.modes[n]);
      const Field d = del(grid, result.modes[n + 2]);
      double num = 0.0, den = 0.0;
      for (std::size_t p : nodes) {
        const cplx absorb = (a(grid.node(p)) - sigma[n + 1]) * result.modes[n + 1][p];
        num += std::norm(db[p] + d[p] + absorb);
        den += std::norm(absorb);
      }
      diag.cascade_residuals.push_back(den > 0.0 ? std::sqrt(num / den) : 0.0);
    }
  });

  stage("assemble_source", result, [&] {
    auto [re, im] = assemble_source(grid, result.modes[0], result.modes[1], a, sigma[0]);
    result.f = std::move(re);
    result.f_imag = std::move(im);
    double num = 0.0, den = 0.0;
    const auto w = grid.weights();
    for (std::size_t p : grid.disc_nodes()) {
      num += w[p] * result.f_imag[p] * result.f_imag[p];
      den += w[p] * (result.f[p] * result.f[p] + result.f_imag[p] * result.f_imag[p]);
    }
    diag.imag_ratio = den > 0.0 ? std::sqrt(num / den) : 0.0;
  });
  return result;
}

std::vector<double> sample_source(const SourceField& f, const Grid& grid) {
  std::vector<double> out(grid.size(), 0.0);
  for (std::size_t p : grid.disc_nodes()) out[p] = f(grid.node(p));
  return out;
}

SourceMetrics error_metrics(const Grid& grid, std::span<const double> f_rec, const SourceField& truth, int n_cross,
                            double erosion) {
  SourceMetrics m;
  const auto w = grid.weights();
  const auto f_true = sample_source(truth, grid);
  double num = 0.0, den = 0.0;
  double sum_r = 0.0, w_r = 0.0, sum_b = 0.0, w_b = 0.0;
  const Shape r = phantom::rect_r(), b2 = phantom::ball_b2();
  for (std::size_t p : grid.disc_nodes()) {
    const double e = f_rec[p] - f_true[p];
    num += w[p] * e * e;
    den += w[p] * f_true[p] * f_true[p];
    const Vec2 z = grid.node(p);
    if (r.signed_distance(z) < -erosion) {
      sum_r += w[p] * f_rec[p];
      w_r += w[p];
    }
    if (b2.signed_distance(z) < -erosion) {
      sum_b += w[p] * f_rec[p];
      w_b += w[p];
    }
  }
  m.rel_l2 = den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
  m.plateau_r = w_r > 0.0 ? sum_r / w_r : 0.0;
  m.plateau_b2 = w_b > 0.0 ? sum_b / w_b : 0.0;
  const Vec2 dir{-0.5, std::sqrt(3.0) / 2.0};
  for (int k = 0; k < n_cross; ++k) {
    const double t = -1.0 + 2.0 * k / (n_cross - 1);
    const Vec2 z = t * dir;
    m.cross_section.push_back({t, grid.interpolate(f_rec, z), truth(z)});
  }
  return m;
}

}  // namespace scatsrc
