#include "scatsrc/poisson_solver.hpp"

#include <algorithm>
#include <array>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <cmath>

#include "scatsrc/errors.hpp"

namespace scatsrc {

namespace {

constexpr double kResidualTol = 1e-10;

struct Arm {
  double length;
  long neighbour;  // unknown index, or -1 when the arm ends on the circle
  double phi;      // angle of the circle crossing when neighbour < 0
};

}  // namespace

cplx boundary_value(std::span<const cplx> samples, double phi) {
  const int n = static_cast<int>(samples.size());
  if (n < 4) throw DomainError("boundary_value: need at least 4 samples");
  double u = phi / (2.0 * kPi) * n;
  u -= n * std::floor(u / n);
  const int k = static_cast<int>(std::floor(u));
  const double t = u - k + 1.0;  // position relative to sample k-1
  auto at = [&](int i) { return samples[((i % n) + n) % n]; };
  const double w0 = -(t - 1) * (t - 2) * (t - 3) / 6.0;
  const double w1 = t * (t - 2) * (t - 3) / 2.0;
  const double w2 = -t * (t - 1) * (t - 3) / 2.0;
  const double w3 = t * (t - 1) * (t - 2) / 6.0;
  return w0 * at(k - 1) + w1 * at(k) + w2 * at(k + 1) + w3 * at(k + 2);
}

struct PoissonSolver::Impl {
  std::vector<long> unknown;                // grid node -> unknown index or -1
  std::vector<std::size_t> node;            // unknown -> grid node
  std::vector<std::size_t> boundary_nodes;  // disc nodes pinned to the circle
  std::vector<std::array<Arm, 4>> arms;
  Eigen::SparseMatrix<double> matrix;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
};

PoissonSolver::PoissonSolver(const Grid& grid) : grid_(grid), impl_(std::make_unique<Impl>()) {
  const double h = grid.spacing();
  const double pin = 1.0 - 1e-3 * h;
  auto& m = *impl_;
  m.unknown.assign(grid.size(), -1);
  for (std::size_t p : grid.disc_nodes()) {
    if (grid.node(p).norm() > pin) {
      m.boundary_nodes.push_back(p);
    } else {
      m.unknown[p] = static_cast<long>(m.node.size());
      m.node.push_back(p);
    }
  }
  if (m.node.empty()) throw DomainError("PoissonSolver: no interior nodes");

  const int n = grid.n();
  std::vector<Eigen::Triplet<double>> triplets;
  m.arms.resize(m.node.size());
  for (std::size_t r = 0; r < m.node.size(); ++r) {
    const std::size_t p = m.node[r];
    const Vec2 z = grid.node(p);
    const int i = grid.col(p), j = grid.row(p);
    const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
    for (int a = 0; a < 4; ++a) {
      const int ii = i + di[a], jj = j + dj[a];
      const long q = (ii >= 0 && jj >= 0 && ii < n && jj < n) ? m.unknown[grid.index(ii, jj)] : -1;
      if (q >= 0) {
        m.arms[r][a] = {h, q, 0.0};
        continue;
      }
      // distance to the circle along the axis
      const double along = di[a] != 0 ? z.x * di[a] : z.y * dj[a];
      const double across = di[a] != 0 ? z.y : z.x;
      const double len = std::sqrt(std::max(0.0, 1.0 - across * across)) - along;
      const Vec2 hit = z + len * Vec2{double(di[a]), double(dj[a])};
      m.arms[r][a] = {std::clamp(len, 1e-6 * h, h), -1, std::atan2(hit.y, hit.x)};
    }
    const auto& A = m.arms[r];
    const double cx = 2.0 / (A[0].length + A[1].length), cy = 2.0 / (A[2].length + A[3].length);
    triplets.emplace_back(r, r, -cx * (1.0 / A[0].length + 1.0 / A[1].length) - cy * (1.0 / A[2].length + 1.0 / A[3].length));
    for (int a = 0; a < 4; ++a) {
      if (A[a].neighbour < 0) continue;
      triplets.emplace_back(r, A[a].neighbour, (a < 2 ? cx : cy) / A[a].length);
    }
  }
  m.matrix.resize(m.node.size(), m.node.size());
  m.matrix.setFromTriplets(triplets.begin(), triplets.end());
  m.matrix.makeCompressed();
  m.lu.analyzePattern(m.matrix);
  m.lu.factorize(m.matrix);
  if (m.lu.info() != Eigen::Success) throw SolverError("PoissonSolver: factorisation failed", 0.0);
}

PoissonSolver::~PoissonSolver() = default;
PoissonSolver::PoissonSolver(PoissonSolver&&) noexcept = default;

std::size_t PoissonSolver::n_unknowns() const { return impl_->node.size(); }

Field PoissonSolver::solve(const DirichletProblem& problem) const {
  const auto& m = *impl_;
  if (problem.rhs.size() != grid_.size()) throw DomainError("PoissonSolver: rhs must cover the grid");
  const std::size_t nu = m.node.size();
  Eigen::MatrixXd b(nu, 2);
  for (std::size_t r = 0; r < nu; ++r) {
    const auto& A = m.arms[r];
    const double cx = 2.0 / (A[0].length + A[1].length), cy = 2.0 / (A[2].length + A[3].length);
    cplx value = problem.rhs[m.node[r]];
    for (int a = 0; a < 4; ++a) {
      if (A[a].neighbour >= 0) continue;
      value -= (a < 2 ? cx : cy) / A[a].length * boundary_value(problem.boundary, A[a].phi);
    }
    b(r, 0) = value.real();
    b(r, 1) = value.imag();
  }
  const Eigen::MatrixXd x = m.lu.solve(b);
  const double scale = std::max(b.norm(), 1e-300);
  last_residual_ = (m.matrix * x - b).norm() / scale;
  if (!(last_residual_ <= kResidualTol)) throw SolverError("PoissonSolver: residual above tolerance", last_residual_);

  Field out(grid_.size(), 0.0);
  for (std::size_t r = 0; r < nu; ++r) out[m.node[r]] = {x(r, 0), x(r, 1)};
  for (std::size_t p : m.boundary_nodes) {
    const Vec2 z = grid_.node(p);
    out[p] = boundary_value(problem.boundary, std::atan2(z.y, z.x));
  }
  return out;
}

Field solve_dirichlet(const Grid& grid, const DirichletProblem& problem) {
  return PoissonSolver(grid).solve(problem);
}

}  // namespace scatsrc
