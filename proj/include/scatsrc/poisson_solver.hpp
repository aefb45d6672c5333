#pragma once

#include <memory>
#include <span>

#include "scatsrc/geometry.hpp"
#include "scatsrc/grid_ops.hpp"

namespace scatsrc {

// Dirichlet problem Delta u = rhs on the disc, u = boundary on the circle.
// boundary holds values at the angles 2 pi b / n_b.
struct DirichletProblem {
  Field rhs;
  std::vector<cplx> boundary;
};

// Five-point Laplacian with Shortley-Weller arms at the circle. The sparse LU
// factorisation is computed once per grid and reused for every solve (real
// and imaginary parts are solved as two right-hand sides).
//
// Nodes within 1e-3 spacing of the circle carry the boundary value directly.
class PoissonSolver {
 public:
  explicit PoissonSolver(const Grid& grid);
  ~PoissonSolver();
  PoissonSolver(PoissonSolver&&) noexcept;

  const Grid& grid() const { return grid_; }
  std::size_t n_unknowns() const;
  // Throws SolverError when the relative residual exceeds 1e-10.
  Field solve(const DirichletProblem& problem) const;
  double last_residual() const { return last_residual_; }

 private:
  struct Impl;
  Grid grid_;
  std::unique_ptr<Impl> impl_;
  mutable double last_residual_ = 0.0;
};

Field solve_dirichlet(const Grid& grid, const DirichletProblem& problem);

// Periodic 4-point cubic interpolation of uniform boundary samples at angle phi.
cplx boundary_value(std::span<const cplx> samples, double phi);

}  // namespace scatsrc
