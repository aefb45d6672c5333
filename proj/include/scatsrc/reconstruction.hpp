#pragma once

#include <string>
#include <utility>
#include <vector>

#include "scatsrc/aanalytic.hpp"
#include "scatsrc/forward_rte.hpp"
#include "scatsrc/media.hpp"

namespace scatsrc {

struct ReconstructionConfig {
  int M = 8;               // scattering truncation order
  int N = 64;              // depth of the analytic sequence v
  int grid_n = 128;
  double margin_cells = 2.0;
  int j_max = -1;          // Cauchy correction terms; < 0 -> all available
  bool smoothing = false;  // 3-point average of every cascade right-hand side
  int h_dirs = 360;        // directions used to expand e^{-+h}
};

struct ReconstructionDiagnostics {
  double analyticity_residual = 0.0;  // ||delbar v_{-n} + del v_{-n-2}|| / ||delbar v_{-n}|| (interior, l2)
  double alpha_beta_residual = 0.0;   // max |(alpha * beta)_k - delta_k0|, k <= N/2
  double discarded_negative_modes = 0.0;
  double alpha_l1 = 0.0;
  double beta_l1 = 0.0;
  std::vector<double> poisson_residuals;  // per cascade level
  std::vector<double> cascade_residuals;  // relative l2 transport residual per level n = M-1 .. 0
  double imag_ratio = 0.0;                // ||Im f|| / ||f||
};

struct ReconstructionResult {
  Grid grid;
  std::vector<double> f;       // Re of the assembled source
  std::vector<double> f_imag;  // Im residue
  std::vector<Field> modes;    // modes[j] = u_{-j}, j = 0..M+1
  ModeTable v;                 // v^{(M)} on the grid (trusted nodes)
  ReconstructionDiagnostics diagnostics;
  std::vector<std::pair<std::string, double>> timings;  // seconds per stage
};

// Nonpositive angular modes g_0 .. g_{-N} of the data at each boundary node.
ModeTable boundary_modes(const BoundaryData& data, int N);

// v|_Gamma = e^{-G} L^M g.
ModeTable trace_transform(const ModeTable& g, const CoefTable& alpha, int M);

// u_{-M-n} = sum_k beta_k v_{-n-k}.
ModeTable recover_deep_modes(const ModeTable& v, const CoefTable& beta);

// Solves for u_{-M+1} .. u_0 given the seeds u_{-M-1}, u_{-M} on the grid.
// sigma holds sigma_0..sigma_M, g the boundary modes (order >= M).
// Returns modes[j] = u_{-j} for j = 0..M+1.
struct CascadeOutput {
  std::vector<Field> modes;
  std::vector<double> poisson_residuals;
};
CascadeOutput poisson_cascade(const Grid& grid, const Field& seed_deep, const Field& seed, const ModeTable& g,
                              const AttenuationField& a, std::span<const double> sigma, int M, bool smoothing);

// f = 2 Re(del u_{-1}) + (a - sigma_0) u_0; returns (Re f, Im f).
std::pair<std::vector<double>, std::vector<double>> assemble_source(const Grid& grid, const Field& u0, const Field& u1,
                                                                    const AttenuationField& a, double sigma0);

// Full pipeline. Stage failures are rethrown as StageError.
ReconstructionResult reconstruct(const BoundaryData& data, const MediumSpec& medium, const ReconstructionConfig& config);

struct CrossSectionSample {
  double t;
  double rec;
  double truth;
};

struct SourceMetrics {
  double rel_l2 = 0.0;
  double plateau_r = 0.0;   // mean over R eroded by 0.05
  double plateau_b2 = 0.0;  // mean over B2 eroded by 0.05
  std::vector<CrossSectionSample> cross_section;
};

// Source sampled on the grid nodes (zero off the disc).
std::vector<double> sample_source(const SourceField& f, const Grid& grid);

// Metrics against the phantom source; the cross-section runs along the
// diameter in direction (-1/2, sqrt(3)/2), i.e. the line y = -sqrt(3) x.
SourceMetrics error_metrics(const Grid& grid, std::span<const double> f_rec, const SourceField& truth,
                            int n_cross = 201, double erosion = 0.05);

}  // namespace scatsrc
