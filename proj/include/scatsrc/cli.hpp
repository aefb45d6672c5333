#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "scatsrc/config.hpp"

namespace scatsrc {

enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitUsage = 2, kExitIo = 3, kExitNumerical = 4 };

// Multiplicative Gaussian noise on the outgoing samples: u <- u (1 + level * xi),
// xi ~ N(0, 1) drawn from mt19937_64(seed) in storage order. Incoming entries stay zero.
BoundaryData add_noise(const BoundaryData& data, double level, std::uint64_t seed);

struct ForwardRun {
  BoundaryData data;
  int iterations = 0;
  std::vector<double> residuals;
};
// Forward solve on the config's forward grid plus boundary readout.
ForwardRun run_forward(const ExperimentConfig& config);

// Writes <out>/boundary_data.bin and <out>/forward_log.json.
void cmd_forward(const ExperimentConfig& config, const std::filesystem::path& out, std::ostream& log);

// Writes the result bundle into `out`: f_rec.bin, f_imag.bin, modes.bin,
// diagnostics.json, metrics.json, cross_section.csv, config.json.
// Returns the metrics as JSON.
Json cmd_reconstruct(const ExperimentConfig& config, const BoundaryData& data, const std::filesystem::path& out,
                     std::ostream& log);

// {suite, checks: [{name, value, tolerance, pass}], pass}. Unknown suites throw ConfigError.
Json cmd_verify(const std::string& suite);

// Heatmap f_rec.pgm (+ f_rec.pgm.json with min/max) and cross_section.csv from a bundle.
void cmd_plot(const std::filesystem::path& bundle, const std::filesystem::path& out);

// Recomputes metrics.json of a bundle against the source in its config.json.
Json cmd_metrics(const std::filesystem::path& bundle);

// Writes a P5 grayscale image, row 0 at y = +1; off-disc pixels get the minimum.
void write_pgm(const std::filesystem::path& path, const Grid& grid, std::span<const double> values);

int run_cli(int argc, char** argv);

}  // namespace scatsrc
