#pragma once

#include <filesystem>
#include <string>

#include "scatsrc/io.hpp"
#include "scatsrc/media.hpp"
#include "scatsrc/reconstruction.hpp"

namespace scatsrc {

// Malformed or incomplete configuration (maps to the usage exit code).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ForwardConfig {
  int grid_n = 256;
  int n_dirs = 360;
  double tol = 1e-8;
  int n_boundary = 1024;
  double readout_length = 10.0;  // > 2 integrates the whole chord
  bool first_collision = false;
};

struct NoiseConfig {
  double level = 0.0;
  std::uint64_t seed = 1;
};

struct ExperimentConfig {
  MediumSpec medium;
  SourceField source;
  ForwardConfig forward;
  ReconstructionConfig reconstruction;
  NoiseConfig noise;
  std::string output = "out";
};

// Medium block:
//   {g, mu_s, kernel: "hg" | "tabulated", sigma: [..] (tabulated only),
//    attenuation_variant: "smooth" | "discontinuous", epsilon, background_mu_a,
//    regions: [{shape: "disc" | "rect", params: [..], mu_a}],
//    source_regions: [{shape, params, value}]}
// "regions" / "source_regions" may be the string "builtin" for the phantom.
MediumSpec parse_medium(const Json& j);
SourceField parse_source(const Json& j);

// Whole experiment: {medium, forward, reconstruction, noise?, output?}.
// Every field of medium, forward.{grid_n, n_dirs, tol} and
// reconstruction.{grid_n, M, N} is required.
ExperimentConfig parse_experiment(const Json& j);
ExperimentConfig load_experiment(const std::filesystem::path& path);

Json to_json(const ExperimentConfig& c);

}  // namespace scatsrc
