#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "scatsrc/aanalytic.hpp"
#include "scatsrc/forward_rte.hpp"
#include "scatsrc/geometry.hpp"

namespace scatsrc {

using Json = nlohmann::json;

// On-disk layout shared by every array file:
//   8-byte magic "SCATSRC1", uint64 header length (little endian),
//   UTF-8 JSON header, then `count` float64 values (little endian).
// The header always carries "kind" and "count".
struct ArrayFile {
  Json header;
  std::vector<double> payload;
};

void write_array_file(const std::filesystem::path& path, Json header, std::span<const double> payload);
// Throws IoError on a missing file, wrong magic, malformed header or a payload
// length that disagrees with the header.
ArrayFile read_array_file(const std::filesystem::path& path);

// BoundaryData: header {kind: "boundary_data", n_boundary, n_dirs}.
void write_boundary_data(const std::filesystem::path& path, const BoundaryData& data);
BoundaryData read_boundary_data(const std::filesystem::path& path);

// Real grid field in row-major node order: header {kind: "grid_field", n, spacing, margin}.
void write_grid_field(const std::filesystem::path& path, const Grid& grid, std::span<const double> values,
                      const Json& extra = Json::object());
struct GridField {
  Grid grid;
  std::vector<double> values;
  Json header;
};
GridField read_grid_field(const std::filesystem::path& path);

// Modes u_0 .. u_{-N} on the grid, interleaved (re, im) per node and mode:
// header {kind: "mode_field", N, grid: {n, spacing, margin}}.
void write_mode_field(const std::filesystem::path& path, const Grid& grid, const ModeTable& modes);
ModeTable read_mode_field(const std::filesystem::path& path);

}  // namespace scatsrc
