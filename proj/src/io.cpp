#include "scatsrc/io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "scatsrc/errors.hpp"

namespace scatsrc {

static_assert(std::endian::native == std::endian::little, "array files assume a little-endian host");

namespace {

constexpr char kMagic[8] = {'S', 'C', 'A', 'T', 'S', 'R', 'C', '1'};

Json grid_json(const Grid& grid) { return {{"n", grid.n()}, {"spacing", grid.spacing()}, {"margin", grid.margin()}}; }

Grid grid_from_json(const Json& j) {
  try {
    return Grid(j.at("n").get<int>(), j.at("margin").get<double>());
  } catch (const Json::exception& e) {
    throw IoError(std::string("grid header: ") + e.what());
  } catch (const DomainError& e) {
    throw IoError(std::string("grid header: ") + e.what());
  }
}

template <class T>
T header_field(const ArrayFile& f, const char* key) {
  try {
    return f.header.at(key).get<T>();
  } catch (const Json::exception&) {
    throw IoError(std::string("header field missing or mistyped: ") + key);
  }
}

void expect_kind(const ArrayFile& f, const char* kind) {
  if (header_field<std::string>(f, "kind") != kind)
    throw IoError(std::string("expected a ") + kind + " file, found " + f.header.value("kind", "?"));
}

}  // namespace

void write_array_file(const std::filesystem::path& path, Json header, std::span<const double> payload) {
  header["count"] = payload.size();
  const std::string text = header.dump();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  const std::uint64_t len = text.size();
  out.write(kMagic, sizeof kMagic);
  out.write(reinterpret_cast<const char*>(&len), sizeof len);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.write(reinterpret_cast<const char*>(payload.data()), static_cast<std::streamsize>(payload.size_bytes()));
  if (!out) throw IoError("write failed: " + path.string());
}

ArrayFile read_array_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path.string());
  char magic[8];
  std::uint64_t len = 0;
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
    throw IoError("bad magic: " + path.string());
  if (!in.read(reinterpret_cast<char*>(&len), sizeof len)) throw IoError("truncated header: " + path.string());
  const auto total = std::filesystem::file_size(path);
  if (len > total) throw IoError("header length exceeds file size: " + path.string());
  std::string text(len, '\0');
  if (!in.read(text.data(), static_cast<std::streamsize>(len))) throw IoError("truncated header: " + path.string());
  ArrayFile f;
  try {
    f.header = Json::parse(text);
  } catch (const Json::exception& e) {
    throw IoError("malformed header in " + path.string() + ": " + e.what());
  }
  const auto count = header_field<std::uint64_t>(f, "count");
  const std::uint64_t body = total - sizeof magic - sizeof len - len;
  if (body != count * sizeof(double))
    throw IoError("payload length " + std::to_string(body) + " bytes, header says " + std::to_string(count) +
                  " values: " + path.string());
  f.payload.resize(count);
  in.read(reinterpret_cast<char*>(f.payload.data()), static_cast<std::streamsize>(body));
  if (!in) throw IoError("truncated payload: " + path.string());
  return f;
}

void write_boundary_data(const std::filesystem::path& path, const BoundaryData& data) {
  write_array_file(path, {{"kind", "boundary_data"}, {"n_boundary", data.n_boundary}, {"n_dirs", data.n_dirs}},
                   data.values);
}

BoundaryData read_boundary_data(const std::filesystem::path& path) {
  ArrayFile f = read_array_file(path);
  expect_kind(f, "boundary_data");
  const int nb = header_field<int>(f, "n_boundary"), nd = header_field<int>(f, "n_dirs");
  if (nb <= 0 || nd <= 0 || f.payload.size() != static_cast<std::size_t>(nb) * nd)
    throw IoError("boundary data dimensions disagree with payload: " + path.string());
  BoundaryData d;
  d.n_boundary = nb;
  d.n_dirs = nd;
  d.values = std::move(f.payload);
  return d;
}

void write_grid_field(const std::filesystem::path& path, const Grid& grid, std::span<const double> values,
                      const Json& extra) {
  if (values.size() != grid.size()) throw DomainError("write_grid_field: field does not match the grid");
  Json h = extra;
  h["kind"] = "grid_field";
  h.update(grid_json(grid));
  write_array_file(path, h, values);
}

GridField read_grid_field(const std::filesystem::path& path) {
  ArrayFile f = read_array_file(path);
  expect_kind(f, "grid_field");
  Grid grid = grid_from_json(f.header);
  if (f.payload.size() != grid.size()) throw IoError("grid field length disagrees with n: " + path.string());
  return {std::move(grid), std::move(f.payload), std::move(f.header)};
}

void write_mode_field(const std::filesystem::path& path, const Grid& grid, const ModeTable& modes) {
  if (modes.n_samples() != grid.size()) throw DomainError("write_mode_field: modes do not live on the grid");
  std::vector<double> flat;
  flat.reserve(2 * modes.data().size());
  for (cplx c : modes.data()) {
    flat.push_back(c.real());
    flat.push_back(c.imag());
  }
  write_array_file(path, {{"kind", "mode_field"}, {"N", modes.order()}, {"grid", grid_json(grid)}}, flat);
}

ModeTable read_mode_field(const std::filesystem::path& path) {
  ArrayFile f = read_array_file(path);
  expect_kind(f, "mode_field");
  const int N = header_field<int>(f, "N");
  const Grid grid = grid_from_json(f.header.at("grid"));
  if (N < 0 || f.payload.size() != 2 * grid.size() * (N + 1))
    throw IoError("mode field length disagrees with header: " + path.string());
  ModeTable out(grid.size(), N);
  for (std::size_t k = 0; k < out.data().size(); ++k) out.data()[k] = {f.payload[2 * k], f.payload[2 * k + 1]};
  return out;
}

}  // namespace scatsrc
