#include "scatsrc/config.hpp"

#include <fstream>

#include "scatsrc/errors.hpp"

namespace scatsrc {

namespace {

template <class T>
T need(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError("missing field " + where + "." + key);
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception&) {
    throw ConfigError("wrong type for " + where + "." + key);
  }
}

template <class T>
T maybe(const Json& j, const char* key, T fallback, const std::string& where) {
  return j.contains(key) ? need<T>(j, key, where) : fallback;
}

Shape parse_shape(const Json& r, const std::string& where) {
  const auto kind = need<std::string>(r, "shape", where);
  const auto p = need<std::vector<double>>(r, "params", where);
  if (kind == "disc") {
    if (p.size() != 3 || !(p[2] > 0.0)) throw ConfigError(where + ": disc needs params [cx, cy, r > 0]");
    return Shape::disc(p[0], p[1], p[2]);
  }
  if (kind == "rect") {
    if (p.size() != 4 || !(p[0] < p[1]) || !(p[2] < p[3]))
      throw ConfigError(where + ": rect needs params [x0, x1, y0, y1] with x0 < x1, y0 < y1");
    return Shape::rect(p[0], p[1], p[2], p[3]);
  }
  throw ConfigError(where + ": unknown shape " + kind);
}

std::vector<Region> parse_regions(const Json& j, const char* key, const char* value_key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError("missing field " + where + "." + key);
  const Json& list = j.at(key);
  if (!list.is_array()) throw ConfigError(where + "." + key + " must be an array or \"builtin\"");
  std::vector<Region> out;
  for (std::size_t k = 0; k < list.size(); ++k) {
    const std::string here = where + "." + key + "[" + std::to_string(k) + "]";
    out.push_back({parse_shape(list[k], here), need<double>(list[k], value_key, here)});
  }
  return out;
}

Json shape_json(const Shape& s) {
  if (s.kind == Shape::Kind::disc) return {{"shape", "disc"}, {"params", {s.p0, s.p1, s.p2}}};
  return {{"shape", "rect"}, {"params", {s.p0, s.p1, s.p2, s.p3}}};
}

}  // namespace

MediumSpec parse_medium(const Json& j) {
  const std::string w = "medium";
  if (!j.is_object()) throw ConfigError("medium must be an object");
  const auto variant_name = need<std::string>(j, "attenuation_variant", w);
  AttenuationVariant variant;
  if (variant_name == "smooth")
    variant = AttenuationVariant::smooth;
  else if (variant_name == "discontinuous")
    variant = AttenuationVariant::discontinuous;
  else
    throw ConfigError("medium.attenuation_variant must be smooth or discontinuous");

  const double mu_s = need<double>(j, "mu_s", w);
  const double eps = need<double>(j, "epsilon", w);
  if (mu_s < 0.0) throw ConfigError("medium.mu_s must be >= 0");
  if (!(eps > 0.0)) throw ConfigError("medium.epsilon must be > 0");

  MediumSpec m;
  if (j.contains("regions") && j.at("regions").is_string()) {
    if (j.at("regions") != "builtin") throw ConfigError("medium.regions: only \"builtin\" is a named phantom");
    m.attenuation = phantom::attenuation(variant, mu_s, eps);
  } else {
    m.attenuation.mu_s = mu_s;
    m.attenuation.variant = variant;
    m.attenuation.epsilon = eps;
    m.attenuation.background_mu_a = need<double>(j, "background_mu_a", w);
    m.attenuation.regions = parse_regions(j, "regions", "mu_a", w);
  }

  const auto kernel = maybe<std::string>(j, "kernel", "hg", w);
  if (kernel == "hg") {
    const double g = need<double>(j, "g", w);
    if (!(g >= 0.0 && g < 1.0)) throw ConfigError("medium.g must lie in [0, 1)");
    m.kernel = HenyeyGreenstein{g, mu_s};
  } else if (kernel == "tabulated") {
    m.kernel = TabulatedKernel{need<std::vector<double>>(j, "sigma", w)};
  } else {
    throw ConfigError("medium.kernel must be hg or tabulated");
  }
  return m;
}

SourceField parse_source(const Json& j) {
  if (j.contains("source_regions") && j.at("source_regions").is_string()) {
    if (j.at("source_regions") != "builtin") throw ConfigError("medium.source_regions: only \"builtin\" is named");
    return phantom::source();
  }
  SourceField f;
  f.regions = parse_regions(j, "source_regions", "value", "medium");
  return f;
}

ExperimentConfig parse_experiment(const Json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig c;
  if (!j.contains("medium")) throw ConfigError("missing field medium");
  c.medium = parse_medium(j.at("medium"));
  c.source = parse_source(j.at("medium"));

  if (!j.contains("forward")) throw ConfigError("missing field forward");
  const Json& fw = j.at("forward");
  c.forward.grid_n = need<int>(fw, "grid_n", "forward");
  c.forward.n_dirs = need<int>(fw, "n_dirs", "forward");
  c.forward.tol = need<double>(fw, "tol", "forward");
  c.forward.n_boundary = maybe<int>(fw, "n_boundary", c.forward.n_boundary, "forward");
  c.forward.readout_length = maybe<double>(fw, "readout_length", c.forward.readout_length, "forward");
  c.forward.first_collision = maybe<bool>(fw, "first_collision", c.forward.first_collision, "forward");
  if (c.forward.grid_n < 8) throw ConfigError("forward.grid_n must be >= 8");
  if (c.forward.n_dirs < 4 || c.forward.n_dirs % 2) throw ConfigError("forward.n_dirs must be even and >= 4");
  if (!(c.forward.tol > 0.0)) throw ConfigError("forward.tol must be > 0");
  if (c.forward.n_boundary < 8 || c.forward.n_boundary % 2) throw ConfigError("forward.n_boundary must be even and >= 8");

  if (!j.contains("reconstruction")) throw ConfigError("missing field reconstruction");
  const Json& rc = j.at("reconstruction");
  auto& r = c.reconstruction;
  r.grid_n = need<int>(rc, "grid_n", "reconstruction");
  r.M = need<int>(rc, "M", "reconstruction");
  r.N = need<int>(rc, "N", "reconstruction");
  r.j_max = maybe<int>(rc, "J_max", r.j_max, "reconstruction");
  r.margin_cells = maybe<double>(rc, "margin_cells", r.margin_cells, "reconstruction");
  r.smoothing = maybe<bool>(rc, "smoothing", r.smoothing, "reconstruction");
  r.h_dirs = maybe<int>(rc, "h_dirs", r.h_dirs, "reconstruction");
  if (r.grid_n < 8) throw ConfigError("reconstruction.grid_n must be >= 8");
  if (r.M < 1 || r.M > r.N - 2) throw ConfigError("reconstruction: need 1 <= M <= N - 2");

  if (j.contains("noise")) {
    c.noise.level = maybe<double>(j.at("noise"), "level", 0.0, "noise");
    c.noise.seed = maybe<std::uint64_t>(j.at("noise"), "seed", 1, "noise");
    if (c.noise.level < 0.0) throw ConfigError("noise.level must be >= 0");
  }
  c.output = maybe<std::string>(j, "output", c.output, "config");
  return c;
}

ExperimentConfig load_experiment(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config: " + path.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::exception& e) {
    throw ConfigError("config is not valid JSON: " + std::string(e.what()));
  }
  return parse_experiment(j);
}

Json to_json(const ExperimentConfig& c) {
  const auto& a = c.medium.attenuation;
  Json m = {{"mu_s", a.mu_s},
            {"attenuation_variant", a.variant == AttenuationVariant::smooth ? "smooth" : "discontinuous"},
            {"epsilon", a.epsilon},
            {"background_mu_a", a.background_mu_a}};
  m["regions"] = Json::array();
  for (const Region& r : a.regions) {
    Json e = shape_json(r.shape);
    e["mu_a"] = r.value;
    m["regions"].push_back(e);
  }
  m["source_regions"] = Json::array();
  for (const Region& r : c.source.regions) {
    Json e = shape_json(r.shape);
    e["value"] = r.value;
    m["source_regions"].push_back(e);
  }
  if (const auto* hg = std::get_if<HenyeyGreenstein>(&c.medium.kernel)) {
    m["kernel"] = "hg";
    m["g"] = hg->g;
  } else {
    m["kernel"] = "tabulated";
    m["sigma"] = std::get<TabulatedKernel>(c.medium.kernel).sigma;
  }
  const auto& f = c.forward;
  const auto& r = c.reconstruction;
  return {{"medium", m},
          {"forward",
           {{"grid_n", f.grid_n},
            {"n_dirs", f.n_dirs},
            {"tol", f.tol},
            {"n_boundary", f.n_boundary},
            {"readout_length", f.readout_length},
            {"first_collision", f.first_collision}}},
          {"reconstruction",
           {{"grid_n", r.grid_n},
            {"M", r.M},
            {"N", r.N},
            {"J_max", r.j_max},
            {"margin_cells", r.margin_cells},
            {"smoothing", r.smoothing},
            {"h_dirs", r.h_dirs}}},
          {"noise", {{"level", c.noise.level}, {"seed", c.noise.seed}}},
          {"output", c.output}};
}

}  // namespace scatsrc
