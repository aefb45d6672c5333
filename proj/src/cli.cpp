#include "scatsrc/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "scatsrc/errors.hpp"

namespace scatsrc {

namespace fs = std::filesystem;

namespace {

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

Json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw IoError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

void make_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

// %.17g keeps the CSV lossless and locale-free.
std::string num(double x) {
  std::ostringstream s;
  s.imbue(std::locale::classic());
  s << std::setprecision(17) << x;
  return s.str();
}

void write_cross_section(const fs::path& path, const SourceMetrics& m) {
  std::string text = "t,f_rec,f_true\n";
  for (const auto& s : m.cross_section) text += num(s.t) + "," + num(s.rec) + "," + num(s.truth) + "\n";
  write_text(path, text);
}

Json metrics_json(const SourceMetrics& m) {
  return {{"rel_l2", m.rel_l2}, {"plateau_r", m.plateau_r}, {"plateau_b2", m.plateau_b2}};
}

Json diagnostics_json(const ReconstructionDiagnostics& d) {
  return {{"analyticity_residual", d.analyticity_residual},
          {"alpha_beta_residual", d.alpha_beta_residual},
          {"discarded_negative_modes", d.discarded_negative_modes},
          {"alpha_l1", d.alpha_l1},
          {"beta_l1", d.beta_l1},
          {"poisson_residuals", d.poisson_residuals},
          {"cascade_residuals", d.cascade_residuals},
          {"imag_ratio", d.imag_ratio}};
}

}  // namespace

BoundaryData add_noise(const BoundaryData& data, double level, std::uint64_t seed) {
  BoundaryData out = data;
  if (level == 0.0) return out;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> xi(0.0, 1.0);
  for (double& v : out.values) {
    const double r = xi(rng);
    if (v != 0.0) v *= 1.0 + level * r;
  }
  return out;
}

ForwardRun run_forward(const ExperimentConfig& c) {
  ForwardOptions opt;
  opt.n_dirs = c.forward.n_dirs;
  opt.tol = c.forward.tol;
  opt.first_collision = c.forward.first_collision;
  const Grid grid = Grid::with_margin_cells(c.forward.grid_n);
  AngularFlux flux = [&] {
    try {
      return solve_forward(c.medium, c.source, grid, opt);
    } catch (const std::exception& e) {
      throw StageError("forward_solve", e.what());
    }
  }();
  return {extract_boundary(flux, DiscDomain(c.forward.n_boundary), c.forward.readout_length), flux.iterations,
          flux.residuals};
}

void cmd_forward(const ExperimentConfig& c, const fs::path& out, std::ostream& log) {
  make_dir(out);
  const ForwardRun run = run_forward(c);
  log << "forward: " << run.iterations << " source iterations, final change "
      << (run.residuals.empty() ? 0.0 : run.residuals.back()) << "\n";
  write_boundary_data(out / "boundary_data.bin", run.data);
  Json l = {{"iterations", run.iterations},
            {"residuals", run.residuals},
            {"n_boundary", run.data.n_boundary},
            {"n_dirs", run.data.n_dirs},
            {"config", to_json(c)}};
  write_text(out / "forward_log.json", l.dump(2) + "\n");
}

Json cmd_reconstruct(const ExperimentConfig& c, const BoundaryData& data, const fs::path& out, std::ostream& log) {
  make_dir(out);
  const ReconstructionResult r = reconstruct(data, c.medium, c.reconstruction);
  for (const auto& [stage, seconds] : r.timings) log << "  " << std::left << std::setw(20) << stage << seconds << " s\n";
  const SourceMetrics m = error_metrics(r.grid, r.f, c.source);

  write_grid_field(out / "f_rec.bin", r.grid, r.f, {{"field", "f_rec"}});
  write_grid_field(out / "f_imag.bin", r.grid, r.f_imag, {{"field", "f_imag"}});
  ModeTable modes(r.grid.size(), static_cast<int>(r.modes.size()) - 1);
  for (std::size_t j = 0; j < r.modes.size(); ++j) modes.set_mode(static_cast<int>(j), r.modes[j]);
  write_mode_field(out / "modes.bin", r.grid, modes);
  write_text(out / "diagnostics.json", diagnostics_json(r.diagnostics).dump(2) + "\n");
  const Json mj = metrics_json(m);
  write_text(out / "metrics.json", mj.dump(2) + "\n");
  write_cross_section(out / "cross_section.csv", m);
  write_text(out / "config.json", to_json(c).dump(2) + "\n");
  return mj;
}

void write_pgm(const fs::path& path, const Grid& grid, std::span<const double> values) {
  double lo = 0.0, hi = 0.0;
  bool first = true;
  for (std::size_t p : grid.disc_nodes()) {
    lo = first ? values[p] : std::min(lo, values[p]);
    hi = first ? values[p] : std::max(hi, values[p]);
    first = false;
  }
  const int n = grid.n();
  std::string bytes;
  bytes.reserve(static_cast<std::size_t>(n) * n);
  for (int j = n - 1; j >= 0; --j) {
    for (int i = 0; i < n; ++i) {
      const std::size_t p = grid.index(i, j);
      const double v = grid.in_disc(p) ? values[p] : lo;
      const double t = hi > lo ? (v - lo) / (hi - lo) : 0.0;
      bytes.push_back(static_cast<char>(static_cast<unsigned char>(std::lround(255.0 * std::clamp(t, 0.0, 1.0)))));
    }
  }
  write_text(path, "P5\n" + std::to_string(n) + " " + std::to_string(n) + "\n255\n" + bytes);
  const Json side = {{"width", n}, {"height", n}, {"min", lo}, {"max", hi}, {"row0_y", 1.0}};
  write_text(path.string() + ".json", side.dump(2) + "\n");
}

void cmd_plot(const fs::path& bundle, const fs::path& out) {
  if (!fs::is_directory(bundle)) throw IoError("no bundle at " + bundle.string());
  const GridField f = read_grid_field(bundle / "f_rec.bin");
  const ExperimentConfig c = parse_experiment(read_json(bundle / "config.json"));
  make_dir(out);
  write_pgm(out / "f_rec.pgm", f.grid, f.values);
  write_pgm(out / "f_true.pgm", f.grid, sample_source(c.source, f.grid));
  write_cross_section(out / "cross_section.csv", error_metrics(f.grid, f.values, c.source));
}

Json cmd_metrics(const fs::path& bundle) {
  if (!fs::is_directory(bundle)) throw IoError("no bundle at " + bundle.string());
  const GridField f = read_grid_field(bundle / "f_rec.bin");
  const ExperimentConfig c = parse_experiment(read_json(bundle / "config.json"));
  const Json mj = metrics_json(error_metrics(f.grid, f.values, c.source));
  write_text(bundle / "metrics.json", mj.dump(2) + "\n");
  return mj;
}

namespace {

struct Args {
  std::string config, data, out, bundle, suite = "all";
  double noise = -1.0;
  long long seed = -1;
  bool override_guard = false;
};

ExperimentConfig config_for(const Args& a) {
  if (a.config.empty()) throw ConfigError("--config is required");
  ExperimentConfig c = load_experiment(a.config);
  if (!a.out.empty()) c.output = a.out;
  if (a.noise >= 0.0) c.noise.level = a.noise;
  if (a.seed >= 0) c.noise.seed = static_cast<std::uint64_t>(a.seed);
  if (c.forward.grid_n == c.reconstruction.grid_n && !a.override_guard)
    throw ConfigError("forward and reconstruction grids coincide (inverse crime); pass --override-inverse-crime-guard");
  return c;
}

int dispatch(const std::string& cmd, const Args& a) {
  if (cmd == "forward") {
    const ExperimentConfig c = config_for(a);
    cmd_forward(c, c.output, std::cout);
    std::cout << "wrote " << (fs::path(c.output) / "boundary_data.bin").string() << "\n";
    return kExitOk;
  }
  if (cmd == "reconstruct") {
    const ExperimentConfig c = config_for(a);
    const fs::path data_path = a.data.empty() ? fs::path(c.output) / "boundary_data.bin" : fs::path(a.data);
    BoundaryData data = read_boundary_data(data_path);
    if (data.n_dirs != c.forward.n_dirs || data.n_boundary != c.forward.n_boundary)
      throw IoError("data file is " + std::to_string(data.n_boundary) + " x " + std::to_string(data.n_dirs) +
                    ", config expects " + std::to_string(c.forward.n_boundary) + " x " +
                    std::to_string(c.forward.n_dirs));
    // noise goes on the in-memory copy; the clean file stays as written
    data = add_noise(data, c.noise.level, c.noise.seed);
    const fs::path out = fs::path(c.output) / "result";
    const Json m = cmd_reconstruct(c, data, out, std::cout);
    std::cout << "rel_L2 " << m["rel_l2"].get<double>() << "  plateau R " << m["plateau_r"].get<double>()
              << "  plateau B2 " << m["plateau_b2"].get<double>() << "\nbundle " << out.string() << "\n";
    return kExitOk;
  }
  if (cmd == "verify") {
    const Json report = cmd_verify(a.suite);
    std::cout << report.dump(2) << "\n";
    if (!a.out.empty()) {
      make_dir(a.out);
      write_text(fs::path(a.out) / ("verify_" + a.suite + ".json"), report.dump(2) + "\n");
    }
    return report["pass"].get<bool>() ? kExitOk : kExitFailure;
  }
  if (cmd == "plot") {
    if (a.bundle.empty()) throw ConfigError("plot needs a bundle directory");
    cmd_plot(a.bundle, a.out.empty() ? fs::path(a.bundle) : fs::path(a.out));
    return kExitOk;
  }
  if (cmd == "metrics") {
    if (a.bundle.empty()) throw ConfigError("metrics needs a bundle directory");
    std::cout << cmd_metrics(a.bundle).dump(2) << "\n";
    return kExitOk;
  }
  throw ConfigError("unknown subcommand " + cmd);
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Source reconstruction in scattering media from boundary radiation"};
  app.require_subcommand(1);
  Args a;
  auto common = [&](CLI::App* s) {
    s->add_option("--config", a.config, "experiment config (JSON)");
    s->add_option("--out", a.out, "output directory");
    s->add_flag("--override-inverse-crime-guard", a.override_guard, "allow equal forward and reconstruction grids");
  };
  auto* fwd = app.add_subcommand("forward", "simulate boundary data");
  common(fwd);
  auto* rec = app.add_subcommand("reconstruct", "reconstruct the source from a data file");
  common(rec);
  rec->add_option("--data", a.data, "boundary data file (default <out>/boundary_data.bin)");
  rec->add_option("--noise", a.noise, "relative Gaussian noise level")->check(CLI::NonNegativeNumber);
  rec->add_option("--seed", a.seed, "noise seed")->check(CLI::NonNegativeNumber);
  auto* ver = app.add_subcommand("verify", "run an invariant suite");
  ver->add_option("suite", a.suite, "geometry|media|forward|transforms|aanalytic|poisson|reconstruction|all");
  ver->add_option("--out", a.out, "directory for the JSON report");
  auto* plot = app.add_subcommand("plot", "heatmap and cross-section of a result bundle");
  plot->add_option("bundle", a.bundle, "result bundle directory")->required();
  plot->add_option("--out", a.out, "output directory (default: the bundle)");
  auto* met = app.add_subcommand("metrics", "recompute error metrics of a result bundle");
  met->add_option("bundle", a.bundle, "result bundle directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }
  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    return dispatch(cmd, a);
  } catch (const ConfigError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const StageError& e) {
    std::cerr << "numerical failure in stage " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace scatsrc
