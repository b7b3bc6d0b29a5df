#include <spdlog/sinks/basic_file_sink.h>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>

#include "conewave/errors.hpp"
#include "conewave/run.hpp"

namespace fs = std::filesystem;
using namespace conewave;

namespace {

std::shared_ptr<spdlog::logger> make_logger(const fs::path& dir, bool append) {
  fs::create_directories(dir);
  auto file = std::make_shared<spdlog::sinks::basic_file_sink_mt>((dir / "log.txt").string(), !append);
  auto err = std::make_shared<spdlog::sinks::stderr_sink_mt>();
  auto log = std::make_shared<spdlog::logger>("conewave", spdlog::sinks_init_list{file, err});
  log->set_pattern("[%Y-%m-%d %H:%M:%S.%e] [%l] %v");
  log->flush_on(spdlog::level::info);
  return log;
}

std::string time_tag(double t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", t);
  return buf;
}

std::vector<int> parse_cells(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      const int n = std::stoi(item, &pos);
      if (pos != item.size() || n < 3) throw std::invalid_argument(item);
      out.push_back(n);
    } catch (const std::exception&) {
      throw UsageError("--cells expects a comma-separated list of integers >= 3, got '" + s + "'");
    }
  }
  if (out.empty()) throw UsageError("--cells is empty");
  return out;
}

void write_fields(const Simulation& sim, const FieldRequest& req, const fs::path& dir, spdlog::logger& log) {
  std::vector<double> times = req.times;
  if (times.empty()) times.push_back(sim.config().t_max);
  for (double t : times) {
    const FieldSnapshot f = sim.field(req, t);
    const std::string tag = time_tag(f.t);
    write_field_csv((dir / ("field_t" + tag + ".csv")).string(), f);
    write_wavefront_csv((dir / ("wavefront_t" + tag + ".csv")).string(), f);
    if (sim.config().vtk) write_vtk_field((dir / ("field_t" + tag + ".vtk")).string(), f, req.axis);
    log.info("field slice at t={} ({}x{} points, mode {})", tag, f.nx, f.ny, field_mode_name(req.mode));
  }
}

void write_sensors(const Simulation& sim, const fs::path& dir, spdlog::logger& log) {
  const auto series = sim.sensor_histories();
  for (std::size_t i = 0; i < series.size(); ++i) {
    const SensorSpec& s = sim.config().sensors[i];
    write_sensor_csv((dir / ("sensor_" + s.name + ".csv")).string(), series[i]);
    const PeakInfo p = dominant_arrival(series[i]);
    log.info("sensor {} ({}): dominant arrival t={:.6g} value={:.6g}", s.name, sensor_kind_name(s.kind), p.time,
             p.value);
  }
}

std::unique_ptr<Simulation> load_run(const fs::path& dir, std::shared_ptr<spdlog::logger> log) {
  RunConfig cfg = config_from_manifest((dir / "manifest.json").string());
  auto sim = std::make_unique<Simulation>(cfg, log);
  sim->set_history(read_density_csv((dir / "density.csv").string(), cfg.solver, cfg.dt,
                                    sim->discretization().vertex_count()));
  return sim;
}

int cmd_solve(const std::string& config_path, const fs::path& out) {
  const auto start = std::chrono::steady_clock::now();
  const RunConfig cfg = load_config(config_path);
  auto log = make_logger(out, false);
  try {
    log->info("scenario {} solver {} dt={} t_max={}", scenario_name(cfg.scenario), solver_name(cfg.solver), cfg.dt,
              cfg.t_max);
    Simulation sim(cfg, log);
    sim.solve();
    write_density_csv((out / "density.csv").string(), sim.history());
    if (cfg.manufactured()) {
      const ErrorNorms e = sim.manufactured_errors();
      log->info("manufactured errors: l2l2={:.6e} linf={:.6e}", e.l2l2, e.linf);
    }
    write_sensors(sim, out, *log);
    if (cfg.field.enabled()) write_fields(sim, cfg.field, out, *log);
    if (cfg.vtk) write_vtk_surface((out / "surface_final.vtk").string(), sim, cfg.steps());
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_manifest((out / "manifest.json").string(), sim, wall);
    log->info("done in {:.2f} s", wall);
  } catch (const std::exception& e) {
    log->error("{}", e.what());
    throw;
  }
  return 0;
}

int cmd_convergence(const std::string& config_path, const std::string& cells, const std::string& solvers,
                    const fs::path& out) {
  const RunConfig cfg = load_config(config_path);
  auto log = make_logger(out, false);
  std::vector<SolverKind> kinds;
  if (solvers.empty()) {
    kinds.push_back(cfg.solver);
  } else {
    std::stringstream ss(solvers);
    std::string item;
    while (std::getline(ss, item, ',')) kinds.push_back(parse_solver(item));
  }
  try {
    const auto rows = convergence_study(cfg, parse_cells(cells), kinds, log);
    write_convergence_csv((out / "convergence.csv").string(), rows);
  } catch (const std::exception& e) {
    log->error("{}", e.what());
    throw;
  }
  return 0;
}

int cmd_fields(const fs::path& run, const std::string& grid, const std::string& plane, double band,
               const std::string& mode, const std::string& extent, const std::string& times) {
  auto log = make_logger(run, true);
  try {
    auto sim = load_run(run, log);
    RunConfig c = sim->config();
    c.field.times.clear();
    apply_key(c, "field_grid", grid);
    if (!plane.empty()) apply_key(c, "field_plane", plane);
    if (!extent.empty()) apply_key(c, "field_extent", extent);
    if (!mode.empty()) apply_key(c, "field_mode", mode);
    if (!times.empty()) apply_key(c, "field_times", times);
    if (band >= 0.0) {
      c.field.band = band;
      if (mode.empty()) c.field.mode = FieldMode::Band;
    }
    validate(c);
    write_fields(*sim, c.field, run, *log);
  } catch (const std::exception& e) {
    log->error("{}", e.what());
    throw;
  }
  return 0;
}

int cmd_sensors(const fs::path& run) {
  auto log = make_logger(run, true);
  try {
    auto sim = load_run(run, log);
    write_sensors(*sim, run, *log);
  } catch (const std::exception& e) {
    log->error("{}", e.what());
    throw;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-domain boundary-integral wave scattering"};
  app.require_subcommand(1);

  std::string config, out, cells = "50,100,200,400", solvers, run, grid, plane, mode, extent, times;
  double band = -1.0;

  auto* solve = app.add_subcommand("solve", "March a scenario and write its outputs");
  solve->add_option("--config", config, "Configuration file (INI or JSON)")->required()->check(CLI::ExistingFile);
  solve->add_option("--out", out, "Output directory")->required();

  auto* conv = app.add_subcommand("convergence", "Manufactured-solution convergence table");
  conv->add_option("--config", config, "Configuration file")->required()->check(CLI::ExistingFile);
  conv->add_option("--cells", cells, "Comma-separated cell counts");
  conv->add_option("--solvers", solvers, "Comma-separated solvers (default: the configured one)");
  conv->add_option("--out", out, "Output directory")->required();

  auto* fields = app.add_subcommand("fields", "Evaluate a field slice from a solved run");
  fields->add_option("--run", run, "Run directory")->required()->check(CLI::ExistingDirectory);
  fields->add_option("--grid", grid, "NX,NY")->required();
  fields->add_option("--plane", plane, "Slice plane, e.g. x2=0");
  fields->add_option("--band", band, "Band half-width around the reflected front");
  fields->add_option("--mode", mode, "band, interior or full");
  fields->add_option("--extent", extent, "umin,umax,vmin,vmax");
  fields->add_option("--times", times, "Comma-separated times (default t_max)");

  auto* sensors = app.add_subcommand("sensors", "Recompute sensor histories of a solved run");
  sensors->add_option("--run", run, "Run directory")->required()->check(CLI::ExistingDirectory);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(ExitCode::Usage);
  }

  try {
    if (*solve) return cmd_solve(config, out);
    if (*conv) return cmd_convergence(config, cells, solvers, out);
    if (*fields) return cmd_fields(run, grid, plane, band, mode, extent, times);
    if (*sensors) return cmd_sensors(run);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::Numerical);
  }
  return 0;
}
