#include "conewave/run.hpp"

#include <spdlog/spdlog.h>

#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "conewave/errors.hpp"
#include "conewave/parallel.hpp"

namespace conewave {

ScenarioModel build_model(const RunConfig& c) {
  validate(c);
  ScenarioModel m;
  if (c.dim == 2)
    m.mesh = circle_mesh_2d(c.cells);
  else
    m.mesh = c.mesh_file.empty() ? icosphere_mesh(c.level) : load_off(c.mesh_file);

  const double U = c.mach;
  m.field = SpeedField::constant(1.0);
  switch (c.scenario) {
    case Scenario::ManufacturedFixedCircle: m.motion = InterfaceMotion::expanding_circle(1.0, 0.0); break;
    case Scenario::ManufacturedExpandingCircle: m.motion = InterfaceMotion::expanding_circle(1.0, U); break;
    case Scenario::DopplerFixed: m.motion = InterfaceMotion::fixed_sphere(1.0); break;
    case Scenario::DopplerLeft:
      m.motion = InterfaceMotion::rigid_translation(Vec3::Zero(), Vec3(-U, 0.0, 0.0));
      break;
    case Scenario::DopplerRight: m.motion = InterfaceMotion::rigid_translation(Vec3::Zero(), Vec3(U, 0.0, 0.0)); break;
    case Scenario::DopplerRising:
    case Scenario::MachSweep: m.motion = InterfaceMotion::rising_sphere(Vec3::Zero(), U, 1.0); break;
    case Scenario::TurbineFixed:
    case Scenario::TurbineRotating: m.motion = InterfaceMotion::rotating_turbine(U); break;
    case Scenario::GasBubble:
      m.motion = InterfaceMotion::fixed_sphere(1.0);
      m.field = SpeedField::tanh_inclusion(1.0, c.c_inside, c.layer_width, 1.0);
      break;
    case Scenario::TimeBenchmark:
      m.motion = InterfaceMotion::expanding_circle(1.0, 0.0);
      m.field = SpeedField::time_tanh(c.c_final);
      break;
    case Scenario::Fireball: {
      FireballParams p;
      p.delta_theta = c.delta_theta;
      p.center_velocity = Vec3(0.0, 0.0, U);
      m.motion = InterfaceMotion::rising_sphere(p.center0, U, p.radius);
      m.field = SpeedField::atmosphere_fireball(p);
      break;
    }
  }
  m.travel_time = c.travel_time;
  // thin layers need more chord nodes than the default
  if (c.scenario == Scenario::GasBubble && c.layer_width < 0.1 && m.travel_time.quadrature_points == 16)
    m.travel_time.quadrature_points = 48;

  const Vec3 d = c.wave_direction.normalized();
  switch (c.wave) {
    case WaveKind::GaussianPacket: m.wave = IncidentWave::packet(d, c.x0, c.width); break;
    case WaveKind::GaussianTrain: m.wave = IncidentWave::train(d, c.x0, c.width, c.period, c.pulses); break;
    case WaveKind::ModulatedTrain:
      m.wave = IncidentWave::modulated(d, c.x0, c.width, c.f0, c.period, c.pulses);
      break;
  }
  return m;
}

Simulation::Simulation(const RunConfig& cfg, std::shared_ptr<spdlog::logger> log)
    : cfg_(cfg), log_(std::move(log)), model_(build_model(cfg)) {
  tt_ = std::make_unique<TravelTime>(model_.travel_time, model_.field);
  const int K = cfg_.steps();
  std::vector<double> grid(K + 1);
  for (int k = 0; k <= K; ++k) grid[k] = k * cfg_.dt;
  audit_ = subsonic_audit(model_.motion, model_.mesh, model_.field, grid);
  if (log_)
    log_->info("subsonic audit: max Mach {:.6g} at vertex {} t={:.6g}, against ambient speed {:.6g} ({})",
               audit_.max_mach, audit_.vertex, audit_.time, audit_.max_ambient_mach, audit_.passed ? "pass" : "fail");
  require_subsonic(audit_);
  const auto t0 = std::chrono::steady_clock::now();
  disc_ = std::make_unique<Discretization>(model_.mesh, model_.motion, *tt_, cfg_.rule_points, cfg_.dt, K,
                                           cfg_.refine);
  if (log_)
    log_->info("discretization: {} vertices, {} elements, {} source points, {} steps, h={:.4g} ({:.2f} s)",
               model_.mesh.vertex_count(), model_.mesh.element_count(), disc_->source_count(), K, model_.mesh.h,
               std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
}

Simulation::~Simulation() = default;

Eigen::VectorXd Simulation::boundary_data(int k) const {
  const double t = k * cfg_.dt;
  if (!cfg_.manufactured()) return conewave::boundary_data(model_.wave, disc_->level(k).frame);
  double F;
  if (cfg_.solver == SolverKind::DL)
    F = circle_double_layer_trace(manufactured_density_dt, manufactured_density, t);
  else
    F = circle_single_layer(manufactured_density, 1.0 + cfg_.mach * t, t, 1.0, cfg_.mach);
  return Eigen::VectorXd::Constant(disc_->vertex_count(), F);
}

MarchOptions Simulation::march_options() const {
  MarchOptions o;
  o.smoothing = cfg_.smoothing;
  o.rynne = cfg_.rynne;
  o.nu_factor = cfg_.nu_factor;
  o.passes = cfg_.passes;
  if (log_) {
    const int K = cfg_.steps();
    const int every = std::max(1, K / 10);
    auto log = log_;
    o.on_step = [log, every, K](int k, const DensityHistory& h) {
      if (k % every == 0 || k == K) log->info("step {}/{}: |density|_inf = {:.6g}", k, K, h.density(k).cwiseAbs().maxCoeff());
    };
  }
  return o;
}

const DensityHistory& Simulation::solve() {
  const auto t0 = std::chrono::steady_clock::now();
  if (log_) log_->info("marching {} solver over {} steps", solver_name(cfg_.solver), cfg_.steps());
  history_ = march(cfg_.solver, *disc_, [this](int k) { return boundary_data(k); }, march_options());
  evaluator_.reset();
  if (log_)
    log_->info("march finished in {:.2f} s",
               std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  return *history_;
}

void Simulation::set_history(DensityHistory h) {
  if (h.steps() != cfg_.steps()) throw ConfigError("density history does not match the configured time grid");
  if (h.data.empty())
    for (int k = 0; k <= h.steps(); ++k) h.data.push_back(boundary_data(k));
  history_ = std::move(h);
  evaluator_.reset();
}

const DensityHistory& Simulation::history() const {
  if (!history_) throw ConfigError("the simulation has not been solved");
  return *history_;
}

ErrorNorms Simulation::manufactured_errors() const {
  if (!cfg_.manufactured()) throw ConfigError("errors are defined for manufactured scenarios only");
  return relative_errors(history(), manufactured_density);
}

const ReflectedArrival& Simulation::arrival() const {
  if (!arrival_)
    arrival_ = std::make_unique<ReflectedArrival>(*tt_, model_.wave, model_.motion, model_.mesh, cfg_.t_max,
                                                  cfg_.oversample);
  return *arrival_;
}

const FieldEvaluator& Simulation::evaluator() const {
  if (!evaluator_) evaluator_ = std::make_unique<FieldEvaluator>(*disc_, history());
  return *evaluator_;
}

std::vector<SensorSeries> Simulation::sensor_histories() const {
  std::vector<SensorSeries> out;
  for (const SensorSpec& s : cfg_.sensors) out.push_back(sensor_history(s, evaluator(), arrival(), *disc_));
  return out;
}

double Simulation::default_band() const { return 2.0 * cfg_.dt * model_.field.c_max(); }

int Simulation::level_of(double t) const {
  const double r = t / cfg_.dt;
  const long k = std::lround(r);
  if (std::abs(r - k) > 1e-9 * std::max(1.0, r) || k < 1 || k > cfg_.steps())
    throw ConfigError("time " + std::to_string(t) + " is not a level of the time grid");
  return static_cast<int>(k);
}

FieldSnapshot Simulation::field(const FieldRequest& req, double t) const {
  if (!req.enabled()) throw ConfigError("field request needs a grid");
  FieldSnapshot f;
  f.k = level_of(t);
  f.t = f.k * cfg_.dt;
  f.nx = req.nx;
  f.ny = req.ny;
  int u = -1, v = -1;
  for (int a = 0; a < 3; ++a) {
    if (a == req.axis) continue;
    (u < 0 ? u : v) = a;
  }
  const auto& e = req.extent;
  for (int j = 0; j < req.ny; ++j)
    for (int i = 0; i < req.nx; ++i) {
      Vec3 x = Vec3::Zero();
      x[req.axis] = req.offset;
      x[u] = e[0] + (e[1] - e[0]) * i / (req.nx - 1);
      x[v] = e[2] + (e[3] - e[2]) * j / (req.ny - 1);
      f.points.push_back(x);
    }
  const double band = req.band < 0.0 ? default_band() : req.band;
  const FieldEvaluator& ev = evaluator();
  const ReflectedArrival& ra = arrival();
  f.phi.assign(f.points.size(), 0.0);
  f.trfl.assign(f.points.size(), 0.0);
  parallel_for(f.points.size(), [&](std::size_t i) {
    f.trfl[i] = ra(f.points[i]);
    if (model_.motion.inside(f.points[i], f.t))
      f.phi[i] = std::numeric_limits<double>::quiet_NaN();
    else
      f.phi[i] = ev.masked(f.points[i], f.k, f.trfl[i], req.mode, band);
  });
  return f;
}

std::vector<ConvergenceRow> convergence_study(const RunConfig& base, const std::vector<int>& cells,
                                              const std::vector<SolverKind>& solvers,
                                              std::shared_ptr<spdlog::logger> log) {
  if (base.scenario != Scenario::ManufacturedFixedCircle && base.scenario != Scenario::ManufacturedExpandingCircle)
    throw ConfigError("convergence needs a manufactured 2D scenario");
  std::vector<ConvergenceRow> rows;
  for (SolverKind kind : solvers) {
    const std::size_t first = rows.size();
    for (int N : cells) {
      RunConfig c = base;
      c.solver = kind;
      c.cells = N;
      c.dt = 5.0 / (2.0 * N);
      c.sensors.clear();
      c.field.nx = c.field.ny = 0;
      Simulation sim(c);
      sim.solve();
      ConvergenceRow r;
      r.solver = kind;
      r.cells = N;
      r.dt = c.dt;
      r.errors = sim.manufactured_errors();
      if (rows.size() > first) {
        const ConvergenceRow& p = rows.back();
        const double ratio = std::log(static_cast<double>(N) / p.cells);
        r.order_l2l2 = std::log(p.errors.l2l2 / r.errors.l2l2) / ratio;
        r.order_linf = std::log(p.errors.linf / r.errors.linf) / ratio;
      }
      if (log)
        log->info("{} N={} dt={:.6g}: l2l2={:.4e} linf={:.4e}", solver_name(kind), N, c.dt, r.errors.l2l2,
                  r.errors.linf);
      rows.push_back(r);
    }
  }
  return rows;
}

}  // namespace conewave
