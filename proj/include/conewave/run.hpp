#pragma once

#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "conewave/config.hpp"
#include "conewave/manufactured.hpp"

namespace spdlog {
class logger;
}

namespace conewave {

// Geometry, medium and excitation bound by a configuration.
struct ScenarioModel {
  SurfaceMesh mesh;
  InterfaceMotion motion;
  SpeedField field;
  TravelTimeModel travel_time;
  IncidentWave wave;
};

ScenarioModel build_model(const RunConfig& cfg);

struct FieldSnapshot {
  int k = 0;
  double t = 0.0;
  int nx = 0;
  int ny = 0;
  std::vector<Vec3> points;  // row-major, first in-plane coordinate fastest
  std::vector<double> phi;   // NaN inside the obstacle
  std::vector<double> trfl;
};

struct ConvergenceRow {
  SolverKind solver = SolverKind::SL;
  int cells = 0;
  double dt = 0.0;
  ErrorNorms errors;
  double order_l2l2 = std::numeric_limits<double>::quiet_NaN();
  double order_linf = std::numeric_limits<double>::quiet_NaN();
};

class Simulation {
 public:
  // Builds the model and discretization and runs the subsonic audit, which
  // throws SubsonicViolation on failure.
  explicit Simulation(const RunConfig& cfg, std::shared_ptr<spdlog::logger> log = nullptr);
  ~Simulation();

  const RunConfig& config() const { return cfg_; }
  const ScenarioModel& model() const { return model_; }
  const TravelTime& travel_time() const { return *tt_; }
  const Discretization& discretization() const { return *disc_; }
  const AuditReport& audit() const { return audit_; }

  // F_k: manufactured trace data or −φ_inc at the vertices.
  Eigen::VectorXd boundary_data(int k) const;
  MarchOptions march_options() const;

  const DensityHistory& solve();
  // Installs a history read back from density.csv (stabilized levels).
  void set_history(DensityHistory h);
  bool solved() const { return history_.has_value(); }
  const DensityHistory& history() const;

  // Manufactured scenarios only.
  ErrorNorms manufactured_errors() const;

  const ReflectedArrival& arrival() const;
  std::vector<SensorSeries> sensor_histories() const;
  FieldSnapshot field(const FieldRequest& req, double t) const;
  double default_band() const;
  int level_of(double t) const;

 private:
  RunConfig cfg_;
  std::shared_ptr<spdlog::logger> log_;
  ScenarioModel model_;
  std::unique_ptr<TravelTime> tt_;
  std::unique_ptr<Discretization> disc_;
  AuditReport audit_;
  std::optional<DensityHistory> history_;
  mutable std::unique_ptr<ReflectedArrival> arrival_;
  mutable std::unique_ptr<FieldEvaluator> evaluator_;
  const FieldEvaluator& evaluator() const;
};

// Runs each cell count with Δt = 5/(2N) and fills observed orders between
// consecutive rows of the same solver.
std::vector<ConvergenceRow> convergence_study(const RunConfig& base, const std::vector<int>& cells,
                                              const std::vector<SolverKind>& solvers,
                                              std::shared_ptr<spdlog::logger> log = nullptr);

// Output files
void write_density_csv(const std::string& path, const DensityHistory& h);
DensityHistory read_density_csv(const std::string& path, SolverKind kind, double dt, std::size_t vertices);
void write_sensor_csv(const std::string& path, const SensorSeries& s);
void write_field_csv(const std::string& path, const FieldSnapshot& f);
void write_wavefront_csv(const std::string& path, const FieldSnapshot& f);
void write_convergence_csv(const std::string& path, const std::vector<ConvergenceRow>& rows);
void write_manifest(const std::string& path, const Simulation& sim, double wall_seconds);
// Legacy ASCII VTK: surface at level k with its density, and a field slice.
void write_vtk_surface(const std::string& path, const Simulation& sim, int k);
void write_vtk_field(const std::string& path, const FieldSnapshot& f, int axis);

// Reads the configuration echoed in a run directory's manifest.json.
RunConfig config_from_manifest(const std::string& path);

}  // namespace conewave
