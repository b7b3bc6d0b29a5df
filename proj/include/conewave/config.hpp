#pragma once

#include <array>
#include <string>
#include <vector>

#include "conewave/medium.hpp"
#include "conewave/mot.hpp"
#include "conewave/scatter.hpp"
#include "conewave/traveltime.hpp"

namespace conewave {

enum class Scenario {
  ManufacturedFixedCircle,
  ManufacturedExpandingCircle,
  DopplerFixed,
  DopplerLeft,
  DopplerRight,
  DopplerRising,
  MachSweep,
  TurbineFixed,
  TurbineRotating,
  GasBubble,
  TimeBenchmark,
  Fireball,
};

const char* scenario_name(Scenario s);
Scenario parse_scenario(const std::string& name);
std::vector<std::string> scenario_names();

Closure parse_closure(const std::string& name);
WaveKind parse_wave_kind(const std::string& name);
const char* sensor_kind_name(SensorKind k);

struct FieldRequest {
  int nx = 0;  // 0 disables field output
  int ny = 0;
  int axis = 1;  // the plane is x[axis] = offset
  double offset = 0.0;
  // Ranges of the two remaining coordinates, in increasing axis order.
  std::array<double, 4> extent{-3.0, 3.0, -3.0, 3.0};
  FieldMode mode = FieldMode::Band;
  double band = -1.0;  // negative: 2Δt·c_max
  std::vector<double> times;  // empty: t_max only
  bool enabled() const { return nx > 0 && ny > 0; }
};

struct RunConfig {
  Scenario scenario = Scenario::DopplerFixed;
  SolverKind solver = SolverKind::SL;

  int dim = 3;
  int level = 3;
  int cells = 0;
  std::string mesh_file;
  int rule_points = 3;
  int refine = 0;

  double dt = 0.1;
  double t_max = 2.5;

  // Translation speed (Doppler presets), radius rate (expanding circle) or
  // normal Mach target (turbine).
  double mach = 0.0;

  // Medium
  double c_inside = 0.227;
  double layer_width = 0.2;
  double c_final = 0.5;
  double delta_theta = 1000.0;

  // Incident wave
  WaveKind wave = WaveKind::GaussianPacket;
  Vec3 wave_direction = Vec3::UnitX();
  double x0 = 1.5;
  double width = 0.2;
  double f0 = 0.0;
  double period = 0.0;
  int pulses = 1;

  TravelTimeModel travel_time;

  bool smoothing = true;
  bool rynne = true;
  double nu_factor = 0.5;
  int passes = 10;

  std::vector<SensorSpec> sensors;
  FieldRequest field;
  int oversample = 1;
  bool vtk = false;

  int steps() const;
  bool manufactured() const;
};

// Defaults of a preset before any explicit key is applied.
RunConfig preset(Scenario s);

// INI-style `key = value` lines with an optional [sensors] section, or a JSON
// object with the same keys. Explicit keys override the preset named by
// `scenario`, which is required.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// Applies one explicit key; unknown keys and malformed values raise ConfigError.
void apply_key(RunConfig& cfg, const std::string& key, const std::string& value);

// Checks the time grid and scenario constraints; throws ConfigError.
void validate(const RunConfig& cfg);

// JSON text in the parse_config schema; parse_config(to_json(c)) reproduces c.
std::string config_to_json(const RunConfig& cfg);

// Parses "a/b" or a decimal.
double parse_number(const std::string& s);

}  // namespace conewave
