#include "conewave/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "conewave/errors.hpp"
#include "json.hpp"

namespace conewave {

namespace {

using json = nlohmann::json;

struct NamedScenario {
  Scenario s;
  const char* name;
};

constexpr NamedScenario kScenarios[] = {
    {Scenario::ManufacturedFixedCircle, "manufactured-fixed-circle"},
    {Scenario::ManufacturedExpandingCircle, "manufactured-expanding-circle"},
    {Scenario::DopplerFixed, "doppler-fixed"},
    {Scenario::DopplerLeft, "doppler-left"},
    {Scenario::DopplerRight, "doppler-right"},
    {Scenario::DopplerRising, "doppler-rising"},
    {Scenario::MachSweep, "mach-sweep"},
    {Scenario::TurbineFixed, "turbine-fixed"},
    {Scenario::TurbineRotating, "turbine-rotating"},
    {Scenario::GasBubble, "gas-bubble"},
    {Scenario::TimeBenchmark, "time-benchmark"},
    {Scenario::Fireball, "fireball"},
};

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(trim(cur));
  return out;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int parse_int(const std::string& s) {
  std::size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != s.size()) throw ConfigError("expects an integer, got '" + s + "'");
  return static_cast<int>(v);
}

bool parse_bool(const std::string& s) {
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ConfigError("expects a boolean, got '" + s + "'");
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  for (const std::string& p : split(s, ',')) out.push_back(parse_number(p));
  return out;
}

Vec3 parse_vec3(const std::string& s) {
  const std::vector<double> v = parse_list(s);
  if (v.size() != 3) throw ConfigError("expects three comma-separated numbers, got '" + s + "'");
  return {v[0], v[1], v[2]};
}

SensorSpec parse_sensor(const std::string& name, const std::string& value) {
  const std::string v = trim(value);
  const auto sp = v.find_first_of(" \t");
  if (sp == std::string::npos) throw ConfigError("expects '<fixed|co-moving> x,y,z', got '" + value + "'");
  const std::string kind = v.substr(0, sp);
  SensorSpec s;
  s.name = name;
  if (kind == "fixed")
    s.kind = SensorKind::Fixed;
  else if (kind == "co-moving" || kind == "comoving")
    s.kind = SensorKind::CoMoving;
  else
    throw ConfigError("unknown sensor kind '" + kind + "' (expected fixed or co-moving)");
  s.anchor = parse_vec3(v.substr(sp + 1));
  return s;
}

FieldMode field_mode(const std::string& s) { return parse_field_mode(s); }

using Setter = std::function<void(RunConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> m = {
      {"solver", [](RunConfig& c, const std::string& v) { c.solver = parse_solver(v); }},
      {"level", [](RunConfig& c, const std::string& v) { c.level = parse_int(v); }},
      {"cells", [](RunConfig& c, const std::string& v) { c.cells = parse_int(v); }},
      {"mesh_file", [](RunConfig& c, const std::string& v) { c.mesh_file = v; }},
      {"rule_points", [](RunConfig& c, const std::string& v) { c.rule_points = parse_int(v); }},
      {"refine", [](RunConfig& c, const std::string& v) { c.refine = parse_int(v); }},
      {"dt", [](RunConfig& c, const std::string& v) { c.dt = parse_number(v); }},
      {"t_max", [](RunConfig& c, const std::string& v) { c.t_max = parse_number(v); }},
      {"mach", [](RunConfig& c, const std::string& v) { c.mach = parse_number(v); }},
      {"c_inside", [](RunConfig& c, const std::string& v) { c.c_inside = parse_number(v); }},
      {"layer_width", [](RunConfig& c, const std::string& v) { c.layer_width = parse_number(v); }},
      {"c_final", [](RunConfig& c, const std::string& v) { c.c_final = parse_number(v); }},
      {"delta_theta", [](RunConfig& c, const std::string& v) { c.delta_theta = parse_number(v); }},
      {"wave", [](RunConfig& c, const std::string& v) { c.wave = parse_wave_kind(v); }},
      {"wave_direction", [](RunConfig& c, const std::string& v) { c.wave_direction = parse_vec3(v); }},
      {"x0", [](RunConfig& c, const std::string& v) { c.x0 = parse_number(v); }},
      {"width", [](RunConfig& c, const std::string& v) { c.width = parse_number(v); }},
      {"f0", [](RunConfig& c, const std::string& v) { c.f0 = parse_number(v); }},
      {"period", [](RunConfig& c, const std::string& v) { c.period = parse_number(v); }},
      {"pulses", [](RunConfig& c, const std::string& v) { c.pulses = parse_int(v); }},
      {"closure", [](RunConfig& c, const std::string& v) { c.travel_time.closure = parse_closure(v); }},
      {"tt_points", [](RunConfig& c, const std::string& v) { c.travel_time.quadrature_points = parse_int(v); }},
      {"newton_iters", [](RunConfig& c, const std::string& v) { c.travel_time.newton.max_iters = parse_int(v); }},
      {"newton_samples", [](RunConfig& c, const std::string& v) { c.travel_time.newton.samples = parse_int(v); }},
      {"newton_tol", [](RunConfig& c, const std::string& v) { c.travel_time.newton.tolerance = parse_number(v); }},
      {"arc_scan", [](RunConfig& c, const std::string& v) { c.travel_time.newton.arc_scan = parse_bool(v); }},
      {"smoothing", [](RunConfig& c, const std::string& v) { c.smoothing = parse_bool(v); }},
      {"rynne", [](RunConfig& c, const std::string& v) { c.rynne = parse_bool(v); }},
      {"nu_factor", [](RunConfig& c, const std::string& v) { c.nu_factor = parse_number(v); }},
      {"passes", [](RunConfig& c, const std::string& v) { c.passes = parse_int(v); }},
      {"field_grid",
       [](RunConfig& c, const std::string& v) {
         const auto p = split(v, ',');
         if (p.size() != 2) throw ConfigError("expects NX,NY, got '" + v + "'");
         c.field.nx = parse_int(p[0]);
         c.field.ny = parse_int(p[1]);
       }},
      {"field_plane",
       [](RunConfig& c, const std::string& v) {
         const auto p = split(v, '=');
         if (p.size() != 2 || p[0].size() != 2 || p[0][0] != 'x' || p[0][1] < '1' || p[0][1] > '3')
           throw ConfigError("expects a plane like x2=0, got '" + v + "'");
         c.field.axis = p[0][1] - '1';
         c.field.offset = parse_number(p[1]);
       }},
      {"field_extent",
       [](RunConfig& c, const std::string& v) {
         const auto e = parse_list(v);
         if (e.size() != 4) throw ConfigError("expects umin,umax,vmin,vmax, got '" + v + "'");
         c.field.extent = {e[0], e[1], e[2], e[3]};
       }},
      {"field_mode", [](RunConfig& c, const std::string& v) { c.field.mode = field_mode(v); }},
      {"field_band", [](RunConfig& c, const std::string& v) { c.field.band = parse_number(v); }},
      {"field_times", [](RunConfig& c, const std::string& v) { c.field.times = parse_list(v); }},
      {"oversample", [](RunConfig& c, const std::string& v) { c.oversample = parse_int(v); }},
      {"vtk", [](RunConfig& c, const std::string& v) { c.vtk = parse_bool(v); }},
  };
  return m;
}

struct Entry {
  std::string key;
  std::string value;
  std::string where;
};

struct RawConfig {
  std::vector<Entry> entries;
  std::vector<Entry> sensors;
  bool has_sensor_section = false;
};

RawConfig read_ini(const std::string& text) {
  RawConfig raw;
  std::istringstream is(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string where = "line " + std::to_string(lineno);
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section == "sensors")
        raw.has_sensor_section = true;
      else if (section != "run")
        throw ConfigError(where + ": unknown section [" + section + "]");
      continue;
    }
    // Several `key=value` tokens may share a line.
    std::vector<std::string> pairs;
    std::istringstream ts(line);
    std::string tok;
    while (ts >> tok) pairs.push_back(tok);
    const bool all_pairs = std::all_of(pairs.begin(), pairs.end(),
                                       [](const std::string& p) { return p.find('=') != std::string::npos; });
    if (pairs.size() < 2 || !all_pairs || section == "sensors") pairs = {line};
    for (const std::string& p : pairs) {
      const auto eq = p.find('=');
      if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
      Entry e{trim(p.substr(0, eq)), trim(p.substr(eq + 1)), where};
      if (e.key.empty()) throw ConfigError(where + ": empty key");
      (section == "sensors" ? raw.sensors : raw.entries).push_back(e);
    }
  }
  return raw;
}

std::string json_scalar(const json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long>());
  if (v.is_number()) return fmt(v.get<double>());
  if (v.is_array()) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) out += ",";
      out += json_scalar(v[i], key);
    }
    return out;
  }
  throw ConfigError("field '" + key + "': unsupported JSON value");
}

RawConfig read_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("JSON config must be an object");
  RawConfig raw;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string where = "field '" + it.key() + "'";
    if (it.key() == "sensors") {
      raw.has_sensor_section = true;
      if (!it.value().is_object()) throw ConfigError(where + ": expected an object of named sensors");
      for (auto s = it.value().begin(); s != it.value().end(); ++s) {
        const json& v = s.value();
        std::string value;
        if (v.is_string()) {
          value = v.get<std::string>();
        } else if (v.is_object() && v.contains("kind") && v.contains("anchor")) {
          value = json_scalar(v["kind"], s.key()) + " " + json_scalar(v["anchor"], s.key());
        } else {
          throw ConfigError(where + ": sensor '" + s.key() + "' needs kind and anchor");
        }
        raw.sensors.push_back({s.key(), value, "field 'sensors." + s.key() + "'"});
      }
      continue;
    }
    raw.entries.push_back({it.key(), json_scalar(it.value(), it.key()), where});
  }
  return raw;
}

}  // namespace

const char* scenario_name(Scenario s) {
  for (const auto& n : kScenarios)
    if (n.s == s) return n.name;
  return "?";
}

Scenario parse_scenario(const std::string& name) {
  for (const auto& n : kScenarios)
    if (name == n.name) return n.s;
  std::string all;
  for (const auto& n : kScenarios) all += std::string(all.empty() ? "" : ", ") + n.name;
  throw ConfigError("unknown scenario '" + name + "' (expected one of " + all + ")");
}

std::vector<std::string> scenario_names() {
  std::vector<std::string> out;
  for (const auto& n : kScenarios) out.emplace_back(n.name);
  return out;
}

Closure parse_closure(const std::string& name) {
  if (name == "constant") return Closure::Constant;
  if (name == "chord" || name == "chord-space") return Closure::ChordSpace;
  if (name == "chord-spacetime") return Closure::ChordSpacetime;
  if (name == "newton") return Closure::NewtonRay;
  throw ConfigError("unknown closure '" + name + "' (expected constant, chord, chord-spacetime or newton)");
}

WaveKind parse_wave_kind(const std::string& name) {
  if (name == "packet" || name == "gaussian-packet") return WaveKind::GaussianPacket;
  if (name == "train" || name == "gaussian-train") return WaveKind::GaussianTrain;
  if (name == "modulated" || name == "modulated-train") return WaveKind::ModulatedTrain;
  throw ConfigError("unknown wave '" + name + "' (expected packet, train or modulated)");
}

const char* sensor_kind_name(SensorKind k) { return k == SensorKind::Fixed ? "fixed" : "co-moving"; }

double parse_number(const std::string& raw) {
  const std::string s = trim(raw);
  auto whole = [&](const std::string& t) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(t, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != t.size()) throw ConfigError("expects a number, got '" + raw + "'");
    return v;
  };
  const auto slash = s.find('/');
  if (slash == std::string::npos) return whole(s);
  const double den = whole(trim(s.substr(slash + 1)));
  if (den == 0.0) throw ConfigError("zero denominator in '" + raw + "'");
  return whole(trim(s.substr(0, slash))) / den;
}

int RunConfig::steps() const { return static_cast<int>(std::lround(t_max / dt)); }

bool RunConfig::manufactured() const {
  return scenario == Scenario::ManufacturedFixedCircle || scenario == Scenario::ManufacturedExpandingCircle;
}

RunConfig preset(Scenario s) {
  RunConfig c;
  c.scenario = s;
  const std::vector<SensorSpec> doppler_sensors = {{"fixed", SensorKind::Fixed, Vec3(-2.0, 0.0, 0.0)},
                                                   {"co-moving", SensorKind::CoMoving, Vec3(-2.0, 0.0, 0.0)}};
  auto planar = [&](int cells) {
    c.dim = 2;
    c.cells = cells;
    c.rule_points = 4;
    c.field.axis = 2;
  };
  switch (s) {
    case Scenario::ManufacturedFixedCircle:
      planar(200);
      c.dt = 5.0 / 400.0;
      c.t_max = 1.0;
      break;
    case Scenario::ManufacturedExpandingCircle:
      planar(200);
      c.dt = 0.01;
      c.t_max = 1.0;
      c.mach = 0.5;
      break;
    case Scenario::DopplerFixed:
    case Scenario::DopplerRising:
      c.mach = s == Scenario::DopplerFixed ? 0.0 : 0.5;
      c.sensors = doppler_sensors;
      break;
    case Scenario::DopplerLeft:
      c.mach = 0.5;
      c.dt = 5.0 / 48.0;
      c.t_max = 5.0 / 3.0;
      c.sensors = doppler_sensors;
      break;
    case Scenario::DopplerRight:
      c.mach = 0.5;
      c.t_max = 5.0;
      c.sensors = doppler_sensors;
      break;
    case Scenario::MachSweep:
      c.mach = 0.9;
      c.dt = 1.0 / 30.0;
      c.rule_points = 6;
      c.refine = 2;
      c.sensors = doppler_sensors;
      break;
    case Scenario::TurbineFixed:
    case Scenario::TurbineRotating:
      planar(100);
      c.mach = s == Scenario::TurbineFixed ? 0.0 : 0.5;
      c.dt = 0.04;
      c.t_max = 4.0;
      c.wave = WaveKind::GaussianTrain;
      c.width = 0.1;
      c.period = 0.5;
      c.pulses = 20;
      break;
    case Scenario::GasBubble:
      c.t_max = 3.0;
      c.travel_time.closure = Closure::NewtonRay;
      break;
    case Scenario::TimeBenchmark:
      planar(80);
      c.dt = 0.05;
      c.t_max = 3.0;
      c.travel_time.closure = Closure::ChordSpacetime;
      c.travel_time.quadrature_points = 48;
      c.smoothing = false;
      break;
    case Scenario::Fireball:
      c.dt = 1.0;
      c.t_max = 110.0;
      c.mach = 7.69e-2;
      c.travel_time.closure = Closure::ChordSpacetime;
      c.wave = WaveKind::ModulatedTrain;
      c.wave_direction = Vec3::UnitZ();
      c.x0 = 5.0;
      c.width = 3.0;
      c.f0 = 0.05;
      c.period = 15.0;
      c.pulses = 20;
      c.sensors = {{"x1000", SensorKind::Fixed, Vec3(10.0, 0.0, 2.323)}};
      c.field.extent = {-12.0, 12.0, -4.0, 20.0};
      break;
  }
  return c;
}

void validate(const RunConfig& c) {
  if (!(c.dt > 0.0) || !std::isfinite(c.dt)) throw ConfigError("dt must be positive");
  if (!(c.t_max > 0.0) || !std::isfinite(c.t_max)) throw ConfigError("t_max must be positive");
  const double r = c.t_max / c.dt;
  if (std::abs(r - std::round(r)) > 1e-9 * std::max(1.0, r) || std::round(r) < 1.0)
    throw ConfigError("t_max/dt = " + fmt(r) + " is not a positive integer");
  if (c.dim == 2) {
    if (c.cells < 3) throw ConfigError("planar scenarios need cells >= 3");
    if (c.rule_points < 1 || c.rule_points > 16) throw ConfigError("rule_points must be between 1 and 16 in 2D");
    if (!c.mesh_file.empty()) throw ConfigError("mesh_file applies to 3D scenarios only");
  } else {
    if (c.mesh_file.empty() && (c.level < 0 || c.level > 6)) throw ConfigError("level must be between 0 and 6");
    if (c.rule_points != 1 && c.rule_points != 3 && c.rule_points != 6)
      throw ConfigError("rule_points must be 1, 3 or 6 in 3D");
  }
  if (c.refine < 0 || c.refine > 4) throw ConfigError("refine must be between 0 and 4");
  if (c.mach < 0.0) throw ConfigError("mach must be non-negative; the preset fixes the direction");
  if (c.scenario == Scenario::DopplerFixed && c.mach != 0.0)
    throw ConfigError("doppler-fixed has no motion; use doppler-left, doppler-right or doppler-rising");
  if (c.manufactured()) {
    if (c.solver == SolverKind::Kirchhoff) throw ConfigError("manufactured scenarios support sl and dl only");
    if (c.scenario == Scenario::ManufacturedExpandingCircle && c.solver != SolverKind::SL)
      throw ConfigError("manufactured-expanding-circle supports the sl solver only");
  }
  if (!(c.width > 0.0)) throw ConfigError("width must be positive");
  if (c.wave != WaveKind::GaussianPacket && (c.pulses < 1 || !(c.period > 0.0)))
    throw ConfigError("trains need pulses >= 1 and period > 0");
  if (c.wave_direction.norm() == 0.0) throw ConfigError("wave_direction must be nonzero");
  if (c.dim == 2 && c.wave_direction.z() != 0.0) throw ConfigError("wave_direction must lie in the plane x3 = 0");
  if (c.passes < 0 || c.nu_factor < 0.0) throw ConfigError("passes and nu_factor must be non-negative");
  if (c.oversample != 1 && c.oversample != 4) throw ConfigError("oversample must be 1 or 4");
  if (c.field.enabled()) {
    if (c.field.nx < 2 || c.field.ny < 2) throw ConfigError("field_grid needs at least 2 points per direction");
    if (c.dim == 2 && (c.field.axis != 2 || c.field.offset != 0.0))
      throw ConfigError("planar scenarios evaluate fields on x3=0 only");
    if (!(c.field.extent[1] > c.field.extent[0]) || !(c.field.extent[3] > c.field.extent[2]))
      throw ConfigError("field_extent ranges must be increasing");
  }
  for (double t : c.field.times)
    if (t < 0.0 || t > c.t_max * (1.0 + 1e-12)) throw ConfigError("field_times must lie in [0, t_max]");
  for (const SensorSpec& s : c.sensors)
    if (c.dim == 2 && s.anchor.z() != 0.0) throw ConfigError("sensor '" + s.name + "' must lie in the plane x3 = 0");
}

void apply_key(RunConfig& cfg, const std::string& key, const std::string& value) {
  const auto it = setters().find(key);
  if (it == setters().end()) throw ConfigError("unknown key '" + key + "'");
  try {
    it->second(cfg, value);
  } catch (const ConfigError& err) {
    throw ConfigError("key '" + key + "' " + err.what());
  }
}

RunConfig parse_config(const std::string& text) {
  const std::string t = trim(text);
  const RawConfig raw = !t.empty() && t.front() == '{' ? read_json(t) : read_ini(text);

  const Entry* scenario = nullptr;
  bool dt_given = false;
  for (const Entry& e : raw.entries) {
    if (e.key == "scenario") {
      if (scenario) throw ConfigError(e.where + ": duplicate key 'scenario'");
      scenario = &e;
    } else if (!setters().count(e.key)) {
      throw ConfigError(e.where + ": unknown key '" + e.key + "'");
    }
    if (e.key == "dt") dt_given = true;
  }
  if (!scenario) throw ConfigError("missing required key 'scenario'");

  RunConfig c;
  try {
    c = preset(parse_scenario(scenario->value));
  } catch (const ConfigError& err) {
    throw ConfigError(scenario->where + ": " + err.what());
  }
  for (const Entry& e : raw.entries) {
    if (e.key == "scenario") continue;
    try {
      setters().at(e.key)(c, e.value);
    } catch (const ConfigError& err) {
      throw ConfigError(e.where + ": key '" + e.key + "' " + err.what());
    }
  }
  if (c.scenario == Scenario::ManufacturedFixedCircle && !dt_given) c.dt = 5.0 / (2.0 * c.cells);
  if (raw.has_sensor_section) {
    c.sensors.clear();
    for (const Entry& e : raw.sensors) {
      try {
        c.sensors.push_back(parse_sensor(e.key, e.value));
      } catch (const ConfigError& err) {
        throw ConfigError(e.where + ": sensor '" + e.key + "' " + err.what());
      }
    }
  }
  validate(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_to_json(const RunConfig& c) {
  auto vec = [](const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); };
  json j;
  j["scenario"] = scenario_name(c.scenario);
  j["solver"] = solver_name(c.solver);
  if (c.dim == 2) {
    j["cells"] = c.cells;
  } else if (c.mesh_file.empty()) {
    j["level"] = c.level;
  } else {
    j["mesh_file"] = c.mesh_file;
  }
  j["rule_points"] = c.rule_points;
  j["refine"] = c.refine;
  j["dt"] = c.dt;
  j["t_max"] = c.t_max;
  j["mach"] = c.mach;
  j["c_inside"] = c.c_inside;
  j["layer_width"] = c.layer_width;
  j["c_final"] = c.c_final;
  j["delta_theta"] = c.delta_theta;
  j["wave"] = wave_kind_name(c.wave);
  j["wave_direction"] = vec(c.wave_direction);
  j["x0"] = c.x0;
  j["width"] = c.width;
  j["f0"] = c.f0;
  j["period"] = c.period;
  j["pulses"] = c.pulses;
  j["closure"] = closure_name(c.travel_time.closure);
  j["tt_points"] = c.travel_time.quadrature_points;
  j["newton_iters"] = c.travel_time.newton.max_iters;
  j["newton_samples"] = c.travel_time.newton.samples;
  j["newton_tol"] = c.travel_time.newton.tolerance;
  j["arc_scan"] = c.travel_time.newton.arc_scan;
  j["smoothing"] = c.smoothing;
  j["rynne"] = c.rynne;
  j["nu_factor"] = c.nu_factor;
  j["passes"] = c.passes;
  j["oversample"] = c.oversample;
  j["vtk"] = c.vtk;
  if (c.field.enabled()) {
    j["field_grid"] = std::to_string(c.field.nx) + "," + std::to_string(c.field.ny);
    j["field_plane"] = "x" + std::to_string(c.field.axis + 1) + "=" + fmt(c.field.offset);
    j["field_extent"] = c.field.extent;
    j["field_mode"] = field_mode_name(c.field.mode);
    j["field_band"] = c.field.band;
    if (!c.field.times.empty()) j["field_times"] = c.field.times;
  }
  json sensors = json::object();
  for (const SensorSpec& s : c.sensors) sensors[s.name] = {{"kind", sensor_kind_name(s.kind)}, {"anchor", vec(s.anchor)}};
  j["sensors"] = sensors;
  return j.dump(2);
}

}  // namespace conewave
