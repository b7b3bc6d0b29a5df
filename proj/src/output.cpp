#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "conewave/errors.hpp"
#include "conewave/parallel.hpp"
#include "conewave/run.hpp"
#include "json.hpp"

namespace conewave {

namespace {

using json = nlohmann::json;

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ResourceError("cannot write '" + path + "'");
  return out;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_density_csv(const std::string& path, const DensityHistory& h) {
  std::ofstream out = open_out(path);
  out << "k,t,vertex,value\n";
  for (int k = 0; k <= h.steps(); ++k) {
    const Eigen::VectorXd& v = h.density(k);
    const std::string t = num(k * h.dt);
    for (Eigen::Index r = 0; r < v.size(); ++r) out << k << ',' << t << ',' << r << ',' << num(v[r]) << '\n';
  }
}

DensityHistory read_density_csv(const std::string& path, SolverKind kind, double dt, std::size_t vertices) {
  std::ifstream in(path);
  if (!in) throw ResourceError("cannot read '" + path + "'");
  std::string line;
  std::getline(in, line);
  if (line != "k,t,vertex,value") throw ConfigError(path + ": unexpected header '" + line + "'");
  DensityHistory h;
  h.kind = kind;
  h.dt = dt;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    int k = 0;
    long r = 0;
    double t = 0.0, v = 0.0;
    if (std::sscanf(line.c_str(), "%d,%lf,%ld,%lf", &k, &t, &r, &v) != 4 || k < 0 || r < 0 ||
        static_cast<std::size_t>(r) >= vertices)
      throw ConfigError(path + ": malformed row at line " + std::to_string(lineno));
    while (static_cast<int>(h.stabilized.size()) <= k) h.stabilized.push_back(Eigen::VectorXd::Zero(vertices));
    h.stabilized[k][r] = v;
  }
  if (h.stabilized.empty()) throw ConfigError(path + ": no density rows");
  h.levels = h.stabilized;
  return h;
}

void write_sensor_csv(const std::string& path, const SensorSeries& s) {
  std::ofstream out = open_out(path);
  out << "t,value\n";
  for (std::size_t i = 0; i < s.t.size(); ++i) out << num(s.t[i]) << ',' << num(s.value[i]) << '\n';
}

void write_field_csv(const std::string& path, const FieldSnapshot& f) {
  std::ofstream out = open_out(path);
  out << "x,y,z,t,phi,Trfl\n";
  const std::string t = num(f.t);
  for (std::size_t i = 0; i < f.points.size(); ++i) {
    const Vec3& x = f.points[i];
    out << num(x.x()) << ',' << num(x.y()) << ',' << num(x.z()) << ',' << t << ',' << num(f.phi[i]) << ','
        << num(f.trfl[i]) << '\n';
  }
}

void write_wavefront_csv(const std::string& path, const FieldSnapshot& f) {
  std::ofstream out = open_out(path);
  out << "x,y,z,Trfl\n";
  for (std::size_t i = 0; i < f.points.size(); ++i) {
    const Vec3& x = f.points[i];
    out << num(x.x()) << ',' << num(x.y()) << ',' << num(x.z()) << ',' << num(f.trfl[i]) << '\n';
  }
}

void write_convergence_csv(const std::string& path, const std::vector<ConvergenceRow>& rows) {
  std::ofstream out = open_out(path);
  out << "solver,N,dt,l2l2,linf,order_l2l2,order_linf\n";
  for (const ConvergenceRow& r : rows)
    out << solver_name(r.solver) << ',' << r.cells << ',' << num(r.dt) << ',' << num(r.errors.l2l2) << ','
        << num(r.errors.linf) << ',' << (std::isnan(r.order_l2l2) ? "" : num(r.order_l2l2)) << ','
        << (std::isnan(r.order_linf) ? "" : num(r.order_linf)) << '\n';
}

void write_manifest(const std::string& path, const Simulation& sim, double wall_seconds) {
  const RunConfig& c = sim.config();
  const SurfaceMesh& mesh = sim.model().mesh;
  json j;
  j["config"] = json::parse(config_to_json(c));
  j["steps"] = c.steps();
  j["mesh"] = {{"dim", mesh.dim},
               {"vertices", mesh.vertex_count()},
               {"elements", mesh.element_count()},
               {"h", mesh.h},
               {"source_points", sim.discretization().source_count()},
               {"refine", sim.discretization().refine()}};
  const AuditReport& a = sim.audit();
  j["audit"] = {{"max_mach", a.max_mach},
                {"vertex", a.vertex},
                {"time", a.time},
                {"max_ambient_mach", a.max_ambient_mach},
                {"passed", a.passed}};
  j["max_mach"] = a.max_mach;
  j["motion"] = motion_kind_name(sim.model().motion.kind);
  j["speed_field"] = speed_kind_name(sim.model().field.kind);
  j["threads"] = worker_count();
  j["wall_seconds"] = wall_seconds;
  std::ofstream out = open_out(path);
  out << j.dump(2) << '\n';
}

RunConfig config_from_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read manifest '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  if (!j.contains("config")) throw ConfigError(path + ": no config object");
  return parse_config(j["config"].dump());
}

void write_vtk_surface(const std::string& path, const Simulation& sim, int k) {
  const SurfaceMesh& mesh = sim.model().mesh;
  const MeshFrame& frame = sim.discretization().level(k).frame;
  const Eigen::VectorXd& d = sim.history().density(k);
  std::ofstream out = open_out(path);
  out << "# vtk DataFile Version 3.0\ndensity at t=" << num(k * sim.config().dt) << "\nASCII\nDATASET POLYDATA\n";
  out << "POINTS " << mesh.vertex_count() << " double\n";
  for (const Vec3& p : frame.positions) out << num(p.x()) << ' ' << num(p.y()) << ' ' << num(p.z()) << '\n';
  if (mesh.dim == 3) {
    out << "POLYGONS " << mesh.triangles.size() << ' ' << 4 * mesh.triangles.size() << '\n';
    for (const auto& t : mesh.triangles) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  } else {
    out << "LINES " << mesh.segments.size() << ' ' << 3 * mesh.segments.size() << '\n';
    for (const auto& s : mesh.segments) out << "2 " << s[0] << ' ' << s[1] << '\n';
  }
  out << "POINT_DATA " << mesh.vertex_count() << "\nSCALARS density double 1\nLOOKUP_TABLE default\n";
  for (Eigen::Index r = 0; r < d.size(); ++r) out << num(d[r]) << '\n';
}

void write_vtk_field(const std::string& path, const FieldSnapshot& f, int axis) {
  std::ofstream out = open_out(path);
  int dims[3] = {1, 1, 1};
  double spacing[3] = {1.0, 1.0, 1.0};
  const Vec3& o = f.points.front();
  int u = -1, v = -1;
  for (int a = 0; a < 3; ++a) {
    if (a == axis) continue;
    (u < 0 ? u : v) = a;
  }
  dims[u] = f.nx;
  dims[v] = f.ny;
  spacing[u] = (f.points[f.nx - 1][u] - o[u]) / (f.nx - 1);
  spacing[v] = (f.points.back()[v] - o[v]) / (f.ny - 1);
  out << "# vtk DataFile Version 3.0\nscattered field at t=" << num(f.t) << "\nASCII\nDATASET STRUCTURED_POINTS\n";
  out << "DIMENSIONS " << dims[0] << ' ' << dims[1] << ' ' << dims[2] << '\n';
  out << "ORIGIN " << num(o.x()) << ' ' << num(o.y()) << ' ' << num(o.z()) << '\n';
  out << "SPACING " << num(spacing[0]) << ' ' << num(spacing[1]) << ' ' << num(spacing[2]) << '\n';
  out << "POINT_DATA " << f.points.size() << "\nSCALARS phi double 1\nLOOKUP_TABLE default\n";
  for (double p : f.phi) out << num(p) << '\n';
  out << "SCALARS Trfl double 1\nLOOKUP_TABLE default\n";
  for (double p : f.trfl) out << num(p) << '\n';
}

}  // namespace conewave
