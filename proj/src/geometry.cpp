#include "conewave/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "conewave/errors.hpp"
#include "conewave/medium.hpp"

namespace conewave {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<std::array<int, 2>> derive_edges(const SurfaceMesh& m) {
  std::vector<std::array<int, 2>> edges;
  auto add = [&](int a, int b) { edges.push_back({std::min(a, b), std::max(a, b)}); };
  if (m.dim == 3) {
    for (const auto& t : m.triangles) {
      add(t[0], t[1]);
      add(t[1], t[2]);
      add(t[2], t[0]);
    }
  } else {
    for (const auto& s : m.segments) add(s[0], s[1]);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

double max_edge_length(const SurfaceMesh& m) {
  double h = 0.0;
  for (const auto& e : m.edges) h = std::max(h, (m.vertices[e[0]] - m.vertices[e[1]]).norm());
  return h;
}

void check_closed_manifold(const SurfaceMesh& m) {
  std::map<std::pair<int, int>, int> directed;
  for (std::size_t f = 0; f < m.triangles.size(); ++f) {
    const auto& t = m.triangles[f];
    for (int i = 0; i < 3; ++i) {
      const int a = t[i], b = t[(i + 1) % 3];
      if (a == b) throw GeometryError("triangle " + std::to_string(f) + " repeats a vertex");
      if (++directed[{a, b}] > 1)
        throw GeometryError("edge (" + std::to_string(a) + "," + std::to_string(b) +
                            ") is not consistently oriented or is shared by more than two triangles");
    }
  }
  for (const auto& [e, count] : directed) {
    if (!directed.count({e.second, e.first}))
      throw GeometryError("boundary edge (" + std::to_string(e.first) + "," + std::to_string(e.second) +
                          "): mesh is not closed");
  }
  const long V = static_cast<long>(m.vertices.size());
  const long E = static_cast<long>(m.edges.size());
  const long F = static_cast<long>(m.triangles.size());
  if (V - E + F != 2) throw GeometryError("mesh Euler characteristic is " + std::to_string(V - E + F) + ", expected 2");
}

Eigen::Matrix3d rotation_z(double angle) {
  Eigen::Matrix3d r = Eigen::Matrix3d::Identity();
  r(0, 0) = std::cos(angle);
  r(0, 1) = -std::sin(angle);
  r(1, 0) = std::sin(angle);
  r(1, 1) = std::cos(angle);
  return r;
}

Vec3 turbine_reference(double a) { return turbine_radius(a) * Vec3(std::cos(a), std::sin(a), 0.0); }

Vec3 turbine_reference_tangent(double a) {
  return turbine_radius_derivative(a) * Vec3(std::cos(a), std::sin(a), 0.0) +
         turbine_radius(a) * Vec3(-std::sin(a), std::cos(a), 0.0);
}

}  // namespace

std::array<int, 3> SurfaceMesh::element(std::size_t e) const {
  if (dim == 3) return triangles[e];
  return {segments[e][0], segments[e][1], -1};
}

double SurfaceMesh::reference_measure(std::size_t e) const {
  if (dim == 3) {
    const auto& t = triangles[e];
    return 0.5 * (vertices[t[1]] - vertices[t[0]]).cross(vertices[t[2]] - vertices[t[0]]).norm();
  }
  return (vertices[segments[e][1]] - vertices[segments[e][0]]).norm();
}

double SurfaceMesh::total_reference_measure() const {
  double s = 0.0;
  for (std::size_t e = 0; e < element_count(); ++e) s += reference_measure(e);
  return s;
}

SurfaceMesh mesh_from_triangles(std::vector<Vec3> vertices, std::vector<std::array<int, 3>> triangles) {
  SurfaceMesh m;
  m.dim = 3;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const double n = vertices[i].norm();
    if (!(n > 0.0)) throw GeometryError("vertex " + std::to_string(i) + " sits at the origin");
    vertices[i] /= n;
  }
  for (std::size_t f = 0; f < triangles.size(); ++f) {
    auto& t = triangles[f];
    for (int v : t)
      if (v < 0 || v >= static_cast<int>(vertices.size()))
        throw GeometryError("triangle " + std::to_string(f) + " references a missing vertex");
    const Vec3& a = vertices[t[0]];
    const Vec3& b = vertices[t[1]];
    const Vec3& c = vertices[t[2]];
    const Vec3 n = (b - a).cross(c - a);
    if (n.norm() < 1e-14) throw GeometryError("triangle " + std::to_string(f) + " is degenerate");
    if (n.dot(a + b + c) < 0.0) std::swap(t[1], t[2]);
  }
  m.vertices = std::move(vertices);
  m.triangles = std::move(triangles);
  m.edges = derive_edges(m);
  check_closed_manifold(m);
  m.h = max_edge_length(m);
  return m;
}

SurfaceMesh icosphere_mesh(int level) {
  if (level < 0) throw ResourceError("icosphere level must be non-negative");
  if (level > 7) throw ResourceError("icosphere level " + std::to_string(level) + " exceeds the supported maximum 7");
  const double p = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> v = {{-1, p, 0}, {1, p, 0}, {-1, -p, 0}, {1, -p, 0}, {0, -1, p}, {0, 1, p},
                         {0, -1, -p}, {0, 1, -p}, {p, 0, -1}, {p, 0, 1}, {-p, 0, -1}, {-p, 0, 1}};
  for (auto& x : v) x.normalize();
  std::vector<std::array<int, 3>> f = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                                       {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                                       {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                                       {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (int l = 0; l < level; ++l) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      const std::pair<int, int> key{std::min(a, b), std::max(a, b)};
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      v.push_back((v[a] + v[b]).normalized());
      const int idx = static_cast<int>(v.size()) - 1;
      midpoint.emplace(key, idx);
      return idx;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(4 * f.size());
    for (const auto& t : f) {
      const int ab = mid(t[0], t[1]);
      const int bc = mid(t[1], t[2]);
      const int ca = mid(t[2], t[0]);
      next.push_back({t[0], ab, ca});
      next.push_back({t[1], bc, ab});
      next.push_back({t[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    f = std::move(next);
  }
  return mesh_from_triangles(std::move(v), std::move(f));
}

SurfaceMesh circle_mesh_2d(int n_cells) {
  if (n_cells < 3) throw GeometryError("a circle partition needs at least 3 cells");
  SurfaceMesh m;
  m.dim = 2;
  m.vertices.resize(n_cells);
  m.segments.resize(n_cells);
  for (int i = 0; i < n_cells; ++i) {
    const double a = 2.0 * kPi * i / n_cells;
    m.vertices[i] = Vec3(std::cos(a), std::sin(a), 0.0);
    m.segments[i] = {i, (i + 1) % n_cells};
  }
  m.edges = derive_edges(m);
  m.h = 2.0 * kPi / n_cells;
  return m;
}

SurfaceMesh parse_off(const std::string& text) {
  std::istringstream lines(text);
  std::string line;
  std::vector<std::string> tokens;
  while (std::getline(lines, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) tokens.push_back(tok);
  }
  std::size_t pos = 0;
  auto next = [&]() -> const std::string& {
    if (pos >= tokens.size()) throw GeometryError("OFF file ended early");
    return tokens[pos++];
  };
  auto number = [&]() {
    const std::string& s = next();
    try {
      return std::stod(s);
    } catch (...) {
      throw GeometryError("OFF file: expected a number, found '" + s + "'");
    }
  };
  if (next() != "OFF") throw GeometryError("OFF file must start with the OFF header");
  const long nv = std::lround(number());
  const long nf = std::lround(number());
  number();
  if (nv <= 0 || nf <= 0) throw GeometryError("OFF file declares no vertices or faces");
  std::vector<Vec3> v(nv);
  for (long i = 0; i < nv; ++i) {
    const double x = number(), y = number(), z = number();
    v[i] = Vec3(x, y, z);
  }
  std::vector<std::array<int, 3>> f(nf);
  for (long i = 0; i < nf; ++i) {
    if (std::lround(number()) != 3) throw GeometryError("OFF face " + std::to_string(i) + " is not a triangle");
    for (int j = 0; j < 3; ++j) f[i][j] = static_cast<int>(std::lround(number()));
  }
  return mesh_from_triangles(std::move(v), std::move(f));
}

SurfaceMesh load_off(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GeometryError("cannot open mesh file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_off(ss.str());
}

const char* motion_kind_name(MotionKind k) {
  switch (k) {
    case MotionKind::FixedSphere: return "fixed-sphere";
    case MotionKind::RigidTranslation: return "rigid-translation";
    case MotionKind::RisingSphere: return "rising-sphere";
    case MotionKind::ExpandingCircle2D: return "expanding-circle-2d";
    case MotionKind::RotatingTurbine2D: return "rotating-turbine-2d";
    case MotionKind::CustomAffine: return "custom-affine";
  }
  return "?";
}

InterfaceMotion InterfaceMotion::fixed_sphere(double radius, const Vec3& center) {
  InterfaceMotion m;
  m.kind = MotionKind::FixedSphere;
  m.radius0 = radius;
  m.center0 = center;
  return m;
}

InterfaceMotion InterfaceMotion::rigid_translation(const Vec3& center0, const Vec3& velocity, double radius) {
  InterfaceMotion m;
  m.kind = MotionKind::RigidTranslation;
  m.center0 = center0;
  m.velocity = velocity;
  m.radius0 = radius;
  return m;
}

InterfaceMotion InterfaceMotion::rising_sphere(const Vec3& center0, double rate, double radius) {
  InterfaceMotion m;
  m.kind = MotionKind::RisingSphere;
  m.center0 = center0;
  m.velocity = Vec3(0.0, 0.0, rate);
  m.radius0 = radius;
  return m;
}

InterfaceMotion InterfaceMotion::expanding_circle(double radius0, double rate) {
  InterfaceMotion m;
  m.kind = MotionKind::ExpandingCircle2D;
  m.dim = 2;
  m.radius0 = radius0;
  m.radius_rate = rate;
  return m;
}

InterfaceMotion InterfaceMotion::rotating_turbine(double mach) {
  if (mach < 0.0) throw ConfigError("turbine Mach target must be non-negative");
  InterfaceMotion m;
  m.kind = MotionKind::RotatingTurbine2D;
  m.dim = 2;
  m.mach = mach;
  m.omega = mach == 0.0 ? 0.0 : mach / turbine_smax();
  return m;
}

InterfaceMotion InterfaceMotion::custom_affine(int dim, const Vec3& center0, const Vec3& velocity,
                                               const Eigen::Matrix3d& shape) {
  if (std::abs(shape.determinant()) < 1e-12) throw ConfigError("affine shape matrix is singular");
  InterfaceMotion m;
  m.kind = MotionKind::CustomAffine;
  m.dim = dim;
  m.center0 = center0;
  m.velocity = velocity;
  m.shape = shape;
  return m;
}

Vec3 InterfaceMotion::center(double t) const { return center0 + t * velocity; }

bool InterfaceMotion::is_static() const {
  switch (kind) {
    case MotionKind::RotatingTurbine2D: return omega == 0.0;
    case MotionKind::CustomAffine: return velocity.squaredNorm() == 0.0;
    default: return velocity.squaredNorm() == 0.0 && radius_rate == 0.0;
  }
}

Vec3 InterfaceMotion::point(const Vec3& alpha, double t) const {
  switch (kind) {
    case MotionKind::RotatingTurbine2D: {
      const double a = std::atan2(alpha.y(), alpha.x());
      return rotation_z(omega * t) * turbine_reference(a);
    }
    case MotionKind::CustomAffine: return center(t) + shape * alpha;
    default: return center(t) + (radius0 + radius_rate * t) * alpha;
  }
}

Vec3 InterfaceMotion::point_velocity(const Vec3& alpha, double t) const {
  switch (kind) {
    case MotionKind::RotatingTurbine2D: {
      const Vec3 z = point(alpha, t);
      return omega * Vec3(-z.y(), z.x(), 0.0);
    }
    case MotionKind::CustomAffine: return velocity;
    default: return velocity + radius_rate * alpha;
  }
}

bool InterfaceMotion::inside(const Vec3& x, double t) const {
  switch (kind) {
    case MotionKind::RotatingTurbine2D: {
      const Vec3 q = rotation_z(-omega * t) * x;
      const double rho = std::hypot(q.x(), q.y());
      return rho < turbine_radius(std::atan2(q.y(), q.x()));
    }
    case MotionKind::CustomAffine: return (shape.inverse() * (x - center(t))).norm() < 1.0;
    default: return (x - center(t)).norm() < radius0 + radius_rate * t;
  }
}

Vec3 InterfaceMotion::transport(const Vec3& x0, double t) const {
  if (kind == MotionKind::RotatingTurbine2D) return rotation_z(omega * t) * x0;
  return x0 + (center(t) - center(0.0));
}

double turbine_radius(double a) {
  const double e2 = std::exp(2.0);
  return (1.0 + 0.3 * std::exp(3.0 * std::sin(3.0 * a) - 1.0)) / (1.0 + 0.3 * e2);
}

double turbine_radius_derivative(double a) {
  const double e2 = std::exp(2.0);
  return 0.3 * std::exp(3.0 * std::sin(3.0 * a) - 1.0) * 9.0 * std::cos(3.0 * a) / (1.0 + 0.3 * e2);
}

double turbine_smax() {
  static const double smax = [] {
    const int n = 4096;
    double best = 0.0;
    for (int j = 0; j < n; ++j) {
      const double a = 2.0 * kPi * j / n;
      const Vec3 z = turbine_reference(a);
      const Vec3 tan = turbine_reference_tangent(a);
      const Vec3 nrm = Vec3(tan.y(), -tan.x(), 0.0).normalized();
      best = std::max(best, std::abs(Vec3(-z.y(), z.x(), 0.0).dot(nrm)));
    }
    return best;
  }();
  return smax;
}

TurbineState turbine_boundary_2d(double angle, double t, double mach) {
  const double omega = mach == 0.0 ? 0.0 : mach / turbine_smax();
  const Vec3 z = rotation_z(omega * t) * turbine_reference(angle);
  return {z, omega * Vec3(-z.y(), z.x(), 0.0)};
}

MeshFrame frame_at(const InterfaceMotion& motion, const SurfaceMesh& mesh, double t) {
  if (motion.dim != mesh.dim) throw GeometryError("motion and mesh dimensions differ");
  MeshFrame f;
  f.t = t;
  const std::size_t nv = mesh.vertex_count();
  const std::size_t ne = mesh.element_count();
  f.positions.resize(nv);
  f.velocities.resize(nv);
  for (std::size_t i = 0; i < nv; ++i) {
    f.positions[i] = motion.point(mesh.vertices[i], t);
    f.velocities[i] = motion.point_velocity(mesh.vertices[i], t);
  }
  f.element_normals.resize(ne);
  f.element_measures.resize(ne);
  f.jacobians.resize(ne);
  f.vertex_normals.assign(nv, Vec3::Zero());
  for (std::size_t e = 0; e < ne; ++e) {
    const auto el = mesh.element(e);
    Vec3 n;
    double measure;
    if (mesh.dim == 3) {
      const Vec3 c = (f.positions[el[1]] - f.positions[el[0]]).cross(f.positions[el[2]] - f.positions[el[0]]);
      measure = 0.5 * c.norm();
      n = c;
    } else {
      const Vec3 d = f.positions[el[1]] - f.positions[el[0]];
      measure = d.norm();
      n = Vec3(d.y(), -d.x(), 0.0);
    }
    const double ref = mesh.reference_measure(e);
    if (!(measure > 1e-14 * ref) || !(ref > 0.0))
      throw GeometryError("degenerate element " + std::to_string(e) + " at t=" + std::to_string(t));
    n /= n.norm();
    f.element_normals[e] = n;
    f.element_measures[e] = measure;
    f.jacobians[e] = measure / ref;
    for (int m = 0; m < mesh.dim; ++m) f.vertex_normals[el[m]] += measure * n;
  }
  f.normal_velocity.resize(nv);
  for (std::size_t i = 0; i < nv; ++i) {
    const double len = f.vertex_normals[i].norm();
    if (!(len > 0.0)) throw GeometryError("vertex " + std::to_string(i) + " has no incident element");
    f.vertex_normals[i] /= len;
    f.normal_velocity[i] = f.vertex_normals[i].dot(f.velocities[i]);
  }
  return f;
}

AuditReport subsonic_audit(const InterfaceMotion& motion, const SurfaceMesh& mesh, const SpeedField& field,
                           const std::vector<double>& t_grid) {
  AuditReport r;
  for (double t : t_grid) {
    const MeshFrame f = frame_at(motion, mesh, t);
    for (std::size_t i = 0; i < mesh.vertex_count(); ++i) {
      const double v = std::abs(f.normal_velocity[i]);
      const double mach = v / field.speed(f.positions[i], t);
      const double ambient = v / field.ambient_speed(f.positions[i], t);
      r.max_ambient_mach = std::max(r.max_ambient_mach, ambient);
      if (mach > r.max_mach || r.vertex < 0) {
        r.max_mach = mach;
        r.vertex = static_cast<int>(i);
        r.time = t;
      }
    }
  }
  r.passed = r.max_mach < 1.0;
  return r;
}

void require_subsonic(const AuditReport& report) {
  if (report.passed) return;
  std::ostringstream os;
  os << "subsonic condition violated: normal Mach " << report.max_mach << " at vertex " << report.vertex
     << ", t=" << report.time;
  throw SubsonicViolation(os.str(), report.vertex, report.time);
}

}  // namespace conewave
