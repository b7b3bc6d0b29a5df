#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

namespace conewave {

using Vec3 = Eigen::Vector3d;

class SpeedField;

// Reference triangulation of S² (dim 3) or partition of S¹ embedded in the
// plane x3 = 0 (dim 2). Elements are flat: triangles in 3D, chords in 2D.
struct SurfaceMesh {
  int dim = 3;
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<std::array<int, 2>> segments;
  std::vector<std::array<int, 2>> edges;
  double h = 0.0;

  std::size_t vertex_count() const { return vertices.size(); }
  std::size_t element_count() const { return dim == 3 ? triangles.size() : segments.size(); }
  int nodes_per_element() const { return dim; }
  // Vertex indices of element e; the third slot is -1 in 2D.
  std::array<int, 3> element(std::size_t e) const;
  // Flat measure of the reference element (area or chord length).
  double reference_measure(std::size_t e) const;
  double total_reference_measure() const;
};

SurfaceMesh icosphere_mesh(int level);
SurfaceMesh circle_mesh_2d(int n_cells);
// Builds a closed triangulation from arbitrary vertices: projects to S²,
// orients every triangle outward and checks the manifold conditions.
SurfaceMesh mesh_from_triangles(std::vector<Vec3> vertices, std::vector<std::array<int, 3>> triangles);
SurfaceMesh load_off(const std::string& path);
SurfaceMesh parse_off(const std::string& text);

enum class MotionKind {
  FixedSphere,
  RigidTranslation,
  RisingSphere,
  ExpandingCircle2D,
  RotatingTurbine2D,
  CustomAffine,
};

const char* motion_kind_name(MotionKind k);

// z(α, t) for α on the reference sphere or circle.
struct InterfaceMotion {
  MotionKind kind = MotionKind::FixedSphere;
  int dim = 3;
  Vec3 center0 = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  double radius0 = 1.0;
  double radius_rate = 0.0;
  Eigen::Matrix3d shape = Eigen::Matrix3d::Identity();
  double mach = 0.0;   // turbine target normal Mach
  double omega = 0.0;  // turbine angular speed

  static InterfaceMotion fixed_sphere(double radius = 1.0, const Vec3& center = Vec3::Zero());
  static InterfaceMotion rigid_translation(const Vec3& center0, const Vec3& velocity, double radius = 1.0);
  static InterfaceMotion rising_sphere(const Vec3& center0, double rate, double radius = 1.0);
  static InterfaceMotion expanding_circle(double radius0, double rate);
  static InterfaceMotion rotating_turbine(double mach);
  static InterfaceMotion custom_affine(int dim, const Vec3& center0, const Vec3& velocity, const Eigen::Matrix3d& shape);

  Vec3 point(const Vec3& alpha, double t) const;
  Vec3 point_velocity(const Vec3& alpha, double t) const;
  Vec3 center(double t) const;
  bool is_static() const;
  // True when x lies strictly inside the obstacle at time t.
  bool inside(const Vec3& x, double t) const;
  // Position at time t of a point rigidly attached to the body that sat at x0 at t = 0.
  Vec3 transport(const Vec3& x0, double t) const;
};

struct TurbineState {
  Vec3 point;
  Vec3 velocity;
};

double turbine_radius(double angle);
double turbine_radius_derivative(double angle);
// Max over the boundary of |(e3 × z_ref)·ν|, sampled at 4096 uniform angles.
double turbine_smax();
TurbineState turbine_boundary_2d(double angle, double t, double mach);

// Differential geometry of the flat discrete surface at time t.
struct MeshFrame {
  double t = 0.0;
  std::vector<Vec3> positions;
  std::vector<Vec3> velocities;
  std::vector<Vec3> element_normals;
  std::vector<double> element_measures;
  // Physical over reference element measure; constant on each flat element.
  std::vector<double> jacobians;
  std::vector<Vec3> vertex_normals;
  std::vector<double> normal_velocity;
};

MeshFrame frame_at(const InterfaceMotion& motion, const SurfaceMesh& mesh, double t);

struct AuditReport {
  double max_mach = 0.0;
  int vertex = -1;
  double time = 0.0;
  // |V_ν| measured against the background speed with any inclusion removed.
  double max_ambient_mach = 0.0;
  bool passed = true;
};

AuditReport subsonic_audit(const InterfaceMotion& motion, const SurfaceMesh& mesh, const SpeedField& field,
                           const std::vector<double>& t_grid);
// Throws SubsonicViolation naming the offending vertex and time if the audit fails.
void require_subsonic(const AuditReport& report);

}  // namespace conewave
