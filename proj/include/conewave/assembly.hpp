#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "conewave/geometry.hpp"
#include "conewave/kernel.hpp"
#include "conewave/traveltime.hpp"

namespace conewave {

enum class LayerKind { Single, Double };

const char* layer_name(LayerKind k);

// Points are (ξ₁, ξ₂) on the reference element. Triangle rules have weights
// summing to 1/2; segment rules live on [0, 1] with ξ₂ = 0 and weights summing to 1.
struct QuadratureRule {
  int dim = 3;
  std::vector<std::array<double, 2>> points;
  std::vector<double> weights;
  int degree = 0;
};

QuadratureRule gauss_rule(int npoints);
QuadratureRule segment_rule(int npoints);

std::array<double, 3> p1_shape(double xi1, double xi2);

struct SourcePoint {
  int element = 0;
  std::array<int, 3> nodes{};
  std::array<double, 3> phi{};
  int count = 3;            // nodes in use (2 on segments)
  double ref_weight = 0.0;  // reference measure times quadrature weight
};

// Source points and target vertices at one time level.
struct LevelGeometry {
  double t = 0.0;
  std::vector<Vec3> y;
  std::vector<Vec3> v;
  std::vector<Vec3> n;
  std::vector<double> J;
  std::vector<double> c;
  MeshFrame frame;
  std::vector<double> c_vertex;
};

struct Contribution {
  int l = 0;
  int q = 0;
  double cur = 0.0;
  double prev = 0.0;
};

struct WeightBlock {
  int k = 0;
  int l = 0;
  Eigen::MatrixXd matrix;
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> mask;
  bool empty() const { return !mask.any(); }
};

class Discretization {
 public:
  // With refine > 0, elements touching the collocation vertex are integrated on
  // 4^refine (3D) or 2^refine (2D) sub-elements.
  Discretization(const SurfaceMesh& mesh, const InterfaceMotion& motion, const TravelTime& tt, int rule_points,
                 double dt, int steps, int refine = 0);

  int dim() const { return mesh_.dim; }
  double dt() const { return dt_; }
  int steps() const { return K_; }
  double time(int k) const { return k * dt_; }
  std::size_t vertex_count() const { return mesh_.vertex_count(); }
  std::size_t source_count() const { return sources_.size(); }
  int refine() const { return refine_; }
  const SurfaceMesh& mesh() const { return mesh_; }
  const InterfaceMotion& motion() const { return motion_; }
  const TravelTime& travel_time() const { return tt_; }
  const SpeedField& field() const { return tt_.field(); }
  const QuadratureRule& rule() const { return rule_; }
  const std::vector<SourcePoint>& sources() const { return sources_; }
  const LevelGeometry& level(int l) const { return levels_.at(l); }
  // Weights depend on k − ℓ only.
  bool lag_invariant() const { return lag_invariant_; }

  // Appends every slab ℓ ∈ [1, k] in which a source point interacts with the
  // target x observed at t_k; cur and prev already include the quadrature weight.
  void contributions(LayerKind kind, int k, const Vec3& x, std::vector<Contribution>& out) const;
  void vertex_contributions(LayerKind kind, int k, int r, std::vector<Contribution>& out) const;

  // Nodal density interpolated to the source points.
  std::vector<double> interpolate(const Eigen::VectorXd& nodal) const;

  // Folded effective weights of σ_ℓ at level k.
  WeightBlock assemble_block(LayerKind kind, int k, int l) const;
  // λ(α_r, t_k) at every vertex.
  Eigen::VectorXd jump_coefficients(int k) const;

 private:
  struct PointGeometry {
    Vec3 y, v, n;
    double J = 0.0;
    double c = 0.0;
  };
  Vec3 point_position(int q, int l) const;
  PointGeometry point_geometry(int q, int l) const;
  void slab_search(LayerKind kind, int k, const Vec3& x, double c_x, int q, std::vector<Contribution>& out) const;
  KernelSample sample(LayerKind kind, int k, const Vec3& x, double c_x, int q, int l, double* eta_known) const;
  SlabCoefficients coefficients(LayerKind kind, int k, int l, const KernelSample& s) const;

  SurfaceMesh mesh_;
  InterfaceMotion motion_;
  TravelTime tt_;
  QuadratureRule rule_;
  double dt_;
  int K_;
  bool static_geometry_;
  bool lag_invariant_;
  int refine_;
  // sources_[0, coarse_count_) hold the base rule element by element, followed
  // by fine_per_element_ refined points per element.
  std::vector<SourcePoint> sources_;
  std::size_t coarse_count_ = 0;
  std::size_t fine_per_element_ = 0;
  std::vector<std::vector<int>> vertex_elements_;
  std::vector<LevelGeometry> levels_;
};

// Dense E[m], m = 0..K, with Σ_m E[m] σ_{k−m} reproducing every interaction
// at level k; only valid for lag-invariant discretizations.
class LagCache {
 public:
  LagCache(const Discretization& disc, LayerKind kind);
  static std::size_t bytes_needed(const Discretization& disc);
  int max_lag() const { return static_cast<int>(E_.size()) - 1; }
  const Eigen::MatrixXd& operator[](int m) const { return E_[m]; }

 private:
  std::vector<Eigen::MatrixXd> E_;
};

}  // namespace conewave
