#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "conewave/assembly.hpp"

namespace conewave {

enum class SolverKind { SL, DL, Kirchhoff };

const char* solver_name(SolverKind k);
SolverKind parse_solver(const std::string& name);

struct DensityHistory {
  SolverKind kind = SolverKind::SL;
  double dt = 0.0;
  // Raw solutions of each level system.
  std::vector<Eigen::VectorXd> levels;
  // Smoothed and averaged copies used in history sums and field evaluation.
  std::vector<Eigen::VectorXd> stabilized;
  // Dirichlet data F_k; the Kirchhoff double-layer density.
  std::vector<Eigen::VectorXd> data;

  int steps() const { return static_cast<int>(levels.size()) - 1; }
  // σ for SL and Kirchhoff, μ for DL.
  const Eigen::VectorXd& density(int k) const { return stabilized.at(k); }
};

// Implicit surface heat steps (M + νL) x⁺ = M x with cotangent stiffness L and lumped mass M.
class Stabilizer {
 public:
  Stabilizer(const SurfaceMesh& mesh, const std::vector<Vec3>& positions, double nu_factor = 0.5, int passes = 10);

  double nu() const { return nu_; }
  int passes() const { return passes_; }
  const Eigen::SparseMatrix<double>& stiffness() const { return L_; }
  const Eigen::VectorXd& mass() const { return M_; }

  Eigen::VectorXd smooth(const Eigen::VectorXd& v) const;

 private:
  double nu_;
  int passes_;
  Eigen::SparseMatrix<double> L_;
  Eigen::VectorXd M_;
  std::shared_ptr<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>> solver_;
};

Eigen::VectorXd surface_smooth(const Stabilizer& s, const Eigen::VectorXd& v);

// Replaces stabilized level k−1 by ¼(σ_k + 2σ_{k−1} + σ_{k−2}).
void rynne_average(DensityHistory& history, int k);

struct MarchOptions {
  bool smoothing = true;
  bool rynne = true;
  // Re-solve the current level after averaging the previous one.
  bool rynne_resolve = true;
  double nu_factor = 0.5;
  int passes = 10;
  bool lag_cache = true;
  std::size_t cache_limit_bytes = std::size_t(1536) << 20;
  double rcond_floor = 1e-14;
  // Called after each level is solved and stabilized.
  std::function<void(int, const DensityHistory&)> on_step;
};

// F_k = boundary data at the vertices at time t_k.
using BoundaryData = std::function<Eigen::VectorXd(int k)>;

DensityHistory march(SolverKind kind, const Discretization& disc, const BoundaryData& data,
                     const MarchOptions& options = {});

}  // namespace conewave
