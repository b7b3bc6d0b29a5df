#include "conewave/mot.hpp"

#include <Eigen/LU>
#include <cmath>
#include <sstream>

#include "conewave/errors.hpp"
#include "conewave/parallel.hpp"

namespace conewave {

const char* solver_name(SolverKind k) {
  switch (k) {
    case SolverKind::SL: return "sl";
    case SolverKind::DL: return "dl";
    case SolverKind::Kirchhoff: return "kirchhoff";
  }
  return "?";
}

SolverKind parse_solver(const std::string& name) {
  if (name == "sl" || name == "single") return SolverKind::SL;
  if (name == "dl" || name == "double") return SolverKind::DL;
  if (name == "kirchhoff" || name == "k") return SolverKind::Kirchhoff;
  throw ConfigError("unknown solver '" + name + "' (expected sl, dl or kirchhoff)");
}

Stabilizer::Stabilizer(const SurfaceMesh& mesh, const std::vector<Vec3>& x, double nu_factor, int passes)
    : passes_(passes) {
  const int N = static_cast<int>(mesh.vertex_count());
  std::vector<Eigen::Triplet<double>> trip;
  M_ = Eigen::VectorXd::Zero(N);
  auto add_edge = [&](int i, int j, double w) {
    trip.emplace_back(i, j, -w);
    trip.emplace_back(j, i, -w);
    trip.emplace_back(i, i, w);
    trip.emplace_back(j, j, w);
  };
  if (mesh.dim == 3) {
    for (const auto& t : mesh.triangles) {
      const double area = 0.5 * (x[t[1]] - x[t[0]]).cross(x[t[2]] - x[t[0]]).norm();
      for (int c = 0; c < 3; ++c) {
        const int i = t[c], a = t[(c + 1) % 3], b = t[(c + 2) % 3];
        const Vec3 u = x[a] - x[i], v = x[b] - x[i];
        const double cot = u.dot(v) / u.cross(v).norm();
        add_edge(a, b, 0.5 * cot);
        M_[i] += area / 3.0;
      }
    }
  } else {
    for (const auto& s : mesh.segments) {
      const double len = (x[s[1]] - x[s[0]]).norm();
      add_edge(s[0], s[1], 1.0 / len);
      M_[s[0]] += 0.5 * len;
      M_[s[1]] += 0.5 * len;
    }
  }
  L_.resize(N, N);
  L_.setFromTriplets(trip.begin(), trip.end());
  double h = 0.0;
  for (const auto& e : mesh.edges) h = std::max(h, (x[e[1]] - x[e[0]]).norm());
  nu_ = nu_factor * h * h;
  Eigen::SparseMatrix<double> A = nu_ * L_;
  for (int i = 0; i < N; ++i) A.coeffRef(i, i) += M_[i];
  solver_ = std::make_shared<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>>();
  solver_->compute(A);
  if (solver_->info() != Eigen::Success) throw SolverError("surface smoothing matrix could not be factorized", 0.0);
}

Eigen::VectorXd Stabilizer::smooth(const Eigen::VectorXd& v) const {
  Eigen::VectorXd x = v;
  for (int p = 0; p < passes_; ++p) {
    x = solver_->solve(M_.cwiseProduct(x)).eval();
    if (solver_->info() != Eigen::Success) throw SolverError("surface smoothing solve failed", 0.0);
  }
  return x;
}

Eigen::VectorXd surface_smooth(const Stabilizer& s, const Eigen::VectorXd& v) { return s.smooth(v); }

void rynne_average(DensityHistory& h, int k) {
  if (k < 2) return;
  auto& s = h.stabilized;
  s[k - 1] = 0.25 * (s[k] + 2.0 * s[k - 1] + s[k - 2]);
}

DensityHistory march(SolverKind kind, const Discretization& disc, const BoundaryData& data,
                     const MarchOptions& opt) {
  const int K = disc.steps();
  const std::size_t N = disc.vertex_count();
  const std::size_t M = disc.source_count();
  const LayerKind main = kind == SolverKind::DL ? LayerKind::Double : LayerKind::Single;
  const bool kirchhoff = kind == SolverKind::Kirchhoff;

  DensityHistory H;
  H.kind = kind;
  H.dt = disc.dt();
  H.levels.assign(K + 1, Eigen::VectorXd::Zero(N));
  H.stabilized.assign(K + 1, Eigen::VectorXd::Zero(N));
  H.data.assign(K + 1, Eigen::VectorXd::Zero(N));
  H.data[0] = data(0);
  if (static_cast<std::size_t>(H.data[0].size()) != N) throw ConfigError("boundary data has the wrong length");

  std::unique_ptr<LagCache> cache, cache_dl;
  const std::size_t need = LagCache::bytes_needed(disc) * (kirchhoff ? 2 : 1);
  if (opt.lag_cache && disc.lag_invariant() && need <= opt.cache_limit_bytes) {
    cache = std::make_unique<LagCache>(disc, main);
    if (kirchhoff) cache_dl = std::make_unique<LagCache>(disc, LayerKind::Double);
  }

  std::vector<std::vector<double>> hat(K + 1), fhat;
  hat[0].assign(M, 0.0);
  if (kirchhoff) {
    fhat.resize(K + 1);
    fhat[0] = disc.interpolate(H.data[0]);
  }

  std::unique_ptr<Stabilizer> stab;
  const bool rigid = disc.motion().is_static();
  if (opt.smoothing && rigid) stab = std::make_unique<Stabilizer>(disc.mesh(), disc.level(0).frame.positions, opt.nu_factor, opt.passes);

  for (int k = 1; k <= K; ++k) {
    const Eigen::VectorXd F = data(k);
    H.data[k] = F;
    if (kirchhoff) fhat[k] = disc.interpolate(F);

    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(N, N);
    Eigen::VectorXd hist = Eigen::VectorXd::Zero(N);
    Eigen::VectorXd dlF = Eigen::VectorXd::Zero(N);
    // Effective weights of level k−1, needed to re-solve after averaging it.
    Eigen::MatrixXd B;
    const bool average = opt.rynne && k >= 2;
    if (cache) {
      A = (*cache)[0];
      if (average) B = cache->max_lag() >= 1 ? (*cache)[1] : Eigen::MatrixXd::Zero(N, N);
      for (int m = 1; m <= std::min(k, cache->max_lag()); ++m) hist.noalias() += (*cache)[m] * H.stabilized[k - m];
      if (kirchhoff)
        for (int m = 0; m <= std::min(k, cache_dl->max_lag()); ++m) dlF.noalias() += (*cache_dl)[m] * H.data[k - m];
    } else {
      const auto& sources = disc.sources();
      if (average) B = Eigen::MatrixXd::Zero(N, N);
      parallel_for(N, [&](std::size_t r) {
        std::vector<Contribution> c;
        disc.vertex_contributions(main, k, static_cast<int>(r), c);
        double h = 0.0;
        for (const Contribution& x : c) {
          const SourcePoint& s = sources[x.q];
          if (x.l == k) {
            for (int j = 0; j < s.count; ++j) A(r, s.nodes[j]) += x.cur * s.phi[j];
          } else {
            h += x.cur * hat[x.l][x.q];
          }
          h += x.prev * hat[x.l - 1][x.q];
          if (average) {
            const double w = (x.l == k - 1 ? x.cur : 0.0) + (x.l == k ? x.prev : 0.0);
            if (w != 0.0)
              for (int j = 0; j < s.count; ++j) B(r, s.nodes[j]) += w * s.phi[j];
          }
        }
        hist[r] = h;
        if (kirchhoff) {
          c.clear();
          disc.vertex_contributions(LayerKind::Double, k, static_cast<int>(r), c);
          double d = 0.0;
          for (const Contribution& x : c) d += x.cur * fhat[x.l][x.q] + x.prev * fhat[x.l - 1][x.q];
          dlF[r] = d;
        }
      });
    }

    Eigen::VectorXd rhs;
    if (kind == SolverKind::SL) {
      rhs = F - hist;
    } else if (kind == SolverKind::DL) {
      const Eigen::VectorXd lambda = disc.jump_coefficients(k);
      A.diagonal() += 0.5 * lambda;
      rhs = F - hist;
    } else {
      const Eigen::VectorXd lambda = disc.jump_coefficients(k);
      rhs = (0.5 * lambda.array() - 1.0).matrix().cwiseProduct(F) + dlF - hist;
    }

    for (std::size_t r = 0; r < N; ++r) {
      if (A.row(r).cwiseAbs().maxCoeff() == 0.0) {
        std::ostringstream os;
        os << "level matrix row " << r << " is empty at step " << k
           << " (no source point lies within one time step of the collocation point)";
        throw SolverError(os.str(), 0.0);
      }
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    const double rc = lu.rcond();
    if (!(rc > opt.rcond_floor)) {
      std::ostringstream os;
      os << "level matrix at step " << k << " is singular (rcond " << rc << ")";
      throw SolverError(os.str(), rc);
    }
    Eigen::VectorXd x = lu.solve(rhs);
    if (!x.allFinite()) throw InstabilityError("non-finite density at step " + std::to_string(k), k);
    if (average) {
      // Average the previous level, then re-solve so that level k sees the history it will be paired with.
      const Eigen::VectorXd old = H.stabilized[k - 1];
      H.stabilized[k] = x;
      rynne_average(H, k);
      if (opt.rynne_resolve) {
        rhs -= B * (H.stabilized[k - 1] - old);
        x = lu.solve(rhs);
      }
      if (!x.allFinite()) throw InstabilityError("non-finite density at step " + std::to_string(k), k);
      hat[k - 1] = disc.interpolate(H.stabilized[k - 1]);
    }

    H.levels[k] = x;
    if (opt.smoothing) {
      if (!rigid) stab = std::make_unique<Stabilizer>(disc.mesh(), disc.level(k).frame.positions, opt.nu_factor, opt.passes);
      H.stabilized[k] = stab->smooth(x);
    } else {
      H.stabilized[k] = x;
    }
    hat[k] = disc.interpolate(H.stabilized[k]);
    if (opt.on_step) opt.on_step(k, H);
  }
  return H;
}

}  // namespace conewave
