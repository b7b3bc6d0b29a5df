#include "conewave/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "conewave/errors.hpp"
#include "conewave/parallel.hpp"
#include "conewave/quadrature.hpp"

namespace conewave {

const char* layer_name(LayerKind k) { return k == LayerKind::Single ? "sl" : "dl"; }

QuadratureRule gauss_rule(int npoints) {
  QuadratureRule r;
  r.dim = 3;
  switch (npoints) {
    case 1:
      r.points = {{1.0 / 3.0, 1.0 / 3.0}};
      r.weights = {0.5};
      r.degree = 1;
      break;
    case 3:
      r.points = {{1.0 / 6.0, 1.0 / 6.0}, {2.0 / 3.0, 1.0 / 6.0}, {1.0 / 6.0, 2.0 / 3.0}};
      r.weights = {1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0};
      r.degree = 2;
      break;
    case 6: {
      const double a = 0.445948490915965, wa = 0.223381589678011 / 2.0;
      const double b = 0.091576213509771, wb = 0.109951743655322 / 2.0;
      r.points = {{a, a}, {1.0 - 2.0 * a, a}, {a, 1.0 - 2.0 * a}, {b, b}, {1.0 - 2.0 * b, b}, {b, 1.0 - 2.0 * b}};
      r.weights = {wa, wa, wa, wb, wb, wb};
      r.degree = 4;
      break;
    }
    default: throw ConfigError("triangle quadrature supports 1, 3 or 6 points, got " + std::to_string(npoints));
  }
  return r;
}

QuadratureRule segment_rule(int npoints) {
  if (npoints < 1 || npoints > 16) throw ConfigError("segment quadrature supports 1 to 16 points");
  const GaussLegendre& g = gauss_legendre(npoints);
  QuadratureRule r;
  r.dim = 2;
  for (int i = 0; i < npoints; ++i) r.points.push_back({g.nodes[i], 0.0});
  r.weights = g.weights;
  r.degree = 2 * npoints - 1;
  return r;
}

std::array<double, 3> p1_shape(double xi1, double xi2) { return {1.0 - xi1 - xi2, xi1, xi2}; }

Discretization::Discretization(const SurfaceMesh& mesh, const InterfaceMotion& motion, const TravelTime& tt,
                               int rule_points, double dt, int steps, int refine)
    : mesh_(mesh),
      motion_(motion),
      tt_(tt),
      rule_(mesh.dim == 3 ? gauss_rule(rule_points) : segment_rule(rule_points)),
      dt_(dt),
      K_(steps) {
  if (!(dt > 0.0) || steps < 1) throw ConfigError("time grid needs dt > 0 and at least one step");
  if (motion.dim != mesh.dim) throw GeometryError("motion and mesh dimensions differ");
  static_geometry_ = motion.is_static();
  lag_invariant_ = static_geometry_ && tt.time_independent();
  refine_ = refine;
  if (refine_ < 0 || refine_ > 4) throw ConfigError("near-field refinement must be between 0 and 4");

  const double scale = mesh.dim == 3 ? 2.0 : 1.0;
  for (std::size_t e = 0; e < mesh.element_count(); ++e) {
    const auto el = mesh.element(e);
    const double ref = mesh.reference_measure(e);
    for (std::size_t a = 0; a < rule_.points.size(); ++a) {
      SourcePoint s;
      s.element = static_cast<int>(e);
      s.nodes = el;
      s.count = mesh.dim;
      if (mesh.dim == 3) {
        s.phi = p1_shape(rule_.points[a][0], rule_.points[a][1]);
      } else {
        s.phi = {1.0 - rule_.points[a][0], rule_.points[a][0], 0.0};
        s.nodes[2] = el[0];
      }
      s.ref_weight = scale * ref * rule_.weights[a];
      sources_.push_back(s);
    }
  }
  coarse_count_ = sources_.size();

  // Sub-element images of the base rule on the reference element.
  const int n = 1 << refine_;
  std::vector<std::array<double, 2>> fine_pts;
  std::vector<double> fine_w;
  if (refine_ > 0) {
    if (mesh.dim == 3) {
      auto push = [&](std::array<double, 2> A, std::array<double, 2> B, std::array<double, 2> C) {
        for (std::size_t a = 0; a < rule_.points.size(); ++a) {
          const double u = rule_.points[a][0], w = rule_.points[a][1];
          fine_pts.push_back({A[0] + u * (B[0] - A[0]) + w * (C[0] - A[0]), A[1] + u * (B[1] - A[1]) + w * (C[1] - A[1])});
          fine_w.push_back(rule_.weights[a] / (n * n));
        }
      };
      for (int i = 0; i < n; ++i)
        for (int j = 0; i + j < n; ++j) {
          const double h = 1.0 / n;
          push({i * h, j * h}, {(i + 1) * h, j * h}, {i * h, (j + 1) * h});
          if (i + j < n - 1) push({(i + 1) * h, j * h}, {(i + 1) * h, (j + 1) * h}, {i * h, (j + 1) * h});
        }
    } else {
      for (int i = 0; i < n; ++i)
        for (std::size_t a = 0; a < rule_.points.size(); ++a) {
          fine_pts.push_back({(i + rule_.points[a][0]) / n, 0.0});
          fine_w.push_back(rule_.weights[a] / n);
        }
    }
  }
  fine_per_element_ = fine_pts.size();
  for (std::size_t e = 0; e < mesh.element_count() && refine_ > 0; ++e) {
    const auto el = mesh.element(e);
    const double ref = mesh.reference_measure(e);
    for (std::size_t a = 0; a < fine_pts.size(); ++a) {
      SourcePoint s;
      s.element = static_cast<int>(e);
      s.nodes = el;
      s.count = mesh.dim;
      if (mesh.dim == 3) {
        s.phi = p1_shape(fine_pts[a][0], fine_pts[a][1]);
      } else {
        s.phi = {1.0 - fine_pts[a][0], fine_pts[a][0], 0.0};
        s.nodes[2] = el[0];
      }
      s.ref_weight = scale * ref * fine_w[a];
      sources_.push_back(s);
    }
  }
  vertex_elements_.resize(mesh.vertex_count());
  for (std::size_t e = 0; e < mesh.element_count(); ++e) {
    const auto el = mesh.element(e);
    for (int m = 0; m < mesh.dim; ++m) vertex_elements_[el[m]].push_back(static_cast<int>(e));
  }

  levels_.resize(K_ + 1);
  const std::size_t M = coarse_count_;
  parallel_for(static_cast<std::size_t>(K_ + 1), [&](std::size_t l) {
    LevelGeometry& L = levels_[l];
    if (static_geometry_ && l > 0) return;
    L.t = time(static_cast<int>(l));
    L.frame = frame_at(motion_, mesh_, L.t);
    L.y.resize(M);
    L.v.resize(M);
    L.n.resize(M);
    L.J.resize(M);
    L.c.resize(M);
    for (std::size_t q = 0; q < M; ++q) {
      const SourcePoint& s = sources_[q];
      Vec3 y = Vec3::Zero(), v = Vec3::Zero();
      for (int m = 0; m < s.count; ++m) {
        y += s.phi[m] * L.frame.positions[s.nodes[m]];
        v += s.phi[m] * L.frame.velocities[s.nodes[m]];
      }
      L.y[q] = y;
      L.v[q] = v;
      L.n[q] = L.frame.element_normals[s.element];
      L.J[q] = L.frame.jacobians[s.element];
      L.c[q] = field().speed(y, L.t);
    }
    L.c_vertex.resize(mesh_.vertex_count());
    for (std::size_t r = 0; r < mesh_.vertex_count(); ++r) L.c_vertex[r] = field().speed(L.frame.positions[r], L.t);
  });
  if (static_geometry_) {
    for (int l = 1; l <= K_; ++l) {
      // Speeds may still vary in time.
      levels_[l] = levels_[0];
      levels_[l].t = time(l);
      if (!field().time_independent()) {
        for (std::size_t q = 0; q < M; ++q) levels_[l].c[q] = field().speed(levels_[l].y[q], levels_[l].t);
        for (std::size_t r = 0; r < mesh_.vertex_count(); ++r)
          levels_[l].c_vertex[r] = field().speed(levels_[l].frame.positions[r], levels_[l].t);
      }
      levels_[l].frame.t = time(l);
    }
  }
}

KernelSample Discretization::sample(LayerKind kind, int k, const Vec3& x, double c_x, int q, int l,
                                    double* eta_known) const {
  const PointGeometry P = point_geometry(q, l);
  const double t = time(l);
  KernelSample s;
  s.c_src = P.c;
  s.c_tgt = c_x;
  // the planar kernel in θ–η form carries no κ factor
  s.A = dim() == 2 ? 1.0 : 1.0 / std::sqrt(c_x * P.c);
  s.J = P.J;
  if (kind == LayerKind::Single) {
    s.eta = eta_known ? *eta_known : tt_.eta(x, time(k), P.y, t);
  } else {
    const EtaDerivatives d = tt_.eta_derivatives(x, time(k), P.y, t);
    s.eta = d.eta;
    s.dnu_eta = P.n.dot(d.grad_y);
    s.deta_dtau = d.d_tau + P.v.dot(d.grad_y);
  }
  return s;
}

Vec3 Discretization::point_position(int q, int l) const {
  const LevelGeometry& L = levels_[l];
  if (static_cast<std::size_t>(q) < coarse_count_) return L.y[q];
  const SourcePoint& s = sources_[q];
  Vec3 y = Vec3::Zero();
  for (int m = 0; m < s.count; ++m) y += s.phi[m] * L.frame.positions[s.nodes[m]];
  return y;
}

Discretization::PointGeometry Discretization::point_geometry(int q, int l) const {
  const LevelGeometry& L = levels_[l];
  PointGeometry P;
  if (static_cast<std::size_t>(q) < coarse_count_) {
    P.y = L.y[q];
    P.v = L.v[q];
    P.n = L.n[q];
    P.J = L.J[q];
    P.c = L.c[q];
    return P;
  }
  const SourcePoint& s = sources_[q];
  P.y = P.v = Vec3::Zero();
  for (int m = 0; m < s.count; ++m) {
    P.y += s.phi[m] * L.frame.positions[s.nodes[m]];
    P.v += s.phi[m] * L.frame.velocities[s.nodes[m]];
  }
  P.n = L.frame.element_normals[s.element];
  P.J = L.frame.jacobians[s.element];
  P.c = field().speed(P.y, L.t);
  return P;
}

SlabCoefficients Discretization::coefficients(LayerKind kind, int k, int l, const KernelSample& s) const {
  const SlabContext ctx = make_slab(k, l, dt_);
  if (dim() == 3) return kind == LayerKind::Single ? fold(sl_weights_3d(ctx, s)) : fold(dl_weights_3d(ctx, s));
  return kind == LayerKind::Single ? fold(sl_weights_2d(ctx, s)) : fold(dl_weights_2d(ctx, s));
}

void Discretization::slab_search(LayerKind kind, int k, const Vec3& x, double c_x, int q,
                                 std::vector<Contribution>& out) const {
  const double w = sources_[q].ref_weight;
  auto emit = [&](int l, const KernelSample& s) {
    SlabCoefficients c = coefficients(kind, k, l, s);
    if (c.cur == 0.0 && c.prev == 0.0) return;
    if (!std::isfinite(c.cur) || !std::isfinite(c.prev)) {
      std::ostringstream os;
      os << "non-finite weight for source point " << q << " (element " << sources_[q].element << ") at k=" << k
         << ", l=" << l;
      throw AssemblyError(os.str());
    }
    out.push_back({l, q, w * c.cur, w * c.prev});
  };

  if (lag_invariant_) {
    const KernelSample s = sample(kind, k, x, c_x, q, k, nullptr);
    if (!(s.eta > 0.0)) return;
    if (dim() == 3) {
      const int m = static_cast<int>(std::floor(s.eta / dt_));
      for (int l = k - m - 1; l <= k - m + 1; ++l)
        if (l >= 1 && l <= k && causal_mask_3d(make_slab(k, l, dt_), s.eta)) emit(l, s);
    } else {
      for (int l = 1; l <= k; ++l) {
        if (make_slab(k, l, dt_).theta_hi <= s.eta) break;
        emit(l, s);
      }
    }
    return;
  }

  auto eta_at = [&](int l) { return tt_.eta(x, time(k), point_position(q, l), levels_[l].t); };

  if (dim() == 2) {
    for (int l = 1; l <= k; ++l) {
      double e = eta_at(l);
      if (e - (k - l) * dt_ >= dt_) break;
      emit(l, sample(kind, k, x, c_x, q, l, &e));
    }
    return;
  }

  // g(ℓ) = η_{k,ℓ} − (t_k − t_ℓ) increases with ℓ for subsonic motion; members satisfy 0 ≤ g < Δt.
  struct Eval {
    int l;
    double eta;
  };
  Eval cache[48];
  int ncache = 0;
  auto g_at = [&](int l) {
    for (int i = 0; i < ncache; ++i)
      if (cache[i].l == l) return cache[i].eta - (k - l) * dt_;
    const double e = eta_at(l);
    if (ncache < 48) cache[ncache++] = {l, e};
    return e - (k - l) * dt_;
  };
  auto eta_cached = [&](int l) {
    for (int i = 0; i < ncache; ++i)
      if (cache[i].l == l) return cache[i].eta;
    return eta_at(l);
  };

  const double gk = g_at(k);
  int lo = 0, hi = k;
  double glo = 0.0, ghi = gk;
  bool have_lo = false;
  const int l0 = std::clamp(k - static_cast<int>(std::floor(gk / dt_)), 1, k);
  double slope = 1.0;
  int last_l = k;
  double last_g = gk;
  auto probe = [&](int l) {
    const double g = g_at(l);
    if (l != last_l) slope = std::clamp((g - last_g) / ((l - last_l) * dt_), 0.05, 2.0);
    last_l = l;
    last_g = g;
    if (g >= 0.0) {
      if (l < hi) {
        hi = l;
        ghi = g;
      }
    } else if (!have_lo || l > lo) {
      lo = l;
      glo = g;
      have_lo = true;
    }
  };
  if (l0 != k) probe(l0);
  while (!have_lo && hi > 1) {
    const int step = std::max(1, static_cast<int>(std::ceil((ghi - 0.5 * dt_) / (slope * dt_))));
    probe(std::max(1, hi - step));
  }
  if (have_lo) {
    while (hi - lo > 1) {
      const double frac = -glo / (ghi - glo);
      const int l = lo + std::clamp(static_cast<int>(std::lround(frac * (hi - lo))), 1, hi - lo - 1);
      probe(l);
    }
  }
  for (int l = hi; l <= k; ++l) {
    double e = eta_cached(l);
    const double g = e - (k - l) * dt_;
    if (g >= dt_) break;
    if (g >= 0.0) emit(l, sample(kind, k, x, c_x, q, l, &e));
  }
}

void Discretization::contributions(LayerKind kind, int k, const Vec3& x, std::vector<Contribution>& out) const {
  if (k < 1 || k > K_) throw ConfigError("level index outside the time grid");
  const double c_x = field().speed(x, time(k));
  for (std::size_t q = 0; q < coarse_count_; ++q) slab_search(kind, k, x, c_x, static_cast<int>(q), out);
}

void Discretization::vertex_contributions(LayerKind kind, int k, int r, std::vector<Contribution>& out) const {
  const LevelGeometry& L = levels_.at(k);
  const Vec3& x = L.frame.positions[r];
  const std::vector<int>& ring = vertex_elements_.at(r);
  const std::size_t base = rule_.points.size();
  for (std::size_t e = 0; e < mesh_.element_count(); ++e) {
    const bool near = refine_ > 0 && std::find(ring.begin(), ring.end(), static_cast<int>(e)) != ring.end();
    const std::size_t q0 = near ? coarse_count_ + e * fine_per_element_ : e * base;
    const std::size_t q1 = q0 + (near ? fine_per_element_ : base);
    for (std::size_t q = q0; q < q1; ++q) slab_search(kind, k, x, L.c_vertex[r], static_cast<int>(q), out);
  }
}

std::vector<double> Discretization::interpolate(const Eigen::VectorXd& nodal) const {
  std::vector<double> out(sources_.size());
  for (std::size_t q = 0; q < sources_.size(); ++q) {
    const SourcePoint& s = sources_[q];
    double v = 0.0;
    for (int m = 0; m < s.count; ++m) v += s.phi[m] * nodal[s.nodes[m]];
    out[q] = v;
  }
  return out;
}

WeightBlock Discretization::assemble_block(LayerKind kind, int k, int l) const {
  if (l < 1 || l > k) throw ConfigError("block index ℓ must satisfy 1 ≤ ℓ ≤ k");
  const std::size_t N = vertex_count();
  WeightBlock b;
  b.k = k;
  b.l = l;
  b.matrix = Eigen::MatrixXd::Zero(N, N);
  b.mask = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(N, N, false);
  parallel_for(N, [&](std::size_t r) {
    std::vector<Contribution> c;
    vertex_contributions(kind, k, static_cast<int>(r), c);
    for (const Contribution& x : c) {
      double v = 0.0;
      if (x.l == l) v += x.cur;
      if (x.l == l + 1) v += x.prev;
      if (v == 0.0) continue;
      const SourcePoint& s = sources_[x.q];
      for (int m = 0; m < s.count; ++m) {
        b.matrix(r, s.nodes[m]) += v * s.phi[m];
        b.mask(r, s.nodes[m]) = true;
      }
    }
  });
  return b;
}

Eigen::VectorXd Discretization::jump_coefficients(int k) const {
  const LevelGeometry& L = levels_.at(k);
  Eigen::VectorXd out(vertex_count());
  for (std::size_t r = 0; r < vertex_count(); ++r) {
    try {
      out[r] = jump_lambda(L.c_vertex[r], L.frame.normal_velocity[r]);
    } catch (const SubsonicViolation& e) {
      throw SubsonicViolation(e.what(), static_cast<int>(r), L.t);
    }
  }
  return out;
}

std::size_t LagCache::bytes_needed(const Discretization& disc) {
  const std::size_t N = disc.vertex_count();
  return static_cast<std::size_t>(disc.steps() + 1) * N * N * sizeof(double);
}

LagCache::LagCache(const Discretization& disc, LayerKind kind) {
  if (!disc.lag_invariant()) throw ConfigError("lag cache requires a static interface and time-independent travel times");
  const int K = disc.steps();
  const std::size_t N = disc.vertex_count();
  std::vector<std::vector<Contribution>> rows(N);
  parallel_for(N, [&](std::size_t r) { disc.vertex_contributions(kind, K, static_cast<int>(r), rows[r]); });
  int max_lag = 0;
  for (const auto& row : rows)
    for (const Contribution& c : row) max_lag = std::max(max_lag, K - c.l + 1);
  E_.assign(max_lag + 1, Eigen::MatrixXd::Zero(N, N));
  const auto& sources = disc.sources();
  for (std::size_t r = 0; r < N; ++r) {
    for (const Contribution& c : rows[r]) {
      const int m = K - c.l;
      const SourcePoint& s = sources[c.q];
      for (int j = 0; j < s.count; ++j) {
        E_[m](r, s.nodes[j]) += c.cur * s.phi[j];
        E_[m + 1](r, s.nodes[j]) += c.prev * s.phi[j];
      }
    }
  }
}

}  // namespace conewave
