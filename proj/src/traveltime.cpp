#include "conewave/traveltime.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>
#include <sstream>

#include "conewave/errors.hpp"

namespace conewave {

const char* closure_name(Closure c) {
  switch (c) {
    case Closure::Constant: return "constant";
    case Closure::ChordSpace: return "chord";
    case Closure::ChordSpacetime: return "chord-spacetime";
    case Closure::NewtonRay: return "newton";
  }
  return "?";
}

namespace {

// Polyline in the plane spanned by the chord direction e and the unit normal u.
class PlanarRay {
 public:
  PlanarRay(const SpeedField& field, const Vec3& y, const Vec3& x, double t, int interior)
      : field_(field), t_(t), n_(interior + 2), hs_(1.0 / (interior + 1)) {
    const Vec3 d = x - y;
    e_ = d / d.norm();
    const Vec3 mid = 0.5 * (x + y);
    Vec3 g = field.slowness_grad(mid, t);
    g -= g.dot(e_) * e_;
    if (g.norm() > 1e-12 * std::max(1.0, field.slowness(mid, t))) {
      u_ = g.normalized();
    } else {
      const double planar = std::hypot(e_.x(), e_.y());
      if (planar > 1e-8)
        u_ = Vec3(-e_.y(), e_.x(), 0.0) / planar;
      else
        u_ = Vec3(1.0, 0.0, 0.0);
      u_ -= u_.dot(e_) * e_;
      u_.normalize();
    }
    y_ = y;
    x_ = x;
  }

  int size() const { return n_; }
  double hs() const { return hs_; }
  const Vec3& u() const { return u_; }

  std::vector<Vec3> arc(double sagitta) const {
    std::vector<Vec3> g(n_);
    for (int j = 0; j < n_; ++j) {
      const double s = j * hs_;
      g[j] = y_ + s * (x_ - y_) + 4.0 * s * (1.0 - s) * sagitta * u_;
    }
    g.front() = y_;
    g.back() = x_;
    return g;
  }

  // Midpoint-rule travel-time functional minimized by the iteration.
  double functional(const std::vector<Vec3>& g) const {
    double f = 0.0;
    for (int j = 0; j + 1 < n_; ++j) f += field_.slowness(0.5 * (g[j] + g[j + 1]), t_) * (g[j + 1] - g[j]).norm();
    return f;
  }

  // Composite 3-point Gauss rule per segment.
  double travel_time(const std::vector<Vec3>& g) const {
    static const double xi[3] = {0.5 - std::sqrt(0.15), 0.5, 0.5 + std::sqrt(0.15)};
    static const double w[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
    double f = 0.0;
    for (int j = 0; j + 1 < n_; ++j) {
      const Vec3 d = g[j + 1] - g[j];
      double s = 0.0;
      for (int q = 0; q < 3; ++q) s += w[q] * field_.slowness(g[j] + xi[q] * d, t_);
      f += s * d.norm();
    }
    return f;
  }

  // In-plane unit normal at interior node j.
  Vec3 normal(const std::vector<Vec3>& g, int j) const {
    const Vec3 tan = g[j + 1] - g[j - 1];
    Vec3 n = tan.dot(e_) * u_ - tan.dot(u_) * e_;
    return n / n.norm();
  }

  // Normal residual R⊥ = n·(d/ds(κτ) − |γ̇|∇κ) at interior nodes, taken as the
  // negative gradient of the midpoint functional so that zeros are stationary curves.
  std::vector<double> residual(const std::vector<Vec3>& g, double* norm) const {
    const int segs = n_ - 1;
    std::vector<Vec3> kt(segs), kg(segs);
    for (int j = 0; j < segs; ++j) {
      const Vec3 d = g[j + 1] - g[j];
      const double len = d.norm();
      const Vec3 m = 0.5 * (g[j] + g[j + 1]);
      kt[j] = field_.slowness(m, t_) * d / len;
      kg[j] = 0.5 * len * field_.slowness_grad(m, t_);
    }
    std::vector<double> r(n_ - 2);
    double s = 0.0;
    for (int j = 1; j + 1 < n_; ++j) {
      const Vec3 grad = kt[j - 1] - kt[j] + kg[j - 1] + kg[j];
      r[j - 1] = -normal(g, j).dot(grad) / hs_;
      s += r[j - 1] * r[j - 1];
    }
    *norm = std::sqrt(hs_ * s);
    return r;
  }

  // Solves (A a')' − B a = −R⊥ with homogeneous Dirichlet data.
  bool newton_step(const std::vector<Vec3>& g, const std::vector<double>& r, std::vector<double>& a) const {
    const int m = n_ - 2;
    std::vector<double> A(n_ - 1);
    for (int j = 0; j + 1 < n_; ++j) {
      const Vec3 d = g[j + 1] - g[j];
      const double speed = d.norm() / hs_;
      A[j] = field_.slowness(0.5 * (g[j] + g[j + 1]), t_) / speed;
    }
    std::vector<double> lo(m), di(m), up(m), rhs(m);
    const double h2 = hs_ * hs_;
    for (int i = 0; i < m; ++i) {
      const int j = i + 1;
      Vec3 grad;
      Eigen::Matrix3d hess;
      field_.slowness_grad_hess(g[j], t_, grad, hess);
      const Vec3 n = normal(g, j);
      const double speed = (g[j + 1] - g[j - 1]).norm() / (2.0 * hs_);
      const double B = speed * n.dot(hess * n);
      lo[i] = A[j - 1] / h2;
      up[i] = A[j] / h2;
      di[i] = -(A[j - 1] + A[j]) / h2 - B;
      rhs[i] = -r[i];
    }
    for (int i = 1; i < m; ++i) {
      if (di[i - 1] == 0.0) return false;
      const double f = lo[i] / di[i - 1];
      di[i] -= f * up[i - 1];
      rhs[i] -= f * rhs[i - 1];
    }
    a.assign(m, 0.0);
    if (di[m - 1] == 0.0) return false;
    a[m - 1] = rhs[m - 1] / di[m - 1];
    for (int i = m - 2; i >= 0; --i) a[i] = (rhs[i] - up[i] * a[i + 1]) / di[i];
    for (double v : a)
      if (!std::isfinite(v)) return false;
    return true;
  }

  std::vector<Vec3> update(const std::vector<Vec3>& g, const std::vector<double>& a, double omega) const {
    std::vector<Vec3> out = g;
    for (int j = 1; j + 1 < n_; ++j) out[j] = g[j] + omega * a[j - 1] * normal(g, j);
    return out;
  }

 private:
  const SpeedField& field_;
  double t_;
  int n_;
  double hs_;
  Vec3 x_, y_, e_, u_;
};

}  // namespace

RayPolyline refine_ray(const SpeedField& field, const Vec3& y, const Vec3& x, double t_hint,
                       const NewtonOptions& options) {
  if ((x - y).norm() == 0.0) throw SingularEvaluation("ray endpoints coincide");
  if (options.samples < 1) throw ConfigError("ray refinement needs at least one interior node");
  PlanarRay ray(field, y, x, t_hint, options.samples);
  RayPolyline out;

  std::vector<Vec3> g = ray.arc(0.0);
  out.chord_time = ray.travel_time(g);
  if (options.arc_scan && !field.is_constant()) {
    const double L = (x - y).norm();
    double best = ray.functional(g);
    for (double frac : {1.0 / 16, 1.0 / 8, 1.0 / 4, 3.0 / 8, 1.0 / 2}) {
      for (double sign : {1.0, -1.0}) {
        std::vector<Vec3> trial = ray.arc(sign * frac * L);
        const double f = ray.functional(trial);
        if (f < best) {
          best = f;
          g = std::move(trial);
        }
      }
    }
  }

  double rn = 0.0;
  std::vector<double> r = ray.residual(g, &rn);
  out.residual_history.push_back(rn);
  std::vector<double> a;
  out.converged = rn < options.tolerance;
  while (!out.converged && out.iterations < options.max_iters) {
    if (!ray.newton_step(g, r, a)) break;
    double omega = 1.0;
    bool accepted = false;
    while (omega >= options.min_step) {
      std::vector<Vec3> trial = ray.update(g, a, omega);
      double trial_norm = 0.0;
      std::vector<double> trial_r = ray.residual(trial, &trial_norm);
      if (std::isfinite(trial_norm) && trial_norm < rn) {
        g = std::move(trial);
        r = std::move(trial_r);
        rn = trial_norm;
        accepted = true;
        break;
      }
      omega *= 0.5;
    }
    if (!accepted) break;
    ++out.iterations;
    out.residual_history.push_back(rn);
    out.converged = rn < options.tolerance;
  }
  out.residual_norm = rn;
  out.travel_time = ray.travel_time(g);
  out.nodes = std::move(g);
  return out;
}

TravelTime::TravelTime(const TravelTimeModel& model, const SpeedField& field)
    : model_(model), field_(field), rule_(&gauss_legendre(std::max(1, model.quadrature_points))) {
  if (model_.closure == Closure::Constant && !field_.is_constant())
    throw ConfigError("the constant closure needs a constant speed field");
  if (model_.closure == Closure::NewtonRay && !field_.time_independent())
    throw ConfigError("the newton closure needs a time-independent speed field");
}

bool TravelTime::time_independent() const { return model_.closure == Closure::Constant || field_.time_independent(); }

double TravelTime::chord_integral(const Vec3& x, double t, const Vec3& y, double tau) const {
  const Vec3 d = x - y;
  const bool lift = model_.closure == Closure::ChordSpacetime;
  double s = 0.0;
  const std::size_t n = rule_->nodes.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double r = rule_->nodes[i];
    s += rule_->weights[i] * field_.slowness(y + r * d, lift ? tau + r * (t - tau) : tau);
  }
  return s;
}

double TravelTime::eta(const Vec3& x, double t, const Vec3& y, double tau) const {
  const double L = (x - y).norm();
  if (L == 0.0) return 0.0;
  switch (model_.closure) {
    case Closure::Constant: return L / field_.C;
    case Closure::ChordSpace:
    case Closure::ChordSpacetime: return L * chord_integral(x, t, y, tau);
    case Closure::NewtonRay: return refine_ray(field_, y, x, tau, model_.newton).travel_time;
  }
  return 0.0;
}

EtaDerivatives TravelTime::eta_derivatives(const Vec3& x, double t, const Vec3& y, double tau) const {
  EtaDerivatives out;
  const Vec3 d = x - y;
  const double L = d.norm();
  if (L == 0.0) return out;
  const Vec3 w = d / L;
  switch (model_.closure) {
    case Closure::Constant:
      out.eta = L / field_.C;
      out.grad_y = -w / field_.C;
      return out;
    case Closure::ChordSpace:
    case Closure::ChordSpacetime: {
      const bool lift = model_.closure == Closure::ChordSpacetime;
      double I = 0.0, It = 0.0;
      Vec3 Ig = Vec3::Zero();
      const std::size_t n = rule_->nodes.size();
      for (std::size_t i = 0; i < n; ++i) {
        const double r = rule_->nodes[i];
        const double wt = rule_->weights[i];
        const Vec3 p = y + r * d;
        const double s = lift ? tau + r * (t - tau) : tau;
        I += wt * field_.slowness(p, s);
        Ig += wt * (1.0 - r) * field_.slowness_grad(p, s);
        if (lift) It += wt * (1.0 - r) * field_.slowness_dt(p, s);
      }
      out.eta = L * I;
      out.grad_y = -I * w + L * Ig;
      out.d_tau = L * It;
      return out;
    }
    case Closure::NewtonRay: {
      const RayPolyline ray = refine_ray(field_, y, x, tau, model_.newton);
      out.eta = ray.travel_time;
      const Vec3 t0 = (ray.nodes[1] - ray.nodes[0]).normalized();
      out.grad_y = -field_.slowness(y, tau) * t0;
      return out;
    }
  }
  return out;
}

double TravelTime::arrival_time(const Vec3& x, const Vec3& y, double tau, double horizon) const {
  if (time_independent()) {
    const double T = tau + eta(x, tau, y, tau);
    if (T > horizon) {
      std::ostringstream os;
      os << "arrival time " << T << " lies beyond the horizon " << horizon;
      throw HorizonError(os.str());
    }
    return T;
  }
  const double L = (x - y).norm();
  if (L == 0.0) return tau;
  auto h = [&](double T) { return T - tau - eta(x, T, y, tau); };
  double hi = tau + 1.05 * L / field_.c_min() + 1e-12;
  if (hi > horizon) {
    if (h(horizon) < 0.0) throw HorizonError("no wavefront arrival before the horizon");
    hi = horizon;
  }
  double f_lo = h(tau);
  double f_hi = h(hi);
  if (f_hi <= 0.0) return hi;
  boost::uintmax_t iters = 100;
  auto tol = boost::math::tools::eps_tolerance<double>(50);
  const auto bracket = boost::math::tools::toms748_solve(h, tau, hi, f_lo, f_hi, tol, iters);
  return 0.5 * (bracket.first + bracket.second);
}

double eta_normal_derivative(const TravelTime& tt, const Vec3& x, double t, const Vec3& y, double tau,
                             const Vec3& normal_y) {
  if ((x - y).norm() == 0.0) throw SingularEvaluation("normal derivative of the travel time at coincident points");
  return normal_y.dot(tt.eta_derivatives(x, t, y, tau).grad_y);
}

double eta_dtau(const TravelTime& tt, const Vec3& x, double t, const Vec3& y, double tau, const Vec3& velocity_y) {
  const EtaDerivatives d = tt.eta_derivatives(x, t, y, tau);
  return d.d_tau + velocity_y.dot(d.grad_y);
}

}  // namespace conewave
