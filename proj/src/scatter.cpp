#include "conewave/scatter.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <numbers>

#include "conewave/errors.hpp"
#include "conewave/parallel.hpp"

namespace conewave {

const char* wave_kind_name(WaveKind k) {
  switch (k) {
    case WaveKind::GaussianPacket: return "gaussian-packet";
    case WaveKind::GaussianTrain: return "gaussian-train";
    case WaveKind::ModulatedTrain: return "modulated-train";
  }
  return "?";
}

IncidentWave IncidentWave::packet(const Vec3& d, double x0, double width, double c0) {
  IncidentWave w;
  w.kind = WaveKind::GaussianPacket;
  w.direction = d.normalized();
  w.x0 = x0;
  w.width = width;
  w.c0 = c0;
  return w;
}

IncidentWave IncidentWave::train(const Vec3& d, double x0, double width, double period, int count, double c0) {
  IncidentWave w = packet(d, x0, width, c0);
  w.kind = WaveKind::GaussianTrain;
  w.period = period;
  w.count = count;
  return w;
}

IncidentWave IncidentWave::modulated(const Vec3& d, double x0, double width, double f0, double period, int count,
                                     double c0) {
  IncidentWave w = train(d, x0, width, period, count, c0);
  w.kind = WaveKind::ModulatedTrain;
  w.f0 = f0;
  return w;
}

double IncidentWave::argument(const Vec3& x, double t, int m) const {
  return direction.dot(x) - c0 * (t - period * m) + x0;
}

double IncidentWave::value(const Vec3& x, double t) const {
  double v = 0.0;
  for (int m = 0; m < pulses(); ++m) {
    const double s = argument(x, t, m);
    const double e = std::exp(-(s / width) * (s / width));
    v += kind == WaveKind::ModulatedTrain ? e * std::cos(2.0 * std::numbers::pi * f0 * s) : e;
  }
  return v;
}

Eigen::VectorXd boundary_data(const IncidentWave& wave, const MeshFrame& frame) {
  Eigen::VectorXd F(frame.positions.size());
  for (std::size_t r = 0; r < frame.positions.size(); ++r) F[r] = -wave.value(frame.positions[r], frame.t);
  return F;
}

std::vector<double> reflection_source_times(const IncidentWave& wave, const InterfaceMotion& motion, const Vec3& beta,
                                            double horizon) {
  std::vector<double> out;
  for (int m = 0; m < wave.pulses(); ++m) {
    auto h = [&](double t) { return wave.argument(motion.point(beta, t), t, m); };
    const double h0 = h(0.0), h1 = h(horizon);
    if (h0 == 0.0) {
      out.push_back(0.0);
      continue;
    }
    if (h0 < 0.0 || h1 > 0.0) continue;
    if (h1 == 0.0) {
      out.push_back(horizon);
      continue;
    }
    boost::uintmax_t iters = 200;
    const auto r = boost::math::tools::toms748_solve(h, 0.0, horizon, h0, h1,
                                                     boost::math::tools::eps_tolerance<double>(50), iters);
    out.push_back(0.5 * (r.first + r.second));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Vec3> boundary_samples(const SurfaceMesh& mesh, int oversample) {
  std::vector<Vec3> pts = mesh.vertices;
  if (oversample <= 1) return pts;
  if (oversample != 4) throw ConfigError("boundary oversampling must be 1 or 4");
  if (mesh.dim == 3) {
    for (const auto& e : mesh.edges) pts.push_back((mesh.vertices[e[0]] + mesh.vertices[e[1]]).normalized());
  } else {
    for (const auto& s : mesh.segments) {
      const Vec3& a = mesh.vertices[s[0]];
      const Vec3& b = mesh.vertices[s[1]];
      const double t0 = std::atan2(a.y(), a.x());
      double dt = std::atan2(b.y(), b.x()) - t0;
      if (dt < 0.0) dt += 2.0 * std::numbers::pi;
      for (int j = 1; j < 4; ++j) {
        const double t = t0 + 0.25 * j * dt;
        pts.emplace_back(std::cos(t), std::sin(t), 0.0);
      }
    }
  }
  return pts;
}

ReflectedArrival::ReflectedArrival(const TravelTime& tt, const IncidentWave& wave, const InterfaceMotion& motion,
                                   const SurfaceMesh& mesh, double horizon, int oversample)
    : tt_(tt), horizon_(horizon), c_max_(tt.field().c_max()) {
  for (const Vec3& beta : boundary_samples(mesh, oversample))
    for (double tau : reflection_source_times(wave, motion, beta, horizon)) events_.push_back({motion.point(beta, tau), tau});
  std::sort(events_.begin(), events_.end(), [](const Event& a, const Event& b) { return a.tau < b.tau; });
}

double ReflectedArrival::operator()(const Vec3& x) const {
  double best = std::numeric_limits<double>::infinity();
  for (const Event& e : events_) {
    if (e.tau >= best) break;
    if (e.tau + (x - e.y).norm() / c_max_ >= best) continue;
    try {
      best = std::min(best, tt_.arrival_time(x, e.y, e.tau, horizon_));
    } catch (const HorizonError&) {
    }
  }
  return best;
}

FieldMode parse_field_mode(const std::string& s) {
  if (s == "band") return FieldMode::Band;
  if (s == "interior") return FieldMode::Interior;
  if (s == "full") return FieldMode::Full;
  throw ConfigError("unknown field mode '" + s + "' (expected band, interior or full)");
}

const char* field_mode_name(FieldMode m) {
  switch (m) {
    case FieldMode::Band: return "band";
    case FieldMode::Interior: return "interior";
    case FieldMode::Full: return "full";
  }
  return "?";
}

FieldEvaluator::FieldEvaluator(const Discretization& disc, const DensityHistory& history)
    : disc_(disc), history_(history) {
  const int K = history.steps();
  hat_.resize(K + 1);
  for (int k = 0; k <= K; ++k) hat_[k] = disc.interpolate(history.density(k));
  if (history.kind == SolverKind::Kirchhoff) {
    fhat_.resize(K + 1);
    for (int k = 0; k <= K; ++k) fhat_[k] = disc.interpolate(history.data[k]);
  }
}

double FieldEvaluator::layer(LayerKind kind, const Vec3& x, int k, const std::vector<std::vector<double>>& hat) const {
  std::vector<Contribution> c;
  disc_.contributions(kind, k, x, c);
  double v = 0.0;
  for (const Contribution& e : c) v += e.cur * hat[e.l][e.q] + e.prev * hat[e.l - 1][e.q];
  return v;
}

double FieldEvaluator::potential(const Vec3& x, int k) const {
  if (disc_.motion().inside(x, disc_.time(k))) throw DomainError("field target lies inside the obstacle");
  switch (history_.kind) {
    case SolverKind::SL: return layer(LayerKind::Single, x, k, hat_);
    case SolverKind::DL: return layer(LayerKind::Double, x, k, hat_);
    case SolverKind::Kirchhoff: return layer(LayerKind::Double, x, k, fhat_) - layer(LayerKind::Single, x, k, hat_);
  }
  return 0.0;
}

double FieldEvaluator::masked(const Vec3& x, int k, double trfl, FieldMode mode, double band) const {
  const double t = disc_.time(k);
  if (mode == FieldMode::Band && !(std::abs(trfl - t) <= band)) return 0.0;
  if (mode == FieldMode::Interior && !(trfl <= t)) return 0.0;
  return potential(x, k);
}

std::vector<double> FieldEvaluator::evaluate(const std::vector<Vec3>& targets, int k, const std::vector<double>& trfl,
                                             FieldMode mode, double band) const {
  std::vector<double> out(targets.size(), 0.0);
  parallel_for(targets.size(), [&](std::size_t i) { out[i] = masked(targets[i], k, trfl.at(i), mode, band); });
  return out;
}

Vec3 sensor_position(const SensorSpec& s, const InterfaceMotion& motion, double t) {
  return s.kind == SensorKind::Fixed ? s.anchor : motion.transport(s.anchor, t);
}

SensorSeries sensor_history(const SensorSpec& spec, const FieldEvaluator& eval, const ReflectedArrival& arrival,
                            const Discretization& disc) {
  SensorSeries s;
  const int K = disc.steps();
  s.t.resize(K);
  s.value.resize(K);
  s.trfl.resize(K);
  double fixed_trfl = spec.kind == SensorKind::Fixed ? arrival(spec.anchor) : 0.0;
  parallel_for(static_cast<std::size_t>(K), [&](std::size_t i) {
    const int k = static_cast<int>(i) + 1;
    const double t = disc.time(k);
    const Vec3 x = sensor_position(spec, disc.motion(), t);
    const double trfl = spec.kind == SensorKind::Fixed ? fixed_trfl : arrival(x);
    s.t[i] = t;
    s.trfl[i] = trfl;
    s.value[i] = eval.masked(x, k, trfl, FieldMode::Interior, 0.0);
  });
  return s;
}

PeakInfo dominant_arrival(const SensorSeries& s, double t_lo, double t_hi) {
  PeakInfo p;
  for (std::size_t i = 0; i < s.t.size(); ++i) {
    if (s.t[i] < t_lo || s.t[i] > t_hi) continue;
    if (std::isnan(p.time) || std::abs(s.value[i]) > std::abs(p.value)) {
      p.time = s.t[i];
      p.value = s.value[i];
    }
  }
  return p;
}

}  // namespace conewave
