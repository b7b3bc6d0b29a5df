#pragma once

#include <Eigen/Dense>
#include <limits>
#include <string>
#include <vector>

#include "conewave/assembly.hpp"
#include "conewave/mot.hpp"

namespace conewave {

enum class WaveKind { GaussianPacket, GaussianTrain, ModulatedTrain };

const char* wave_kind_name(WaveKind k);

// Plane-wave pulses exp(−(s/width)²) with s = a·x − c₀(t − m·T_rep) + x₀, m = 0..count−1,
// optionally multiplied by cos(2π f₀ s).
struct IncidentWave {
  WaveKind kind = WaveKind::GaussianPacket;
  Vec3 direction = Vec3::UnitX();
  double x0 = 1.5;
  double width = 0.2;
  double f0 = 0.0;
  double period = 0.0;
  int count = 1;
  double c0 = 1.0;

  static IncidentWave packet(const Vec3& direction, double x0, double width, double c0 = 1.0);
  static IncidentWave train(const Vec3& direction, double x0, double width, double period, int count, double c0 = 1.0);
  static IncidentWave modulated(const Vec3& direction, double x0, double width, double f0, double period, int count,
                                double c0 = 1.0);

  int pulses() const { return kind == WaveKind::GaussianPacket ? 1 : count; }
  double argument(const Vec3& x, double t, int m) const;
  double value(const Vec3& x, double t) const;
};

// F_k = −φ_inc at the vertices of the frame.
Eigen::VectorXd boundary_data(const IncidentWave& wave, const MeshFrame& frame);

// Times at which the envelope peak of each pulse reaches z(β, t), ascending.
std::vector<double> reflection_source_times(const IncidentWave& wave, const InterfaceMotion& motion, const Vec3& beta,
                                            double horizon);

// Reference points used to sample the boundary: the mesh vertices, or with
// oversample = 4 also edge midpoints (3D) or three extra points per segment (2D).
std::vector<Vec3> boundary_samples(const SurfaceMesh& mesh, int oversample);

class ReflectedArrival {
 public:
  ReflectedArrival(const TravelTime& tt, const IncidentWave& wave, const InterfaceMotion& motion,
                   const SurfaceMesh& mesh, double horizon, int oversample = 1);
  // Earliest reflected arrival at x; +∞ when no event reaches x before the horizon.
  double operator()(const Vec3& x) const;
  std::size_t event_count() const { return events_.size(); }

 private:
  struct Event {
    Vec3 y;
    double tau;
  };
  TravelTime tt_;
  double horizon_;
  double c_max_;
  std::vector<Event> events_;
};

enum class FieldMode { Band, Interior, Full };

FieldMode parse_field_mode(const std::string& s);
const char* field_mode_name(FieldMode m);

// Scattered potential off the boundary from a solved density history.
class FieldEvaluator {
 public:
  FieldEvaluator(const Discretization& disc, const DensityHistory& history);

  double potential(const Vec3& x, int k) const;
  // Applies the causal mask of the mode: Band keeps |T_rfl − t_k| ≤ band, Interior keeps T_rfl ≤ t_k.
  double masked(const Vec3& x, int k, double trfl, FieldMode mode, double band) const;
  std::vector<double> evaluate(const std::vector<Vec3>& targets, int k, const std::vector<double>& trfl, FieldMode mode,
                               double band) const;

 private:
  double layer(LayerKind kind, const Vec3& x, int k, const std::vector<std::vector<double>>& hat) const;

  const Discretization& disc_;
  const DensityHistory& history_;
  std::vector<std::vector<double>> hat_;
  std::vector<std::vector<double>> fhat_;
};

enum class SensorKind { Fixed, CoMoving };

struct SensorSpec {
  std::string name;
  SensorKind kind = SensorKind::Fixed;
  Vec3 anchor = Vec3::Zero();
};

Vec3 sensor_position(const SensorSpec& s, const InterfaceMotion& motion, double t);

struct SensorSeries {
  std::vector<double> t;
  std::vector<double> value;
  std::vector<double> trfl;
};

// Values at t_1..t_K using the interior causal mask.
SensorSeries sensor_history(const SensorSpec& spec, const FieldEvaluator& eval, const ReflectedArrival& arrival,
                            const Discretization& disc);

struct PeakInfo {
  double time = std::numeric_limits<double>::quiet_NaN();
  double value = 0.0;
};

// Largest |value| within [t_lo, t_hi].
PeakInfo dominant_arrival(const SensorSeries& s, double t_lo = -std::numeric_limits<double>::infinity(),
                          double t_hi = std::numeric_limits<double>::infinity());

}  // namespace conewave
