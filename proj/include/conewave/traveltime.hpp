#pragma once

#include <vector>

#include "conewave/medium.hpp"
#include "conewave/quadrature.hpp"

namespace conewave {

enum class Closure { Constant, ChordSpace, ChordSpacetime, NewtonRay };

const char* closure_name(Closure c);

struct NewtonOptions {
  int max_iters = 20;
  double tolerance = 1e-8;
  int samples = 33;  // interior nodes
  double min_step = 1.0 / 1024.0;
  // Compare the chord against bent trial curves before iterating.
  bool arc_scan = true;
};

struct TravelTimeModel {
  Closure closure = Closure::Constant;
  int quadrature_points = 16;
  NewtonOptions newton;
};

struct EtaDerivatives {
  double eta = 0.0;
  Vec3 grad_y = Vec3::Zero();
  double d_tau = 0.0;  // partial derivative in the source time
};

struct RayPolyline {
  std::vector<Vec3> nodes;
  double travel_time = 0.0;
  double chord_time = 0.0;
  double residual_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  // Residual norm of the starting curve followed by every accepted iterate.
  std::vector<double> residual_history;
};

RayPolyline refine_ray(const SpeedField& field, const Vec3& y, const Vec3& x, double t_hint,
                       const NewtonOptions& options = {});

class TravelTime {
 public:
  TravelTime(const TravelTimeModel& model, const SpeedField& field);

  const TravelTimeModel& model() const { return model_; }
  const SpeedField& field() const { return field_; }
  // η does not depend on the observation or source time.
  bool time_independent() const;

  double eta(const Vec3& x, double t, const Vec3& y, double tau) const;
  EtaDerivatives eta_derivatives(const Vec3& x, double t, const Vec3& y, double tau) const;
  // Earliest T with T − τ = η(x, T; y, τ); throws HorizonError if it lies beyond horizon.
  double arrival_time(const Vec3& x, const Vec3& y, double tau, double horizon) const;

 private:
  double chord_integral(const Vec3& x, double t, const Vec3& y, double tau) const;

  TravelTimeModel model_;
  SpeedField field_;
  const GaussLegendre* rule_;
};

// ν_y · ∇_y η; coincident points raise SingularEvaluation.
double eta_normal_derivative(const TravelTime& tt, const Vec3& x, double t, const Vec3& y, double tau,
                             const Vec3& normal_y);
// Total derivative of η along a source moving with velocity v_y.
double eta_dtau(const TravelTime& tt, const Vec3& x, double t, const Vec3& y, double tau, const Vec3& velocity_y);

}  // namespace conewave
