#pragma once

#include <Eigen/Dense>

namespace conewave {

using Vec3 = Eigen::Vector3d;

enum class SpeedKind { Constant, TanhInclusion, TimeTanh, AtmosphereFireball };

const char* speed_kind_name(SpeedKind k);

// Physical inputs of the explosion preset; lengths in m, temperatures in K.
struct FireballParams {
  double length_scale = 100.0;  // L0
  double speed_scale = 340.0;   // c0
  double gamma = 1.4;
  double gas_constant = 287.0;
  double theta_ground = 290.0;
  double lapse = 70.0 / 15000.0;  // K per m
  double top = 15000.0;
  double delta_theta = 1000.0;
  double eps0 = 50.0;
  // Bubble geometry in nondimensional units.
  Vec3 center0 = Vec3(0.0, 0.0, 2.323);
  Vec3 center_velocity = Vec3(0.0, 0.0, 7.69e-2);
  double radius = 1.55;
};

class SpeedField {
 public:
  SpeedKind kind = SpeedKind::Constant;
  double C = 1.0;
  // tanh inclusion
  double c_out = 1.0;
  double c_in = 1.0;
  double delta = 0.2;
  double radius = 1.0;
  Vec3 center0 = Vec3::Zero();
  Vec3 center_velocity = Vec3::Zero();
  // time tanh
  double c_final = 0.5;
  double t_mid = 1.5;
  double rate = 5.0;
  FireballParams fireball;

  static SpeedField constant(double C);
  static SpeedField tanh_inclusion(double c_out, double c_in, double delta, double radius,
                                   const Vec3& center0 = Vec3::Zero(), const Vec3& center_velocity = Vec3::Zero());
  static SpeedField time_tanh(double c_final);
  static SpeedField atmosphere_fireball(const FireballParams& p);

  double speed(const Vec3& x, double t) const;
  double slowness(const Vec3& x, double t) const { return 1.0 / speed(x, t); }
  Vec3 slowness_grad(const Vec3& x, double t) const;
  void slowness_grad_hess(const Vec3& x, double t, Vec3& grad, Eigen::Matrix3d& hess) const;
  double slowness_dt(const Vec3& x, double t) const;
  // Speed with any inclusion removed.
  double ambient_speed(const Vec3& x, double t) const;

  bool is_constant() const { return kind == SpeedKind::Constant; }
  bool time_independent() const;
  double c_min() const;
  double c_max() const;
  Vec3 inclusion_center(double t) const;

 private:
  double fireball_speed(const Vec3& x, double t, bool with_bubble) const;
};

// Ratio of extremal speeds on the vertical line through the bubble centre,
// altitudes 0 to 1.5 km, at time t.
double fireball_contrast(const SpeedField& field, double t);

}  // namespace conewave
