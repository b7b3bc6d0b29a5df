#include "conewave/medium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "conewave/errors.hpp"

namespace conewave {

const char* speed_kind_name(SpeedKind k) {
  switch (k) {
    case SpeedKind::Constant: return "constant";
    case SpeedKind::TanhInclusion: return "tanh-inclusion";
    case SpeedKind::TimeTanh: return "time-tanh";
    case SpeedKind::AtmosphereFireball: return "atmosphere-fireball";
  }
  return "?";
}

SpeedField SpeedField::constant(double C) {
  if (!(C > 0.0)) throw ConfigError("constant speed must be positive");
  SpeedField f;
  f.kind = SpeedKind::Constant;
  f.C = C;
  return f;
}

SpeedField SpeedField::tanh_inclusion(double c_out, double c_in, double delta, double radius, const Vec3& center0,
                                      const Vec3& center_velocity) {
  if (!(c_out > 0.0 && c_in > 0.0 && delta > 0.0 && radius > 0.0))
    throw ConfigError("tanh inclusion needs positive speeds, width and radius");
  SpeedField f;
  f.kind = SpeedKind::TanhInclusion;
  f.c_out = c_out;
  f.c_in = c_in;
  f.delta = delta;
  f.radius = radius;
  f.center0 = center0;
  f.center_velocity = center_velocity;
  return f;
}

SpeedField SpeedField::time_tanh(double c_final) {
  if (!(c_final > 0.0)) throw ConfigError("final speed must be positive");
  SpeedField f;
  f.kind = SpeedKind::TimeTanh;
  f.c_final = c_final;
  return f;
}

SpeedField SpeedField::atmosphere_fireball(const FireballParams& p) {
  SpeedField f;
  f.kind = SpeedKind::AtmosphereFireball;
  f.fireball = p;
  f.radius = p.radius;
  f.center0 = p.center0;
  f.center_velocity = p.center_velocity;
  return f;
}

Vec3 SpeedField::inclusion_center(double t) const { return center0 + t * center_velocity; }

bool SpeedField::time_independent() const {
  switch (kind) {
    case SpeedKind::Constant: return true;
    case SpeedKind::TanhInclusion: return center_velocity.squaredNorm() == 0.0;
    case SpeedKind::TimeTanh: return false;
    case SpeedKind::AtmosphereFireball:
      return fireball.delta_theta == 0.0 || fireball.center_velocity.squaredNorm() == 0.0;
  }
  return false;
}

double SpeedField::fireball_speed(const Vec3& x, double t, bool with_bubble) const {
  const FireballParams& p = fireball;
  const double z_phys = x.z() * p.length_scale;
  double theta = p.theta_ground - p.lapse * z_phys;
  if (with_bubble && p.delta_theta != 0.0) {
    const double d_phys = ((x - inclusion_center(t)).norm() - p.radius) * p.length_scale;
    theta += 0.5 * p.delta_theta * (1.0 + std::tanh(-d_phys / p.eps0));
  }
  return std::sqrt(p.gamma * p.gas_constant * theta) / p.speed_scale;
}

double SpeedField::speed(const Vec3& x, double t) const {
  switch (kind) {
    case SpeedKind::Constant: return C;
    case SpeedKind::TanhInclusion: {
      const double d = (x - inclusion_center(t)).norm() - radius;
      return c_out + 0.5 * (c_in - c_out) * (1.0 + std::tanh(-d / delta));
    }
    case SpeedKind::TimeTanh:
      return 1.0 + 0.5 * (c_final - 1.0) * (1.0 + std::tanh(rate * (t - t_mid)));
    case SpeedKind::AtmosphereFireball: {
      const double z_phys = x.z() * fireball.length_scale;
      if (z_phys < -1e-9 || z_phys > fireball.top + 1e-9)
        throw DomainError("altitude " + std::to_string(z_phys) + " m outside the atmosphere profile");
      return fireball_speed(x, t, true);
    }
  }
  return C;
}

double SpeedField::ambient_speed(const Vec3& x, double t) const {
  switch (kind) {
    case SpeedKind::TanhInclusion: return c_out;
    case SpeedKind::AtmosphereFireball: return fireball_speed(x, t, false);
    default: return speed(x, t);
  }
}

double SpeedField::c_min() const {
  switch (kind) {
    case SpeedKind::Constant: return C;
    case SpeedKind::TanhInclusion: return std::min(c_out, c_in);
    case SpeedKind::TimeTanh: return std::min(1.0, c_final);
    case SpeedKind::AtmosphereFireball: {
      const FireballParams& p = fireball;
      const double theta = p.theta_ground - p.lapse * p.top + std::min(0.0, p.delta_theta);
      return std::sqrt(p.gamma * p.gas_constant * theta) / p.speed_scale;
    }
  }
  return C;
}

double SpeedField::c_max() const {
  switch (kind) {
    case SpeedKind::Constant: return C;
    case SpeedKind::TanhInclusion: return std::max(c_out, c_in);
    case SpeedKind::TimeTanh: return std::max(1.0, c_final);
    case SpeedKind::AtmosphereFireball: {
      const FireballParams& p = fireball;
      const double theta = p.theta_ground + std::max(0.0, p.delta_theta);
      return std::sqrt(p.gamma * p.gas_constant * theta) / p.speed_scale;
    }
  }
  return C;
}

namespace {

struct RadialSlowness {
  double k1 = 0.0;  // dκ/dd
  double k2 = 0.0;  // d²κ/dd²
};

RadialSlowness radial_tanh(double d, double c_out, double c_in, double delta) {
  const double s = std::tanh(-d / delta);
  const double half = 0.5 * (c_in - c_out);
  const double c = c_out + half * (1.0 + s);
  const double s1 = -(1.0 - s * s) / delta;
  const double s2 = -2.0 * s * (1.0 - s * s) / (delta * delta);
  const double c1 = half * s1;
  const double c2 = half * s2;
  RadialSlowness r;
  r.k1 = -c1 / (c * c);
  r.k2 = -c2 / (c * c) + 2.0 * c1 * c1 / (c * c * c);
  return r;
}

}  // namespace

void SpeedField::slowness_grad_hess(const Vec3& x, double t, Vec3& grad, Eigen::Matrix3d& hess) const {
  grad.setZero();
  hess.setZero();
  switch (kind) {
    case SpeedKind::Constant:
    case SpeedKind::TimeTanh:
      return;
    case SpeedKind::TanhInclusion: {
      const Vec3 rel = x - inclusion_center(t);
      const double rho = rel.norm();
      if (rho < 1e-14) return;
      const Vec3 n = rel / rho;
      const RadialSlowness r = radial_tanh(rho - radius, c_out, c_in, delta);
      grad = r.k1 * n;
      hess = r.k2 * n * n.transpose() + (r.k1 / rho) * (Eigen::Matrix3d::Identity() - n * n.transpose());
      return;
    }
    case SpeedKind::AtmosphereFireball: {
      const double h = 1e-4 * std::max(1.0, x.norm());
      auto kap = [&](const Vec3& p) { return 1.0 / fireball_speed(p, t, true); };
      const double k0 = kap(x);
      for (int i = 0; i < 3; ++i) {
        Vec3 e = Vec3::Zero();
        e[i] = h;
        grad[i] = (kap(x + e) - kap(x - e)) / (2.0 * h);
        hess(i, i) = (kap(x + e) - 2.0 * k0 + kap(x - e)) / (h * h);
        for (int j = 0; j < i; ++j) {
          Vec3 f = Vec3::Zero();
          f[j] = h;
          const double v = (kap(x + e + f) - kap(x + e - f) - kap(x - e + f) + kap(x - e - f)) / (4.0 * h * h);
          hess(i, j) = v;
          hess(j, i) = v;
        }
      }
      return;
    }
  }
}

Vec3 SpeedField::slowness_grad(const Vec3& x, double t) const {
  switch (kind) {
    case SpeedKind::Constant:
    case SpeedKind::TimeTanh:
      return Vec3::Zero();
    case SpeedKind::TanhInclusion: {
      const Vec3 rel = x - inclusion_center(t);
      const double rho = rel.norm();
      if (rho < 1e-14) return Vec3::Zero();
      return radial_tanh(rho - radius, c_out, c_in, delta).k1 * (rel / rho);
    }
    case SpeedKind::AtmosphereFireball: {
      const double h = 1e-4 * std::max(1.0, x.norm());
      Vec3 g;
      for (int i = 0; i < 3; ++i) {
        Vec3 e = Vec3::Zero();
        e[i] = h;
        g[i] = (1.0 / fireball_speed(x + e, t, true) - 1.0 / fireball_speed(x - e, t, true)) / (2.0 * h);
      }
      return g;
    }
  }
  return Vec3::Zero();
}

double SpeedField::slowness_dt(const Vec3& x, double t) const {
  switch (kind) {
    case SpeedKind::Constant: return 0.0;
    case SpeedKind::TanhInclusion: {
      if (center_velocity.squaredNorm() == 0.0) return 0.0;
      const Vec3 rel = x - inclusion_center(t);
      const double rho = rel.norm();
      if (rho < 1e-14) return 0.0;
      return radial_tanh(rho - radius, c_out, c_in, delta).k1 * (-(rel / rho).dot(center_velocity));
    }
    case SpeedKind::TimeTanh: {
      const double th = std::tanh(rate * (t - t_mid));
      const double c = 1.0 + 0.5 * (c_final - 1.0) * (1.0 + th);
      const double ct = 0.5 * (c_final - 1.0) * rate * (1.0 - th * th);
      return -ct / (c * c);
    }
    case SpeedKind::AtmosphereFireball: {
      if (time_independent()) return 0.0;
      const double h = 1e-4 * std::max(1.0, std::abs(t));
      return (1.0 / fireball_speed(x, t + h, true) - 1.0 / fireball_speed(x, t - h, true)) / (2.0 * h);
    }
  }
  return 0.0;
}

double fireball_contrast(const SpeedField& field, double t) {
  const Vec3 c = field.inclusion_center(t);
  double z_lo = c.z() - 10.0;
  double z_hi = c.z() + 10.0;
  if (field.kind == SpeedKind::AtmosphereFireball) {
    z_lo = 0.0;
    z_hi = 1500.0 / field.fireball.length_scale;
  }
  const int n = 4001;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = z_lo + (z_hi - z_lo) * i / (n - 1);
    const double v = field.speed(Vec3(c.x(), c.y(), z), t);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return hi / lo;
}

}  // namespace conewave
