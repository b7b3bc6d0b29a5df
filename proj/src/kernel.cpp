#include "conewave/kernel.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "conewave/errors.hpp"

namespace conewave {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Primitives in θ of the 2D kernel 1/√(θ²−η²) and its moments, valid for θ ≥ η.
double F0(double th, double eta) { return std::acosh(std::max(1.0, th / eta)); }
double F1(double th, double eta) { return std::sqrt(std::max(0.0, th * th - eta * eta)); }
double P0(double th, double eta) { return F1(th, eta) / (kTwoPi * eta * th); }
double P1(double th, double eta) { return std::acos(std::min(1.0, eta / th)) / kTwoPi; }

}  // namespace

SlabContext make_slab(int k, int l, double dt) {
  SlabContext c;
  c.k = k;
  c.l = l;
  c.dt = dt;
  c.theta_lo = (k - l) * dt;
  c.theta_hi = c.theta_lo + dt;
  return c;
}

double KernelSample::Q() const {
  const double d = D();
  if (!(d > 0.0)) {
    std::ostringstream os;
    os << "nondegeneracy 1 + dη/dτ = " << d << " is not positive";
    throw SubsonicViolation(os.str());
  }
  return -A * dnu_eta / d;
}

double amplitude(const SpeedField& field, const Vec3& x, double t, const Vec3& y, double tau) {
  return 1.0 / std::sqrt(field.speed(x, t) * field.speed(y, tau));
}

bool causal_mask_3d(const SlabContext& ctx, double eta) {
  return eta > 0.0 && ctx.theta_lo <= eta && eta < ctx.theta_hi;
}

SlWeights sl_weights_3d(const SlabContext& ctx, const KernelSample& s) {
  SlWeights w;
  if (!causal_mask_3d(ctx, s.eta)) return w;
  const double f = s.A * s.J / (kFourPi * ctx.dt * s.eta);
  w.minus = -f * (ctx.theta_lo - s.eta);
  w.plus = f * (ctx.theta_hi - s.eta);
  return w;
}

DlWeights dl_weights_3d(const SlabContext& ctx, const KernelSample& s) {
  DlWeights w;
  if (!causal_mask_3d(ctx, s.eta)) return w;
  const double f = s.Q() * s.J / (kFourPi * ctx.dt * s.eta);
  w.partial = f;
  w.minus = -f * (ctx.theta_lo - s.eta) / s.eta;
  w.plus = f * (ctx.theta_hi - s.eta) / s.eta;
  return w;
}

SlWeights sl_weights_2d(const SlabContext& ctx, const KernelSample& s) {
  SlWeights w;
  if (!(s.eta > 0.0) || ctx.theta_hi <= s.eta) return w;
  const double a = std::max(ctx.theta_lo, s.eta), b = ctx.theta_hi, e = s.eta;
  const double f = s.A * s.J / (kTwoPi * ctx.dt);
  const double f0 = F0(b, e) - F0(a, e);
  const double f1 = F1(b, e) - F1(a, e);
  w.minus = f * (f1 - ctx.theta_lo * f0);
  w.plus = f * (ctx.theta_hi * f0 - f1);
  return w;
}

DlWeights dl_weights_2d(const SlabContext& ctx, const KernelSample& s) {
  DlWeights w;
  if (!(s.eta > 0.0) || ctx.theta_hi <= s.eta) return w;
  const double a = std::max(ctx.theta_lo, s.eta), b = ctx.theta_hi, e = s.eta;
  const double f = s.Q() * s.J / ctx.dt;
  const double p0 = P0(b, e) - P0(a, e);
  const double p1 = P1(b, e) - P1(a, e);
  w.partial = f * p1;
  w.minus = f * (p1 - ctx.theta_lo * p0);
  w.plus = f * (ctx.theta_hi * p0 - p1);
  return w;
}

double jump_lambda(double C, double V) {
  if (!(std::abs(V) < C)) {
    std::ostringstream os;
    os << "normal speed " << V << " reaches the sound speed " << C;
    throw SubsonicViolation(os.str());
  }
  return 1.0 + V * V / (C * C - V * V);
}

}  // namespace conewave
