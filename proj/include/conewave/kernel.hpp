#pragma once

#include "conewave/medium.hpp"

namespace conewave {

// Time slab ℓ seen from level k: θ ranges over [θ_lo, θ_hi) with θ = t_k − τ.
struct SlabContext {
  int k = 0;
  int l = 0;
  double dt = 0.0;
  double theta_lo = 0.0;
  double theta_hi = 0.0;
};

SlabContext make_slab(int k, int l, double dt);

struct KernelSample {
  double eta = 0.0;        // frozen η_{k,ℓ}
  double dnu_eta = 0.0;    // ν_y·∇_y η
  double deta_dtau = 0.0;  // total derivative along the source worldline
  double A = 1.0;
  double J = 1.0;
  double c_src = 1.0;
  double c_tgt = 1.0;

  double D() const { return 1.0 + deta_dtau; }
  // Throws SubsonicViolation when D ≤ 0.
  double Q() const;
};

double amplitude(const SpeedField& field, const Vec3& x, double t, const Vec3& y, double tau);

bool causal_mask_3d(const SlabContext& ctx, double eta);

struct SlWeights {
  double minus = 0.0;  // multiplies σ_{ℓ−1}
  double plus = 0.0;   // multiplies σ_ℓ
};

struct DlWeights {
  double partial = 0.0;  // multiplies μ_ℓ − μ_{ℓ−1}
  double minus = 0.0;
  double plus = 0.0;
};

SlWeights sl_weights_3d(const SlabContext& ctx, const KernelSample& s);
DlWeights dl_weights_3d(const SlabContext& ctx, const KernelSample& s);
SlWeights sl_weights_2d(const SlabContext& ctx, const KernelSample& s);
DlWeights dl_weights_2d(const SlabContext& ctx, const KernelSample& s);

// Coefficients of the slab in the nodal values at its two ends.
struct SlabCoefficients {
  double cur = 0.0;   // σ_ℓ
  double prev = 0.0;  // σ_{ℓ−1}
};

inline SlabCoefficients fold(const SlWeights& w) { return {w.plus, w.minus}; }
inline SlabCoefficients fold(const DlWeights& w) { return {w.plus + w.partial, w.minus - w.partial}; }

// λ = 1 + V²/(C² − V²); |V| ≥ C raises SubsonicViolation.
double jump_lambda(double C, double V);

}  // namespace conewave
