#pragma once

#include <functional>

#include "conewave/mot.hpp"

namespace conewave {

// σ(t) = t·cos(6πt) for t > 0, zero before.
double manufactured_density(double t);
double manufactured_density_dt(double t);

using TimeFunction = std::function<double(double)>;

// Single-layer potential at radius ρ and time t of a radially symmetric density
// σ(τ) carried by the circle of radius R0 + rate·τ (constant unit speed).
double circle_single_layer(const TimeFunction& sigma, double rho, double t, double R0 = 1.0, double rate = 0.0,
                           double tol = 1e-9);

// Exterior double-layer trace ½μ + D_Γμ on the fixed unit circle for a radially
// symmetric density; dmu is the time derivative of μ.
double circle_double_layer_trace(const TimeFunction& dmu, const TimeFunction& mu, double t, double tol = 1e-9);

struct ErrorNorms {
  double l2l2 = 0.0;
  double linf = 0.0;
};

// Relative space-time errors of the stabilized levels 1..K against exact(t) at every vertex.
ErrorNorms relative_errors(const DensityHistory& history, const TimeFunction& exact);

}  // namespace conewave
