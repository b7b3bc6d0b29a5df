#include "conewave/manufactured.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <vector>

namespace conewave {

namespace {

using boost::math::quadrature::gauss_kronrod;

constexpr double kPi = std::numbers::pi;

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  if (!(b > a)) return 0.0;
  return gauss_kronrod<double, 31>::integrate(f, a, b, 20, tol);
}

}  // namespace

double manufactured_density(double t) { return t > 0.0 ? t * std::cos(6.0 * kPi * t) : 0.0; }

double manufactured_density_dt(double t) {
  return t > 0.0 ? std::cos(6.0 * kPi * t) - 6.0 * kPi * t * std::sin(6.0 * kPi * t) : 0.0;
}

double circle_single_layer(const TimeFunction& sigma, double rho, double t, double R0, double rate, double tol) {
  if (!(t > 0.0)) return 0.0;
  // Angular integral of the 2D kernel over the circle in closed form:
  // ∫₀^{2π} dψ / √(θ² − r²)₊ = 4K(a/b)/b (a < b) or 4K(b/a)/a, a² = θ² − (ρ−R)², b² = 4ρR.
  auto kernel = [&](double tau) {
    const double theta = t - tau;
    const double R = R0 + rate * tau;
    const double a2 = theta * theta - (rho - R) * (rho - R);
    if (!(a2 > 0.0)) return 0.0;
    const double a = std::sqrt(a2), b = 2.0 * std::sqrt(rho * R);
    double ang;
    if (a < b)
      ang = 4.0 * std::comp_ellint_1(a / b) / b;
    else if (a > b)
      ang = 4.0 * std::comp_ellint_1(b / a) / a;
    else
      return 0.0;
    return sigma(tau) * R * ang / (2.0 * kPi);
  };
  std::vector<double> cuts = {0.0, t};
  for (double c : {(t - rho + R0) / (1.0 - rate), (t + rho - R0) / (1.0 + rate), (t - rho - R0) / (1.0 + rate)})
    if (std::isfinite(c) && c > 1e-12 * t && c < t * (1.0 - 1e-12)) cuts.push_back(c);
  std::sort(cuts.begin(), cuts.end());
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) s += integrate(kernel, cuts[i], cuts[i + 1], tol);
  return s;
}

double circle_double_layer_trace(const TimeFunction& dmu, const TimeFunction& mu, double t, double tol) {
  if (!(t > 0.0)) return 0.0;
  // On the unit circle ν_y·∇_y|x−y| = r/2 with r = 2 sin(ψ/2).
  auto dg_dr = [&](double r) {
    const double S = std::acosh(t / r);
    auto f = [&](double s) { return std::cosh(s) * dmu(t - r * std::cosh(s)); };
    return -integrate(f, 0.0, S, tol) / (2.0 * kPi);
  };
  auto outer = [&](double psi) {
    const double r = 2.0 * std::sin(0.5 * psi);
    if (!(r > 0.0) || r >= t) return 0.0;
    return 0.5 * r * dg_dr(r);
  };
  const double psi_max = 2.0 * std::asin(std::min(1.0, 0.5 * t));
  return 0.5 * mu(t) + 2.0 * integrate(outer, 0.0, psi_max, tol);
}

ErrorNorms relative_errors(const DensityHistory& h, const TimeFunction& exact) {
  double num = 0.0, den = 0.0, emax = 0.0, xmax = 0.0;
  for (int k = 1; k <= h.steps(); ++k) {
    const double ex = exact(k * h.dt);
    const Eigen::VectorXd& v = h.density(k);
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      const double e = v[i] - ex;
      num += e * e;
      den += ex * ex;
      emax = std::max(emax, std::abs(e));
      xmax = std::max(xmax, std::abs(ex));
    }
  }
  ErrorNorms n;
  n.l2l2 = den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
  n.linf = xmax > 0.0 ? emax / xmax : emax;
  return n;
}

}  // namespace conewave
