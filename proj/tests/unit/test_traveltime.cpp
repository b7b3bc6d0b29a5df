#include <doctest.h>

#include <cmath>
#include <random>

#include "conewave/errors.hpp"
#include "conewave/traveltime.hpp"
#include "oracles/fmm.hpp"

using namespace conewave;

namespace {

TravelTime chord(const SpeedField& f, Closure c = Closure::ChordSpace, int points = 16) {
  TravelTimeModel m;
  m.closure = c;
  m.quadrature_points = points;
  return TravelTime(m, f);
}

// Composite Simpson rule on [0, 1].
template <class F>
double simpson(F f, int n = 2000) {
  const double h = 1.0 / n;
  double s = f(0.0) + f(1.0);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(i * h);
  return s * h / 3.0;
}

}  // namespace

TEST_CASE("gauss-legendre nodes integrate polynomials") {
  for (int n : {1, 4, 16}) {
    const GaussLegendre& g = gauss_legendre(n);
    double w = 0.0, m = 0.0;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      w += g.weights[i];
      m += g.weights[i] * std::pow(g.nodes[i], 2 * n - 1);
    }
    CHECK(w == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(m == doctest::Approx(1.0 / (2 * n)).epsilon(1e-12));
  }
}

TEST_CASE("constant closure") {
  TravelTimeModel m;
  const TravelTime tt(m, SpeedField::constant(2.0));
  CHECK(tt.eta(Vec3(1, 0, 0), 0.0, Vec3(0, 0, 0), 0.0) == doctest::Approx(0.5));
  CHECK(tt.time_independent());
  CHECK(tt.arrival_time(Vec3(0, 3, 4), Vec3::Zero(), 0.25, 10.0) == doctest::Approx(0.25 + 2.5));
  CHECK_THROWS_AS(tt.arrival_time(Vec3(0, 3, 4), Vec3::Zero(), 0.25, 1.0), HorizonError);
  CHECK_THROWS_AS(TravelTime(m, SpeedField::tanh_inclusion(1, 0.5, 0.2, 1)), ConfigError);
}

TEST_CASE("normal derivative on the unit sphere") {
  TravelTimeModel m;
  for (double C : {1.0, 2.0}) {
    const TravelTime tt(m, SpeedField::constant(C));
    const Vec3 x(1, 0, 0), y(-1, 0, 0);
    CHECK(eta_normal_derivative(tt, x, 0.0, y, 0.0, y) == doctest::Approx(1.0 / C));
    CHECK_THROWS_AS(eta_normal_derivative(tt, x, 0.0, x, 0.0, x), SingularEvaluation);
  }
  // diagonal limit along the normal: ∓κ depending on the side
  const TravelTime tt = chord(SpeedField::tanh_inclusion(1.0, 0.4, 0.3, 1.0));
  const Vec3 y(0.0, 0.8, 0.6), n = y;
  const double kappa = tt.field().slowness(y, 0.0);
  CHECK(eta_normal_derivative(tt, y + 1e-7 * n, 0.0, y, 0.0, n) == doctest::Approx(-kappa).epsilon(1e-5));
  CHECK(eta_normal_derivative(tt, y - 1e-7 * n, 0.0, y, 0.0, n) == doctest::Approx(kappa).epsilon(1e-5));
}

TEST_CASE("chord closure derivatives agree with finite differences") {
  const SpeedField f = SpeedField::tanh_inclusion(1.0, 0.227, 0.2, 1.0);
  const TravelTime tt = chord(f);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 20; ++i) {
    const Vec3 x(u(rng), u(rng), u(rng)), y(u(rng), u(rng), u(rng));
    const Vec3 n = Vec3(u(rng), u(rng), u(rng)).normalized();
    const double h = 1e-6;
    const double fd = (tt.eta(x, 0.0, y + h * n, 0.0) - tt.eta(x, 0.0, y - h * n, 0.0)) / (2 * h);
    const double an = eta_normal_derivative(tt, x, 0.0, y, 0.0, n);
    CHECK(an == doctest::Approx(fd).epsilon(1e-5).scale(1.0));
  }
}

TEST_CASE("chord integral matches dense quadrature") {
  const SpeedField f = SpeedField::tanh_inclusion(1.0, 0.5, 0.2, 1.0);
  const TravelTime tt = chord(f);
  const Vec3 y(-1.5, 0.3, 0.0), x(1.2, -0.1, 0.4);
  const double L = (x - y).norm();
  const double ref = L * simpson([&](double r) { return f.slowness(y + r * (x - y), 0.0); }, 4000);
  CHECK(tt.eta(x, 0.0, y, 0.0) == doctest::Approx(ref).epsilon(1e-5));
  CHECK(chord(f, Closure::ChordSpace, 64).eta(x, 0.0, y, 0.0) == doctest::Approx(ref).epsilon(1e-10));
  CHECK(chord(SpeedField::constant(2.0)).eta(Vec3(1, 0, 0), 0.0, Vec3::Zero(), 0.0) == doctest::Approx(0.5));

  // spectral convergence in the node count
  const double e8 = std::abs(chord(f, Closure::ChordSpace, 8).eta(x, 0.0, y, 0.0) - ref);
  const double e16 = std::abs(tt.eta(x, 0.0, y, 0.0) - ref);
  CHECK(e8 / e16 >= 16.0);
}

TEST_CASE("source-time derivative") {
  TravelTimeModel m;
  const double C = 1.5;
  const TravelTime tt(m, SpeedField::constant(C));
  const Vec3 x(2, 1, 0), y(0.3, -0.2, 0.5), v(0.4, 0.1, -0.2);
  CHECK(eta_dtau(tt, x, 1.0, y, 0.5, v) == doctest::Approx(-v.dot(x - y) / (C * (x - y).norm())));
  CHECK(eta_dtau(tt, x, 1.0, y, 0.5, Vec3::Zero()) == 0.0);
  // diagonal normal limit gives −κ V_ν
  const Vec3 n(0, 0, 1);
  CHECK(eta_dtau(tt, y + 1e-8 * n, 1.0, y, 1.0, 0.3 * n) == doctest::Approx(-0.3 / C).epsilon(1e-6));

  // space-time chord: finite difference in τ at a fixed source point
  const TravelTime st = chord(SpeedField::time_tanh(0.5), Closure::ChordSpacetime);
  const double h = 1e-6;
  const double fd = (st.eta(x, 2.0, y, 1.2 + h) - st.eta(x, 2.0, y, 1.2 - h)) / (2 * h);
  CHECK(st.eta_derivatives(x, 2.0, y, 1.2).d_tau == doctest::Approx(fd).epsilon(1e-6));
}

TEST_CASE("arrival time in the time-only benchmark medium") {
  const SpeedField f = SpeedField::time_tanh(0.5);
  const TravelTime tt = chord(f, Closure::ChordSpacetime, 48);
  const Vec3 y = Vec3::Zero(), x(2, 0, 0);
  // root of T = 2∫₀¹ dr/c(rT) by plain bisection
  auto g = [&](double T) { return T - 2.0 * simpson([&](double r) { return 1.0 / f.speed(x, r * T); }, 20000); };
  double lo = 1.0, hi = 10.0;
  while (hi - lo > 1e-11) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) > 0.0 ? hi : lo) = mid;
  }
  const double T = tt.arrival_time(x, y, 0.0, 20.0);
  CHECK(T == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-8));
  // simple root: slope of θ − η at least 1 − Mach
  const double d = 1e-5;
  const double slope = ((T + d - tt.eta(x, T + d, y, 0.0)) - (T - d - tt.eta(x, T - d, y, 0.0))) / (2 * d);
  CHECK(slope > 0.0);
}

TEST_CASE("newton ray in a constant field is the chord") {
  const RayPolyline r = refine_ray(SpeedField::constant(2.0), Vec3(0, 0, 0), Vec3(3, 4, 0), 0.0);
  CHECK(r.iterations == 0);
  CHECK(r.residual_norm == doctest::Approx(0.0).scale(1.0));
  CHECK(r.converged);
  CHECK(r.travel_time == doctest::Approx(2.5).epsilon(1e-14));
  for (std::size_t j = 0; j < r.nodes.size(); ++j) {
    const double s = double(j) / (r.nodes.size() - 1);
    CHECK((r.nodes[j] - s * Vec3(3, 4, 0)).norm() < 1e-14);
  }
  CHECK_THROWS_AS(refine_ray(SpeedField::constant(1.0), Vec3::Zero(), Vec3::Zero(), 0.0), SingularEvaluation);
}

TEST_CASE("newton ray bypasses a slow disk") {
  const SpeedField f = SpeedField::tanh_inclusion(1.0, 0.227, 0.2, 1.0);
  const Vec3 y(-2, 0, 0), x(2, 0, 0);
  const RayPolyline r = refine_ray(f, y, x, 0.0);
  CHECK(r.travel_time < r.chord_time);
  for (std::size_t i = 1; i < r.residual_history.size(); ++i)
    CHECK(r.residual_history[i] <= r.residual_history[i - 1]);

  // fast-marching oracle at grid spacing 1/200 in the plane x3 = 0
  const double h = 1.0 / 200;
  const int n = 1001;
  oracle::FastMarching2D fmm(-2.5, -2.5, h, n, [&](double a, double b) { return f.slowness(Vec3(a, b, 0), 0.0); });
  fmm.solve(y.x(), y.y(), 0.1);
  const double ref = fmm.at(x.x(), x.y());
  MESSAGE("newton " << r.travel_time << " chord " << r.chord_time << " fmm " << ref);
  CHECK(std::abs(r.travel_time - ref) < 0.02 * ref);

  // the closure uses the refined time
  TravelTimeModel m;
  m.closure = Closure::NewtonRay;
  const TravelTime tt(m, f);
  CHECK(tt.eta(x, 0.0, y, 0.0) == doctest::Approx(r.travel_time).epsilon(1e-12));
  CHECK(tt.eta(x, 0.0, y, 0.0) < chord(f).eta(x, 0.0, y, 0.0));
}

TEST_CASE("newton closure rejects time-dependent media") {
  TravelTimeModel m;
  m.closure = Closure::NewtonRay;
  CHECK_THROWS_AS(TravelTime(m, SpeedField::time_tanh(0.5)), ConfigError);
}
