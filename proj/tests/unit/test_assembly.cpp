#include <doctest.h>

#include <cmath>

#include "conewave/assembly.hpp"
#include "conewave/errors.hpp"

using namespace conewave;

namespace {

TravelTime constant_tt(double C = 1.0) { return TravelTime(TravelTimeModel{}, SpeedField::constant(C)); }

double monomial(const QuadratureRule& q, int a, int b) {
  double s = 0.0;
  for (std::size_t i = 0; i < q.weights.size(); ++i)
    s += q.weights[i] * std::pow(q.points[i][0], a) * std::pow(q.points[i][1], b);
  return s;
}

// ∫ ξ₁^a ξ₂^b over the reference triangle = a! b! / (a + b + 2)!
double exact_moment(int a, int b) { return std::tgamma(a + 1) * std::tgamma(b + 1) / std::tgamma(a + b + 3); }

// Max deviation from 1 of the all-ones single-layer row sums at level k.
double sphere_identity_error(int level, int rule, double dt, int k) {
  const SurfaceMesh mesh = icosphere_mesh(level);
  const Discretization d(mesh, InterfaceMotion::fixed_sphere(), constant_tt(), rule, dt, k);
  double worst = 0.0;
  std::vector<Contribution> c;
  for (std::size_t r = 0; r < mesh.vertex_count(); ++r) {
    c.clear();
    d.vertex_contributions(LayerKind::Single, k, int(r), c);
    double s = 0.0;
    for (const Contribution& x : c) s += x.cur + x.prev;
    worst = std::max(worst, std::abs(s - 1.0));
  }
  return worst;
}

}  // namespace

TEST_CASE("triangle rules") {
  const QuadratureRule r1 = gauss_rule(1), r3 = gauss_rule(3), r6 = gauss_rule(6);
  CHECK(r1.points.size() == 1);
  CHECK(r1.points[0][0] == doctest::Approx(1.0 / 3));
  CHECK(r1.weights[0] == doctest::Approx(0.5));
  for (const QuadratureRule* q : {&r1, &r3, &r6}) CHECK(monomial(*q, 0, 0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(monomial(r3, 1, 0) == doctest::Approx(1.0 / 6).epsilon(1e-14));
  CHECK(monomial(r6, 2, 1) == doctest::Approx(1.0 / 60).epsilon(1e-14));
  for (int a = 0; a <= 4; ++a)
    for (int b = 0; a + b <= 4; ++b) {
      if (a + b <= 2) CHECK(monomial(r3, a, b) == doctest::Approx(exact_moment(a, b)).epsilon(1e-14));
      CHECK(monomial(r6, a, b) == doctest::Approx(exact_moment(a, b)).epsilon(1e-13));
    }
  CHECK_THROWS_AS(gauss_rule(4), ConfigError);
}

TEST_CASE("segment rules") {
  const QuadratureRule s = segment_rule(4);
  double w = 0.0, m = 0.0;
  for (std::size_t i = 0; i < s.weights.size(); ++i) {
    w += s.weights[i];
    m += s.weights[i] * std::pow(s.points[i][0], 7);
    CHECK(s.points[i][1] == 0.0);
  }
  CHECK(w == doctest::Approx(1.0));
  CHECK(m == doctest::Approx(1.0 / 8));
}

TEST_CASE("linear shape functions") {
  const auto a = p1_shape(0.0, 0.0);
  CHECK(a[0] == 1.0);
  CHECK(a[1] == 0.0);
  CHECK(a[2] == 0.0);
  const auto c = p1_shape(1.0 / 3, 1.0 / 3);
  for (double v : c) CHECK(v == doctest::Approx(1.0 / 3));
}

TEST_CASE("single-layer sphere identity") {
  // (k − 1)Δt > 2 so the whole surface lies inside the backward cone
  const double e2 = sphere_identity_error(2, 6, 0.1, 22);
  const double e3 = sphere_identity_error(3, 6, 0.1, 22);
  MESSAGE("level 2: " << e2 << "  level 3: " << e3);
  CHECK(e3 <= 0.03);
  CHECK(e3 < e2);
}

TEST_CASE("sphere identity with near-field refinement") {
  const SurfaceMesh mesh = icosphere_mesh(2);
  const Discretization base(mesh, InterfaceMotion::fixed_sphere(), constant_tt(), 3, 0.1, 22, 0);
  const Discretization fine(mesh, InterfaceMotion::fixed_sphere(), constant_tt(), 3, 0.1, 22, 2);
  CHECK(fine.refine() == 2);
  CHECK(fine.source_count() > base.source_count());
  double eb = 0.0, ef = 0.0;
  std::vector<Contribution> c;
  for (std::size_t r = 0; r < mesh.vertex_count(); ++r) {
    for (const Discretization* d : {&base, &fine}) {
      c.clear();
      d->vertex_contributions(LayerKind::Single, 22, int(r), c);
      double s = 0.0;
      for (const Contribution& x : c) s += x.cur + x.prev;
      (d == &base ? eb : ef) = std::max(d == &base ? eb : ef, std::abs(s - 1.0));
    }
  }
  CHECK(ef < eb);
  CHECK_THROWS_AS(Discretization(mesh, InterfaceMotion::fixed_sphere(), constant_tt(), 3, 0.1, 22, 5), ConfigError);
}

TEST_CASE("blocks outside the causal window are empty") {
  const SurfaceMesh mesh = icosphere_mesh(1);
  const Discretization d(mesh, InterfaceMotion::fixed_sphere(), constant_tt(), 3, 0.1, 30);
  const WeightBlock far = d.assemble_block(LayerKind::Single, 30, 1);  // lags ≥ 2.9 > diameter
  CHECK(far.empty());
  CHECK(far.matrix.norm() == 0.0);
  // lag 5 reaches pairs about half a radius apart
  const WeightBlock near = d.assemble_block(LayerKind::Single, 30, 25);
  CHECK_FALSE(near.empty());
  CHECK_THROWS_AS(d.assemble_block(LayerKind::Single, 30, 0), ConfigError);
}

TEST_CASE("static blocks depend only on the lag") {
  const SurfaceMesh mesh = icosphere_mesh(1);
  const Discretization d(mesh, InterfaceMotion::fixed_sphere(), constant_tt(), 3, 0.1, 20);
  REQUIRE(d.lag_invariant());
  for (LayerKind kind : {LayerKind::Single, LayerKind::Double})
    for (int lag : {0, 3, 7}) {
      const WeightBlock a = d.assemble_block(kind, 10, 10 - lag), b = d.assemble_block(kind, 18, 18 - lag);
      CHECK((a.matrix - b.matrix).norm() <= 1e-14 * std::max(1.0, a.matrix.norm()));
      CHECK(a.mask == b.mask);
    }
  const LagCache cache(d, LayerKind::Single);
  for (int lag : {0, 1, 5}) {
    const WeightBlock b = d.assemble_block(LayerKind::Single, 15, 15 - lag);
    CHECK((cache[lag] - b.matrix).norm() <= 1e-14 * std::max(1.0, b.matrix.norm()));
  }
}

TEST_CASE("moving interfaces are not lag invariant") {
  const SurfaceMesh mesh = icosphere_mesh(1);
  const Discretization d(mesh, InterfaceMotion::rising_sphere(Vec3::Zero(), 0.5), constant_tt(), 3, 0.1, 10);
  CHECK_FALSE(d.lag_invariant());
  CHECK_THROWS_AS(LagCache(d, LayerKind::Single), ConfigError);
}

TEST_CASE("jump coefficients follow the normal speed") {
  const SurfaceMesh mesh = circle_mesh_2d(32);
  const Discretization d(mesh, InterfaceMotion::expanding_circle(1.0, 0.5), constant_tt(), 4, 0.05, 10);
  const Eigen::VectorXd lam = d.jump_coefficients(5);
  for (Eigen::Index i = 0; i < lam.size(); ++i) CHECK(lam[i] == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  const Discretization s(mesh, InterfaceMotion::expanding_circle(1.0, 0.0), constant_tt(), 4, 0.05, 10);
  CHECK(s.jump_coefficients(3).isOnes());
}

TEST_CASE("interpolation reproduces linear nodal data") {
  const SurfaceMesh mesh = icosphere_mesh(1);
  const Discretization d(mesh, InterfaceMotion::fixed_sphere(), constant_tt(), 6, 0.1, 2);
  Eigen::VectorXd v(mesh.vertex_count());
  for (std::size_t i = 0; i < mesh.vertex_count(); ++i) v[i] = 1.0 + 2.0 * mesh.vertices[i].x() - mesh.vertices[i].z();
  const std::vector<double> at = d.interpolate(v);
  REQUIRE(at.size() == d.source_count());
  for (std::size_t q = 0; q < d.source_count(); ++q) {
    const SourcePoint& s = d.sources()[q];
    Vec3 y = Vec3::Zero();
    for (int m = 0; m < s.count; ++m) y += s.phi[m] * mesh.vertices[s.nodes[m]];
    CHECK(at[q] == doctest::Approx(1.0 + 2.0 * y.x() - y.z()).epsilon(1e-13));
  }
}

TEST_CASE("planar kernel has unit amplitude") {
  // η = r/C, so speed C on radius R equals speed 1 on radius R/C up to the length scale C
  const SurfaceMesh mesh = circle_mesh_2d(64);
  auto row_sum = [&](double C, double R) {
    const Discretization d(mesh, InterfaceMotion::expanding_circle(R, 0.0), constant_tt(C), 4, 0.1, 12);
    std::vector<Contribution> c;
    d.vertex_contributions(LayerKind::Single, 12, 5, c);
    double s = 0.0;
    for (const Contribution& x : c) s += x.cur + x.prev;
    return s;
  };
  const double a = row_sum(2.0, 1.0), b = row_sum(1.0, 0.5);
  CHECK(a > 0.0);
  CHECK(a == doctest::Approx(2.0 * b).epsilon(1e-12));
}
