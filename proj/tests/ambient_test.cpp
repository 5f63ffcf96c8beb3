#include "snmgeo/ambient.hpp"

#include <doctest.h>

#include <array>
#include <cmath>

#include "snmgeo/expr.hpp"
#include "snmgeo/rng.hpp"

using namespace snmgeo;

namespace {

const Vec3 kDx{1, 0, 0};
const Vec3 kDy{0, 1, 0};
const Vec3 kDz{0, 0, 1};

void check_vec(const Vec3& a, const Vec3& b, double tol) {
  CHECK(std::abs(a.x - b.x) <= tol);
  CHECK(std::abs(a.y - b.y) <= tol);
  CHECK(std::abs(a.z - b.z) <= tol);
}

// Trivariate polynomial of total degree <= 2 as an analytic component.
AmbientField::JetComponent poly_component(Rng& rng) {
  std::array<double, 10> c;
  for (double& v : c) v = rng.uniform(-1.0, 1.0);
  return [c](const Jet3& x, const Jet3& y, const Jet3& z) {
    return Jet3::constant(c[0]) + c[1] * x + c[2] * y + c[3] * z +
           c[4] * (x * x) + c[5] * (y * y) + c[6] * (z * z) + c[7] * (x * y) +
           c[8] * (x * z) + c[9] * (y * z);
  };
}

AmbientField random_poly_field(Rng& rng) {
  return AmbientField::analytic(poly_component(rng), poly_component(rng),
                                poly_component(rng));
}

Vec3 random_point(Rng& rng) {
  return {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
}

}  // namespace

TEST_CASE("covariant derivatives of the canonical frame") {
  const AmbientField dx = AmbientField::constant(kDx);
  const AmbientField dy = AmbientField::constant(kDy);
  const AmbientField dz = AmbientField::constant(kDz);
  const Vec3 p{0.3, -0.7, 1.2};
  check_vec(cov_deriv(dx, dz, p), kDx, 0.0);  // along dx of dz
  check_vec(cov_deriv(dz, dz, p), kDz, 0.0);
  check_vec(cov_deriv(dx, dy, p), {0, 0, 0}, 0.0);
  check_vec(cov_deriv(dy, dz, p), kDy, 0.0);
}

TEST_CASE("torsion on constant fields") {
  const AmbientField dx = AmbientField::constant(kDx);
  const AmbientField dy = AmbientField::constant(kDy);
  const AmbientField dz = AmbientField::constant(kDz);
  const Vec3 p{};
  check_vec(torsion(dx, dz, p), kDx, 0.0);
  check_vec(torsion(dx, dy, p), {0, 0, 0}, 0.0);
}

TEST_CASE("torsion of the type-I surface frame is g' e1 - f' e2") {
  // e1 = dx + f'(x) dz and e2 = dy + g'(y) dz with f = x^2, g = sin(y).
  const Expr f = Expr::parse("x^2");
  const Expr g = Expr::parse("sin(y)", "y");
  const AmbientField e1 = AmbientField::analytic(
      [](const Jet3&, const Jet3&, const Jet3&) { return Jet3::constant(1.0); },
      [](const Jet3&, const Jet3&, const Jet3&) { return Jet3::constant(0.0); },
      [f](const Jet3& x, const Jet3&, const Jet3&) {
        return jet_compose(derivative_jet(f.eval_jet(x.v0)), x);
      });
  const AmbientField e2 = AmbientField::analytic(
      [](const Jet3&, const Jet3&, const Jet3&) { return Jet3::constant(0.0); },
      [](const Jet3&, const Jet3&, const Jet3&) { return Jet3::constant(1.0); },
      [g](const Jet3&, const Jet3& y, const Jet3&) {
        return jet_compose(derivative_jet(g.eval_jet(y.v0)), y);
      });
  const Vec3 p{0.4, 0.9, 0.0};
  const double fp = 2.0 * 0.4;
  const double gp = std::cos(0.9);
  const Vec3 expected =
      gp * Vec3{1.0, 0.0, fp} - fp * Vec3{0.0, 1.0, gp};
  check_vec(torsion(e1, e2, p), expected, 1e-12);
}

TEST_CASE("curvature on constant fields matches the nested expansion") {
  const AmbientField dx = AmbientField::constant(kDx);
  const AmbientField dz = AmbientField::constant(kDz);
  const Vec3 p{};
  // R(dx,dz)dz = dx, by expanding the covariant-derivative table by hand.
  check_vec(curvature(dx, dz, dz, p), kDx, 0.0);
  // Antisymmetric slot: R(X,X)Z = 0.
  check_vec(curvature(dx, dx, dz, p), {0, 0, 0}, 0.0);

  // u=(1,0,1), v=(0,1,0): <R(u,v)v, u> = v3^2 = 0.
  const AmbientField u = AmbientField::constant({1, 0, 1});
  const AmbientField v = AmbientField::constant({0, 1, 0});
  CHECK(dot(curvature(u, v, v, p), Vec3{1, 0, 1}) == doctest::Approx(0.0));
  // and <R(v,u)u, v> = u3^2 = 1.
  CHECK(dot(curvature(v, u, u, p), Vec3{0, 1, 0}) == doctest::Approx(1.0));
}

TEST_CASE("coordinate plane curvatures") {
  CHECK(sectional_curvature_plane({kDx, kDy}) == doctest::Approx(0.0));
  CHECK(sectional_curvature_plane({kDx, kDz}) == doctest::Approx(0.5));
  CHECK(sectional_curvature_plane({kDy, kDz}) == doctest::Approx(0.5));
  CHECK(sectional_curvature_plane_formula({kDx, kDz}) == doctest::Approx(0.5));
  // span{(1,0,1)/sqrt(2), (0,1,0)} -> 1/4 through both routes.
  const PlaneSection tilted{{1.0 / std::sqrt(2.0), 0.0, 1.0 / std::sqrt(2.0)},
                            {0.0, 1.0, 0.0}};
  CHECK(sectional_curvature_plane(tilted) == doctest::Approx(0.25));
  CHECK(sectional_curvature_plane_formula(tilted) == doctest::Approx(0.25));
}

TEST_CASE("degenerate plane bases are rejected") {
  CHECK_THROWS_AS(PlaneSection({1, 1, 0}, {2, 2, 0}), ConstraintError);
  CHECK_THROWS_AS(PlaneSection({0, 0, 0}, {1, 0, 0}), ConstraintError);
}

TEST_CASE("torsion identity on random polynomial fields") {
  Rng rng(31);
  for (int i = 0; i < 200; ++i) {
    const AmbientField X = random_poly_field(rng);
    const AmbientField Y = random_poly_field(rng);
    const Vec3 p = random_point(rng);
    const Vec3 lhs = torsion(X, Y, p);
    const Vec3 rhs = Y.value(p).z * X.value(p) - X.value(p).z * Y.value(p);
    check_vec(lhs, rhs, 1e-7);
  }
}

TEST_CASE("directional derivative is linear in the direction") {
  Rng rng(32);
  for (int i = 0; i < 100; ++i) {
    const AmbientField X = random_poly_field(rng);
    const Vec3 p = random_point(rng);
    const Vec3 d1 = random_point(rng), d2 = random_point(rng);
    const double s = rng.uniform(-2.0, 2.0);
    const Vec3 combined = X.directional_derivative(p, d1 + s * d2);
    const Vec3 split =
        X.directional_derivative(p, d1) + s * X.directional_derivative(p, d2);
    check_vec(combined, split, 1e-8);
  }
  // Black-box backend as well.
  const AmbientField numeric = AmbientField::numeric([](const Vec3& q) {
    return Vec3{std::sin(q.x * q.y), q.z * q.z, std::exp(0.3 * q.x)};
  });
  const Vec3 p{0.2, 0.4, -0.3};
  const Vec3 combined = numeric.directional_derivative(p, {1.0, 2.0, -1.0});
  const Vec3 split = numeric.directional_derivative(p, {1.0, 0.0, 0.0}) +
                     2.0 * numeric.directional_derivative(p, {0.0, 1.0, 0.0}) -
                     numeric.directional_derivative(p, {0.0, 0.0, 1.0});
  check_vec(combined, split, 1e-8);
}

TEST_CASE("curvature is antisymmetric in the first two slots") {
  Rng rng(33);
  for (int i = 0; i < 60; ++i) {
    const AmbientField X = random_poly_field(rng);
    const AmbientField Y = random_poly_field(rng);
    const AmbientField Z = random_poly_field(rng);
    const Vec3 p = random_point(rng);
    const Vec3 fwd = curvature(X, Y, Z, p);
    const Vec3 bwd = curvature(Y, X, Z, p);
    check_vec(fwd, -bwd, 1e-9);
  }
}

TEST_CASE("plane curvature is basis independent") {
  Rng rng(34);
  for (int i = 0; i < 200; ++i) {
    Vec3 u = random_point(rng), v = random_point(rng);
    if (norm(cross(u, v)) < 0.1) continue;
    const PlaneSection base{u, v};
    // Random invertible change of basis.
    double m00, m01, m10, m11;
    do {
      m00 = rng.uniform(-2.0, 2.0);
      m01 = rng.uniform(-2.0, 2.0);
      m10 = rng.uniform(-2.0, 2.0);
      m11 = rng.uniform(-2.0, 2.0);
    } while (std::abs(m00 * m11 - m01 * m10) < 0.1);
    const PlaneSection changed{m00 * u + m01 * v, m10 * u + m11 * v};
    CHECK(std::abs(sectional_curvature_plane(base) -
                   sectional_curvature_plane(changed)) <= 1e-9);
    // And the tensor route agrees with the orthonormal closed formula.
    CHECK(std::abs(sectional_curvature_plane(base) -
                   sectional_curvature_plane_formula(base)) <= 1e-9);
  }
}

TEST_CASE("orthonormal plane formula matches the tensor route") {
  Rng rng(35);
  for (int i = 0; i < 200; ++i) {
    Vec3 u = normalized(random_point(rng));
    Vec3 w = random_point(rng);
    Vec3 v = w - dot(w, u) * u;
    if (norm(v) < 0.1) continue;
    v = normalized(v);
    const PlaneSection plane{u, v};
    const double tensor = sectional_curvature_plane(plane);
    const double closed = 0.5 * (u.z * u.z + v.z * v.z);
    CHECK(std::abs(tensor - closed) <= 1e-9);
  }
}
