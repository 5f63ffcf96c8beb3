#include "snmgeo/jet.hpp"

#include <doctest.h>

#include <cmath>

#include "snmgeo/rng.hpp"

using namespace snmgeo;

namespace {

Jet3 random_jet(Rng& rng) {
  return {rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0),
          rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
}

void check_close(const Jet3& a, const Jet3& b, double tol) {
  CHECK(std::abs(a.v0 - b.v0) <= tol * std::max(1.0, std::abs(b.v0)));
  CHECK(std::abs(a.v1 - b.v1) <= tol * std::max(1.0, std::abs(b.v1)));
  CHECK(std::abs(a.v2 - b.v2) <= tol * std::max(1.0, std::abs(b.v2)));
  CHECK(std::abs(a.v3 - b.v3) <= tol * std::max(1.0, std::abs(b.v3)));
}

}  // namespace

TEST_CASE("jet arithmetic is associative and commutative to 1e-12") {
  Rng rng(11);
  for (int i = 0; i < 500; ++i) {
    const Jet3 a = random_jet(rng), b = random_jet(rng), c = random_jet(rng);
    check_close((a + b) + c, a + (b + c), 1e-12);
    check_close((a * b) * c, a * (b * c), 1e-12);
    check_close(a + b, b + a, 0.0);
    check_close(a * b, b * a, 0.0);
    check_close(a * (b + c), a * b + a * c, 1e-12);
  }
}

TEST_CASE("constant jet is neutral for addition and absorbed by zero") {
  Rng rng(12);
  const Jet3 zero = Jet3::constant(0.0);
  for (int i = 0; i < 100; ++i) {
    const Jet3 a = random_jet(rng);
    check_close(a + zero, a, 0.0);
    check_close(a * zero, zero, 0.0);
    check_close(a * Jet3::constant(1.0), a, 0.0);
  }
}

TEST_CASE("division inverts multiplication") {
  Rng rng(13);
  for (int i = 0; i < 200; ++i) {
    Jet3 a = random_jet(rng);
    Jet3 b = random_jet(rng);
    if (std::abs(b.v0) < 0.1) b.v0 += 1.0;
    check_close((a * b) / b, a, 1e-11);
  }
}

TEST_CASE("unary function jets match hand derivatives") {
  // tan at 0.4: value tan, d1 sec^2, d2 2 tan sec^2, d3 2 sec^2 (1+3tan^2)
  const Jet3 t = tan(Jet3::variable(0.4));
  const double tv = std::tan(0.4), s = 1.0 + tv * tv;
  CHECK(t.v0 == doctest::Approx(tv).epsilon(1e-14));
  CHECK(t.v1 == doctest::Approx(s).epsilon(1e-14));
  CHECK(t.v2 == doctest::Approx(2.0 * tv * s).epsilon(1e-13));
  CHECK(t.v3 == doctest::Approx(2.0 * s * (1.0 + 3.0 * tv * tv)).epsilon(1e-13));

  // atanh at 0.3: d1 = 1/(1-u^2), d2 = 2u/(1-u^2)^2, d3 = (2+6u^2)/(1-u^2)^3
  const double u = 0.3, r = 1.0 - u * u;
  const Jet3 at = atanh(Jet3::variable(u));
  CHECK(at.v1 == doctest::Approx(1.0 / r).epsilon(1e-14));
  CHECK(at.v2 == doctest::Approx(2.0 * u / (r * r)).epsilon(1e-14));
  CHECK(at.v3 == doctest::Approx((2.0 + 6.0 * u * u) / (r * r * r)).epsilon(1e-14));
}

TEST_CASE("integer powers by repeated multiplication handle negatives") {
  const Jet3 x = Jet3::variable(2.0);
  const Jet3 p = pow_int(x, -2);  // x^-2: (1/4, -1/4, 3/8, -3/4)
  CHECK(p.v0 == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(p.v1 == doctest::Approx(-0.25).epsilon(1e-15));
  CHECK(p.v2 == doctest::Approx(0.375).epsilon(1e-14));
  CHECK(p.v3 == doctest::Approx(-0.75).epsilon(1e-14));
  const Jet3 q = pow_int(x, 0);
  CHECK(q.v0 == 1.0);
  CHECK(q.v1 == 0.0);
}
