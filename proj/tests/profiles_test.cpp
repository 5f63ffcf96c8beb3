#include "snmgeo/profiles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "closed_forms.hpp"
#include "snmgeo/rng.hpp"
#include "snmgeo/verify.hpp"

using namespace snmgeo;

namespace {

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = lo + (hi - lo) * i / (n - 1);
  return out;
}

// Max deviation from the closed form after removing the free constant.
double aligned_max_error(const ProfileCurve& curve, double (*closed)(double)) {
  double offset_sum = 0.0;
  for (const auto& s : curve.samples) offset_sum += closed(s.value) - s.param;
  const double offset = offset_sum / double(curve.samples.size());
  double worst = 0.0;
  for (const auto& s : curve.samples)
    worst = std::max(worst, std::abs(closed(s.value) - s.param - offset));
  return worst;
}

}  // namespace

TEST_CASE("maximal domains match the catalogue") {
  // c K0 = 1: upper endpoint log sqrt(1) = 0, lower end open at -inf.
  const Interval d1 = maximal_domain(T51Fam(0.0, 0.5, 2.0));
  CHECK(std::isinf(d1.lo));
  CHECK(d1.hi == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(d1.hi_kind == EndpointKind::SingularZero);

  const Interval d2 = maximal_domain(T51Fam(0.0, 2.0, 3.0));
  CHECK(d2.lo == doctest::Approx(std::log(std::sqrt(3.0))));
  CHECK(d2.hi == doctest::Approx(std::log(std::sqrt(6.0))));
  CHECK(d2.lo_kind == EndpointKind::SingularPole);

  const Interval d3 = maximal_domain(T53K1Fam(0.0, 1.0));
  CHECK(d3.lo == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(std::isinf(d3.hi));

  const Interval d4 = maximal_domain(T52a0Fam(-1.0, -2.0));
  CHECK(d4.lo == doctest::Approx(0.25));
  CHECK(d4.hi == doctest::Approx(0.5));

  const Interval d5 = maximal_domain(T52a0Fam(2.0, 0.0));
  CHECK(d5.lo == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(d5.hi == doctest::Approx(0.5));
}

TEST_CASE("first integral values") {
  // Frozen: (1 - e^-2)/(1 + e^-2) = tanh(1).
  CHECK(first_integral(T51Fam(0.0, 0.5, 2.0), -1.0) ==
        doctest::Approx(0.7615941559557649).epsilon(1e-15));
  // c/(e^{2g} - c) at g = log 2, c = 1.
  CHECK(first_integral(T53K1Fam(0.0, 1.0), std::log(2.0)) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("first integral endpoint behaviour") {
  const T51Fam fam(0.0, 2.0, 3.0);
  const Interval dom = maximal_domain(fam);
  // Near the pole endpoint the squared slope blows up; near the zero
  // endpoint it vanishes.
  const double len = dom.hi - dom.lo;
  CHECK(first_integral(fam, dom.lo + 1e-8 * len) > 1e6);
  CHECK(first_integral(fam, dom.hi - 1e-8 * len) < 1e-6);
  CHECK_THROWS_AS(first_integral(fam, dom.lo), SingularityError);
  CHECK_THROWS_AS(first_integral(fam, dom.hi), SingularityError);
  CHECK_THROWS_AS(first_integral(fam, dom.lo - 0.1), DomainError);
  CHECK_THROWS_AS(first_integral(fam, dom.hi + 0.1), DomainError);
}

TEST_CASE("quadrature reproduces the integrable examples") {
  // K0 = 1/2, c = 2 on f in [-3, -0.1].
  const ProfileCurve c1 =
      quadrature_profile(T51Fam(0.0, 0.5, 2.0), linspace(-3.0, -0.1, 120));
  CHECK(aligned_max_error(c1, testing::t51_c2_k05_x) <= 1e-8);

  // K0 = 2, c = 3 on the interior 90% of (log sqrt 3, log sqrt 6).
  {
    const Interval w = interior_window(T51Fam(0.0, 2.0, 3.0), 0.05);
    const ProfileCurve c2 =
        quadrature_profile(T51Fam(0.0, 2.0, 3.0), linspace(w.lo, w.hi, 120));
    CHECK(aligned_max_error(c2, testing::t51_c3_k2_x) <= 1e-8);
  }

  // K0 = -1, c = -2 on the interior of (1/4, 1/2); minus branch.
  {
    const T52a0Fam fam(-1.0, -2.0, Sign::Minus);
    const Interval w = interior_window(fam, 0.05);
    const ProfileCurve c3 = quadrature_profile(fam, linspace(w.lo, w.hi, 120));
    CHECK(aligned_max_error(c3, testing::t52_cm2_km1_y) <= 1e-8);
  }

  // K0 = 2, c = 0 on the interior of (0, 1/2); plus branch.
  {
    const T52a0Fam fam(2.0, 0.0, Sign::Plus);
    const Interval w = interior_window(fam, 0.05);
    const ProfileCurve c4 = quadrature_profile(fam, linspace(w.lo, w.hi, 120));
    CHECK(aligned_max_error(c4, testing::t52_c0_k2_y) <= 1e-8);
  }
}

TEST_CASE("profile samples satisfy the first integral") {
  const T53genFam fam(0.5, -0.8, 1.2);
  const Interval w = interior_window(fam, 0.05);
  const ProfileCurve curve = quadrature_profile(fam, linspace(w.lo, w.hi, 60));
  for (const auto& s : curve.samples)
    CHECK(std::abs(s.deriv * s.deriv - first_integral(fam, s.value)) <= 1e-9);
  // Monotone parameter for the plus branch.
  for (std::size_t i = 1; i < curve.samples.size(); ++i)
    CHECK(curve.samples[i].param > curve.samples[i - 1].param);
}

TEST_CASE("grim reaper profiles") {
  const Expr base = grim_reaper_profile(GrimKind::T51, 0.0, 0.0, 0.0);
  CHECK(base.to_string() == "log(cos(x))");
  CHECK(structurally_equal(base, Expr::parse("log(cos(x))")));

  // Lifted to a cylinder with g = a y the curvature is 1/2 everywhere.
  const CylinderFamily g51 = GrimReaperFam(GrimKind::T51, 0.7, 0.2, -0.3);
  const Interval w = interior_window(g51, 0.05);
  for (double t : linspace(w.lo, w.hi, 17))
    CHECK(std::abs(lifted_curvature(g51, t) - 0.5) <= 1e-10);

  // The T53 variant has curvature 0.
  const CylinderFamily g53 = GrimReaperFam(GrimKind::T53, 0.4, -0.1, 0.5);
  const Interval w53 = interior_window(g53, 0.05);
  for (double t : linspace(w53.lo, w53.hi, 17))
    CHECK(std::abs(lifted_curvature(g53, t)) <= 1e-10);

  // T52b needs a != 0 and also has curvature 1/2.
  CHECK_THROWS_AS(grim_reaper_profile(GrimKind::T52b, 0.0, 0.0, 0.0),
                  ConstraintError);
  const CylinderFamily g52 = GrimReaperFam(GrimKind::T52b, 0.8, 0.1, 0.2);
  const Interval w52 = interior_window(g52, 0.05);
  for (double t : linspace(w52.lo, w52.hi, 17))
    CHECK(std::abs(lifted_curvature(g52, t) - 0.5) <= 1e-10);
}

TEST_CASE("ode residuals vanish along solutions and scale with K mismatch") {
  // Grim reaper solves the T51 equation with K0 = 1.
  const Expr grim = grim_reaper_profile(GrimKind::T51, 0.0, 0.0, 0.0);
  const Jet3 j = grim.eval_jet(0.3);
  CHECK(std::abs(ode_residual(ResidualKind::T51Ode, {0.0, 1.0}, j)) <= 1e-10);

  // Plane case: zero jets, a = 1, K0 = 1/2 gives (1+1)^2(-1/2) + 2 = 0.
  CHECK(ode_residual(ResidualKind::T51Ode, {1.0, 0.5}, Jet3::constant(0.0)) ==
        doctest::Approx(0.0));

  // Random jets are bounded away from zero (negative control) and agree
  // with the documented scaling against the closed curvature formula.
  Rng rng(5150);
  for (int i = 0; i < 50; ++i) {
    const Jet3 f{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1), 0};
    const Jet3 g{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1), 0};
    const double K0 = rng.uniform(-1.0, 2.0);
    const double w = 1.0 + f.v1 * f.v1 + g.v1 * g.v1;

    const double k1 = sectional_curvature_from_derivs(SurfaceKind::TypeI, f.v1,
                                                      f.v2, g.v1, g.v2);
    const double r1 = ode_residual(ResidualKind::MasterTypeI, {0.0, K0}, f, g);
    CHECK(r1 == doctest::Approx(-2.0 * w * w * (k1 - K0 / 2.0)).epsilon(1e-10));

    const double k2 = sectional_curvature_from_derivs(SurfaceKind::TypeII, f.v1,
                                                      f.v2, g.v1, g.v2);
    const double r2 = ode_residual(ResidualKind::MasterTypeII, {0.0, K0}, f, g);
    CHECK(r2 == doctest::Approx(-2.0 * w * w * (k2 - K0 / 2.0)).epsilon(1e-10));

    // Cylinder residuals: profile f with the ruling slope a.
    const double a = rng.uniform(-1.0, 1.0);
    const double wa = 1.0 + a * a + f.v1 * f.v1;
    const double k51 = sectional_curvature_from_derivs(SurfaceKind::TypeI, f.v1,
                                                       f.v2, a, 0.0);
    CHECK(ode_residual(ResidualKind::T51Ode, {a, K0}, f) ==
          doctest::Approx(-2.0 * wa * wa * (k51 - K0 / 2.0)).epsilon(1e-9));
    const double k52 = sectional_curvature_from_derivs(SurfaceKind::TypeII, f.v1,
                                                       f.v2, a, 0.0);
    CHECK(ode_residual(ResidualKind::T52Ode, {a, K0}, f) ==
          doctest::Approx(-2.0 * wa * wa * (k52 - K0 / 2.0) /
                          (1.0 + f.v1 * f.v1))
              .epsilon(1e-9));
    const double k53 = sectional_curvature_from_derivs(SurfaceKind::TypeII, a,
                                                       0.0, f.v1, f.v2);
    CHECK(ode_residual(ResidualKind::T53Ode, {a, K0}, f) ==
          doctest::Approx(-4.0 * wa * wa * (k53 - K0 / 2.0) / (1.0 + a * a))
              .epsilon(1e-9));
  }

  // Residuals along generated profiles vanish for every integral family.
  Rng draw(6001);
  for (const char* tag : {"T51", "T52a0", "T52K0zero", "T52gen", "T53K1",
                          "T53gen"}) {
    const CylinderFamily fam = random_family(tag, draw);
    const Interval w = interior_window(fam, 0.05);
    const Expr phi = first_integral_expr(fam);
    const ResidualParams params{
        std::visit(
            [](const auto& f) -> double {
              using T = std::decay_t<decltype(f)>;
              if constexpr (std::is_same_v<T, T51Fam> ||
                            std::is_same_v<T, T52K0zeroFam> ||
                            std::is_same_v<T, T52genFam> ||
                            std::is_same_v<T, T53K1Fam> ||
                            std::is_same_v<T, T53genFam>)
                return f.a;
              else
                return 0.0;
            },
            fam),
        family_k0(fam)};
    const ResidualKind kind = tag[1] == '5' && tag[2] == '1'
                                  ? ResidualKind::T51Ode
                              : tag[1] == '5' && tag[2] == '2'
                                  ? ResidualKind::T52Ode
                                  : ResidualKind::T53Ode;
    for (double t : linspace(w.lo, w.hi, 9)) {
      const Jet3 pj = phi.eval_jet(t);
      const Jet3 profile{t, std::sqrt(pj.v0), 0.5 * pj.v1, 0.0};
      CHECK(std::abs(ode_residual(kind, params, profile)) <= 1e-8);
    }
  }
}

TEST_CASE("k1 obstruction coefficients") {
  // c3 c5 = c4 c6 = 1/2 with the standing constraint c3 + c4 = 1.
  {
    const double c3 = 0.3, c4 = 0.7;
    const auto k = k1_obstruction(c3, c4, 1.0 / (2.0 * c3), 1.0 / (2.0 * c4));
    CHECK(std::abs(k.A0 - k.A1) <= 1e-15);
    CHECK(std::abs(k.A0 - k.A2) <= 1e-15);
    CHECK(k.A1 + k.A2 - k.A3 == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(std::abs(k.A3) <= 1e-15);
  }
  // Direct substitution: all constants one.
  const auto ones = k1_obstruction(1.0, 1.0, 1.0, 1.0);
  CHECK(ones.A0 == doctest::Approx(1.0));
  CHECK(ones.A3 == doctest::Approx(0.0));
  // Identity check for A0 against an independently ordered evaluation.
  Rng rng(808);
  for (int i = 0; i < 200; ++i) {
    const double c3 = rng.uniform_away_from_zero(-2, 2, 0.01);
    const double c4 = rng.uniform_away_from_zero(-2, 2, 0.01);
    const double c5 = rng.uniform_away_from_zero(-2, 2, 0.01);
    const double c6 = rng.uniform_away_from_zero(-2, 2, 0.01);
    const auto k = k1_obstruction(c3, c4, c5, c6);
    const double reordered = std::fma(-2.0 * c3 * c4, c5 * c6, 1.0) +
                             (c5 * c3 + c6 * c4);
    CHECK(std::abs(k.A0 - reordered) <=
          1e-12 * std::max(1.0, std::abs(reordered)));
    // Without the c3+c4=1 constraint the sum A1+A2 still collapses to 3
    // whenever c3 c5 = c4 c6 = 1/2.
    const auto kk = k1_obstruction(c3, c4, 1.0 / (2.0 * c3), 1.0 / (2.0 * c4));
    CHECK(kk.A1 + kk.A2 == doctest::Approx(3.0).epsilon(1e-13));
  }
  CHECK_THROWS_AS(k1_obstruction(0.0, 1.0, 1.0, 1.0), ConstraintError);
}

TEST_CASE("classification property: non-cylinders have non-constant K") {
  // f = x^2, g = y^2 evaluates to different K at the origin and at (1,1).
  const TranslationSurface bowl(SurfaceKind::TypeI, Expr::parse("x^2"),
                                Expr::parse("y^2", "y"), {-1, -1, 1, 1});
  const double k00 = bowl.sectional_curvature_closed(0.0, 0.0);
  const double k11 = bowl.sectional_curvature_closed(1.0, 1.0);
  CHECK(k00 == doctest::Approx(2.0));
  CHECK(k11 == doctest::Approx(10.0 / 27.0));
  CHECK(std::abs(k00 - k11) > 1e-3);

  // Scherk-type surface: non-constant as well.
  const TranslationSurface scherk(SurfaceKind::TypeI, Expr::parse("-log(cos(x))"),
                                  Expr::parse("log(cos(y))", "y"),
                                  {-1, -1, 1, 1});
  const CurvatureReport sr =
      curvature_grid_closed(scherk, GridSpec(-1, -1, 1, 1, 5, 5));
  CHECK(sr.k_closed_spread > 1e-3);

  const ClassificationReport report = classification_property_test(42, 100);
  CHECK(report.pass());
  CHECK(report.min_spread > 1e-3);
}

TEST_CASE("range guards reject out-of-theorem parameters") {
  CHECK_THROWS_AS(T53genFam(0.0, 2.0, 1.0), ConstraintError);   // K0 > 1
  CHECK_THROWS_AS(T53genFam(0.0, 1.0, 1.0), ConstraintError);   // K0 = 1
  CHECK_THROWS_AS(T51Fam(0.0, -0.5, 1.0), ConstraintError);     // K0 <= 0
  CHECK_THROWS_AS(T51Fam(0.0, 0.0, 1.0), ConstraintError);
  CHECK_THROWS_AS(T51Fam(0.0, 1.0, 1.0), ConstraintError);      // K0 = 1
  CHECK_THROWS_AS(T51Fam(1.0, 0.3, 1.0), ConstraintError);      // K0 <= a^2/(1+a^2)
  CHECK_THROWS_AS(T51Fam(0.0, 0.5, -1.0), ConstraintError);     // c <= 0
  CHECK_THROWS_AS(T52K0zeroFam(0.0, 1.0), ConstraintError);     // a = 0
  CHECK_THROWS_AS(T52genFam(0.0, 0.5, 1.0), ConstraintError);   // a = 0
  CHECK_THROWS_AS(T52genFam(1.0, 0.0, 1.0), ConstraintError);   // K0 = 0
  CHECK_THROWS_AS(T52a0Fam(1.0, 0.5), ConstraintError);         // K0 = 1
  CHECK_THROWS_AS(T53K1Fam(0.0, -2.0), ConstraintError);        // c <= 0
}

TEST_CASE("family JSON round trip") {
  const std::vector<std::string> tags = {"Plane",     "GrimReaper", "T51",
                                         "T52a0",     "T52K0zero",  "T52gen",
                                         "T53K1",     "T53gen"};
  Rng rng(909);
  for (const std::string& tag : tags) {
    for (int i = 0; i < 10; ++i) {
      const CylinderFamily fam = random_family(tag, rng);
      const std::string text = family_to_json(fam);
      const CylinderFamily back = family_from_json(text);
      CHECK(family_to_json(back) == text);
      CHECK(family_tag(back) == tag);
    }
  }
  CHECK_THROWS_AS(family_from_json("{not json"), ParseError);
  CHECK_THROWS_AS(family_from_json("{\"tag\":\"Nope\",\"a\":0}"),
                  ConstraintError);
  CHECK_THROWS_AS(family_from_json("{\"tag\":\"T53gen\",\"a\":0,\"K0\":2,\"c\":1}"),
                  ConstraintError);
  // The documented example from the interface schema.
  const CylinderFamily t51 =
      family_from_json("{\"tag\":\"T51\", \"a\":0, \"K0\":0.5, \"c\":2}");
  CHECK(family_tag(t51) == "T51");
}

TEST_CASE("constancy and positivity across random draws of every family") {
  Rng rng(24601);
  for (const char* tag : {"Plane", "GrimReaper", "T51", "T52a0", "T52K0zero",
                          "T52gen", "T53K1", "T53gen"}) {
    for (int i = 0; i < 10; ++i) {
      const CylinderFamily fam = random_family(tag, rng);
      const double target = family_k0(fam) / 2.0;
      const Interval w = interior_window(fam, 0.05);
      double kmin = 1e300, kmax = -1e300;
      for (double t : linspace(w.lo, w.hi, 21)) {
        const double k = lifted_curvature(fam, t);
        kmin = std::min(kmin, k);
        kmax = std::max(kmax, k);
        if (!has_closed_form(fam)) CHECK(first_integral(fam, t) > 0.0);
      }
      CHECK(kmax - kmin <= 1e-7);
      CHECK(std::abs(0.5 * (kmin + kmax) - target) <= 1e-7);
    }
  }
}
