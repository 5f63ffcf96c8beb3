#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "snmgeo/expr.hpp"
#include "snmgeo/surface.hpp"

namespace snmgeo {

// Constant-sectional-curvature generalized cylinders. Every family below
// lives on a surface of one of the three shapes
//   z = f(x) + a y   (rulings along y; Type I)
//   x = f(y) + a z   (Type II, profile in f)
//   x = a y + g(z)   (Type II, profile in g)
// and has sectional curvature K0/2 with respect to the canonical
// snm-connection. Families split into closed-form ones (planes, grim
// reaper cylinders) and first-integral ones, where the profile is
// recovered by integrating the reciprocal square root of the first
// integral (the squared profile derivative as a function of the profile
// value).

enum class Sign : std::int8_t { Plus = 1, Minus = -1 };
enum class Branch : std::uint8_t { Low, High };
enum class PlaneKind : std::uint8_t { T51, T52, T53 };
enum class GrimKind : std::uint8_t { T51, T52b, T53 };

// z = a y (PlaneKind::T51), x = c y + a z (T52), x = a y + c z (T53).
struct PlaneFam {
  PlaneKind kind;
  double a = 0.0;
  double c = 0.0;
  PlaneFam(PlaneKind kind_, double a_, double c_);
};

// K0 = 1 for T51/T52b, K0 = 0 for T53. `c` is the phase shift, `d` the
// additive constant of the closed form.
struct GrimReaperFam {
  GrimKind kind;
  double a = 0.0;
  double c = 0.0;
  double d = 0.0;
  GrimReaperFam(GrimKind kind_, double a_, double c_, double d_);
};

// z = f(x) + a y with K0 in (0,1)u(1,inf). For a != 0 the squared slope
// is the first integral minus a^2, which additionally requires
// K0 > a^2/(1+a^2) for a nonempty domain.
struct T51Fam {
  double a = 0.0;
  double K0 = 0.0;
  double c = 0.0;
  Sign sign = Sign::Plus;
  T51Fam(double a_, double K0_, double c_, Sign sign_ = Sign::Plus);
};

// x = f(y), K0 != 1 (a = 0).
struct T52a0Fam {
  double K0 = 0.0;
  double c = 0.0;
  Sign sign = Sign::Plus;
  T52a0Fam(double K0_, double c_, Sign sign_ = Sign::Plus);
};

// x = f(y) + a z with K0 = 0, a != 0.
struct T52K0zeroFam {
  double a = 0.0;
  double c = 0.0;
  Sign sign = Sign::Plus;
  T52K0zeroFam(double a_, double c_, Sign sign_ = Sign::Plus);
};

// x = f(y) + a z with a != 0, K0 not in {0,1}.  First integral
//   f'^2 = (Pm + (1+a^2) g S) / (1 - g S),  S = exp(2 a^2 f / (1+a^2)),
// with Pm = (1 - K0(1+a^2))/(K0 - 1) and g = +1/c (Branch::High) or
// g = -1/c (Branch::Low).  For 1/(1+a^2) < K0 < 1 both branches exist
// and the domain is a half line; otherwise only High is nonempty and the
// domain is a bounded window (branch is normalised to High there).
struct T52genFam {
  double a = 0.0;
  double K0 = 0.0;
  double c = 0.0;
  Sign sign = Sign::Plus;
  Branch branch = Branch::High;
  T52genFam(double a_, double K0_, double c_, Sign sign_ = Sign::Plus,
            Branch branch_ = Branch::High);
};

// x = a y + g(z) with K0 = 1.
struct T53K1Fam {
  double a = 0.0;
  double c = 0.0;
  Sign sign = Sign::Plus;
  T53K1Fam(double a_, double c_, Sign sign_ = Sign::Plus);
};

// x = a y + g(z) with K0 < 1, K0 != 0 (K0 >= 1 is rejected).
struct T53genFam {
  double a = 0.0;
  double K0 = 0.0;
  double c = 0.0;
  Sign sign = Sign::Plus;
  T53genFam(double a_, double K0_, double c_, Sign sign_ = Sign::Plus);
};

using CylinderFamily = std::variant<PlaneFam, GrimReaperFam, T51Fam, T52a0Fam,
                                    T52K0zeroFam, T52genFam, T53K1Fam, T53genFam>;

enum class EndpointKind : std::uint8_t {
  Infinite,
  SingularZero,  // first integral -> 0 (profile turning point)
  SingularPole,  // first integral -> infinity
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  EndpointKind lo_kind = EndpointKind::Infinite;
  EndpointKind hi_kind = EndpointKind::Infinite;

  bool finite_singular_lo() const { return lo_kind != EndpointKind::Infinite; }
  bool finite_singular_hi() const { return hi_kind != EndpointKind::Infinite; }
};

struct ProfileSample {
  double param = 0.0;  // graph coordinate (x, y or z)
  double value = 0.0;  // profile value f resp. g
  double deriv = 0.0;  // profile derivative at the sample
};

struct ProfileCurve {
  std::vector<ProfileSample> samples;
  Interval domain;
};

// Natural sampling interval of the family: the positivity interval of the
// first integral (first-integral families, in the profile value) or the
// graph-coordinate interval of the closed form (planes: all of R; grim
// reapers: one period of log cos).
Interval maximal_domain(const CylinderFamily& fam);

// Squared profile derivative. First-integral families: the first-integral
// formula at profile value t (throws DomainError outside the maximal
// domain, SingularityError exactly at an endpoint). Closed-form families:
// the squared derivative of the closed form at graph coordinate t.
double first_integral(const CylinderFamily& fam, double t);

// The first integral as an expression of the profile value; defined for
// the six first-integral family tags (throws ConstraintError otherwise).
// Used for analytic derivatives of the first integral.
Expr first_integral_expr(const CylinderFamily& fam);

// Profile curve through the family's quadrature: for first-integral
// families, x(t) = sign * integral of (first integral)^(-1/2), anchored so
// the first grid point maps to parameter 0 (the paper's additive constant
// is free); grid must be sorted and strictly inside the maximal domain.
// Near an endpoint where the first integral vanishes the integrand is
// ~ (t_end - t)^(-1/2) and panels are integrated under u = end -+ s^2.
// Closed-form families are sampled directly (t_grid in the graph
// coordinate; no free constant).
ProfileCurve quadrature_profile(const CylinderFamily& fam,
                                std::span<const double> t_grid);

// Grim reaper profile as an expression:
//   T51 : f(x) = (1+a^2) log(cos((x+c)/sqrt(1+a^2))) + d
//   T52b: f(y) = d + (1+a^2)/a^2 log(cos(a^2 y/sqrt(1+a^2) + c)), a != 0
//   T53 : g(z) = d - log(cos(sqrt(1+a^2) (z+c)))
Expr grim_reaper_profile(GrimKind kind, double a, double c, double d);

// Target constant: the family's sectional curvature is K0/2.
double family_k0(const CylinderFamily& fam);
SurfaceKind family_surface_kind(const CylinderFamily& fam);

// True for planes and grim reapers.
bool has_closed_form(const CylinderFamily& fam);
// Translation surface of a closed-form family over a finite window
// (profiles sampled over the interior of the maximal domain, ruling
// coordinate over [-1,1]); throws ConstraintError for first-integral tags.
TranslationSurface closed_form_surface(const CylinderFamily& fam,
                                       double margin = 0.05);

// Sectional curvature of the cylinder surface at profile position t,
// evaluated through the closed curvature formula with jets supplied by
// the first integral (first-integral families) or the closed form.
double lifted_curvature(const CylinderFamily& fam, double t);

// Finite sampling window: infinite endpoints replaced by +-10 (or a width-
// 20 window when the finite endpoint lies beyond that), then shrunk by
// `margin` of its length on each side.
Interval interior_window(const CylinderFamily& fam, double margin = 0.05);

// JSON (de)serialization; schema
//   {tag, kind?, a, K0?, c?, d?, sign?: "+"|"-", branch?: "low"|"high"}
// with tags Plane, GrimReaper, T51, T52a0, T52K0zero, T52gen, T53K1, T53gen.
CylinderFamily family_from_json(std::string_view json_text);
std::string family_to_json(const CylinderFamily& fam);
std::string family_tag(const CylinderFamily& fam);

// Residual evaluators. Left-minus-right of the named equation evaluated on
// profile jets; ~0 along correct profiles. For arbitrary data the residual
// is a known multiple of (K_closed - K0/2):
//   MasterTypeI : -2 w^2 (K - K0/2), jets (f, g) of a Type I surface
//   MasterTypeII: -2 w^2 (K - K0/2), jets (f, g) of a Type II surface
//   T51Ode      : -2 w^2 (K - K0/2) with g' = a, g'' = 0 (profile jet = f)
//   T52Ode      : -2 w^2 (K - K0/2) / (1+f'^2)          (profile jet = f)
//   T53Ode      : -4 w^2 (K - K0/2) / (1+a^2)           (profile jet = g)
enum class ResidualKind : std::uint8_t {
  T51Ode, T52Ode, T53Ode, MasterTypeI, MasterTypeII
};

struct ResidualParams {
  double a = 0.0;
  double K0 = 0.0;
};

double ode_residual(ResidualKind kind, const ResidualParams& params,
                    const Jet3& profile, const Jet3& second = Jet3::constant(0.0));

// Coefficients of the K0 = 1 obstruction polynomial
// A0 + A1 f'^2 + A2 g'^2 + A3 f'^2 g'^2.
struct K1Coefficients {
  double A0 = 0.0;
  double A1 = 0.0;
  double A2 = 0.0;
  double A3 = 0.0;
};

K1Coefficients k1_obstruction(double c3, double c4, double c5, double c6);

// Property test for the classification statement, contrapositive form:
// random surfaces with f'' != 0 and g'' != 0 everywhere (enforced by
// construction) must have non-constant K. Reports any candidate whose
// curvature spread on a 5x5 grid stays within `spread_tol`.
struct ClassificationCandidate {
  SurfaceKind kind;
  std::string f_text;
  std::string g_text;
  double spread = 0.0;
};

struct ClassificationReport {
  int n = 0;
  double min_spread = 0.0;
  double spread_tol = 0.0;
  std::vector<ClassificationCandidate> counterexamples;
  bool pass() const { return counterexamples.empty(); }
};

ClassificationReport classification_property_test(std::uint64_t seed, int n,
                                                  double spread_tol = 1e-3);

}  // namespace snmgeo
