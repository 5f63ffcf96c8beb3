#include "snmgeo/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include <json.hpp>

#include "snmgeo/quadrature.hpp"
#include "snmgeo/rng.hpp"

namespace snmgeo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double square(double x) { return x * x; }

// Expression-building helpers with light constant folding, so printed
// closed forms stay readable (log(cos(x)) rather than 1*log(cos(x/1))+0).
Expr num(double v) { return Expr::number(v); }

Expr add_const(Expr e, double k) {
  if (k == 0.0) return e;
  if (k > 0.0) return std::move(e) + num(k);
  return std::move(e) - num(-k);
}

Expr scale(double k, Expr e) {
  if (k == 0.0) return num(0.0);
  if (k == 1.0) return e;
  if (k == -1.0) return -std::move(e);
  return num(k) * std::move(e);
}

Expr exp_of(Expr e) { return Expr::apply(FunId::Exp, std::move(e)); }

void require(bool ok, const char* message) {
  if (!ok) throw ConstraintError(message);
}

}  // namespace

// --- constructors (range guards) ---------------------------------------------

PlaneFam::PlaneFam(PlaneKind kind_, double a_, double c_)
    : kind(kind_), a(a_), c(c_) {
  require(std::isfinite(a) && std::isfinite(c), "plane parameters must be finite");
}

GrimReaperFam::GrimReaperFam(GrimKind kind_, double a_, double c_, double d_)
    : kind(kind_), a(a_), c(c_), d(d_) {
  require(std::isfinite(a) && std::isfinite(c) && std::isfinite(d),
          "grim reaper parameters must be finite");
  if (kind == GrimKind::T52b) require(a != 0.0, "grim reaper T52b requires a != 0");
}

T51Fam::T51Fam(double a_, double K0_, double c_, Sign sign_)
    : a(a_), K0(K0_), c(c_), sign(sign_) {
  require(std::isfinite(a) && std::isfinite(K0) && std::isfinite(c),
          "T51 parameters must be finite");
  require(c > 0.0, "T51 requires c > 0");
  require(K0 > 0.0, "T51 requires K0 > 0");
  require(K0 != 1.0, "T51 with K0 = 1 is the grim reaper family");
  require(K0 > a * a / (1.0 + a * a),
          "T51 requires K0 > a^2/(1+a^2) for a nonempty domain");
}

T52a0Fam::T52a0Fam(double K0_, double c_, Sign sign_)
    : K0(K0_), c(c_), sign(sign_) {
  require(std::isfinite(K0) && std::isfinite(c), "T52a0 parameters must be finite");
  require(K0 != 1.0, "T52a0 with K0 = 1 is a plane");
}

T52K0zeroFam::T52K0zeroFam(double a_, double c_, Sign sign_)
    : a(a_), c(c_), sign(sign_) {
  require(std::isfinite(a) && std::isfinite(c),
          "T52K0zero parameters must be finite");
  require(a != 0.0, "T52K0zero requires a != 0");
  require(c > 0.0, "T52K0zero requires c > 0");
}

T52genFam::T52genFam(double a_, double K0_, double c_, Sign sign_, Branch branch_)
    : a(a_), K0(K0_), c(c_), sign(sign_), branch(branch_) {
  require(std::isfinite(a) && std::isfinite(K0) && std::isfinite(c),
          "T52gen parameters must be finite");
  require(a != 0.0, "T52gen requires a != 0");
  require(c > 0.0, "T52gen requires c > 0");
  require(K0 != 0.0, "T52gen with K0 = 0 is the T52K0zero family");
  require(K0 != 1.0, "T52gen with K0 = 1 is the grim reaper family");
  // Outside 1/(1+a^2) < K0 < 1 only the High branch is nonempty.
  const double b = 1.0 + a * a;
  const bool two_branch = K0 > 1.0 / b && K0 < 1.0;
  if (!two_branch) branch = Branch::High;
}

T53K1Fam::T53K1Fam(double a_, double c_, Sign sign_) : a(a_), c(c_), sign(sign_) {
  require(std::isfinite(a) && std::isfinite(c), "T53K1 parameters must be finite");
  require(c > 0.0, "T53K1 requires c > 0");
}

T53genFam::T53genFam(double a_, double K0_, double c_, Sign sign_)
    : a(a_), K0(K0_), c(c_), sign(sign_) {
  require(std::isfinite(a) && std::isfinite(K0) && std::isfinite(c),
          "T53gen parameters must be finite");
  require(c > 0.0, "T53gen requires c > 0");
  require(K0 < 1.0, "T53gen requires K0 < 1");
  require(K0 != 0.0, "T53gen with K0 = 0 is the grim reaper family");
}

// --- family descriptors -------------------------------------------------------

double family_k0(const CylinderFamily& fam) {
  return std::visit(
      [](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, PlaneFam>) {
          const double a2 = f.a * f.a, c2 = f.c * f.c;
          switch (f.kind) {
            case PlaneKind::T51:
              return a2 / (1.0 + a2);
            case PlaneKind::T52:
              return (1.0 + c2) / (1.0 + c2 + a2);
            case PlaneKind::T53:
              return (1.0 + a2) / (1.0 + a2 + c2);
          }
          return 0.0;
        } else if constexpr (std::is_same_v<T, GrimReaperFam>) {
          return f.kind == GrimKind::T53 ? 0.0 : 1.0;
        } else if constexpr (std::is_same_v<T, T51Fam>) {
          return f.K0;
        } else if constexpr (std::is_same_v<T, T52a0Fam>) {
          return f.K0;
        } else if constexpr (std::is_same_v<T, T52K0zeroFam>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, T52genFam>) {
          return f.K0;
        } else if constexpr (std::is_same_v<T, T53K1Fam>) {
          return 1.0;
        } else {
          return f.K0;
        }
      },
      fam);
}

SurfaceKind family_surface_kind(const CylinderFamily& fam) {
  if (const auto* p = std::get_if<PlaneFam>(&fam))
    return p->kind == PlaneKind::T51 ? SurfaceKind::TypeI : SurfaceKind::TypeII;
  if (const auto* g = std::get_if<GrimReaperFam>(&fam))
    return g->kind == GrimKind::T51 ? SurfaceKind::TypeI : SurfaceKind::TypeII;
  if (std::holds_alternative<T51Fam>(fam)) return SurfaceKind::TypeI;
  return SurfaceKind::TypeII;
}

bool has_closed_form(const CylinderFamily& fam) {
  return std::holds_alternative<PlaneFam>(fam) ||
         std::holds_alternative<GrimReaperFam>(fam);
}

std::string family_tag(const CylinderFamily& fam) {
  struct Visitor {
    std::string operator()(const PlaneFam&) const { return "Plane"; }
    std::string operator()(const GrimReaperFam&) const { return "GrimReaper"; }
    std::string operator()(const T51Fam&) const { return "T51"; }
    std::string operator()(const T52a0Fam&) const { return "T52a0"; }
    std::string operator()(const T52K0zeroFam&) const { return "T52K0zero"; }
    std::string operator()(const T52genFam&) const { return "T52gen"; }
    std::string operator()(const T53K1Fam&) const { return "T53K1"; }
    std::string operator()(const T53genFam&) const { return "T53gen"; }
  };
  return std::visit(Visitor{}, fam);
}

// --- closed-form profiles -----------------------------------------------------

Expr grim_reaper_profile(GrimKind kind, double a, double c, double d) {
  const double b = 1.0 + a * a;
  const double sb = std::sqrt(b);
  switch (kind) {
    case GrimKind::T51: {
      Expr inner = add_const(Expr::variable("x"), c);
      if (sb != 1.0) inner = std::move(inner) / num(sb);
      Expr body = Expr::apply(FunId::Log, Expr::apply(FunId::Cos, std::move(inner)));
      return add_const(scale(b, std::move(body)), d);
    }
    case GrimKind::T52b: {
      if (a == 0.0) throw ConstraintError("grim reaper T52b requires a != 0");
      Expr inner = add_const(scale(a * a / sb, Expr::variable("y")), c);
      Expr body = Expr::apply(FunId::Log, Expr::apply(FunId::Cos, std::move(inner)));
      return add_const(scale(b / (a * a), std::move(body)), d);
    }
    case GrimKind::T53: {
      Expr inner = scale(sb, add_const(Expr::variable("z"), c));
      Expr body =
          -Expr::apply(FunId::Log, Expr::apply(FunId::Cos, std::move(inner)));
      return add_const(std::move(body), d);
    }
  }
  throw ConstraintError("unknown grim reaper kind");
}

namespace {

// Profile expression (graph form) for closed-form families; the variable
// is the graph coordinate of the profile.
Expr closed_form_profile(const CylinderFamily& fam) {
  if (const auto* p = std::get_if<PlaneFam>(&fam)) {
    switch (p->kind) {
      case PlaneKind::T51:
        return num(0.0).with_variable("x");
      case PlaneKind::T52:
        return scale(p->c, Expr::variable("y"));
      case PlaneKind::T53:
        return scale(p->c, Expr::variable("z"));
    }
  }
  const auto& g = std::get<GrimReaperFam>(fam);
  return grim_reaper_profile(g.kind, g.a, g.c, g.d);
}

}  // namespace

// --- first integrals ----------------------------------------------------------

Expr first_integral_expr(const CylinderFamily& fam) {
  if (const auto* t51 = std::get_if<T51Fam>(&fam)) {
    const double a = t51->a, K0 = t51->K0, c = t51->c;
    const double b = 1.0 + a * a;
    Expr E = exp_of(scale(2.0 / b, Expr::variable("f")));
    Expr numr = add_const(E, -c * K0);
    Expr den = add_const(-std::move(E), c * K0 - c);
    return add_const(std::move(numr) / std::move(den), -a * a);
  }
  if (const auto* t = std::get_if<T52a0Fam>(&fam)) {
    const double beta = 2.0 * (1.0 - t->K0);
    Expr numr = add_const(scale(beta, Expr::variable("f")), 1.0 + t->c);
    Expr den = add_const(scale(beta, Expr::variable("f")), t->c);
    return -(std::move(numr) / std::move(den));
  }
  if (const auto* t = std::get_if<T52K0zeroFam>(&fam)) {
    const double b = 1.0 + t->a * t->a;
    Expr S = exp_of(scale(2.0 * t->a * t->a / b, Expr::variable("f")));
    Expr numr = add_const(scale(t->c * b, S), -1.0);
    Expr den = add_const(scale(-t->c, std::move(S)), 1.0);
    return std::move(numr) / std::move(den);
  }
  if (const auto* t = std::get_if<T52genFam>(&fam)) {
    const double b = 1.0 + t->a * t->a;
    const double pm = (1.0 - t->K0 * b) / (t->K0 - 1.0);
    const double gamma = (t->branch == Branch::High ? 1.0 : -1.0) / t->c;
    Expr S = exp_of(scale(2.0 * t->a * t->a / b, Expr::variable("f")));
    Expr numr = add_const(scale(b * gamma, S), pm);
    Expr den = add_const(scale(-gamma, std::move(S)), 1.0);
    return std::move(numr) / std::move(den);
  }
  if (const auto* t = std::get_if<T53K1Fam>(&fam)) {
    const double b = 1.0 + t->a * t->a;
    Expr den = add_const(exp_of(scale(2.0, Expr::variable("g"))), -t->c);
    return num(b * t->c) / std::move(den);
  }
  if (const auto* t = std::get_if<T53genFam>(&fam)) {
    const double b = 1.0 + t->a * t->a;
    Expr E = exp_of(scale(2.0, Expr::variable("g")));
    Expr numr = add_const(scale(t->K0 - 1.0, E), t->c);
    Expr den = add_const(scale(t->K0, std::move(E)), t->c);
    return -(scale(b, std::move(numr) / std::move(den)));
  }
  if (const auto* g = std::get_if<GrimReaperFam>(&fam)) {
    // Squared-slope first integrals of the grim reaper equations.
    const double a = g->a, b = 1.0 + a * a;
    switch (g->kind) {
      case GrimKind::T51: {
        const double C = std::exp(2.0 * g->d / b);
        Expr S = exp_of(scale(-2.0 / b, Expr::variable("f")));
        return scale(b, add_const(scale(C, std::move(S)), -1.0));
      }
      case GrimKind::T52b: {
        const double C = std::exp(2.0 * a * a * g->d / b);
        Expr S = exp_of(scale(-2.0 * a * a / b, Expr::variable("f")));
        return scale(b, add_const(scale(C, std::move(S)), -1.0));
      }
      case GrimKind::T53: {
        const double C = std::exp(-2.0 * g->d);
        Expr S = exp_of(scale(2.0, Expr::variable("g")));
        return scale(b, add_const(scale(C, std::move(S)), -1.0));
      }
    }
  }
  throw ConstraintError(
      "first_integral_expr: plane families have a constant squared slope");
}

Interval maximal_domain(const CylinderFamily& fam) {
  if (const auto* t = std::get_if<T51Fam>(&fam)) {
    const double a = t->a, K0 = t->K0, c = t->c;
    const double b = 1.0 + a * a;
    const double kappa = K0 - a * a / b;
    Interval iv;
    iv.hi = 0.5 * b * std::log(c * kappa);
    iv.hi_kind = EndpointKind::SingularZero;
    if (K0 > 1.0) {
      iv.lo = 0.5 * b * std::log(c * (K0 - 1.0));
      iv.lo_kind = EndpointKind::SingularPole;
    } else {
      iv.lo = -kInf;
      iv.lo_kind = EndpointKind::Infinite;
    }
    return iv;
  }
  if (const auto* t = std::get_if<T52a0Fam>(&fam)) {
    const double beta = 2.0 * (1.0 - t->K0);
    const double zero_root = -(1.0 + t->c) / beta;  // numerator root
    const double pole_root = -t->c / beta;          // denominator root
    Interval iv;
    if (zero_root < pole_root) {
      iv = {zero_root, pole_root, EndpointKind::SingularZero,
            EndpointKind::SingularPole};
    } else {
      iv = {pole_root, zero_root, EndpointKind::SingularPole,
            EndpointKind::SingularZero};
    }
    return iv;
  }
  if (const auto* t = std::get_if<T52K0zeroFam>(&fam)) {
    const double b = 1.0 + t->a * t->a;
    const double s = 0.5 * b / (t->a * t->a);
    return {-s * std::log(t->c * b), -s * std::log(t->c),
            EndpointKind::SingularZero, EndpointKind::SingularPole};
  }
  if (const auto* t = std::get_if<T52genFam>(&fam)) {
    const double b = 1.0 + t->a * t->a;
    const double s = 0.5 * b / (t->a * t->a);
    const double pm = (1.0 - t->K0 * b) / (t->K0 - 1.0);
    const bool middle = t->K0 > 1.0 / b && t->K0 < 1.0;  // pm > 0
    if (middle) {
      if (t->branch == Branch::High)
        return {-kInf, s * std::log(t->c), EndpointKind::Infinite,
                EndpointKind::SingularPole};
      return {-kInf, s * std::log(t->c * pm / b), EndpointKind::Infinite,
              EndpointKind::SingularZero};
    }
    const double f_zero = s * std::log(t->c * (-pm) / b);
    const double f_pole = s * std::log(t->c);
    if (f_zero < f_pole)
      return {f_zero, f_pole, EndpointKind::SingularZero,
              EndpointKind::SingularPole};
    return {f_pole, f_zero, EndpointKind::SingularPole,
            EndpointKind::SingularZero};
  }
  if (const auto* t = std::get_if<T53K1Fam>(&fam)) {
    return {0.5 * std::log(t->c), kInf, EndpointKind::SingularPole,
            EndpointKind::Infinite};
  }
  if (const auto* t = std::get_if<T53genFam>(&fam)) {
    Interval iv;
    iv.lo = 0.5 * std::log(t->c / (1.0 - t->K0));
    iv.lo_kind = EndpointKind::SingularZero;
    if (t->K0 < 0.0) {
      iv.hi = 0.5 * std::log(t->c / (-t->K0));
      iv.hi_kind = EndpointKind::SingularPole;
    } else {
      iv.hi = kInf;
      iv.hi_kind = EndpointKind::Infinite;
    }
    return iv;
  }
  if (const auto* g = std::get_if<GrimReaperFam>(&fam)) {
    const double b = 1.0 + g->a * g->a;
    const double sb = std::sqrt(b);
    double center, half;
    switch (g->kind) {
      case GrimKind::T51:
        center = -g->c;
        half = sb * (std::acos(-1.0) / 2.0);
        break;
      case GrimKind::T52b:
        center = -g->c * sb / (g->a * g->a);
        half = sb / (g->a * g->a) * (std::acos(-1.0) / 2.0);
        break;
      case GrimKind::T53:
      default:
        center = -g->c;
        half = (std::acos(-1.0) / 2.0) / sb;
        break;
    }
    return {center - half, center + half, EndpointKind::SingularPole,
            EndpointKind::SingularPole};
  }
  // Plane: linear profile over all of R.
  return {-kInf, kInf, EndpointKind::Infinite, EndpointKind::Infinite};
}

double first_integral(const CylinderFamily& fam, double t) {
  const Interval iv = maximal_domain(fam);
  if (t == iv.lo || t == iv.hi)
    throw SingularityError("profile value at a singular endpoint");
  if (t < iv.lo || t > iv.hi)
    throw DomainError("profile value outside the maximal domain");
  if (const auto* p = std::get_if<PlaneFam>(&fam))
    return p->kind == PlaneKind::T51 ? 0.0 : square(p->c);
  if (std::holds_alternative<GrimReaperFam>(fam))
    return square(closed_form_profile(fam).eval_jet(t).v1);
  return first_integral_expr(fam).eval(t);
}

// --- quadrature ---------------------------------------------------------------

namespace {

constexpr double kSegmentTol = 1e-12;

double integrate_segment(const std::function<double(double)>& integrand,
                         double p, double q, const Interval& domain) {
  auto run = [&](const std::function<double(double)>& f, double a,
                 double b) {
    const QuadResult r = gauss_kronrod_adaptive(f, a, b, kSegmentTol);
    if (!r.converged)
      throw DomainError("profile quadrature did not converge (too close to a "
                        "singular endpoint)");
    return r.value;
  };
  const bool hi_zero = domain.hi_kind == EndpointKind::SingularZero &&
                       std::isfinite(domain.hi);
  const bool lo_zero = domain.lo_kind == EndpointKind::SingularZero &&
                       std::isfinite(domain.lo);
  if (hi_zero && domain.hi - q <= q - p) {
    // u = hi - s^2 removes the (hi-u)^(-1/2) endpoint behaviour.
    const double e = domain.hi;
    auto g = [&](double s) { return integrand(e - s * s) * 2.0 * s; };
    return run(g, std::sqrt(e - q), std::sqrt(e - p));
  }
  if (lo_zero && p - domain.lo <= q - p) {
    const double e = domain.lo;
    auto g = [&](double s) { return integrand(e + s * s) * 2.0 * s; };
    return run(g, std::sqrt(p - e), std::sqrt(q - e));
  }
  return run(integrand, p, q);
}

}  // namespace

ProfileCurve quadrature_profile(const CylinderFamily& fam,
                                std::span<const double> t_grid) {
  if (t_grid.empty()) throw ConstraintError("empty profile grid");
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i] > t_grid[i - 1]))
      throw ConstraintError("profile grid must be strictly increasing");

  ProfileCurve curve;
  curve.domain = maximal_domain(fam);
  for (double t : t_grid)
    if (!(t > curve.domain.lo && t < curve.domain.hi))
      throw DomainError("profile grid point outside the maximal domain");

  if (has_closed_form(fam)) {
    if (const auto* p = std::get_if<PlaneFam>(&fam)) {
      if (p->kind == PlaneKind::T51)
        throw ConstraintError(
            "plane with constant profile has no quadrature parametrization");
    }
    const Expr profile = closed_form_profile(fam);
    for (double t : t_grid) {
      const Jet3 j = profile.eval_jet(t);
      curve.samples.push_back({t, j.v0, j.v1});
    }
    return curve;
  }

  const Expr phi = first_integral_expr(fam);
  auto integrand = [&phi](double u) { return 1.0 / std::sqrt(phi.eval(u)); };
  const double sgn = std::visit(
      [](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, PlaneFam> ||
                      std::is_same_v<T, GrimReaperFam>)
          return 1.0;
        else
          return f.sign == Sign::Plus ? 1.0 : -1.0;
      },
      fam);

  double x = 0.0;
  curve.samples.push_back(
      {0.0, t_grid[0], sgn * std::sqrt(phi.eval(t_grid[0]))});
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    x += integrate_segment(integrand, t_grid[i - 1], t_grid[i], curve.domain);
    curve.samples.push_back(
        {sgn * x, t_grid[i], sgn * std::sqrt(phi.eval(t_grid[i]))});
  }
  return curve;
}

// --- lifting ------------------------------------------------------------------

double lifted_curvature(const CylinderFamily& fam, double t) {
  const SurfaceKind kind = family_surface_kind(fam);
  if (has_closed_form(fam)) {
    if (const auto* p = std::get_if<PlaneFam>(&fam)) {
      switch (p->kind) {
        case PlaneKind::T51:
          return sectional_curvature_from_derivs(kind, 0.0, 0.0, p->a, 0.0);
        case PlaneKind::T52:
          return sectional_curvature_from_derivs(kind, p->c, 0.0, p->a, 0.0);
        case PlaneKind::T53:
          return sectional_curvature_from_derivs(kind, p->a, 0.0, p->c, 0.0);
      }
    }
    const auto& g = std::get<GrimReaperFam>(fam);
    const Jet3 j = closed_form_profile(fam).eval_jet(t);
    if (g.kind == GrimKind::T53)
      return sectional_curvature_from_derivs(kind, g.a, 0.0, j.v1, j.v2);
    return sectional_curvature_from_derivs(kind, j.v1, j.v2, g.a, 0.0);
  }

  const double phi_value = first_integral(fam, t);  // domain checks
  const Jet3 phi = first_integral_expr(fam).eval_jet(t);
  const double slope = std::sqrt(phi_value);
  const double second = 0.5 * phi.v1;  // d(f'^2)/df = 2 f''
  return std::visit(
      [&](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, T51Fam>) {
          return sectional_curvature_from_derivs(SurfaceKind::TypeI, slope,
                                                 second, f.a, 0.0);
        } else if constexpr (std::is_same_v<T, T52a0Fam>) {
          return sectional_curvature_from_derivs(SurfaceKind::TypeII, slope,
                                                 second, 0.0, 0.0);
        } else if constexpr (std::is_same_v<T, T52K0zeroFam> ||
                             std::is_same_v<T, T52genFam>) {
          return sectional_curvature_from_derivs(SurfaceKind::TypeII, slope,
                                                 second, f.a, 0.0);
        } else if constexpr (std::is_same_v<T, T53K1Fam> ||
                             std::is_same_v<T, T53genFam>) {
          return sectional_curvature_from_derivs(SurfaceKind::TypeII, f.a, 0.0,
                                                 slope, second);
        } else {
          throw ConstraintError("unreachable");
        }
      },
      fam);
}

Interval interior_window(const CylinderFamily& fam, double margin) {
  Interval iv = maximal_domain(fam);
  double lo = iv.lo, hi = iv.hi;
  if (std::isinf(lo) && std::isinf(hi)) {
    lo = -10.0;
    hi = 10.0;
  } else if (std::isinf(lo)) {
    lo = std::min(-10.0, hi - 20.0);
  } else if (std::isinf(hi)) {
    hi = std::max(10.0, lo + 20.0);
  }
  const double len = hi - lo;
  return {lo + margin * len, hi - margin * len, iv.lo_kind, iv.hi_kind};
}

TranslationSurface closed_form_surface(const CylinderFamily& fam, double margin) {
  if (!has_closed_form(fam))
    throw ConstraintError("family has no closed-form profile expression");
  const Interval w = interior_window(fam, margin);
  const double a = std::visit(
      [](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, PlaneFam> ||
                      std::is_same_v<T, GrimReaperFam>)
          return f.a;
        else
          return 0.0;
      },
      fam);

  if (const auto* p = std::get_if<PlaneFam>(&fam)) {
    switch (p->kind) {
      case PlaneKind::T51:
        return TranslationSurface(SurfaceKind::TypeI, num(0.0).with_variable("x"),
                                  scale(p->a, Expr::variable("y")),
                                  {w.lo, -1.0, w.hi, 1.0});
      case PlaneKind::T52:
        return TranslationSurface(SurfaceKind::TypeII,
                                  scale(p->c, Expr::variable("y")),
                                  scale(p->a, Expr::variable("z")),
                                  {w.lo, -1.0, w.hi, 1.0});
      case PlaneKind::T53:
        return TranslationSurface(SurfaceKind::TypeII,
                                  scale(p->a, Expr::variable("y")),
                                  scale(p->c, Expr::variable("z")),
                                  {-1.0, w.lo, 1.0, w.hi});
    }
  }
  const auto& g = std::get<GrimReaperFam>(fam);
  switch (g.kind) {
    case GrimKind::T51:
      return TranslationSurface(SurfaceKind::TypeI, closed_form_profile(fam),
                                scale(a, Expr::variable("y")),
                                {w.lo, -1.0, w.hi, 1.0});
    case GrimKind::T52b:
      return TranslationSurface(SurfaceKind::TypeII, closed_form_profile(fam),
                                scale(a, Expr::variable("z")),
                                {w.lo, -1.0, w.hi, 1.0});
    case GrimKind::T53:
    default:
      return TranslationSurface(SurfaceKind::TypeII,
                                scale(a, Expr::variable("y")),
                                closed_form_profile(fam),
                                {-1.0, w.lo, 1.0, w.hi});
  }
}

// --- JSON ---------------------------------------------------------------------

namespace {

using nlohmann::json;

Sign sign_from_string(const std::string& s) {
  if (s == "+") return Sign::Plus;
  if (s == "-") return Sign::Minus;
  throw ConstraintError("sign must be \"+\" or \"-\"");
}

Branch branch_from_string(const std::string& s) {
  if (s == "low") return Branch::Low;
  if (s == "high") return Branch::High;
  throw ConstraintError("branch must be \"low\" or \"high\"");
}

double get_number(const json& j, const char* key, bool required,
                  double fallback = 0.0) {
  if (!j.contains(key)) {
    if (required)
      throw ConstraintError(std::string("missing family field '") + key + "'");
    return fallback;
  }
  if (!j.at(key).is_number())
    throw ConstraintError(std::string("family field '") + key +
                          "' must be a number");
  return j.at(key).get<double>();
}

}  // namespace

CylinderFamily family_from_json(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid family JSON: ") + e.what(),
                     e.byte > 0 ? e.byte - 1 : 0);
  }
  if (!j.is_object()) throw ConstraintError("family JSON must be an object");
  const std::string tag = j.value("tag", std::string());
  if (tag.empty()) throw ConstraintError("family JSON needs a string 'tag'");

  const double a = get_number(j, "a", false, 0.0);
  const Sign sign = sign_from_string(j.value("sign", "+"));
  const Branch branch = branch_from_string(j.value("branch", "high"));

  if (tag == "Plane" || tag == "GrimReaper") {
    const std::string kind = j.value("kind", std::string());
    if (tag == "Plane") {
      if (kind == "T51") return PlaneFam(PlaneKind::T51, a, get_number(j, "c", false));
      if (kind == "T52") return PlaneFam(PlaneKind::T52, a, get_number(j, "c", true));
      if (kind == "T53") return PlaneFam(PlaneKind::T53, a, get_number(j, "c", true));
      throw ConstraintError("Plane kind must be T51, T52 or T53");
    }
    const double c = get_number(j, "c", false);
    const double d = get_number(j, "d", false);
    if (kind == "T51") return GrimReaperFam(GrimKind::T51, a, c, d);
    if (kind == "T52b") return GrimReaperFam(GrimKind::T52b, a, c, d);
    if (kind == "T53") return GrimReaperFam(GrimKind::T53, a, c, d);
    throw ConstraintError("GrimReaper kind must be T51, T52b or T53");
  }
  if (tag == "T51")
    return T51Fam(a, get_number(j, "K0", true), get_number(j, "c", true), sign);
  if (tag == "T52a0") {
    if (j.contains("a") && a != 0.0)
      throw ConstraintError("T52a0 requires a = 0");
    return T52a0Fam(get_number(j, "K0", true), get_number(j, "c", true), sign);
  }
  if (tag == "T52K0zero")
    return T52K0zeroFam(a, get_number(j, "c", true), sign);
  if (tag == "T52gen")
    return T52genFam(a, get_number(j, "K0", true), get_number(j, "c", true),
                     sign, branch);
  if (tag == "T53K1") return T53K1Fam(a, get_number(j, "c", true), sign);
  if (tag == "T53gen")
    return T53genFam(a, get_number(j, "K0", true), get_number(j, "c", true), sign);
  throw ConstraintError("unknown family tag '" + tag + "'");
}

std::string family_to_json(const CylinderFamily& fam) {
  json j;
  j["tag"] = family_tag(fam);
  std::visit(
      [&j](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, PlaneFam>) {
          j["kind"] = f.kind == PlaneKind::T51   ? "T51"
                      : f.kind == PlaneKind::T52 ? "T52"
                                                 : "T53";
          j["a"] = f.a;
          j["c"] = f.c;
        } else if constexpr (std::is_same_v<T, GrimReaperFam>) {
          j["kind"] = f.kind == GrimKind::T51    ? "T51"
                      : f.kind == GrimKind::T52b ? "T52b"
                                                 : "T53";
          j["a"] = f.a;
          j["c"] = f.c;
          j["d"] = f.d;
        } else {
          if constexpr (!std::is_same_v<T, T52a0Fam>) j["a"] = f.a;
          else j["a"] = 0.0;
          if constexpr (std::is_same_v<T, T51Fam> || std::is_same_v<T, T52a0Fam> ||
                        std::is_same_v<T, T52genFam> || std::is_same_v<T, T53genFam>)
            j["K0"] = f.K0;
          j["c"] = f.c;
          j["sign"] = f.sign == Sign::Plus ? "+" : "-";
          if constexpr (std::is_same_v<T, T52genFam>)
            j["branch"] = f.branch == Branch::High ? "high" : "low";
        }
      },
      fam);
  return j.dump();
}

// --- residual evaluators -------------------------------------------------------

double ode_residual(ResidualKind kind, const ResidualParams& params,
                    const Jet3& profile, const Jet3& second) {
  const double a = params.a, K0 = params.K0;
  switch (kind) {
    case ResidualKind::T51Ode: {
      const double fp = profile.v1, fpp = profile.v2;
      const double w = 1.0 + a * a + fp * fp;
      return w * w * (K0 - 1.0) + w + (1.0 + a * a) * fpp;
    }
    case ResidualKind::T52Ode: {
      const double fp = profile.v1, fpp = profile.v2;
      const double q = 1.0 + fp * fp;
      return (a * a + q) * (K0 - 1.0) + a * a * K0 +
             K0 * a * a * a * a / q + (1.0 + a * a) * fpp / q;
    }
    case ResidualKind::T53Ode: {
      const double gp = profile.v1, gpp = profile.v2;
      const double Q = gp * gp;
      const double b = 1.0 + a * a;
      return 2.0 * (b + Q) * (K0 - 1.0) + 2.0 * K0 * Q * (1.0 + Q / b) +
             2.0 * gpp;
    }
    case ResidualKind::MasterTypeI:
    case ResidualKind::MasterTypeII: {
      const double fp = profile.v1, fpp = profile.v2;
      const double gp = second.v1, gpp = second.v2;
      const double w = 1.0 + fp * fp + gp * gp;
      const double shared =
          fpp * (gpp - gp * gp - 1.0) + gpp * (fpp - fp * fp - 1.0);
      const double lead = kind == ResidualKind::MasterTypeI
                              ? w * (w - 1.0)
                              : w * (1.0 + fp * fp);
      return w * w * K0 - lead - shared;
    }
  }
  throw ConstraintError("unknown residual kind");
}

K1Coefficients k1_obstruction(double c3, double c4, double c5, double c6) {
  if (c3 == 0.0 || c4 == 0.0 || c5 == 0.0 || c6 == 0.0)
    throw ConstraintError("k1_obstruction requires nonzero constants");
  K1Coefficients k;
  k.A0 = 1.0 + c3 * c5 + c4 * c6 - 2.0 * c3 * c4 * c5 * c6;
  k.A1 = 1.0 + c5 + c4 * c6 - 2.0 * c4 * c5 * c6;
  k.A2 = 1.0 + c3 * c5 + c6 - 2.0 * c3 * c5 * c6;
  k.A3 = c5 + c6 - 2.0 * c5 * c6;
  return k;
}

// --- classification property test ----------------------------------------------

namespace {

// Random quartic with second derivative bounded away from zero on [-1,1]:
// f'' = q + a3 t + a4 t^2 with |a3| + |a4| <= 0.9 |q|.
Expr random_bent_profile(Rng& rng, std::string_view var) {
  const double a0 = rng.uniform(-1.0, 1.0);
  const double a1 = rng.uniform(-1.0, 1.0);
  const double q = (rng.coin() ? 1.0 : -1.0) * rng.uniform(1.0, 2.0);
  const double a3 = rng.uniform(-0.45, 0.45) * std::abs(q);
  const double a4 = rng.uniform(-0.45, 0.45) * std::abs(q);
  Expr x = Expr::variable(var);
  Expr e = add_const(scale(a1, x), a0) + scale(q / 2.0, Expr::pow(x, 2.0)) +
           scale(a3 / 6.0, Expr::pow(x, 3.0)) +
           scale(a4 / 12.0, Expr::pow(x, 4.0));
  return e;
}

}  // namespace

ClassificationReport classification_property_test(std::uint64_t seed, int n,
                                                  double spread_tol) {
  if (n < 1) throw ConstraintError("classification test needs n >= 1");
  Rng rng(seed);
  ClassificationReport report;
  report.n = n;
  report.spread_tol = spread_tol;
  report.min_spread = kInf;
  const GridSpec grid(-1.0, -1.0, 1.0, 1.0, 5, 5);
  for (int i = 0; i < n; ++i) {
    const SurfaceKind kind = (i % 2 == 0) ? SurfaceKind::TypeI : SurfaceKind::TypeII;
    const char* uvar = kind == SurfaceKind::TypeI ? "x" : "y";
    const char* vvar = kind == SurfaceKind::TypeI ? "y" : "z";
    Expr f = random_bent_profile(rng, uvar);
    Expr g = random_bent_profile(rng, vvar);
    const TranslationSurface s(kind, f, g, {-1.0, -1.0, 1.0, 1.0});
    const CurvatureReport cr = curvature_grid_closed(s, grid);
    report.min_spread = std::min(report.min_spread, cr.k_closed_spread);
    if (!(cr.k_closed_spread > spread_tol))
      report.counterexamples.push_back(
          {kind, f.to_string(), g.to_string(), cr.k_closed_spread});
  }
  return report;
}

}  // namespace snmgeo
