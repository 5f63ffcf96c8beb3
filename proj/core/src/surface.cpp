#include "snmgeo/surface.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace snmgeo {

namespace {

constexpr double kOverflowLimit = 1e12;

// Component function returning the jet of (d expr / d variable) composed
// with the coordinate jet. Order-3 slot of the result is unreliable and
// never consumed (the ambient machinery differentiates twice at most).
AmbientField::JetComponent profile_slope_component(Expr e, int coordinate) {
  return [e = std::move(e), coordinate](const Jet3& x, const Jet3& y,
                                        const Jet3& z) {
    const Jet3& c = coordinate == 0 ? x : (coordinate == 1 ? y : z);
    const Jet3 j = e.eval_jet(c.v0);
    return jet_compose(derivative_jet(j), c);
  };
}

AmbientField::JetComponent constant_component(double value) {
  return [value](const Jet3&, const Jet3&, const Jet3&) {
    return Jet3::constant(value);
  };
}

}  // namespace

GridSpec::GridSpec(double u0_, double v0_, double u1_, double v1_, int nu_,
                   int nv_)
    : u0(u0_), v0(v0_), u1(u1_), v1(v1_), nu(nu_), nv(nv_) {
  if (nu < 1 || nv < 1) throw ConstraintError("grid needs at least one point per axis");
  if (u1 < u0 || v1 < v0) throw ConstraintError("grid bounds out of order");
}

std::vector<double> GridSpec::us() const {
  std::vector<double> out(nu);
  for (int i = 0; i < nu; ++i)
    out[i] = nu == 1 ? u0 : u0 + (u1 - u0) * i / (nu - 1);
  return out;
}

std::vector<double> GridSpec::vs() const {
  std::vector<double> out(nv);
  for (int i = 0; i < nv; ++i)
    out[i] = nv == 1 ? v0 : v0 + (v1 - v0) * i / (nv - 1);
  return out;
}

TranslationSurface::TranslationSurface(SurfaceKind kind, Expr f, Expr g,
                                       Domain2 domain)
    : kind_(kind), f_(std::move(f)), g_(std::move(g)), domain_(domain) {
  if (domain_.u1 < domain_.u0 || domain_.v1 < domain_.v0)
    throw ConstraintError("surface domain bounds out of order");
}

void TranslationSurface::check_domain(double u, double v) const {
  if (!domain_.contains(u, v))
    throw DomainError("parameter point outside the surface domain");
}

FundamentalData TranslationSurface::fundamental_data(double u, double v) const {
  check_domain(u, v);
  const Jet3 fj = f_.eval_jet(u);
  const Jet3 gj = g_.eval_jet(v);
  const double fp = fj.v1, fpp = fj.v2;
  const double gp = gj.v1, gpp = gj.v2;

  FundamentalData d;
  d.E = 1.0 + fp * fp;
  d.F = fp * gp;
  d.G = 1.0 + gp * gp;
  d.w = 1.0 + fp * fp + gp * gp;
  const double sw = std::sqrt(d.w);
  if (kind_ == SurfaceKind::TypeI) {
    d.e1 = {1.0, 0.0, fp};
    d.e2 = {0.0, 1.0, gp};
    d.normal = Vec3{-fp, -gp, 1.0} / sw;
  } else {
    d.e1 = {fp, 1.0, 0.0};
    d.e2 = {gp, 0.0, 1.0};
    d.normal = Vec3{1.0, -fp, -gp} / sw;
  }
  d.h11 = fpp / sw;
  d.h12 = 0.0;
  d.h22 = gpp / sw;
  return d;
}

double sectional_curvature_from_derivs(SurfaceKind kind, double fp, double fpp,
                                       double gp, double gpp) {
  const double w = 1.0 + fp * fp + gp * gp;
  const double shared =
      fpp * (gpp - gp * gp - 1.0) + gpp * (fpp - fp * fp - 1.0);
  const double lead =
      kind == SurfaceKind::TypeI ? w * (fp * fp + gp * gp) : w * (1.0 + fp * fp);
  return (lead + shared) / (2.0 * w * w);
}

double TranslationSurface::sectional_curvature_closed(double u, double v) const {
  check_domain(u, v);
  const Jet3 fj = f_.eval_jet(u);
  const Jet3 gj = g_.eval_jet(v);
  return sectional_curvature_from_derivs(kind_, fj.v1, fj.v2, gj.v1, gj.v2);
}

Vec3 TranslationSurface::position(double u, double v) const {
  const double sum = f_.eval(u) + g_.eval(v);
  if (kind_ == SurfaceKind::TypeI) return {u, v, sum};
  return {sum, u, v};
}

std::pair<AmbientField, AmbientField> TranslationSurface::frame_fields() const {
  if (kind_ == SurfaceKind::TypeI) {
    // e1 = dx + f'(x) dz, e2 = dy + g'(y) dz
    AmbientField e1 = AmbientField::analytic(
        constant_component(1.0), constant_component(0.0),
        profile_slope_component(f_, 0));
    AmbientField e2 = AmbientField::analytic(
        constant_component(0.0), constant_component(1.0),
        profile_slope_component(g_, 1));
    return {e1, e2};
  }
  // e1 = f'(y) dx + dy, e2 = g'(z) dx + dz
  AmbientField e1 = AmbientField::analytic(profile_slope_component(f_, 1),
                                           constant_component(1.0),
                                           constant_component(0.0));
  AmbientField e2 = AmbientField::analytic(profile_slope_component(g_, 2),
                                           constant_component(0.0),
                                           constant_component(1.0));
  return {e1, e2};
}

double TranslationSurface::sectional_curvature_gauss(double u, double v) const {
  const FundamentalData d = fundamental_data(u, v);
  const auto [E1, E2] = frame_fields();
  const Vec3 p = position(u, v);

  const double amb_1221 = dot(curvature(E1, E2, E2, p), d.e1);
  const double amb_2112 = dot(curvature(E2, E1, E1, p), d.e2);

  // Normal part of W = dz: <dz, xi>; h(X,Y) = h_ij xi.
  const double wp = d.normal.z;

  const double r_1221 = amb_1221 - d.h12 * d.h12 + d.h11 * d.h22 -
                        wp * d.h22 * d.E + wp * d.h12 * d.F;
  const double r_2112 = amb_2112 - d.h12 * d.h12 + d.h11 * d.h22 -
                        wp * d.h11 * d.G + wp * d.h12 * d.F;
  return (r_1221 + r_2112) / (2.0 * (d.E * d.G - d.F * d.F));
}

double TranslationSurface::second_form_deviation(double u, double v) const {
  const FundamentalData d = fundamental_data(u, v);
  const auto [E1, E2] = frame_fields();
  const Vec3 p = position(u, v);
  const AmbientField* frame[2] = {&E1, &E2};

  double worst = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const Vec3 snm = cov_deriv(*frame[i], *frame[j], p);
      const Vec3 flat =
          frame[j]->directional_derivative(p, frame[i]->value(p));
      const double h_snm = dot(snm, d.normal);
      const double h_flat = dot(flat, d.normal);
      worst = std::max(worst, std::abs(h_snm - h_flat));
    }
  return worst;
}

CurvatureReport curvature_grid_closed(const TranslationSurface& s,
                                      const GridSpec& grid) {
  CurvatureReport report;
  double kmin = std::numeric_limits<double>::infinity();
  double kmax = -std::numeric_limits<double>::infinity();
  for (double u : grid.us())
    for (double v : grid.vs()) {
      CurvaturePoint pt;
      pt.u = u;
      pt.v = v;
      try {
        const Jet3 fj = s.f().eval_jet(u);
        const Jet3 gj = s.g().eval_jet(v);
        const double w = 1.0 + fj.v1 * fj.v1 + gj.v1 * gj.v1;
        if (!(w < kOverflowLimit)) {
          pt.clipped = true;
        } else {
          pt.k_closed =
              sectional_curvature_from_derivs(s.kind(), fj.v1, fj.v2, gj.v1, gj.v2);
        }
      } catch (const DomainError&) {
        pt.clipped = true;
      }
      if (pt.clipped) {
        ++report.clipped_points;
        pt.k_closed = std::numeric_limits<double>::quiet_NaN();
      } else {
        kmin = std::min(kmin, pt.k_closed);
        kmax = std::max(kmax, pt.k_closed);
      }
      report.points.push_back(pt);
    }
  if (kmax >= kmin) report.k_closed_spread = kmax - kmin;
  return report;
}

}  // namespace snmgeo
