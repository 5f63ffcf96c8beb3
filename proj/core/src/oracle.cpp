#include "snmgeo/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace snmgeo {

namespace {

struct FrameAt {
  Vec3 e1, e2;
  double E, F, G;
};

FrameAt frame_at(const TranslationSurface& s, double u, double v) {
  const Jet3 fj = s.f().eval_jet(u);
  const Jet3 gj = s.g().eval_jet(v);
  FrameAt fr;
  if (s.kind() == SurfaceKind::TypeI) {
    fr.e1 = {1.0, 0.0, fj.v1};
    fr.e2 = {0.0, 1.0, gj.v1};
  } else {
    fr.e1 = {fj.v1, 1.0, 0.0};
    fr.e2 = {gj.v1, 0.0, 1.0};
  }
  fr.E = dot(fr.e1, fr.e1);
  fr.F = dot(fr.e1, fr.e2);
  fr.G = dot(fr.e2, fr.e2);
  return fr;
}

// Ambient representative of a tangent coefficient field at (u,v).
Vec3 ambient_rep(const TranslationSurface& s, const TangentField& Y, double u,
                 double v) {
  const FrameAt fr = frame_at(s, u, v);
  const TangentVec c = Y(u, v);
  return c.a * fr.e1 + c.b * fr.e2;
}

// Project an ambient vector onto the tangent plane, returning frame
// coefficients (solves the 2x2 Gram system).
TangentVec project_tangent(const FrameAt& fr, const Vec3& vec) {
  const double b1 = dot(vec, fr.e1);
  const double b2 = dot(vec, fr.e2);
  const double det = fr.E * fr.G - fr.F * fr.F;
  if (!(std::abs(det) > 1.0 / 1e12))
    throw DomainError("near-degenerate tangent frame");
  return {(b1 * fr.G - b2 * fr.F) / det, (fr.E * b2 - fr.F * b1) / det};
}

}  // namespace

TangentVec induced_cov_deriv(const TranslationSurface& s, const TangentField& X,
                             const TangentField& Y, double u, double v,
                             const OracleConfig& cfg) {
  const FrameAt fr = frame_at(s, u, v);
  const TangentVec xc = X(u, v);
  const double reach = (cfg.stencil_order >= 4 ? 2.0 : 1.0) * cfg.h;
  if (!s.domain().contains(u - reach * std::abs(xc.a), v - reach * std::abs(xc.b)) ||
      !s.domain().contains(u + reach * std::abs(xc.a), v + reach * std::abs(xc.b)))
    throw DomainError("finite-difference stencil leaves the surface domain");
  const Vec3 x_amb = xc.a * fr.e1 + xc.b * fr.e2;
  const Vec3 y_amb = ambient_rep(s, Y, u, v);

  // Flat derivative of the ambient representative of Y along X, taken over
  // the parameters: t -> (u + t*xc.a, v + t*xc.b).
  auto sample = [&](double t) {
    return ambient_rep(s, Y, u + t * xc.a, v + t * xc.b);
  };
  const double h = cfg.h;
  Vec3 flat;
  if (cfg.stencil_order >= 4) {
    flat = (sample(-2.0 * h) - 8.0 * sample(-h) + 8.0 * sample(h) -
            sample(2.0 * h)) /
           (12.0 * h);
  } else {
    flat = (sample(h) - sample(-h)) / (2.0 * h);
  }
  if (!flat.finite()) throw DomainError("non-finite flat derivative");

  const Vec3 ambient_cov = flat + y_amb.z * x_amb;
  return project_tangent(fr, ambient_cov);
}

namespace {

// Lie bracket of tangent coefficient fields, by finite differences of the
// coefficients over the parameters (zero for the coordinate frame).
TangentVec bracket_field(const TangentField& X, const TangentField& Y, double u,
                         double v, double h) {
  auto d_along = [&](const TangentField& F, const TangentVec& dir) {
    const TangentVec plus = F(u + h * dir.a, v + h * dir.b);
    const TangentVec minus = F(u - h * dir.a, v - h * dir.b);
    return TangentVec{(plus.a - minus.a) / (2.0 * h),
                      (plus.b - minus.b) / (2.0 * h)};
  };
  const TangentVec xy = d_along(Y, X(u, v));
  const TangentVec yx = d_along(X, Y(u, v));
  return {xy.a - yx.a, xy.b - yx.b};
}

double curvature_with_frame(const TranslationSurface& s, double u, double v,
                            const OracleConfig& cfg, const TangentField& b1,
                            const TangentField& b2, bool coordinate_frame) {
  auto cov = [&](const TangentField& X, const TangentField& Y) {
    return TangentField([&s, X, Y, &cfg](double uu, double vv) {
      return induced_cov_deriv(s, X, Y, uu, vv, cfg);
    });
  };

  // Bracket correction; identically zero for the coordinate frame.
  TangentVec br{0.0, 0.0};
  if (!coordinate_frame) br = bracket_field(b1, b2, u, v, cfg.h);
  auto cov_along_vec = [&](const TangentVec& dir, const TangentField& Z) {
    const TangentField dir_field = [dir](double, double) { return dir; };
    return induced_cov_deriv(s, dir_field, Z, u, v, cfg);
  };

  // R(b1,b2)b2 = cov(b1, cov(b2,b2)) - cov(b2, cov(b1,b2)) - cov([b1,b2], b2)
  const TangentField c22 = cov(b2, b2);
  const TangentField c12 = cov(b1, b2);
  const TangentVec r1 = [&] {
    const TangentVec t1 = induced_cov_deriv(s, b1, c22, u, v, cfg);
    const TangentVec t2 = induced_cov_deriv(s, b2, c12, u, v, cfg);
    TangentVec out{t1.a - t2.a, t1.b - t2.b};
    if (!coordinate_frame) {
      const TangentVec t3 = cov_along_vec(br, b2);
      out.a -= t3.a;
      out.b -= t3.b;
    }
    return out;
  }();
  const TangentField c11 = cov(b1, b1);
  const TangentField c21 = cov(b2, b1);
  const TangentVec r2 = [&] {
    const TangentVec t1 = induced_cov_deriv(s, b2, c11, u, v, cfg);
    const TangentVec t2 = induced_cov_deriv(s, b1, c21, u, v, cfg);
    TangentVec out{t1.a - t2.a, t1.b - t2.b};
    if (!coordinate_frame) {
      const TangentVec t3 = cov_along_vec({-br.a, -br.b}, b1);
      out.a -= t3.a;
      out.b -= t3.b;
    }
    return out;
  }();

  const FrameAt fr = frame_at(s, u, v);
  const Vec3 b1_amb = b1(u, v).a * fr.e1 + b1(u, v).b * fr.e2;
  const Vec3 b2_amb = b2(u, v).a * fr.e1 + b2(u, v).b * fr.e2;
  const Vec3 r1_amb = r1.a * fr.e1 + r1.b * fr.e2;
  const Vec3 r2_amb = r2.a * fr.e1 + r2.b * fr.e2;

  const double num = dot(r1_amb, b1_amb) + dot(r2_amb, b2_amb);
  const double gram = dot(b1_amb, b1_amb) * dot(b2_amb, b2_amb) -
                      dot(b1_amb, b2_amb) * dot(b1_amb, b2_amb);
  return num / (2.0 * gram);
}

}  // namespace

double intrinsic_curvature_fd(const TranslationSurface& s, double u, double v,
                              const OracleConfig& cfg) {
  const TangentField e1c = [](double, double) { return TangentVec{1.0, 0.0}; };
  const TangentField e2c = [](double, double) { return TangentVec{0.0, 1.0}; };
  return curvature_with_frame(s, u, v, cfg, e1c, e2c, /*coordinate_frame=*/true);
}

double intrinsic_curvature_fd_orthonormal(const TranslationSurface& s, double u,
                                          double v, const OracleConfig& cfg) {
  // Gram-Schmidt coefficients as genuine fields of the parameters.
  const TangentField o1 = [&s](double uu, double vv) {
    const FrameAt fr = frame_at(s, uu, vv);
    return TangentVec{1.0 / std::sqrt(fr.E), 0.0};
  };
  const TangentField o2 = [&s](double uu, double vv) {
    const FrameAt fr = frame_at(s, uu, vv);
    const double c = fr.F / fr.E;
    const double n2 = std::sqrt(fr.G - fr.F * fr.F / fr.E);
    return TangentVec{-c / n2, 1.0 / n2};
  };
  return curvature_with_frame(s, u, v, cfg, o1, o2, /*coordinate_frame=*/false);
}

CurvatureReport compare_curvatures(const TranslationSurface& s,
                                   const GridSpec& grid,
                                   const OracleConfig& cfg) {
  CurvatureReport report = curvature_grid_closed(s, grid);
  double kmin = std::numeric_limits<double>::infinity();
  double kmax = -std::numeric_limits<double>::infinity();
  for (CurvaturePoint& pt : report.points) {
    if (pt.clipped) continue;
    try {
      pt.k_gauss = s.sectional_curvature_gauss(pt.u, pt.v);
      pt.k_oracle = intrinsic_curvature_fd(s, pt.u, pt.v, cfg);
    } catch (const DomainError&) {
      pt.clipped = true;
      ++report.clipped_points;
      continue;
    }
    pt.err_closed_oracle = std::abs(pt.k_closed - pt.k_oracle);
    pt.err_gauss_oracle = std::abs(pt.k_gauss - pt.k_oracle);
    pt.err_closed_gauss = std::abs(pt.k_closed - pt.k_gauss);
    report.max_err_closed_oracle =
        std::max(report.max_err_closed_oracle, pt.err_closed_oracle);
    report.max_err_gauss_oracle =
        std::max(report.max_err_gauss_oracle, pt.err_gauss_oracle);
    report.max_err_closed_gauss =
        std::max(report.max_err_closed_gauss, pt.err_closed_gauss);
    kmin = std::min(kmin, pt.k_closed);
    kmax = std::max(kmax, pt.k_closed);
  }
  report.k_closed_spread = kmax >= kmin ? kmax - kmin : 0.0;
  report.pass = report.max_err_closed_oracle <= cfg.tolerance &&
                report.max_err_gauss_oracle <= cfg.tolerance &&
                report.max_err_closed_gauss <= cfg.gauss_tolerance;
  return report;
}

}  // namespace snmgeo
