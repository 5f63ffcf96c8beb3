#pragma once

#include <functional>

#include "snmgeo/surface.hpp"

namespace snmgeo {

// Intrinsic-curvature oracle. Works entirely from the induced-connection
// definition: tangential projection of cov_deriv, nested with finite
// differences over the surface parameters. Shares no curvature formula
// with the surface module.

struct OracleConfig {
  double h = 1e-4;        // finite-difference step over parameters
  int stencil_order = 2;  // 2 or 4
  double tolerance = 1e-4;
  double gauss_tolerance = 1e-8;  // for |K_closed - K_gauss| in compare()

  static OracleConfig loose() { return {1e-4, 2, 1e-4, 1e-8}; }
  static OracleConfig strict() { return {1e-3, 4, 1e-6, 1e-8}; }
};

// Tangent vector written in the coordinate frame {e1, e2}.
struct TangentVec {
  double a = 0.0;
  double b = 0.0;
};

using TangentField = std::function<TangentVec(double, double)>;

// Tangential part (in frame coefficients) of cov_deriv(X, Y) at (u,v):
// the ambient representative of Y is differentiated along X by a centered
// stencil over the parameters, the W-term <dz, Y> X is added, and the
// result is projected with the induced metric.
TangentVec induced_cov_deriv(const TranslationSurface& s, const TangentField& X,
                             const TangentField& Y, double u, double v,
                             const OracleConfig& cfg = {});

// Sectional curvature at (u,v) from nested induced covariant derivatives
// of the coordinate frame ([e1,e2] = 0), normalized by the Gram
// determinant of the frame.
double intrinsic_curvature_fd(const TranslationSurface& s, double u, double v,
                              const OracleConfig& cfg = {});

// Same oracle evaluated on the Gram-Schmidt orthonormalized frame; used to
// check frame independence of the nested-derivative pipeline.
double intrinsic_curvature_fd_orthonormal(const TranslationSurface& s, double u,
                                          double v, const OracleConfig& cfg = {});

// Closed form vs Gauss pipeline vs oracle over a grid. pass requires
// max|K_closed-K_oracle| and max|K_gauss-K_oracle| <= cfg.tolerance and
// max|K_closed-K_gauss| <= cfg.gauss_tolerance over unclipped points.
CurvatureReport compare_curvatures(const TranslationSurface& s,
                                   const GridSpec& grid,
                                   const OracleConfig& cfg = {});

}  // namespace snmgeo
