#pragma once

#include <array>
#include <functional>
#include <memory>

#include "snmgeo/errors.hpp"
#include "snmgeo/jet.hpp"
#include "snmgeo/linalg.hpp"

namespace snmgeo {

// The canonical semi-symmetric non-metric connection on R^3,
//   cov_deriv(X,Y) = D_X Y + <dz, Y> X,
// with W fixed to dz. D_X Y is the componentwise (flat) directional
// derivative. Everything below is built from this definition; no closed
// curvature formula is used, so the module can serve as an independent
// check for the surface formulas.

// Vector field on R^3 with first and second derivative capability.
//
// Three backends:
//  * constant fields (derivatives are exactly zero);
//  * analytic fields whose components are jet-valued functions of the
//    coordinate jets -- Jacobians come from axis-seeded jets and Hessians
//    from second directional derivatives plus polarization, all exact;
//  * black-box fields (Vec3 function), differentiated by centered finite
//    differences (step `h`, Hessian step max(h, 1e-4)).
//
// Analytic component functions are consumed to derivative order 2 only;
// the third jet slot may be garbage (see derivative_jet).
class AmbientField {
 public:
  using JetComponent = std::function<Jet3(const Jet3& x, const Jet3& y, const Jet3& z)>;

  static AmbientField constant(const Vec3& v);
  static AmbientField analytic(JetComponent cx, JetComponent cy, JetComponent cz);
  static AmbientField numeric(std::function<Vec3(const Vec3&)> f, double h = 1e-5);

  Vec3 value(const Vec3& p) const;
  // jacobian(p).m[i][j] = d(component i)/d(coordinate j).
  Mat3 jacobian(const Vec3& p) const;
  // hessian(p)[i].m[j][k] = d^2(component i)/(dx_j dx_k).
  std::array<Mat3, 3> hessian(const Vec3& p) const;
  // D_dir field at p = jacobian(p) * dir; exactly linear in dir.
  Vec3 directional_derivative(const Vec3& p, const Vec3& dir) const;

  struct Impl;
  explicit AmbientField(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

 private:
  std::shared_ptr<const Impl> impl_;
};

// cov_deriv of Y along X evaluated at p.
Vec3 cov_deriv(const AmbientField& X, const AmbientField& Y, const Vec3& p);

// cov_deriv of Z along a fixed tangent vector at p (the connection is
// tensorial in the direction slot).
Vec3 cov_deriv_along(const Vec3& direction, const AmbientField& Z, const Vec3& p);

// [X,Y] = D_X Y - D_Y X (exact in flat R^3).
Vec3 lie_bracket(const AmbientField& X, const AmbientField& Y, const Vec3& p);

// T(X,Y) = cov_deriv(X,Y) - cov_deriv(Y,X) - [X,Y].
Vec3 torsion(const AmbientField& X, const AmbientField& Y, const Vec3& p);

// R(X,Y)Z = cov(X, cov(Y,Z)) - cov(Y, cov(X,Z)) - cov([X,Y], Z), assembled
// by nesting covariant derivatives of the derived first-order fields.
Vec3 curvature(const AmbientField& X, const AmbientField& Y,
               const AmbientField& Z, const Vec3& p);

// A 2-plane given by a (not necessarily orthonormal) basis.
struct PlaneSection {
  Vec3 u;
  Vec3 v;

  // Throws ConstraintError if u, v are linearly dependent (Gram det <= 0).
  PlaneSection(const Vec3& u_, const Vec3& v_);
};

// Sectional curvature of the plane: symmetrized curvature average over the
// given basis, normalized by the Gram determinant. Curvature tensors are
// evaluated on constant extensions of the basis vectors.
double sectional_curvature_plane(const PlaneSection& plane);

// Same quantity through the orthonormal-basis route: Gram-Schmidt, then the
// closed plane formula (u3^2 + v3^2)/2.
double sectional_curvature_plane_formula(const PlaneSection& plane);

}  // namespace snmgeo
