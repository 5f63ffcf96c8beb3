#include "snmgeo/ambient.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace snmgeo {

struct AmbientField::Impl {
  virtual ~Impl() = default;
  virtual Vec3 value(const Vec3& p) const = 0;
  virtual Mat3 jacobian(const Vec3& p) const = 0;
  virtual std::array<Mat3, 3> hessian(const Vec3& p) const = 0;
};

namespace {

struct ConstantImpl final : AmbientField::Impl {
  Vec3 v;
  explicit ConstantImpl(const Vec3& v_) : v(v_) {}
  Vec3 value(const Vec3&) const override { return v; }
  Mat3 jacobian(const Vec3&) const override { return Mat3::zero(); }
  std::array<Mat3, 3> hessian(const Vec3&) const override {
    return {Mat3::zero(), Mat3::zero(), Mat3::zero()};
  }
};

struct AnalyticImpl final : AmbientField::Impl {
  std::array<AmbientField::JetComponent, 3> comp;

  AnalyticImpl(AmbientField::JetComponent cx, AmbientField::JetComponent cy,
               AmbientField::JetComponent cz)
      : comp{std::move(cx), std::move(cy), std::move(cz)} {}

  Jet3 eval_along(int i, const Vec3& p, const Vec3& d) const {
    return comp[i]({p.x, d.x, 0.0, 0.0}, {p.y, d.y, 0.0, 0.0},
                   {p.z, d.z, 0.0, 0.0});
  }

  Vec3 value(const Vec3& p) const override {
    const Vec3 zero{};
    return {eval_along(0, p, zero).v0, eval_along(1, p, zero).v0,
            eval_along(2, p, zero).v0};
  }

  Mat3 jacobian(const Vec3& p) const override {
    static const Vec3 axes[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    Mat3 j;
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k) j.m[i][k] = eval_along(i, p, axes[k]).v1;
    return j;
  }

  std::array<Mat3, 3> hessian(const Vec3& p) const override {
    static const Vec3 axes[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    std::array<Mat3, 3> h{};
    for (int i = 0; i < 3; ++i) {
      double diag[3];
      for (int k = 0; k < 3; ++k) {
        diag[k] = eval_along(i, p, axes[k]).v2;
        h[i].m[k][k] = diag[k];
      }
      // Mixed partials by polarization of second directional derivatives.
      for (int j = 0; j < 3; ++j)
        for (int k = j + 1; k < 3; ++k) {
          const double both = eval_along(i, p, axes[j] + axes[k]).v2;
          const double mixed = 0.5 * (both - diag[j] - diag[k]);
          h[i].m[j][k] = mixed;
          h[i].m[k][j] = mixed;
        }
    }
    return h;
  }
};

struct NumericImpl final : AmbientField::Impl {
  std::function<Vec3(const Vec3&)> f;
  double h;

  NumericImpl(std::function<Vec3(const Vec3&)> f_, double h_)
      : f(std::move(f_)), h(h_) {}

  Vec3 value(const Vec3& p) const override { return f(p); }

  Mat3 jacobian(const Vec3& p) const override {
    static const Vec3 axes[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    Mat3 j;
    for (int k = 0; k < 3; ++k) {
      const Vec3 column = (f(p + h * axes[k]) - f(p - h * axes[k])) / (2.0 * h);
      j.m[0][k] = column.x;
      j.m[1][k] = column.y;
      j.m[2][k] = column.z;
    }
    return j;
  }

  std::array<Mat3, 3> hessian(const Vec3& p) const override {
    static const Vec3 axes[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    const double hh = std::max(h, 1e-4);
    std::array<Mat3, 3> out{};
    const Vec3 f0 = f(p);
    for (int k = 0; k < 3; ++k) {
      const Vec3 second =
          (f(p + hh * axes[k]) - 2.0 * f0 + f(p - hh * axes[k])) / (hh * hh);
      out[0].m[k][k] = second.x;
      out[1].m[k][k] = second.y;
      out[2].m[k][k] = second.z;
    }
    for (int j = 0; j < 3; ++j)
      for (int k = j + 1; k < 3; ++k) {
        const Vec3 cross_term =
            (f(p + hh * (axes[j] + axes[k])) - f(p + hh * (axes[j] - axes[k])) -
             f(p - hh * (axes[j] - axes[k])) + f(p - hh * (axes[j] + axes[k]))) /
            (4.0 * hh * hh);
        const double vals[3] = {cross_term.x, cross_term.y, cross_term.z};
        for (int i = 0; i < 3; ++i) {
          out[i].m[j][k] = vals[i];
          out[i].m[k][j] = vals[i];
        }
      }
    return out;
  }
};

// First-order derived field q -> cov_deriv(Y, Z, q); its Jacobian expands
// the product rule through the parents' Jacobians and Z's Hessians, so it
// stays exact for analytic parents. Not differentiable a second time.
struct CovDerivImpl final : AmbientField::Impl {
  AmbientField dir;    // Y
  AmbientField field;  // Z

  CovDerivImpl(AmbientField y, AmbientField z)
      : dir(std::move(y)), field(std::move(z)) {}

  Vec3 value(const Vec3& p) const override {
    const Vec3 y = dir.value(p);
    const Vec3 z = field.value(p);
    return field.jacobian(p) * y + z.z * y;
  }

  Mat3 jacobian(const Vec3& p) const override {
    const Vec3 y = dir.value(p);
    const Vec3 z = field.value(p);
    const Mat3 jy = dir.jacobian(p);
    const Mat3 jz = field.jacobian(p);
    const std::array<Mat3, 3> hz = field.hessian(p);
    const double yc[3] = {y.x, y.y, y.z};

    Mat3 out;
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k) {
        double s = 0.0;
        for (int j = 0; j < 3; ++j)
          s += hz[i].m[j][k] * yc[j] + jz.m[i][j] * jy.m[j][k];
        s += jz.m[2][k] * yc[i];  // d z_3 / dx_k * y_i
        // + z_3 * d y_i / dx_k
        s += z.z * jy.m[i][k];
        out.m[i][k] = s;
      }
    return out;
  }

  std::array<Mat3, 3> hessian(const Vec3&) const override {
    throw std::logic_error(
        "derived covariant-derivative fields are first-order only");
  }
};

}  // namespace

AmbientField AmbientField::constant(const Vec3& v) {
  return AmbientField(std::make_shared<ConstantImpl>(v));
}

AmbientField AmbientField::analytic(JetComponent cx, JetComponent cy,
                                    JetComponent cz) {
  return AmbientField(std::make_shared<AnalyticImpl>(std::move(cx), std::move(cy),
                                                     std::move(cz)));
}

AmbientField AmbientField::numeric(std::function<Vec3(const Vec3&)> f, double h) {
  return AmbientField(std::make_shared<NumericImpl>(std::move(f), h));
}

Vec3 AmbientField::value(const Vec3& p) const { return impl_->value(p); }
Mat3 AmbientField::jacobian(const Vec3& p) const { return impl_->jacobian(p); }
std::array<Mat3, 3> AmbientField::hessian(const Vec3& p) const {
  return impl_->hessian(p);
}
Vec3 AmbientField::directional_derivative(const Vec3& p, const Vec3& dir) const {
  return impl_->jacobian(p) * dir;
}

Vec3 cov_deriv(const AmbientField& X, const AmbientField& Y, const Vec3& p) {
  const Vec3 x = X.value(p);
  const Vec3 y = Y.value(p);
  const Vec3 flat = Y.jacobian(p) * x;
  if (!flat.finite()) throw DomainError("non-finite covariant derivative");
  return flat + y.z * x;
}

Vec3 cov_deriv_along(const Vec3& direction, const AmbientField& Z, const Vec3& p) {
  const Vec3 z = Z.value(p);
  return Z.jacobian(p) * direction + z.z * direction;
}

Vec3 lie_bracket(const AmbientField& X, const AmbientField& Y, const Vec3& p) {
  return Y.jacobian(p) * X.value(p) - X.jacobian(p) * Y.value(p);
}

Vec3 torsion(const AmbientField& X, const AmbientField& Y, const Vec3& p) {
  return cov_deriv(X, Y, p) - cov_deriv(Y, X, p) - lie_bracket(X, Y, p);
}

Vec3 curvature(const AmbientField& X, const AmbientField& Y,
               const AmbientField& Z, const Vec3& p) {
  const AmbientField cov_yz(std::make_shared<CovDerivImpl>(Y, Z));
  const AmbientField cov_xz(std::make_shared<CovDerivImpl>(X, Z));
  const Vec3 first = cov_deriv(X, cov_yz, p);
  const Vec3 second = cov_deriv(Y, cov_xz, p);
  const Vec3 bracket = lie_bracket(X, Y, p);
  const Vec3 result = first - second - cov_deriv_along(bracket, Z, p);
  if (!result.finite()) throw DomainError("non-finite curvature");
  return result;
}

PlaneSection::PlaneSection(const Vec3& u_, const Vec3& v_) : u(u_), v(v_) {
  if (!u.finite() || !v.finite())
    throw ConstraintError("plane basis must be finite");
  const double gram = dot(u, u) * dot(v, v) - dot(u, v) * dot(u, v);
  if (!(gram > 0.0))
    throw ConstraintError("plane basis is degenerate (Gram determinant <= 0)");
}

double sectional_curvature_plane(const PlaneSection& plane) {
  const AmbientField U = AmbientField::constant(plane.u);
  const AmbientField V = AmbientField::constant(plane.v);
  const Vec3 p{};  // curvature of constant fields is position-independent
  const double r_uvvu = dot(curvature(U, V, V, p), plane.u);
  const double r_vuuv = dot(curvature(V, U, U, p), plane.v);
  const double gram =
      dot(plane.u, plane.u) * dot(plane.v, plane.v) -
      dot(plane.u, plane.v) * dot(plane.u, plane.v);
  return (r_uvvu + r_vuuv) / (2.0 * gram);
}

double sectional_curvature_plane_formula(const PlaneSection& plane) {
  const Vec3 e1 = normalized(plane.u);
  Vec3 e2 = plane.v - dot(plane.v, e1) * e1;
  e2 = normalized(e2);
  return 0.5 * (e1.z * e1.z + e2.z * e2.z);
}

}  // namespace snmgeo
