#include "snmgeo/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace snmgeo {

namespace {

// 15-point Kronrod extension of 7-point Gauss, abscissae in [0,1).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Panel {
  double value;
  double error;
};

Panel g7k15(const std::function<double(double)>& f, double a, double b,
            int& evals) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  const double fc = f(center);
  ++evals;
  double result_gauss = kWg[3] * fc;
  double result_kronrod = kWgk[7] * fc;
  double fv[15];
  fv[7] = fc;

  for (int i = 0; i < 7; ++i) {
    const double dx = half * kXgk[i];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    evals += 2;
    fv[i] = f1;
    fv[14 - i] = f2;
    result_kronrod += kWgk[i] * (f1 + f2);
    if (i % 2 == 1) {  // odd Kronrod indices are the Gauss nodes
      result_gauss += kWg[i / 2] * (f1 + f2);
    }
  }

  const double mean = 0.5 * result_kronrod;
  double resasc = kWgk[7] * std::abs(fc - mean);
  for (int i = 0; i < 7; ++i)
    resasc += kWgk[i] * (std::abs(fv[i] - mean) + std::abs(fv[14 - i] - mean));
  resasc *= std::abs(half);

  double err = std::abs((result_kronrod - result_gauss) * half);
  if (resasc != 0.0 && err != 0.0)
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  return {result_kronrod * half, err};
}

void integrate_rec(const std::function<double(double)>& f, double a, double b,
                   double tol, int depth, int max_depth, QuadResult& out) {
  Panel p = g7k15(f, a, b, out.evaluations);
  if (!std::isfinite(p.value) || !std::isfinite(p.error)) {
    // Non-finite integrand; bisecting cannot repair it.
    out.value += p.value;
    out.converged = false;
    return;
  }
  if (p.error <= tol || depth >= max_depth) {
    out.value += p.value;
    out.error += p.error;
    if (!(p.error <= tol)) out.converged = false;
    return;
  }
  const double mid = 0.5 * (a + b);
  integrate_rec(f, a, mid, 0.5 * tol, depth + 1, max_depth, out);
  integrate_rec(f, mid, b, 0.5 * tol, depth + 1, max_depth, out);
}

}  // namespace

QuadResult gauss_kronrod_adaptive(const std::function<double(double)>& f,
                                  double a, double b, double abs_tol,
                                  int max_depth) {
  QuadResult out;
  if (a == b) return out;
  integrate_rec(f, a, b, abs_tol, 0, max_depth, out);
  return out;
}

}  // namespace snmgeo
