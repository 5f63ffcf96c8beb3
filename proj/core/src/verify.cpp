#include "snmgeo/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace snmgeo {

namespace {

std::string describe(const CylinderFamily& fam) { return family_to_json(fam); }

Expr random_polynomial(Rng& rng, std::string_view var, int max_degree) {
  Expr x = Expr::variable(var);
  Expr e = Expr::number(rng.uniform(-1.0, 1.0));
  for (int d = 1; d <= max_degree; ++d) {
    const double coef = rng.uniform(-1.0, 1.0);
    e = std::move(e) + Expr::number(coef) * Expr::pow(x, static_cast<double>(d));
  }
  return e;
}

}  // namespace

TranslationSurface random_polynomial_surface(Rng& rng, SurfaceKind kind) {
  const char* uvar = kind == SurfaceKind::TypeI ? "x" : "y";
  const char* vvar = kind == SurfaceKind::TypeI ? "y" : "z";
  return TranslationSurface(kind, random_polynomial(rng, uvar, 4),
                            random_polynomial(rng, vvar, 4),
                            {-1.0, -1.0, 1.0, 1.0});
}

GridSpec interior_grid_5x5(const TranslationSurface& s) {
  const Domain2& d = s.domain();
  const double mu = (d.u1 - d.u0) / 6.0;
  const double mv = (d.v1 - d.v0) / 6.0;
  return GridSpec(d.u0 + mu, d.v0 + mv, d.u1 - mu, d.v1 - mv, 5, 5);
}

CylinderFamily random_family(const std::string& tag, Rng& rng) {
  auto sign = [&rng] { return rng.coin() ? Sign::Plus : Sign::Minus; };
  if (tag == "Plane") {
    const PlaneKind kinds[3] = {PlaneKind::T51, PlaneKind::T52, PlaneKind::T53};
    return PlaneFam(kinds[rng.uniform_int(0, 2)], rng.uniform(-1.5, 1.5),
                    rng.uniform(-2.0, 2.0));
  }
  if (tag == "GrimReaper") {
    const GrimKind kinds[3] = {GrimKind::T51, GrimKind::T52b, GrimKind::T53};
    const GrimKind kind = kinds[rng.uniform_int(0, 2)];
    const double a = kind == GrimKind::T52b
                         ? rng.uniform_away_from_zero(-1.5, 1.5, 0.3)
                         : rng.uniform(-1.5, 1.5);
    return GrimReaperFam(kind, a, rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
  }
  if (tag == "T51") {
    for (;;) {
      const double a = rng.uniform(-1.0, 1.0);
      const double floor = a * a / (1.0 + a * a);
      const double K0 = rng.uniform(floor + 0.05, 3.0);
      if (std::abs(K0 - 1.0) < 0.05) continue;
      const double c = rng.uniform(0.5, 3.0);
      // avoid slivers of domain for K0 > 1
      if (K0 > 1.0) {
        const double kappa = K0 - floor;
        const double width = 0.5 * (1.0 + a * a) * std::log(kappa / (K0 - 1.0));
        if (width < 0.1) continue;
      }
      return T51Fam(a, K0, c, sign());
    }
  }
  if (tag == "T52a0") {
    for (;;) {
      const double K0 = rng.uniform(-2.0, 3.0);
      if (std::abs(K0 - 1.0) < 0.1) continue;
      return T52a0Fam(K0, rng.uniform(-2.0, 2.0), sign());
    }
  }
  if (tag == "T52K0zero")
    return T52K0zeroFam(rng.uniform_away_from_zero(-1.5, 1.5, 0.3),
                        rng.uniform(0.5, 3.0), sign());
  if (tag == "T52gen") {
    for (;;) {
      const double a = rng.uniform_away_from_zero(-1.5, 1.5, 0.3);
      const double K0 = rng.uniform(-2.0, 3.0);
      if (std::abs(K0) < 0.05 || std::abs(K0 - 1.0) < 0.05) continue;
      const double c = rng.uniform(0.5, 3.0);
      const double b = 1.0 + a * a;
      const bool middle = K0 > 1.0 / b && K0 < 1.0;
      const Branch branch = middle && rng.coin() ? Branch::Low : Branch::High;
      const T52genFam fam(a, K0, c, sign(), branch);
      const Interval iv = maximal_domain(fam);
      if (std::isfinite(iv.lo) && std::isfinite(iv.hi) && iv.hi - iv.lo < 0.1)
        continue;
      return fam;
    }
  }
  if (tag == "T53K1")
    return T53K1Fam(rng.uniform(-1.5, 1.5), rng.uniform(0.5, 3.0), sign());
  if (tag == "T53gen") {
    for (;;) {
      const double K0 = rng.uniform(-2.0, 0.95);
      if (std::abs(K0) < 0.05) continue;
      const T53genFam fam(rng.uniform(-1.5, 1.5), K0, rng.uniform(0.5, 3.0),
                          sign());
      const Interval iv = maximal_domain(fam);
      if (std::isfinite(iv.lo) && std::isfinite(iv.hi) && iv.hi - iv.lo < 0.1)
        continue;
      return fam;
    }
  }
  throw ConstraintError("unknown family tag '" + tag + "'");
}

SuiteReport run_oracle_suite(std::uint64_t seed, int n_per_kind,
                             const OracleConfig& cfg) {
  SuiteReport report;
  report.suite = "oracle";
  report.seed = seed;
  report.n = 2 * n_per_kind;
  Rng rng(seed);
  double max_closed_oracle = 0.0, max_gauss_oracle = 0.0, max_closed_gauss = 0.0;
  double max_second_form = 0.0;
  for (int half = 0; half < 2; ++half) {
    const SurfaceKind kind = half == 0 ? SurfaceKind::TypeI : SurfaceKind::TypeII;
    for (int i = 0; i < n_per_kind; ++i) {
      const TranslationSurface s = random_polynomial_surface(rng, kind);
      const GridSpec grid = interior_grid_5x5(s);
      const CurvatureReport cr = compare_curvatures(s, grid, cfg);
      max_closed_oracle = std::max(max_closed_oracle, cr.max_err_closed_oracle);
      max_gauss_oracle = std::max(max_gauss_oracle, cr.max_err_gauss_oracle);
      max_closed_gauss = std::max(max_closed_gauss, cr.max_err_closed_gauss);
      for (double u : grid.us())
        for (double v : grid.vs())
          max_second_form =
              std::max(max_second_form, s.second_form_deviation(u, v));
      if (!cr.pass) {
        std::ostringstream msg;
        msg << (kind == SurfaceKind::TypeI ? "TypeI " : "TypeII ") << "surface "
            << i << ": f=" << s.f().to_string() << " g=" << s.g().to_string()
            << " max|closed-oracle|=" << cr.max_err_closed_oracle
            << " max|closed-gauss|=" << cr.max_err_closed_gauss;
        report.failures.push_back(msg.str());
      }
    }
  }
  report.max_errors["closed_vs_oracle"] = max_closed_oracle;
  report.max_errors["gauss_vs_oracle"] = max_gauss_oracle;
  report.max_errors["closed_vs_gauss"] = max_closed_gauss;
  report.max_errors["second_form_dev"] = max_second_form;
  return report;
}

namespace {

constexpr const char* kAllTags[] = {"Plane",     "GrimReaper", "T51",
                                    "T52a0",     "T52K0zero",  "T52gen",
                                    "T53K1",     "T53gen"};

// Curvature constancy of one family on the interior 90% of its domain.
void check_family(const CylinderFamily& fam, SuiteReport& report,
                  double& max_spread, double& max_mean_dev,
                  double& max_deriv_dev) {
  const double target = family_k0(fam) / 2.0;
  const Interval window = interior_window(fam, 0.05);
  constexpr int kSamples = 33;
  double kmin = std::numeric_limits<double>::infinity();
  double kmax = -kmin, sum = 0.0;
  for (int i = 0; i < kSamples; ++i) {
    const double t =
        window.lo + (window.hi - window.lo) * i / double(kSamples - 1);
    const double k = lifted_curvature(fam, t);
    kmin = std::min(kmin, k);
    kmax = std::max(kmax, k);
    sum += k;
  }
  const double spread = kmax - kmin;
  const double mean_dev = std::abs(sum / kSamples - target);
  max_spread = std::max(max_spread, spread);
  max_mean_dev = std::max(max_mean_dev, mean_dev);
  if (spread > 1e-7 || mean_dev > 1e-7) {
    std::ostringstream msg;
    msg << describe(fam) << ": K spread " << spread << ", mean deviation "
        << mean_dev;
    report.failures.push_back(msg.str());
  }

  // First integral positive inside, and the quadrature parameter map has
  // derivative consistent with it (first-integral families only).
  if (has_closed_form(fam)) return;
  for (int i = 0; i < kSamples; ++i) {
    const double t =
        window.lo + (window.hi - window.lo) * i / double(kSamples - 1);
    if (!(first_integral(fam, t) > 0.0)) {
      report.failures.push_back(describe(fam) +
                                ": first integral not positive inside domain");
      return;
    }
  }
  const double mid = 0.5 * (window.lo + window.hi);
  const double delta = 3e-4 * (window.hi - window.lo);
  const std::vector<double> grid = {mid - delta, mid, mid + delta};
  const ProfileCurve pc = quadrature_profile(fam, grid);
  const double dx_dt =
      (pc.samples[2].param - pc.samples[0].param) / (2.0 * delta);
  const double expected = 1.0 / pc.samples[1].deriv;
  const double dev = std::abs(dx_dt - expected) / std::max(1.0, std::abs(expected));
  max_deriv_dev = std::max(max_deriv_dev, dev);
  if (dev > 1e-6) {
    std::ostringstream msg;
    msg << describe(fam) << ": quadrature derivative deviates by " << dev;
    report.failures.push_back(msg.str());
  }
}

}  // namespace

SuiteReport run_cylinder_suite(std::uint64_t seed, int n_per_tag) {
  SuiteReport report;
  report.suite = "cylinders";
  report.seed = seed;
  report.n = n_per_tag;
  Rng rng(seed);
  double max_spread = 0.0, max_mean_dev = 0.0, max_deriv_dev = 0.0;
  for (const char* tag : kAllTags)
    for (int i = 0; i < n_per_tag; ++i)
      check_family(random_family(tag, rng), report, max_spread, max_mean_dev,
                   max_deriv_dev);
  report.max_errors["k_spread"] = max_spread;
  report.max_errors["k_mean_dev"] = max_mean_dev;
  report.max_errors["quadrature_deriv_dev"] = max_deriv_dev;
  return report;
}

SuiteReport run_classification_suite(std::uint64_t seed, int n) {
  SuiteReport report;
  report.suite = "classification";
  report.seed = seed;
  report.n = n;
  const ClassificationReport cr = classification_property_test(seed, n, 1e-3);
  report.max_errors["min_spread"] = cr.min_spread;
  for (const auto& cand : cr.counterexamples) {
    std::ostringstream msg;
    msg << "non-constant K expected but spread " << cand.spread
        << " for f=" << cand.f_text << " g=" << cand.g_text;
    report.failures.push_back(msg.str());
  }

  // Control: a genuine cylinder must register as constant.
  const CylinderFamily grim = GrimReaperFam(GrimKind::T51, 0.0, 0.0, 0.0);
  const TranslationSurface s = closed_form_surface(grim);
  const GridSpec grid = interior_grid_5x5(s);
  const CurvatureReport control = curvature_grid_closed(s, grid);
  report.max_errors["control_spread"] = control.k_closed_spread;
  if (!(control.k_closed_spread <= 1e-10))
    report.failures.push_back("grim reaper control shows spread " +
                              std::to_string(control.k_closed_spread));
  return report;
}

SuiteReport run_k1_suite(std::uint64_t seed, int n) {
  SuiteReport report;
  report.suite = "k1";
  report.seed = seed;
  report.n = n;
  Rng rng(seed);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    // Constraint set of the K0=1 obstruction: c3+c4 = 1, c3c5 = c4c6 = 1/2.
    const double c3 = rng.uniform_away_from_zero(-2.0, 2.0, 0.05);
    if (std::abs(1.0 - c3) < 0.05) {
      --i;
      continue;
    }
    const double c4 = 1.0 - c3;
    const double c5 = 1.0 / (2.0 * c3);
    const double c6 = 1.0 / (2.0 * c4);
    const K1Coefficients k = k1_obstruction(c3, c4, c5, c6);
    const double e1 = std::abs(k.A0 - k.A1);
    const double e2 = std::abs(k.A0 - k.A2);
    const double e3 = std::abs(k.A1 + k.A2 - k.A3 - 3.0);
    worst = std::max({worst, e1, e2, e3});
    if (e1 > 1e-12 || e2 > 1e-12 || e3 > 1e-12) {
      std::ostringstream msg;
      msg << "obstruction identity violated at c3=" << c3 << ": " << e1 << " "
          << e2 << " " << e3;
      report.failures.push_back(msg.str());
    }
  }
  report.max_errors["identity_dev"] = worst;
  return report;
}

}  // namespace snmgeo
