#pragma once

// Closed-form antiderivatives for the four explicitly integrable cylinder
// profiles; used as independent oracles against the quadrature path.
// Each is valid up to an additive constant on the stated domain.

#include <cmath>

namespace snmgeo::testing {

// z = f(x) + 0*y cylinder, K0 = 1/2, c = 2; f in (-inf, 0).
// x(f) = (asin(e^{2f}) - atanh(sqrt(1 - e^{4f}))) / 2       (plus branch)
inline double t51_c2_k05_x(double f) {
  const double e2 = std::exp(2.0 * f);
  return 0.5 * (std::asin(e2) - std::atanh(std::sqrt(1.0 - e2 * e2)));
}

// Same shape with K0 = 2, c = 3; f in (log sqrt(3), log sqrt(6)).
// x(f) = asin(sqrt(e^{2f}/3 - 1)) - atan(sqrt((2e^{2f}-6)/(6-e^{2f})))/sqrt(2)
inline double t51_c3_k2_x(double f) {
  const double e2 = std::exp(2.0 * f);
  return std::asin(std::sqrt(e2 / 3.0 - 1.0)) -
         std::atan(std::sqrt((2.0 * e2 - 6.0) / (6.0 - e2))) / std::sqrt(2.0);
}

// x = f(y) cylinder, K0 = -1, c = -2; f in (1/4, 1/2).
// y(f) = -sqrt(1-2f) sqrt(4f-1) / (2 sqrt(2)) + asin(sqrt(2-4f))/4   (minus branch)
inline double t52_cm2_km1_y(double f) {
  return -std::sqrt(1.0 - 2.0 * f) * std::sqrt(4.0 * f - 1.0) /
             (2.0 * std::sqrt(2.0)) +
         std::asin(std::sqrt(2.0 - 4.0 * f)) / 4.0;
}

// x = f(y) cylinder, K0 = 2, c = 0; f in (0, 1/2).
// y(f) = -sqrt(1-2f) sqrt(f) / sqrt(2) + asin(sqrt(2) sqrt(f))/2     (plus branch)
inline double t52_c0_k2_y(double f) {
  return -std::sqrt(1.0 - 2.0 * f) * std::sqrt(f) / std::sqrt(2.0) +
         std::asin(std::sqrt(2.0) * std::sqrt(f)) / 2.0;
}

}  // namespace snmgeo::testing
