#pragma once

#include <functional>

namespace snmgeo {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
  int evaluations = 0;
  bool converged = true;
};

// Adaptive Gauss7/Kronrod15 on [a,b] (a <= b) with absolute tolerance.
// Panels are bisected until the Kronrod error estimate meets the local
// share of the tolerance or max_depth is reached.
QuadResult gauss_kronrod_adaptive(const std::function<double(double)>& f,
                                  double a, double b, double abs_tol = 1e-11,
                                  int max_depth = 48);

}  // namespace snmgeo
