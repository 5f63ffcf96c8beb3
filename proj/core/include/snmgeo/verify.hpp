#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "snmgeo/oracle.hpp"
#include "snmgeo/profiles.hpp"
#include "snmgeo/rng.hpp"
#include "snmgeo/surface.hpp"

namespace snmgeo {

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  int n = 0;
  std::vector<std::string> failures;
  std::map<std::string, double> max_errors;
  bool passed() const { return failures.empty(); }
};

// Random polynomial translation surface: degree <= 4, coefficients
// uniform in [-1,1], domain [-1,1]^2.
TranslationSurface random_polynomial_surface(Rng& rng, SurfaceKind kind);

// 5x5 grid strictly inside the surface domain (one sixth of the side
// length away from the boundary).
GridSpec interior_grid_5x5(const TranslationSurface& s);

// Random valid parameter draw for a family tag (tags as in family_tag).
CylinderFamily random_family(const std::string& tag, Rng& rng);

// closed vs Gauss vs finite-difference oracle over n random Type I plus
// n random Type II surfaces; also tracks the second-fundamental-form
// deviation (h = h0). Stats: max_err_closed_oracle, max_err_closed_gauss,
// max_second_form_dev.
SuiteReport run_oracle_suite(std::uint64_t seed, int n_per_kind,
                             const OracleConfig& cfg = OracleConfig::loose());

// n draws per family tag: first integral positive on the interior window,
// lifted curvature constant (spread <= 1e-7, mean within 1e-7 of K0/2),
// and d/dt of the quadrature consistent with the first integral.
SuiteReport run_cylinder_suite(std::uint64_t seed, int n_per_tag);

// n random surfaces with f''!=0, g''!=0 must show curvature spread above
// 1e-3; the grim reaper control cylinder must stay within 1e-10.
SuiteReport run_classification_suite(std::uint64_t seed, int n);

// n draws on the constraint set c3 + c4 = 1, c3 c5 = c4 c6 = 1/2:
// checks A0 = A1 = A2 and A1 + A2 - A3 = 3 to 1e-12.
SuiteReport run_k1_suite(std::uint64_t seed, int n);

}  // namespace snmgeo
