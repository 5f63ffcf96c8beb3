#pragma once

#include <cstdint>
#include <random>

namespace snmgeo {

// Seeded RNG with portable output. std::mt19937_64 output is fully
// specified by the standard; the distributions below avoid the
// implementation-defined std::uniform_*_distribution so that reports
// generated with a fixed seed are byte-identical everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Uniform over {lo, ..., hi} inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(engine_() % span);
  }

  bool coin() { return (engine_() & 1) != 0; }

  // Uniform over [lo,hi] with |value| >= floor; used for parameters that
  // must stay away from a degenerate value.
  double uniform_away_from_zero(double lo, double hi, double floor) {
    for (;;) {
      const double x = uniform(lo, hi);
      if (x <= -floor || x >= floor) return x;
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace snmgeo
