#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "holoflow/disc.hpp"

namespace holoflow::testing {

// Seeded sample generators for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  // Area-uniform point of the disc |z| < r_max.
  cplx disc_point(double r_max = 0.95) {
    double r = r_max * std::sqrt(uniform(0.0, 1.0));
    return std::polar(r, uniform(0.0, kTwoPi));
  }
  std::vector<cplx> disc_points(int n, double r_max = 0.95) {
    std::vector<cplx> out;
    for (int i = 0; i < n; ++i) out.push_back(disc_point(r_max));
    return out;
  }
  double angle() { return uniform(0.0, kTwoPi); }

 private:
  std::mt19937_64 rng_;
};

inline double rel_err(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace holoflow::testing
