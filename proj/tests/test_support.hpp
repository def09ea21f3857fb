#pragma once

#include "hmlab/family.hpp"
#include "hmlab/params.hpp"

#include <random>

namespace hmlab::testing {

/// Deterministic member generator used by the randomized suites.
struct MemberSampler {
  std::mt19937_64 rng;

  explicit MemberSampler(std::uint64_t seed) : rng(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  }

  int uniform_int(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  }

  SolitonParams member(int n_lo = 3, int n_hi = 6, double a_max = 5.0) {
    const int n = uniform_int(n_lo, n_hi);
    return SolitonParams::make(n, uniform(0.5, 3.0), uniform(-a_max, a_max),
                               uniform(0.5, 2.0));
  }

  /// Radius in (r_plus, 10 r_plus), log-biased toward the chart boundary.
  double chart_radius(const RegularizedSoliton& reg, double u_min = 1e-3) {
    const double u = std::pow(10.0, uniform(std::log10(u_min), 0.0));
    return reg.r_plus * (1.0 + 9.0 * u);
  }
};

}  // namespace hmlab::testing
