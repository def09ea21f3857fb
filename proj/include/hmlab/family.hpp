#pragma once

#include "hmlab/params.hpp"
#include "hmlab/profile.hpp"

#include <vector>

namespace hmlab {

/// A family member with its largest root r_plus and the phi-period beta that
/// removes the conical singularity there:
///   beta = 4 pi ell^2 / (r_plus (n-1 + r0^n/r_plus^n)) = 4 pi / V'(r_plus).
struct RegularizedSoliton {
  SolitonParams params;
  double r_plus = 0.0;
  double beta = 0.0;
  double vprime_at_rplus = 0.0;
};

/// Largest positive root of V. Exists for every family member (V -> -infinity
/// as r -> 0+ and -> +infinity as r -> infinity); refuses profiles without a
/// root (e.g. r0 = 0, a >= 0).
double find_r_plus(const SolitonParams& p);

double period_beta(const SolitonParams& p, double r_plus);
double period_beta(const SolitonParams& p);

RegularizedSoliton regularize(const SolitonParams& p);

/// Inverse of V near r_plus: the r > r_plus with V(r) = s. Newton with a
/// monotonicity safeguard; refuses targets beyond the monotone neighborhood.
double invert_profile(const RegularizedSoliton& reg, double s);

/// Geodesic distance from r_plus to radius r along a radial line,
/// int_{r_plus}^{r} V^{-1/2}. The substitution r = r_plus + t^2 removes the
/// integrable square-root singularity at the lower end.
double proper_radial_distance(const RegularizedSoliton& reg, double r);

/// One sample of the disk geometry around r_plus at radius rho = V^{1/2}:
/// circumference / (2 pi proper radius) of the phi-circle, h(s) from the
/// regular chart, and the coframe stretch u(s).
struct ConeChartSample {
  double rho = 0.0;
  double circumference_ratio = 0.0;
  double h_value = 0.0;
  double u_value = 0.0;
};

/// Cone-angle probe. period = 0 selects the regularizing beta; the ratio
/// tends to period/beta as rho -> 0, so to 1 exactly when the period is beta.
std::vector<ConeChartSample> cone_angle_check(const RegularizedSoliton& reg,
                                              const std::vector<double>& rhos,
                                              double period = 0.0);

/// h(s) = s^{-1} [ V'(r_plus)^2 / (V' o V^{-1}(s))^2 - 1 ], the profile of the
/// regular chart; finite as s -> 0+.
std::vector<double> h_smoothness_probe(const RegularizedSoliton& reg,
                                       const std::vector<double>& s_values);

/// Richardson-extrapolated limit h(0+), equal to -2 V''(r_plus)/V'(r_plus)^2.
/// s_base = 0 selects a scale-aware default.
double h_limit_extrapolated(const RegularizedSoliton& reg, double s_base = 0.0);

}  // namespace hmlab
