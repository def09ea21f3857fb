#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <stdexcept>

namespace hmlab {

inline constexpr double kPi = 3.14159265358979323846264338327950288;

/// One member of the soliton family
///
///   g = V^{-1} dr^2 + V dphi^2 + r^2 sum_i (dtheta^i)^2,
///   V(r) = (r^2/ell^2) (1 + a/r^{n-1} - r0^n/r^n),
///
/// with constant scalar curvature S = -n(n-1)/ell^2. phi and the theta^i are
/// periodic; the regularizing phi-period is computed by the family module.
struct SolitonParams {
  int n = 3;                // fiber dimension, n >= 3
  double ell = 1.0;         // curvature scale, S = -n(n-1)/ell^2
  double a = 0.0;           // family parameter
  double r0 = 1.0;          // soliton scale; r0 > 0 for proper family members
  Eigen::VectorXd lambdas;  // periods of theta^1..theta^{n-2}
  double G = 1.0;           // Newton constant

  static SolitonParams make(int n, double ell, double a, double r0, double G = 1.0) {
    SolitonParams p;
    p.n = n;
    p.ell = ell;
    p.a = a;
    p.r0 = r0;
    p.G = G;
    p.lambdas = Eigen::VectorXd::Constant(std::max(n - 2, 0), 2.0 * kPi);
    p.validate();
    return p;
  }

  double scalar_curvature() const { return -static_cast<double>(n) * (n - 1) / (ell * ell); }
  double cosmological_constant() const { return 0.5 * scalar_curvature(); }

  /// lambda = prod_i lambda_i, the coordinate volume of the theta-torus.
  double torus_volume() const { return lambdas.size() > 0 ? lambdas.prod() : 1.0; }

  /// Family-member validation (requires r0 > 0).
  void validate() const {
    validate_chart();
    if (!(r0 > 0.0)) throw std::invalid_argument("SolitonParams: r0 must be positive");
  }

  /// Chart-level validation. r0 = 0 is allowed here: the curvature formulas
  /// stay valid for the exact hyperbolic profile, which only the family-level
  /// operations (root location, regularization) reject.
  void validate_chart() const {
    if (n < 3) throw std::invalid_argument("SolitonParams: n must be >= 3");
    if (!(ell > 0.0)) throw std::invalid_argument("SolitonParams: ell must be positive");
    if (!(r0 >= 0.0)) throw std::invalid_argument("SolitonParams: r0 must be nonnegative");
    if (!(G > 0.0)) throw std::invalid_argument("SolitonParams: G must be positive");
    if (lambdas.size() != n - 2)
      throw std::invalid_argument("SolitonParams: need exactly n-2 torus periods");
    for (Eigen::Index i = 0; i < lambdas.size(); ++i)
      if (!(lambdas[i] > 0.0))
        throw std::invalid_argument("SolitonParams: torus periods must be positive");
  }
};

/// A point in the chart (r, phi, theta^1, ..., theta^{n-2}). Coordinate order
/// is fixed globally: index 0 = r, index 1 = phi, indices 2.. = theta^i.
struct ChartPoint {
  double r = 1.0;
  double phi = 0.0;
  Eigen::VectorXd thetas;

  static ChartPoint at_r(const SolitonParams& p, double r, double phi = 0.0) {
    ChartPoint q;
    q.r = r;
    q.phi = phi;
    q.thetas = Eigen::VectorXd::Zero(p.n - 2);
    return q;
  }

  Eigen::VectorXd coords() const {
    Eigen::VectorXd x(2 + thetas.size());
    x[0] = r;
    x[1] = phi;
    x.tail(thetas.size()) = thetas;
    return x;
  }
};

/// Numerical tolerances shared across the verification pipelines.
struct Tolerances {
  double tol_fd = 1e-6;      // finite-difference cross-checks
  double tol_extrap = 1e-8;  // boundary-integral extrapolations
  double root_tol = 1e-12;   // relative tolerance of root location
};

}  // namespace hmlab
