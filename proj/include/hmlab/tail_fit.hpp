#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace hmlab {

/// Least-squares fit of samples y(r) to  c0 + sum_k c_k (r_ref/r)^{p_k},
/// used to extrapolate power-law tails to r -> infinity. c0 is the limit.
struct TailFit {
  double limit = 0.0;
  Eigen::VectorXd coeffs;     // c0 first, then one per exponent
  double residual_rms = 0.0;  // fit residual
  double last_correction = 0.0;  // |y - c0| at the largest radius
};

inline TailFit fit_power_tail(const Eigen::VectorXd& radii, const Eigen::VectorXd& values,
                              const Eigen::VectorXd& exponents) {
  if (radii.size() != values.size() || radii.size() < exponents.size() + 1)
    throw std::invalid_argument("fit_power_tail: need more samples than coefficients");
  const double r_ref = radii.minCoeff();
  Eigen::MatrixXd basis(radii.size(), exponents.size() + 1);
  basis.col(0).setOnes();
  for (Eigen::Index k = 0; k < exponents.size(); ++k)
    for (Eigen::Index i = 0; i < radii.size(); ++i)
      basis(i, k + 1) = std::pow(r_ref / radii[i], exponents[k]);
  TailFit fit;
  fit.coeffs = basis.colPivHouseholderQr().solve(values);
  fit.limit = fit.coeffs[0];
  fit.residual_rms = std::sqrt((basis * fit.coeffs - values).squaredNorm() /
                               static_cast<double>(radii.size()));
  Eigen::Index top;
  radii.maxCoeff(&top);
  fit.last_correction = std::abs(values[top] - fit.limit);
  return fit;
}

/// Slope of ln|y| against ln x by linear least squares. Zero-valued samples
/// are rejected.
inline double log_log_slope(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("log_log_slope: need at least two samples");
  Eigen::MatrixXd basis(x.size(), 2);
  Eigen::VectorXd rhs(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || y[i] == 0.0)
      throw std::invalid_argument("log_log_slope: samples must be positive/nonzero");
    basis(i, 0) = 1.0;
    basis(i, 1) = std::log(x[i]);
    rhs[i] = std::log(std::abs(y[i]));
  }
  return basis.colPivHouseholderQr().solve(rhs)[1];
}

/// Limit of f(s) as s -> 0+ from samples at s, s/2, s/4, assuming an
/// expansion f = f0 + f1 s + f2 s^2 + ...
inline double richardson_limit3(double f_s, double f_s2, double f_s4) {
  const double a = 2.0 * f_s2 - f_s;
  const double b = 2.0 * f_s4 - f_s2;
  return (4.0 * b - a) / 3.0;
}

}  // namespace hmlab
