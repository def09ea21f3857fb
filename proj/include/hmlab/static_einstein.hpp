#pragma once

#include "hmlab/family.hpp"
#include "hmlab/params.hpp"

#include <array>
#include <functional>
#include <string>

namespace hmlab {

/// Radial lapse ansatz N(r) for the static spacetime -N^2 dt^2 + g. Either an
/// explicit linear N = c r + d or a general evaluator returning (N, N', N'').
struct LapseAnsatz {
  std::function<std::array<double, 3>(double)> jets;
  bool is_linear = false;
  double c = 0.0;
  double d = 0.0;

  static LapseAnsatz linear(double c, double d) {
    LapseAnsatz lapse;
    lapse.is_linear = true;
    lapse.c = c;
    lapse.d = d;
    lapse.jets = [c, d](double r) { return std::array<double, 3>{c * r + d, c, 0.0}; };
    return lapse;
  }

  static LapseAnsatz general(std::function<std::array<double, 3>(double)> jets) {
    LapseAnsatz lapse;
    lapse.jets = std::move(jets);
    return lapse;
  }

  double value(double r) const { return jets(r)[0]; }
};

/// The four distinct diagonal Ricci components of -N^2 dt^2 + g in coordinate
/// order (tt, rr, phiphi, thetatheta); theta components coincide.
Eigen::Vector4d spacetime_ricci(const SolitonParams& p, const LapseAnsatz& lapse, double r);

/// Same components from the finite-difference curvature oracle applied to the
/// (n+1)-dimensional metric; independent of the closed forms.
Eigen::Vector4d spacetime_ricci_numeric(const SolitonParams& p, const LapseAnsatz& lapse,
                                        double r, double step = 0.0);

/// Residuals of Ric = 2 Lambda/(n-1) g evaluated on unit-frame components,
/// e.g. Ric(e_t, e_t) + 2 Lambda/(n-1) with e_t = N^{-1} d_t. This form is
/// invariant under rescaling N -> kappa N.
struct ResidualReport {
  double lambda_used = 0.0;
  Eigen::Vector4d max_residual = Eigen::Vector4d::Zero();  // (t, r, phi, theta)
  double max_abs = 0.0;
  Eigen::VectorXd grid;
};

Eigen::Vector4d vacuum_residual_at(const SolitonParams& p, const LapseAnsatz& lapse,
                                   double lambda, double r);

ResidualReport vacuum_residual(const SolitonParams& p, const LapseAnsatz& lapse,
                               double lambda, const Eigen::VectorXd& r_grid);

Eigen::VectorXd log_grid(double lo, double hi, int count);

/// Default residual grid: 64 log-spaced radii in [1.01, 100] r_plus.
Eigen::VectorXd default_static_grid(const RegularizedSoliton& reg, int count = 64);

/// Least-squares fit of N = c r + d against the tt Einstein equation over a
/// radial grid. A consistent solution (c > 0, d = 0) exists exactly when
/// a = 0 and Lambda = -n(n-1)/(2 ell^2); the verdict reports whether it does.
struct StaticVerdict {
  bool is_ads_soliton = false;
  double fitted_c = 0.0;  // unit-normalized (c, d) direction, c >= 0
  double fitted_d = 0.0;
  double residual_norm = 0.0;  // smallest/largest singular value of the fit
};

StaticVerdict solve_static_conditions(const SolitonParams& p, double lambda);

}  // namespace hmlab
