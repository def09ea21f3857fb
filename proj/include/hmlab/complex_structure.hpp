#pragma once

#include "hmlab/family.hpp"
#include "hmlab/params.hpp"

#include <vector>

namespace hmlab {

/// The almost-complex structure on the coframe (defined for n = 2 + 2k):
///   (1/V) dr -> dphi, dphi -> -(1/V) dr,
///   dtheta^j -> dtheta^{k+j}, dtheta^{k+j} -> -dtheta^j.
/// coframe stores the matrix M with J(e^i) = sum_m M(m, i) e^m; the action on
/// vectors is the dual pairing, X -> M^T X.
struct AlmostComplexAt {
  ChartPoint point;
  Eigen::MatrixXd coframe;

  Eigen::MatrixXd vector_action() const { return coframe.transpose(); }
};

AlmostComplexAt j_matrix(const SolitonParams& p, const ChartPoint& pt);

/// Max component of the Nijenhuis tensor of J on coordinate vector fields,
/// with Lie brackets evaluated by finite differences. Vanishes (within
/// finite-difference noise) because J is integrable.
double nijenhuis_norm(const SolitonParams& p, const ChartPoint& pt);

/// Fundamental form omega = g(. , J .) = dr ^ dphi + r^2 sum_j dtheta^j ^
/// dtheta^{k+j}, and the max component of its numerically evaluated exterior
/// derivative, which is nonzero: the metric is not Kaehler.
struct FundamentalForm {
  Eigen::MatrixXd omega;
  double d_omega_norm = 0.0;
};

FundamentalForm fundamental_form(const SolitonParams& p, const ChartPoint& pt);

/// One component (d omega)(d_i, d_j, d_k) by finite differences.
double d_omega_component(const SolitonParams& p, const ChartPoint& pt, int i, int j, int k);

/// Extension data across r = r_plus in the regular (x, y) chart: the stretch
/// u(s) = (beta/2pi) (V' o V^{-1})(s) / 2 with u(0) = 1, and the coframe
/// transformation matrix A(rho), which tends to the rotation [[0,-1],[1,0]].
struct ExtensionMatrixA {
  double rho = 0.0;
  Eigen::Matrix2d A = Eigen::Matrix2d::Zero();
  double u_value = 0.0;
  double rotation_deviation = 0.0;  // worst entry deviation over the circle
};

std::vector<ExtensionMatrixA> extension_probe(const RegularizedSoliton& reg,
                                              const std::vector<double>& rhos);

}  // namespace hmlab
