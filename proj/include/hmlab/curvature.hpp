#pragma once

#include "hmlab/finite_diff.hpp"
#include "hmlab/params.hpp"
#include "hmlab/profile.hpp"

#include <vector>

namespace hmlab {

enum class CurvatureSource { ClosedForm, Numeric };

/// Connection and curvature data at one chart point, in the fixed coordinate
/// order (r, phi, theta^1, ..., theta^{n-2}).
struct CurvatureBundle {
  std::vector<Eigen::MatrixXd> christoffel;  // christoffel[k](i,j) = Gamma^k_{ij}
  Eigen::MatrixXd ricci;
  double scalar = 0.0;
  CurvatureSource source = CurvatureSource::ClosedForm;

  Eigen::VectorXd ricci_diag() const { return ricci.diagonal(); }
};

/// Diagonal metric components (1/V, V, r^2, ..., r^2).
template <class Scalar>
DenseVector<Scalar> metric_diagonal(const SolitonParams& p, Scalar r) {
  const Scalar v = eval_profile<Scalar>(p, r).v;
  DenseVector<Scalar> d(p.n);
  d[0] = Scalar(1) / v;
  d[1] = v;
  for (int i = 2; i < p.n; ++i) d[i] = r * r;
  return d;
}

Eigen::VectorXd metric_diagonal(const SolitonParams& p, const ChartPoint& pt);

/// Scalar curvature from the displayed closed form
///   Scal = -V'' - 2(n-2) V'/r - (n-2)(n-3) V/r^2,
/// which collapses to -n(n-1)/ell^2 for every family member.
template <class Scalar>
Scalar scalar_curvature_closed(const SolitonParams& p, Scalar r) {
  const auto pr = eval_profile<Scalar>(p, r);
  const Scalar n2 = Scalar(p.n - 2);
  const Scalar n3 = Scalar(p.n - 3);
  return -pr.d2v - 2 * n2 * pr.dv / r - n2 * n3 * pr.v / (r * r);
}

/// Diagonal Ricci components (rr, phiphi, thetatheta) in closed form:
///   Ric_rr       = -1/2 (V'' + (n-2) V'/r) / V,
///   Ric_phiphi   = -1/2 (V'' + (n-2) V'/r) V,
///   Ric_thetatheta = -r V' - (n-3) V        (one value for all theta^i).
template <class Scalar>
struct RicciDiagonal {
  Scalar rr;
  Scalar phiphi;
  Scalar thetatheta;
};

template <class Scalar>
RicciDiagonal<Scalar> ricci_diagonal_closed(const SolitonParams& p, Scalar r) {
  const auto pr = eval_profile<Scalar>(p, r);
  const Scalar core = pr.d2v + Scalar(p.n - 2) * pr.dv / r;
  RicciDiagonal<Scalar> out;
  out.rr = -core / pr.v / 2;
  out.phiphi = -core * pr.v / 2;
  out.thetatheta = -r * pr.dv - Scalar(p.n - 3) * pr.v;
  return out;
}

/// Exact Christoffel symbols of the warped metric; every component not in the
/// six listed families is zero.
CurvatureBundle christoffels_closed(const SolitonParams& p, const ChartPoint& pt);

/// Closed-form Ricci tensor and scalar curvature (includes the Christoffels).
CurvatureBundle ricci_closed(const SolitonParams& p, const ChartPoint& pt);

/// Step policy for the finite-difference oracle: 1e-4 max(1, r), shrunk near
/// the chart boundary where the metric coefficients steepen as 1/(r - r_plus).
double default_fd_step(const SolitonParams& p, double r);

/// Whether the member is steep enough at r (huge r^{-n} curvature terms) that
/// the oracle needs quadruple precision, and the matching smaller step.
bool fd_needs_quad(const SolitonParams& p, double r);
double quad_fd_step(const SolitonParams& p, double r);

/// Independent curvature oracle: Christoffels from central finite differences
/// of the metric components, then Riemann -> Ricci -> scalar by contraction.
/// Knows nothing of the closed forms above. step = 0 selects the default
/// policy (including the precision gate). Refuses steps that leave the chart.
CurvatureBundle curvature_numeric(const SolitonParams& p, const ChartPoint& pt,
                                  double step = 0.0);

}  // namespace hmlab
