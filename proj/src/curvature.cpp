#include "hmlab/curvature.hpp"

#include <cmath>
#include <type_traits>
#include <stdexcept>

namespace hmlab {

Eigen::VectorXd metric_diagonal(const SolitonParams& p, const ChartPoint& pt) {
  require_in_chart(p, pt.r);
  return metric_diagonal<double>(p, pt.r);
}

// The closed forms cost a handful of flops, so they run in quadruple
// precision unconditionally: steep members push V'' r^{1-n} terms past the
// cancellation headroom of anything narrower, and the scalar identity is
// checked to 1e-12 absolute.
CurvatureBundle christoffels_closed(const SolitonParams& p, const ChartPoint& pt) {
  p.validate_chart();
  require_in_chart(p, pt.r);
  const int n = p.n;
  const auto pr = eval_profile<__float128>(p, static_cast<__float128>(pt.r));
  const __float128 r = pt.r;
  const __float128 half_vpv = pr.dv / pr.v / 2;

  CurvatureBundle out;
  out.source = CurvatureSource::ClosedForm;
  out.christoffel.assign(n, Eigen::MatrixXd::Zero(n, n));
  auto& gamma = out.christoffel;
  gamma[0](0, 0) = static_cast<double>(-half_vpv);                  // Gamma^r_rr
  gamma[1](0, 1) = gamma[1](1, 0) = static_cast<double>(half_vpv);  // Gamma^phi_{r phi}
  gamma[0](1, 1) = static_cast<double>(-pr.v * pr.dv / 2);          // Gamma^r_{phi phi}
  for (int i = 2; i < n; ++i) {
    gamma[i](0, i) = gamma[i](i, 0) = static_cast<double>(1 / r);  // Gamma^theta_{r theta}
    gamma[0](i, i) = static_cast<double>(-r * pr.v);               // Gamma^r_{theta theta}
  }
  return out;
}

CurvatureBundle ricci_closed(const SolitonParams& p, const ChartPoint& pt) {
  CurvatureBundle out = christoffels_closed(p, pt);
  const auto diag = ricci_diagonal_closed<__float128>(p, static_cast<__float128>(pt.r));
  out.ricci = Eigen::MatrixXd::Zero(p.n, p.n);
  out.ricci(0, 0) = static_cast<double>(diag.rr);
  out.ricci(1, 1) = static_cast<double>(diag.phiphi);
  for (int i = 2; i < p.n; ++i) out.ricci(i, i) = static_cast<double>(diag.thetatheta);
  out.scalar = static_cast<double>(
      scalar_curvature_closed<__float128>(p, static_cast<__float128>(pt.r)));
  return out;
}

double default_fd_step(const SolitonParams& p, double r) {
  // Base step 1e-4 max(1, r), capped by the two scales on which the profile
  // actually varies: r itself (the r^{-n} terms) and the distance to the
  // root, estimated by V/V', where the 1/V metric coefficient steepens.
  double h = std::min(1e-4 * std::max(1.0, r), 1e-3 * r);
  const auto pr = eval_profile(p, r);
  if (pr.dv > 0.0) h = std::min(h, 1e-3 * pr.v / pr.dv);
  return h;
}

bool fd_needs_quad(const SolitonParams& p, double r) {
  // Long double holds the oracle to ~1e-7 absolute as long as the curvature
  // terms that cancel against each other stay below ~1e5; members with very
  // steep roots (r0^n/r_plus^n huge) blow far past that.
  const double q = detail::ipow(1.0 / r, p.n);
  const double terms =
      (1.0 + std::abs(p.a) * q * r + detail::ipow(p.r0, p.n) * q) *
      (static_cast<double>(p.n) * p.n / (p.ell * p.ell));
  const auto pr = eval_profile(p, r);
  const double near_amp = pr.v > 0.0 ? 1.0 + r * std::abs(pr.dv) / pr.v : 1.0;
  return terms * near_amp > 1e4;
}

double quad_fd_step(const SolitonParams& p, double r) {
  // Balances quad roundoff (~eps/h^2) against the sixth-order truncation of
  // the three-level ladder, for profiles varying on the scale min(r, V/V').
  const auto pr = eval_profile(p, r);
  double h = 3e-4 * r;
  if (pr.dv > 0.0) h = std::min(h, 3e-4 * pr.v / pr.dv);
  return h;
}

namespace {

template <class S>
CurvatureBundle curvature_numeric_impl(const SolitonParams& p, const ChartPoint& pt,
                                       double h_r) {
  const int n = p.n;
  auto field = [&p](const std::vector<S>& x) {
    SquareMat<S> g(p.n);
    const auto pr = eval_profile<S>(p, x[0]);
    g(0, 0) = S(1) / pr.v;
    g(1, 1) = pr.v;
    for (int i = 2; i < p.n; ++i) g(i, i) = x[0] * x[0];
    return g;
  };

  std::vector<S> x(n), h(n);
  const Eigen::VectorXd coords = pt.coords();
  for (int i = 0; i < n; ++i) {
    x[i] = S(coords[i]);
    h[i] = S(1e-4);
  }
  h[0] = S(h_r);

  const auto curv = curvature_from_jets(
      metric_jets<S>(field, x, h, std::is_same_v<S, __float128> ? 3 : 2));

  CurvatureBundle out;
  out.source = CurvatureSource::Numeric;
  out.christoffel.assign(n, Eigen::MatrixXd::Zero(n, n));
  out.ricci = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        out.christoffel[k](i, j) = static_cast<double>(curv.christoffel[k](i, j));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.ricci(i, j) = static_cast<double>(curv.ricci(i, j));
  out.scalar = static_cast<double>(curv.scalar);
  return out;
}

}  // namespace

CurvatureBundle curvature_numeric(const SolitonParams& p, const ChartPoint& pt,
                                  double step) {
  p.validate_chart();
  require_in_chart(p, pt.r);
  const bool quad = fd_needs_quad(p, pt.r);
  const double h_r =
      step > 0.0 ? step : (quad ? quad_fd_step(p, pt.r) : default_fd_step(p, pt.r));
  if (!(pt.r - 2.0 * h_r > 0.0) || !in_chart(p, pt.r - 2.0 * h_r))
    throw std::runtime_error(
        "curvature_numeric: finite-difference step too large for the chart "
        "(need r - 2h > r_plus)");
  if (quad) return curvature_numeric_impl<__float128>(p, pt, h_r);
  return curvature_numeric_impl<long double>(p, pt, h_r);
}

}  // namespace hmlab
