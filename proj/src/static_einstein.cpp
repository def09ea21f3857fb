#include "hmlab/static_einstein.hpp"

#include "hmlab/curvature.hpp"
#include "hmlab/finite_diff.hpp"

#include <cmath>
#include <type_traits>
#include <stdexcept>

namespace hmlab {

namespace {

// Lapse jets at the kernel scalar type: exact for the linear ansatz,
// double-limited otherwise.
template <class S>
std::array<S, 3> lapse_jets_at(const LapseAnsatz& lapse, S r) {
  if (lapse.is_linear) return {S(lapse.c) * r + S(lapse.d), S(lapse.c), S(0)};
  const auto j = lapse.jets(static_cast<double>(r));
  return {S(j[0]), S(j[1]), S(j[2])};
}

// Closed-form components at scalar type S. Steep members push V V'' terms
// past 1e18, so the double front ends below evaluate at __float128.
template <class S>
std::array<S, 4> spacetime_ricci_impl(const SolitonParams& p, const LapseAnsatz& lapse,
                                      S r) {
  const auto [N, Np, Npp] = lapse_jets_at<S>(lapse, r);
  const auto pr = eval_profile<S>(p, r);
  const S n2 = S(p.n - 2);
  const S core = pr.d2v + n2 * pr.dv / r;  // V'' + (n-2) V'/r
  std::array<S, 4> ric;
  ric[0] = N * Npp * pr.v + N * Np * (pr.dv + n2 * pr.v / r);
  ric[1] = -Npp / N - Np / N * pr.dv / pr.v / 2 - core / pr.v / 2;
  ric[2] = -Np / N * pr.v * pr.dv / 2 - core * pr.v / 2;
  ric[3] = -r * pr.dv - S(p.n - 3) * pr.v - Np / N * r * pr.v;
  return ric;
}

}  // namespace

Eigen::Vector4d spacetime_ricci(const SolitonParams& p, const LapseAnsatz& lapse, double r) {
  p.validate_chart();
  require_in_chart(p, r);
  if (!(lapse.value(r) > 0.0))
    throw std::invalid_argument("spacetime_ricci: lapse must be positive");
  const auto ric = spacetime_ricci_impl<__float128>(p, lapse, static_cast<__float128>(r));
  Eigen::Vector4d out;
  for (int i = 0; i < 4; ++i) out[i] = static_cast<double>(ric[i]);
  return out;
}

namespace {

template <class S>
Eigen::Vector4d spacetime_ricci_numeric_impl(const SolitonParams& p,
                                             const LapseAnsatz& lapse, double r,
                                             double h_r) {
  const int dim = p.n + 1;  // (t, r, phi, theta^1..)
  auto field = [&](const std::vector<S>& x) {
    const S rr = x[1];
    SquareMat<S> g(dim);
    const S N = lapse_jets_at<S>(lapse, rr)[0];
    g(0, 0) = -N * N;
    const auto pr = eval_profile<S>(p, rr);
    g(1, 1) = S(1) / pr.v;
    g(2, 2) = pr.v;
    for (int i = 3; i < dim; ++i) g(i, i) = rr * rr;
    return g;
  };

  std::vector<S> x(dim, S(0)), h(dim, S(1e-4));
  x[1] = S(r);
  h[1] = S(h_r);

  const auto curv = curvature_from_jets(
      metric_jets<S>(field, x, h, std::is_same_v<S, __float128> ? 3 : 2));
  Eigen::Vector4d ric;
  for (int i = 0; i < 4; ++i) ric[i] = static_cast<double>(curv.ricci(i, i));
  return ric;
}

}  // namespace

Eigen::Vector4d spacetime_ricci_numeric(const SolitonParams& p, const LapseAnsatz& lapse,
                                        double r, double step) {
  p.validate_chart();
  require_in_chart(p, r);
  if (!(lapse.value(r) > 0.0))
    throw std::invalid_argument("spacetime_ricci_numeric: lapse must be positive");
  const bool quad = fd_needs_quad(p, r);
  const double h_r = step > 0.0 ? step : (quad ? quad_fd_step(p, r) : default_fd_step(p, r));
  if (!in_chart(p, r - 2.0 * h_r))
    throw std::runtime_error("spacetime_ricci_numeric: step too large for the chart");
  if (quad) return spacetime_ricci_numeric_impl<__float128>(p, lapse, r, h_r);
  return spacetime_ricci_numeric_impl<long double>(p, lapse, r, h_r);
}

Eigen::Vector4d vacuum_residual_at(const SolitonParams& p, const LapseAnsatz& lapse,
                                   double lambda, double r) {
  p.validate_chart();
  require_in_chart(p, r);
  if (!(lapse.value(r) > 0.0))
    throw std::invalid_argument("vacuum_residual_at: lapse must be positive");
  using Q = __float128;
  const Q rq = r;
  const auto ric = spacetime_ricci_impl<Q>(p, lapse, rq);
  const Q N = lapse_jets_at<Q>(lapse, rq)[0];
  const Q v = eval_profile<Q>(p, rq).v;
  const Q target = Q(2) * Q(lambda) / Q(p.n - 1);
  Eigen::Vector4d res;
  res[0] = static_cast<double>(ric[0] / (N * N) + target);  // tilde-g(e_t, e_t) = -1
  res[1] = static_cast<double>(ric[1] * v - target);
  res[2] = static_cast<double>(ric[2] / v - target);
  res[3] = static_cast<double>(ric[3] / (rq * rq) - target);
  return res;
}

ResidualReport vacuum_residual(const SolitonParams& p, const LapseAnsatz& lapse,
                               double lambda, const Eigen::VectorXd& r_grid) {
  ResidualReport report;
  report.lambda_used = lambda;
  report.grid = r_grid;
  for (Eigen::Index i = 0; i < r_grid.size(); ++i) {
    const Eigen::Vector4d res = vacuum_residual_at(p, lapse, lambda, r_grid[i]);
    report.max_residual = report.max_residual.cwiseMax(res.cwiseAbs());
  }
  report.max_abs = report.max_residual.maxCoeff();
  return report;
}

Eigen::VectorXd log_grid(double lo, double hi, int count) {
  if (count < 1 || !(lo > 0.0) || !(hi >= lo))
    throw std::invalid_argument("log_grid: bad range");
  Eigen::VectorXd g(count);
  if (count == 1) {
    g[0] = lo;
    return g;
  }
  for (int i = 0; i < count; ++i)
    g[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1));
  return g;
}

Eigen::VectorXd default_static_grid(const RegularizedSoliton& reg, int count) {
  return log_grid(1.01 * reg.r_plus, 100.0 * reg.r_plus, count);
}

StaticVerdict solve_static_conditions(const SolitonParams& p, double lambda) {
  if (!(lambda < 0.0))
    throw std::invalid_argument("solve_static_conditions: lambda must be negative");
  const RegularizedSoliton reg = regularize(p);
  const Eigen::VectorXd grid = default_static_grid(reg, 64);
  const double target = 2.0 * lambda / (p.n - 1);

  // With N = c r + d the tt equation reads
  //   c [F(r) + target r] + d target = 0,  F = V' + (n-2) V/r,
  // for all r. Fit the direction (c, d) as the smallest singular vector.
  Eigen::MatrixXd m(grid.size(), 2);
  double scale0 = 0.0;
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const auto pr = eval_profile(p, grid[i]);
    const double f = pr.dv + (p.n - 2) * pr.v / grid[i];
    m(i, 0) = f + target * grid[i];
    m(i, 1) = target;
    // Pre-cancellation magnitude of the row; the matched member cancels the
    // first column to rounding noise, which must not be renormalized away.
    scale0 = std::max(scale0, std::abs(f) + std::abs(target) * grid[i]);
  }
  const double s0 = scale0 > 0 ? scale0 : 1.0;
  const double s1 = std::abs(target);
  Eigen::MatrixXd scaled = m;
  scaled.col(0) /= s0;
  scaled.col(1) /= s1;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(scaled, Eigen::ComputeThinV);

  StaticVerdict verdict;
  verdict.residual_norm = svd.singularValues()(1) / svd.singularValues()(0);
  Eigen::Vector2d dir = svd.matrixV().col(1);
  dir[0] /= s0;
  dir[1] /= s1;
  if (dir[0] < 0.0) dir = -dir;
  dir.normalize();
  verdict.fitted_c = dir[0];
  verdict.fitted_d = dir[1];
  const double r_ref = grid[grid.size() / 2];
  verdict.is_ads_soliton = verdict.residual_norm < 1e-8 && verdict.fitted_c > 0.0 &&
                           std::abs(verdict.fitted_d) < 1e-8 * verdict.fitted_c * r_ref;
  return verdict;
}

}  // namespace hmlab
