#include "hmlab/energy.hpp"

#include <cmath>
#include <stdexcept>

namespace hmlab {

namespace {

double pow_int(double base, int e) { return detail::ipow(base, e); }

// w = ell^2 V / r^2 = 1 + eps with eps = (a r - r0^n)/r^n, plus the exact
// numerator P = a r - r0^n of eps.
struct WData {
  double w;
  double eps;
  double P;
  double rn;
};

WData w_data(const SolitonParams& p, double r) {
  WData d;
  d.rn = pow_int(r, p.n);
  d.P = p.a * r - pow_int(p.r0, p.n);
  d.eps = d.P / d.rn;
  d.w = 1.0 + d.eps;
  return d;
}

}  // namespace

double mean_curvature(const SolitonParams& p, double r) {
  p.validate_chart();
  require_in_chart(p, r);
  const auto pr = eval_profile(p, r);
  return (0.5 * pr.dv + (p.n - 2) * pr.v / r) / std::sqrt(pr.v);
}

double mean_curvature_profile(const RadialProfile& profile, int n, double r) {
  const auto pr = profile(r);
  if (!(pr.v > 0.0)) throw std::invalid_argument("mean_curvature_profile: V must be positive");
  return (0.5 * pr.dv + (n - 2) * pr.v / r) / std::sqrt(pr.v);
}

double mean_curvature_reference(const SolitonParams& p) { return (p.n - 1) / p.ell; }

double mass_integrand(const SolitonParams& p, double beta, double r) {
  p.validate();
  require_in_chart(p, r);
  const WData d = w_data(p, r);
  // N (H - H0) Area reduces to
  //   (lambda beta / ell^2) [ r0^n/2 + (n-1)/4 P^2 r^{-n} / (1 + eps/2 + sqrt(w)) ],
  // with no difference of O(1) quantities left.
  const double core = 0.5 * pow_int(p.r0, p.n) +
                      0.25 * (p.n - 1) * (d.P * d.P / d.rn) /
                          (1.0 + 0.5 * d.eps + std::sqrt(d.w));
  return -p.torus_volume() * beta / (8.0 * kPi * p.G * p.ell * p.ell) * core;
}

double mass_integrand_profile(const RadialProfile& profile, const SolitonParams& p,
                              double beta, double r) {
  const double H = mean_curvature_profile(profile, p.n, r);
  const double H0 = mean_curvature_reference(p);
  const double area =
      p.torus_volume() * beta * pow_int(r, p.n - 2) * std::sqrt(profile(r).v);
  return -(1.0 / (8.0 * kPi * p.G)) * r * (H - H0) * area;
}

double hamiltonian_density_scaled(const SolitonParams& p, double r) {
  p.validate_chart();
  require_in_chart(p, r);
  const WData d = w_data(p, r);
  // E r^n = [ -r0^n + (P^2/r^n) ((n-4)/w + (2w+1)/w^2) ] / ell, exactly.
  const double bracket = (p.n - 4) / d.w + (2.0 * d.w + 1.0) / (d.w * d.w);
  return (-pow_int(p.r0, p.n) + (d.P * d.P / d.rn) * bracket) / p.ell;
}

double hamiltonian_density(const SolitonParams& p, double r) {
  return hamiltonian_density_scaled(p, r) / pow_int(r, p.n);
}

Eigen::Vector2d frame_deviation(const SolitonParams& p, double r) {
  p.validate_chart();
  require_in_chart(p, r);
  const WData d = w_data(p, r);
  return {-d.eps / d.w, d.eps};  // a_11 = 1/w - 1, a_22 = w - 1
}

double e_hh_closed(const SolitonParams& p, double r_plus) {
  const double sn = pow_int(p.r0 / r_plus, p.n);
  return -p.torus_volume() * pow_int(p.r0, p.n) /
         (4.0 * p.G * r_plus * (p.n - 1 + sn));
}

double e_hh_closed_beta(const SolitonParams& p, double beta) {
  return -p.torus_volume() * beta * pow_int(p.r0, p.n) /
         (16.0 * kPi * p.G * p.ell * p.ell);
}

double e_ham_closed(const SolitonParams& p, double beta) {
  return -beta * pow_int(p.r0, p.n) / (8.0 * kPi * pow_int(p.ell, 3));
}

Eigen::VectorXd extrapolation_radii(const RegularizedSoliton& reg, int count) {
  const auto& p = reg.params;
  // Scale below which the tail expansion parameters a/r^{n-1}, r0^n/r^n stop
  // being small; every sampled radius sits at least 1e3 above it.
  const double scale = std::max({reg.r_plus, p.r0,
                                 std::pow(1.0 + std::abs(p.a), 1.0 / (p.n - 1))});
  Eigen::VectorXd radii(count);
  for (int i = 0; i < count; ++i)
    radii[i] = scale * std::pow(10.0, 3.0 + 3.0 * i / (count - 1.0));
  return radii;
}

TailFit extrapolate_tail(const RegularizedSoliton& reg,
                         const std::function<double(double)>& value_at, int count) {
  const Eigen::VectorXd radii = extrapolation_radii(reg, count);
  Eigen::VectorXd values(count);
  for (int i = 0; i < count; ++i) values[i] = value_at(radii[i]);
  Eigen::Vector4d exponents(reg.params.n - 2.0, reg.params.n - 1.0,
                            static_cast<double>(reg.params.n), reg.params.n + 1.0);
  TailFit fit = fit_power_tail(radii, values, exponents);
  const double scale = std::max(1e-300, std::abs(fit.limit));
  if (!(fit.residual_rms < 1e-6 * scale) || !std::isfinite(fit.limit))
    throw std::runtime_error("extrapolate_tail: boundary integral did not converge");
  return fit;
}

EnergyReport energy_report(const SolitonParams& p) {
  p.validate();
  const RegularizedSoliton reg = regularize(p);

  EnergyReport report;
  report.r_plus = reg.r_plus;
  report.beta = reg.beta;
  report.lambda_vol = p.torus_volume();
  report.H0 = mean_curvature_reference(p);
  report.H_at = [p](double r) { return mean_curvature(p, r); };
  report.ehh_finite = [p, beta = reg.beta](double r) { return mass_integrand(p, beta, r); };
  report.density = [p](double r) { return hamiltonian_density(p, r); };

  const TailFit mass_fit = extrapolate_tail(
      reg, [&](double r) { return mass_integrand(p, reg.beta, r); });
  report.E_HH = mass_fit.limit;
  report.E_HH_closed = e_hh_closed(p, reg.r_plus);
  report.E_HH_closed_beta = e_hh_closed_beta(p, reg.beta);

  const double ham_prefactor = reg.beta / (8.0 * kPi * p.ell * p.ell);
  const TailFit ham_fit = extrapolate_tail(
      reg, [&](double r) { return ham_prefactor * hamiltonian_density_scaled(p, r); });
  report.E_ham = ham_fit.limit;
  report.E_ham_closed = e_ham_closed(p, reg.beta);

  const Eigen::VectorXd radii = extrapolation_radii(reg);
  for (Eigen::Index i = 0; i < radii.size(); ++i) {
    report.mass_table.push_back({radii[i], mass_integrand(p, reg.beta, radii[i])});
    report.ham_table.push_back(
        {radii[i], ham_prefactor * hamiltonian_density_scaled(p, radii[i])});
  }
  report.ratio_check =
      std::abs(report.E_HH - p.torus_volume() * p.ell / (2.0 * p.G) * report.E_ham);
  return report;
}

ComparisonReport compare_with_hm(const SolitonParams& p) {
  p.validate();
  const RegularizedSoliton reg = regularize(p);
  ComparisonReport report;
  report.s = p.r0 / reg.r_plus;
  const double sn = pow_int(report.s, p.n);
  report.rbar0 = reg.r_plus / p.n * (p.n - 1 + sn);
  report.E_HH_g = e_hh_closed(p, reg.r_plus);
  report.E_HH_hm = -p.torus_volume() * pow_int(report.rbar0, p.n - 1) / (4.0 * p.G * p.n);
  report.ratio = pow_int(p.n * report.s / (p.n - 1 + sn), p.n);
  return report;
}

double scalar_inequality_margin(int n, double s) {
  if (s < 0.0) throw std::invalid_argument("scalar_inequality_margin: s must be >= 0");
  return n - 1 + pow_int(s, n) - n * s;
}

}  // namespace hmlab
