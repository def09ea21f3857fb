#include "hmlab/family.hpp"

#include "hmlab/quadrature.hpp"
#include "hmlab/roots.hpp"
#include "hmlab/tail_fit.hpp"

#include <cmath>
#include <stdexcept>

namespace hmlab {

namespace {

double pow_int(double base, int e) { return detail::ipow(base, e); }

}  // namespace

double find_r_plus(const SolitonParams& p) {
  p.validate();
  auto V = [&p](double r) { return eval_profile(p, r).v; };
  auto dV = [&p](double r) { return eval_profile(p, r).dv; };

  if (p.a == 0.0) return p.r0;  // V(r0) vanishes exactly when a = 0

  // Bracket the largest sign change on a descending log grid, extending the
  // lower end if a large positive a pushes the root below 1e-6 r0.
  const double hi0 = 10.0 * std::max(p.r0, std::pow(std::abs(p.a), 1.0 / (p.n - 1)) + 1.0);
  double lo0 = 1e-6 * p.r0;
  double bracket_lo = 0.0, bracket_hi = 0.0;
  bool found = false;
  for (int attempt = 0; attempt < 6 && !found; ++attempt) {
    const int m = 400;
    double prev_r = hi0;
    double prev_v = V(prev_r);
    for (int k = 1; k <= m; ++k) {
      const double r = hi0 * std::pow(lo0 / hi0, static_cast<double>(k) / m);
      const double v = V(r);
      if ((v <= 0.0) != (prev_v <= 0.0)) {
        bracket_lo = r;
        bracket_hi = prev_r;
        found = true;
        break;
      }
      prev_r = r;
      prev_v = v;
    }
    lo0 *= 1e-6;
  }
  if (!found) throw std::invalid_argument("find_r_plus: V has no positive root");

  double root = bisect(V, bracket_lo, bracket_hi, 1e-13);
  root = newton_polish(V, dV, root, bracket_lo, bracket_hi);
  if (!(dV(root) > 0.0))
    throw std::runtime_error("find_r_plus: located root has nonpositive slope");
  return root;
}

double period_beta(const SolitonParams& p, double r_plus) {
  const double sn = pow_int(p.r0 / r_plus, p.n);
  return 4.0 * kPi * p.ell * p.ell / (r_plus * (p.n - 1 + sn));
}

double period_beta(const SolitonParams& p) { return period_beta(p, find_r_plus(p)); }

RegularizedSoliton regularize(const SolitonParams& p) {
  RegularizedSoliton reg;
  reg.params = p;
  reg.r_plus = find_r_plus(p);
  reg.beta = period_beta(p, reg.r_plus);
  reg.vprime_at_rplus = eval_profile(p, reg.r_plus).dv;
  return reg;
}

double invert_profile(const RegularizedSoliton& reg, double s) {
  if (!(s > 0.0)) throw std::invalid_argument("invert_profile: target must be positive");
  const auto& p = reg.params;
  auto V = [&p](double r) { return eval_profile(p, r).v; };
  auto dV = [&p](double r) { return eval_profile(p, r).dv; };

  // Expand the upper bound while V keeps increasing; a target beyond the
  // first turning point is outside the monotone neighborhood of r_plus.
  double hi = reg.r_plus + std::max(reg.r_plus, 1.0) * 1e-3;
  while (V(hi) < s) {
    if (!(dV(hi) > 0.0))
      throw std::runtime_error("invert_profile: target beyond the monotone neighborhood");
    hi = reg.r_plus + 2.0 * (hi - reg.r_plus);
    if (!std::isfinite(hi)) throw std::runtime_error("invert_profile: no solution");
  }
  const double seed = reg.r_plus + s / reg.vprime_at_rplus;
  return invert_increasing(V, dV, s, reg.r_plus, hi, seed);
}

double proper_radial_distance(const RegularizedSoliton& reg, double r) {
  if (!(r > reg.r_plus)) throw std::invalid_argument("proper_radial_distance: need r > r_plus");
  const auto& p = reg.params;
  auto V = [&p](double x) { return eval_profile(p, x).v; };
  auto dV = [&p](double x) { return eval_profile(p, x).dv; };

  // Near the root, substitute sigma = V^{1/2}: dr = 2 sigma / V' dsigma turns
  // V^{-1/2} dr into the regular integrand 2 / V'(V^{-1}(sigma^2)). Unlike an
  // r-space substitution this is insensitive to the rounding of r_plus, whose
  // double value may sit a fraction of an ulp on the V < 0 side.
  double w = 0.05 * reg.r_plus;
  for (int i = 0; i < 60 && dV(reg.r_plus + w) < 0.5 * reg.vprime_at_rplus; ++i) w *= 0.5;
  const double v_r = V(r);
  const double s_split = std::min(v_r, V(reg.r_plus + w));
  auto inverse_near = [&](double s) {
    if (!(s > 0.0)) return reg.r_plus;
    return invert_increasing(V, dV, s, reg.r_plus, reg.r_plus + w,
                             reg.r_plus + s / reg.vprime_at_rplus);
  };
  auto near_integrand = [&](double sigma) {
    return 2.0 / dV(inverse_near(sigma * sigma));
  };
  double dist = integrate_adaptive(near_integrand, 0.0, std::sqrt(s_split), 0.0, 1e-10).value;

  // Away from the root V is bounded below by s_split; integrate in r directly.
  if (s_split < v_r) {
    const double r1 = inverse_near(s_split);
    auto far_integrand = [&](double x) { return 1.0 / std::sqrt(V(x)); };
    dist += integrate_adaptive(far_integrand, r1, r, 0.0, 1e-10).value;
  }
  return dist;
}

std::vector<ConeChartSample> cone_angle_check(const RegularizedSoliton& reg,
                                              const std::vector<double>& rhos,
                                              double period) {
  if (period == 0.0) period = reg.beta;
  const auto& p = reg.params;
  std::vector<ConeChartSample> out;
  out.reserve(rhos.size());
  for (double rho : rhos) {
    if (!(rho > 0.0)) throw std::invalid_argument("cone_angle_check: rho must be positive");
    ConeChartSample sample;
    sample.rho = rho;
    const double s = rho * rho;
    const double r = invert_profile(reg, s);
    const double circumference = period * std::sqrt(eval_profile(p, r).v);
    const double dist = proper_radial_distance(reg, r);
    sample.circumference_ratio = circumference / (2.0 * kPi * dist);
    const double vp = eval_profile(p, r).dv;
    const double q = reg.vprime_at_rplus / vp;
    sample.h_value = (q - 1.0) * (q + 1.0) / s;
    sample.u_value = reg.beta / (2.0 * kPi) * vp / 2.0;
    out.push_back(sample);
  }
  return out;
}

std::vector<double> h_smoothness_probe(const RegularizedSoliton& reg,
                                       const std::vector<double>& s_values) {
  const auto& p = reg.params;
  std::vector<double> out;
  out.reserve(s_values.size());
  for (double s : s_values) {
    if (!(s > 0.0)) throw std::invalid_argument("h_smoothness_probe: s must be positive");
    const double r = invert_profile(reg, s);
    const double q = reg.vprime_at_rplus / eval_profile(p, r).dv;
    out.push_back((q - 1.0) * (q + 1.0) / s);
  }
  return out;
}

double h_limit_extrapolated(const RegularizedSoliton& reg, double s_base) {
  if (s_base == 0.0) s_base = 1e-3 * reg.vprime_at_rplus * reg.r_plus;
  const auto h = h_smoothness_probe(reg, {s_base, s_base / 2.0, s_base / 4.0});
  return richardson_limit3(h[0], h[1], h[2]);
}

}  // namespace hmlab
