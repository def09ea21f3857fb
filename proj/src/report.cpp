#include "hmlab/report.hpp"

#include "hmlab/complex_structure.hpp"
#include "hmlab/curvature.hpp"
#include "hmlab/energy.hpp"
#include "hmlab/family.hpp"
#include "hmlab/finite_diff.hpp"
#include "hmlab/static_einstein.hpp"
#include "hmlab/sweep.hpp"
#include "hmlab/tail_fit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

namespace hmlab {

namespace {

std::string fmt15(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.15g", x);
  return buf;
}

/// Named scalar results of one pipeline run, in a fixed order.
struct ResultRow {
  std::vector<std::string> names;
  std::vector<double> values;

  void add(const std::string& name, double value) {
    names.push_back(name);
    values.push_back(value);
  }
};

struct PointOutcome {
  ResultRow row;
  std::vector<Check> checks;
};

}  // namespace

std::string command_name(Command c) {
  switch (c) {
    case Command::Curvature: return "curvature";
    case Command::Regularity: return "regularity";
    case Command::StaticCheck: return "static-check";
    case Command::Complex: return "complex";
    case Command::Energy: return "energy";
    case Command::Compare: return "compare";
    case Command::VerifyAll: return "verify-all";
  }
  throw std::invalid_argument("unknown command");
}

Command command_from_name(const std::string& name) {
  if (name == "curvature") return Command::Curvature;
  if (name == "regularity") return Command::Regularity;
  if (name == "static-check") return Command::StaticCheck;
  if (name == "complex") return Command::Complex;
  if (name == "energy") return Command::Energy;
  if (name == "compare") return Command::Compare;
  if (name == "verify-all") return Command::VerifyAll;
  throw std::invalid_argument("unknown command: " + name);
}

std::string format_name(OutputFormat f) {
  switch (f) {
    case OutputFormat::Table: return "table";
    case OutputFormat::Csv: return "csv";
    case OutputFormat::Json: return "json";
  }
  throw std::invalid_argument("unknown format");
}

OutputFormat format_from_name(const std::string& name) {
  if (name == "table") return OutputFormat::Table;
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  throw std::invalid_argument("unknown format: " + name);
}

SweepSpec parse_sweep(const std::string& text) {
  SweepSpec spec;
  const auto eq = text.find('=');
  const auto dots = text.find("..");
  const auto colon = text.rfind(':');
  if (eq == std::string::npos || dots == std::string::npos || colon == std::string::npos ||
      !(eq < dots && dots < colon))
    throw std::invalid_argument("sweep syntax is param=lo..hi:count");
  spec.param = text.substr(0, eq);
  if (spec.param != "a" && spec.param != "r0" && spec.param != "ell" && spec.param != "n")
    throw std::invalid_argument("sweep parameter must be one of a, r0, ell, n");
  try {
    spec.lo = std::stod(text.substr(eq + 1, dots - eq - 1));
    spec.hi = std::stod(text.substr(dots + 2, colon - dots - 2));
    spec.count = std::stoi(text.substr(colon + 1));
  } catch (const std::exception&) {
    throw std::invalid_argument("sweep syntax is param=lo..hi:count");
  }
  if (!std::isfinite(spec.lo) || !std::isfinite(spec.hi) || spec.count < 1)
    throw std::invalid_argument("sweep range must be finite with count >= 1");
  return spec;
}

Check make_check(std::string name, double value, double reference, double tolerance) {
  Check c;
  c.name = std::move(name);
  c.value = value;
  c.reference = reference;
  c.deviation = std::abs(value - reference);
  c.tolerance = tolerance;
  c.pass = c.deviation <= tolerance;
  return c;
}

bool Report::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

bool Report::operator==(const Report& other) const {
  return to_json(*this) == to_json(other);
}

// ---------------------------------------------------------------------------
// Per-command pipelines
// ---------------------------------------------------------------------------

namespace {

double pick_radius(const RunConfig& cfg, const RegularizedSoliton& reg) {
  if (cfg.r != 0.0) return cfg.r;
  return 2.0 * reg.r_plus;
}

PointOutcome run_curvature_point(const SolitonParams& p, const Tolerances& tol, double r) {
  const RegularizedSoliton reg = regularize(p);
  if (!(r > reg.r_plus))
    throw std::invalid_argument("curvature: evaluation radius must exceed r_plus");
  const ChartPoint pt = ChartPoint::at_r(p, r);
  const double S = p.scalar_curvature();

  const CurvatureBundle closed = ricci_closed(p, pt);
  const CurvatureBundle numeric = curvature_numeric(p, pt);

  const double ricci_scale =
      std::max(1.0, numeric.ricci.diagonal().cwiseAbs().maxCoeff());
  double ricci_offdiag = 0.0;
  for (int i = 0; i < p.n; ++i)
    for (int j = 0; j < p.n; ++j)
      if (i != j)
        ricci_offdiag = std::max(ricci_offdiag, std::abs(numeric.ricci(i, j)) / ricci_scale);

  double theta_spread = 0.0;
  for (int i = 3; i < p.n; ++i)
    theta_spread = std::max(theta_spread, std::abs(closed.ricci(i, i) - closed.ricci(2, 2)));

  // Christoffel agreement over a radial grid, componentwise. Deviations are
  // measured against max(1, |closed|): steep members push components past
  // 1e14, where even the double rounding of the stored value exceeds an
  // absolute tolerance of 1e-6.
  double gamma_dev = 0.0;
  const Eigen::VectorXd grid = log_grid(1.01 * reg.r_plus, 10.0 * reg.r_plus, 100);
  for (Eigen::Index gi = 0; gi < grid.size(); ++gi) {
    const ChartPoint q = ChartPoint::at_r(p, grid[gi]);
    const CurvatureBundle a = christoffels_closed(p, q);
    const CurvatureBundle b = curvature_numeric(p, q);
    for (int k = 0; k < p.n; ++k)
      for (int ii = 0; ii < p.n; ++ii)
        for (int jj = 0; jj < p.n; ++jj) {
          const double scale = std::max(1.0, std::abs(a.christoffel[k](ii, jj)));
          gamma_dev = std::max(
              gamma_dev, std::abs(a.christoffel[k](ii, jj) - b.christoffel[k](ii, jj)) / scale);
        }
  }

  // Profile self-consistency under central differences, same normalization
  // and the same precision gate as the curvature oracle.
  const auto pr = eval_profile(p, r);
  double dv_fd, d2v_fd;
  if (fd_needs_quad(p, r)) {
    const __float128 h = quad_fd_step(p, r);
    auto v_of = [&](__float128 x) { return eval_profile<__float128>(p, x).v; };
    dv_fd = static_cast<double>(d1_central<__float128>(v_of, __float128(r), h));
    d2v_fd = static_cast<double>(d2_central<__float128>(v_of, __float128(r), h));
  } else {
    const long double h = default_fd_step(p, r);
    auto v_of = [&](long double x) { return eval_profile<long double>(p, x).v; };
    dv_fd = static_cast<double>(d1_central<long double>(v_of, static_cast<long double>(r), h));
    d2v_fd = static_cast<double>(d2_central<long double>(v_of, static_cast<long double>(r), h));
  }
  const double profile_dev =
      std::max(std::abs(dv_fd - pr.dv) / std::max(1.0, std::abs(pr.dv)),
               std::abs(d2v_fd - pr.d2v) / std::max(1.0, std::abs(pr.d2v)));

  PointOutcome out;
  out.row.add("r", r);
  out.row.add("r_plus", reg.r_plus);
  out.row.add("V", pr.v);
  out.row.add("dV", pr.dv);
  out.row.add("d2V", pr.d2v);
  out.row.add("scalar_closed", closed.scalar);
  out.row.add("scalar_numeric", numeric.scalar);
  out.row.add("scalar_reference", S);
  out.row.add("christoffel_fd_dev", gamma_dev);
  out.row.add("ricci_offdiag_max", ricci_offdiag);

  out.checks.push_back(make_check("scalar_closed_equals_S", closed.scalar, S, 1e-12));
  out.checks.push_back(make_check("scalar_numeric_equals_S", numeric.scalar, S, tol.tol_fd));
  out.checks.push_back(make_check("christoffel_closed_vs_fd", gamma_dev, 0.0, tol.tol_fd));
  out.checks.push_back(make_check("ricci_offdiagonal_zero", ricci_offdiag, 0.0, tol.tol_fd));
  out.checks.push_back(make_check("ricci_theta_components_equal", theta_spread, 0.0, 0.0));
  out.checks.push_back(make_check("profile_derivative_consistency", profile_dev, 0.0, tol.tol_fd));
  return out;
}

PointOutcome run_regularity_point(const SolitonParams& p, const Tolerances&) {
  const RegularizedSoliton reg = regularize(p);
  const auto pr_plus = eval_profile(p, reg.r_plus);

  // Root quality against the local scale of V: r_plus^2/ell^2 generically,
  // r_plus V'(r_plus) when the root is steep (a double root location cannot
  // resolve V below an ulp of r_plus times the slope).
  const double v_scale = std::max(reg.r_plus * reg.r_plus / (p.ell * p.ell),
                                  reg.r_plus * reg.vprime_at_rplus);
  const double beta_identity = reg.beta * reg.vprime_at_rplus;

  // Probe radius in the disk variable rho = V^{1/2}: the value of V a
  // fraction 1e-5 of r_plus away from the root. This tracks 1e-2 r_plus for
  // moderate members but stays resolvable for very steep ones, where
  // rho = 1e-2 r_plus would ask for radii below the double ulp of r_plus.
  const double rho_probe =
      std::sqrt(eval_profile(p, reg.r_plus * (1.0 + 1e-5)).v);
  const auto cones = cone_angle_check(reg, {rho_probe, 0.5 * rho_probe});
  const auto cone_double = cone_angle_check(reg, {rho_probe}, 2.0 * reg.beta);

  // |ratio - 1| shrinks at least like rho^2 (faster when the quadratic
  // coefficient happens to vanish), so halving rho divides it by >= 4.
  const double dev1 = std::abs(cones[0].circumference_ratio - 1.0);
  const double dev2 = std::abs(cones[1].circumference_ratio - 1.0);
  const double quadratic_misfit = std::max(0.0, dev2 - 0.3 * dev1 - 1e-9);

  const double h_limit = h_limit_extrapolated(reg);
  const double h_series = -2.0 * pr_plus.d2v / (reg.vprime_at_rplus * reg.vprime_at_rplus);
  const double h_scale = std::max(1.0, std::abs(h_series));

  PointOutcome out;
  out.row.add("r_plus", reg.r_plus);
  out.row.add("beta", reg.beta);
  out.row.add("vprime_at_rplus", reg.vprime_at_rplus);
  out.row.add("cone_ratio", cones[0].circumference_ratio);
  out.row.add("cone_ratio_double_period", cone_double[0].circumference_ratio);
  out.row.add("h_limit", h_limit);
  out.row.add("h_limit_series", h_series);

  out.checks.push_back(
      make_check("V_vanishes_at_r_plus", pr_plus.v / v_scale, 0.0, 1e-12));
  out.checks.push_back(make_check("V_slope_positive_at_r_plus",
                                  reg.vprime_at_rplus > 0.0 ? 1.0 : 0.0, 1.0, 0.0));
  out.checks.push_back(
      make_check("beta_vprime_identity", beta_identity, 4.0 * kPi, 1e-10));
  if (p.a == 0.0)
    out.checks.push_back(make_check("r_plus_equals_r0_at_a0", reg.r_plus, p.r0, 0.0));
  out.checks.push_back(
      make_check("cone_ratio_unity", cones[0].circumference_ratio, 1.0, 1e-4));
  out.checks.push_back(make_check("cone_ratio_double_period",
                                  cone_double[0].circumference_ratio, 2.0, 1e-3));
  out.checks.push_back(
      make_check("cone_deviation_quadratic_in_rho", quadratic_misfit, 0.0, 0.0));
  out.checks.push_back(
      make_check("h_limit_matches_series", h_limit / h_scale, h_series / h_scale, 1e-5));
  return out;
}

PointOutcome run_static_point(const SolitonParams& p, const Tolerances& tol) {
  const RegularizedSoliton reg = regularize(p);
  const double lambda = p.cosmological_constant();
  const LapseAnsatz lapse = LapseAnsatz::linear(1.0, 0.0);  // N = r

  const Eigen::VectorXd grid = default_static_grid(reg, 64);
  const ResidualReport residual = vacuum_residual(p, lapse, lambda, grid);
  const StaticVerdict verdict = solve_static_conditions(p, lambda);

  // Closed-form spacetime Ricci against the finite-difference oracle, on
  // unit-frame components, normalized by max(1, |component|): steep members
  // reach component magnitudes where absolute agreement is below double ulp.
  double oracle_dev = 0.0;
  const Eigen::VectorXd probe = log_grid(1.2 * reg.r_plus, 10.0 * reg.r_plus, 5);
  for (Eigen::Index i = 0; i < probe.size(); ++i) {
    const double r = probe[i];
    const Eigen::Vector4d closed = spacetime_ricci(p, lapse, r);
    const Eigen::Vector4d numeric = spacetime_ricci_numeric(p, lapse, r);
    const double N = lapse.value(r);
    const double v = eval_profile(p, r).v;
    const Eigen::Vector4d frame(N * N, 1.0 / v, v, r * r);
    for (int c = 0; c < 4; ++c) {
      const double unit_closed = closed[c] / frame[c];
      const double unit_numeric = numeric[c] / frame[c];
      oracle_dev = std::max(oracle_dev, std::abs(unit_closed - unit_numeric) /
                                            std::max(1.0, std::abs(unit_closed)));
    }
  }

  // Residuals are insensitive to N -> kappa N.
  const LapseAnsatz scaled = LapseAnsatz::linear(3.7, 0.0);
  const ResidualReport residual_scaled = vacuum_residual(p, scaled, lambda, grid);
  const double scaling_dev =
      (residual.max_residual - residual_scaled.max_residual).cwiseAbs().maxCoeff();

  PointOutcome out;
  out.row.add("r_plus", reg.r_plus);
  out.row.add("lambda", lambda);
  out.row.add("residual_max", residual.max_abs);
  out.row.add("verdict_is_ads", verdict.is_ads_soliton ? 1.0 : 0.0);
  out.row.add("fitted_c", verdict.fitted_c);
  out.row.add("fitted_d", verdict.fitted_d);
  out.row.add("fit_residual", verdict.residual_norm);
  out.row.add("ricci_oracle_dev", oracle_dev);

  if (p.a == 0.0) {
    out.checks.push_back(
        make_check("vacuum_residual_vanishes", residual.max_abs, 0.0, 1e-10));
  } else {
    // The theta equation misses by |a| r^{1-n}/ell^2; demand a solid
    // fraction of that known floor at the innermost grid radius.
    const double floor = 0.3 * std::abs(p.a) *
                         std::pow(grid.minCoeff(), 1.0 - p.n) / (p.ell * p.ell);
    out.checks.push_back(make_check("vacuum_residual_nonzero_witness",
                                    residual.max_abs > floor ? 1.0 : 0.0, 1.0, 0.0));
  }
  // The fit reports whether a consistent N = c r solution exists within its
  // 1e-8 tolerance: members with |a| safely below that resolution must be
  // accepted as solitons, members safely above rejected. Within an order of
  // magnitude of the resolution estimate the verdict may go either way.
  const double fit_resolution = 2e-5 * p.n * std::pow(reg.r_plus, p.n - 1);
  if (std::abs(p.a) < 0.1 * fit_resolution || std::abs(p.a) > 10.0 * fit_resolution) {
    const bool expect_ads = std::abs(p.a) < fit_resolution;
    out.checks.push_back(make_check("verdict_matches_member",
                                    verdict.is_ads_soliton == expect_ads ? 1.0 : 0.0,
                                    1.0, 0.0));
  } else {
    out.checks.push_back(make_check("verdict_within_resolution_band",
                                    verdict.is_ads_soliton ? 1.0 : 0.0,
                                    verdict.is_ads_soliton ? 1.0 : 0.0, 0.0));
  }
  out.checks.push_back(make_check("spacetime_ricci_vs_fd_oracle", oracle_dev, 0.0, tol.tol_fd));
  out.checks.push_back(make_check("lapse_scaling_invariance", scaling_dev, 0.0, 1e-12));
  return out;
}

PointOutcome run_complex_point(const SolitonParams& p, const Tolerances& tol, double r) {
  if (p.n % 2 != 0)
    throw std::invalid_argument("complex: requires even dimension n = 2 + 2k");
  const RegularizedSoliton reg = regularize(p);
  if (!(r > reg.r_plus))
    throw std::invalid_argument("complex: evaluation radius must exceed r_plus");
  ChartPoint pt = ChartPoint::at_r(p, r, 0.4);
  for (Eigen::Index i = 0; i < pt.thetas.size(); ++i)
    pt.thetas[i] = 0.15 * static_cast<double>(i + 1);

  const AlmostComplexAt j = j_matrix(p, pt);
  const int n = p.n;
  const int k = (n - 2) / 2;

  const Eigen::MatrixXd j_sq = j.coframe * j.coframe + Eigen::MatrixXd::Identity(n, n);
  const double j_sq_dev = j_sq.cwiseAbs().maxCoeff();

  const Eigen::VectorXd gdiag = metric_diagonal(p, pt);
  const Eigen::MatrixXd g = gdiag.asDiagonal();
  const Eigen::MatrixXd act = j.vector_action();
  const double compat_dev = (act.transpose() * g * act - g).cwiseAbs().maxCoeff();

  const double nijenhuis = nijenhuis_norm(p, pt);

  const FundamentalForm form = fundamental_form(p, pt);
  double d_omega_dev = 0.0;
  for (int jj = 0; jj < k; ++jj) {
    const double c = d_omega_component(p, pt, 0, 2 + jj, 2 + k + jj);
    d_omega_dev = std::max(d_omega_dev, std::abs(c - 2.0 * r));
  }
  // Every purely angular component vanishes.
  double d_omega_angular = std::abs(d_omega_component(p, pt, 1, 2, 2 + k));
  if (n >= 6) {
    d_omega_angular =
        std::max(d_omega_angular, std::abs(d_omega_component(p, pt, 2, 3, 2 + k)));
  }

  const double rho0 = 1e-2 * std::sqrt(reg.vprime_at_rplus * reg.r_plus);
  const auto probes = extension_probe(
      reg, {rho0, rho0 / std::sqrt(2.0), rho0 / 2.0});
  const double u_limit = richardson_limit3(probes[0].u_value, probes[1].u_value,
                                           probes[2].u_value);
  const double a_limit = richardson_limit3(probes[0].rotation_deviation,
                                           probes[1].rotation_deviation,
                                           probes[2].rotation_deviation);

  PointOutcome out;
  out.row.add("r", r);
  out.row.add("j_squared_dev", j_sq_dev);
  out.row.add("compatibility_dev", compat_dev);
  out.row.add("nijenhuis_norm", nijenhuis);
  out.row.add("d_omega_norm", form.d_omega_norm);
  out.row.add("u_limit", u_limit);
  out.row.add("A_rotation_limit_dev", a_limit);

  out.checks.push_back(make_check("j_squared_is_minus_identity", j_sq_dev, 0.0, 1e-12));
  out.checks.push_back(make_check("j_metric_compatibility", compat_dev, 0.0, 1e-12));
  out.checks.push_back(make_check("nijenhuis_vanishes", nijenhuis, 0.0, 1e-8));
  out.checks.push_back(make_check("d_omega_radial_component_2r", d_omega_dev, 0.0, tol.tol_fd));
  out.checks.push_back(
      make_check("d_omega_angular_components_zero", d_omega_angular, 0.0, tol.tol_fd));
  out.checks.push_back(make_check("u_limit_is_one", u_limit, 1.0, 1e-6));
  out.checks.push_back(make_check("A_limit_is_rotation", a_limit, 0.0, 1e-6));
  return out;
}

PointOutcome run_energy_point(const SolitonParams& p, const Tolerances& tol) {
  const EnergyReport rep = energy_report(p);
  const RegularizedSoliton reg = regularize(p);

  // Density tail: E r^n -> -r0^n/ell, remainder of order r^{-(n-2)}.
  const auto scaled = [&](double r) { return hamiltonian_density_scaled(p, r); };
  const TailFit density_fit = extrapolate_tail(reg, scaled);
  const double density_target = -detail::ipow(p.r0, p.n) / p.ell;

  // Mean curvature approaches H0 at large radius.
  const double r_far = extrapolation_radii(reg)[4];
  const double h_far_dev = std::abs(mean_curvature(p, r_far) - rep.H0);

  // Frame fall-off: |a_22| decays like r^{-(n-1)} when the a r^{1-n} term
  // dominates the fit window, r^{-n} when the r0^n term does. For tiny
  // nonzero a the window straddles the crossover and the slope sits in
  // between, which is consistent with either order.
  const Eigen::VectorXd radii = extrapolation_radii(reg);
  Eigen::VectorXd a22(radii.size());
  for (Eigen::Index i = 0; i < radii.size(); ++i) a22[i] = frame_deviation(p, radii[i])[1];
  const double falloff_slope = -log_log_slope(radii, a22);
  const double r0n = detail::ipow(p.r0, p.n);
  double falloff_expected = falloff_slope;  // mixed regime: informational only
  if (std::abs(p.a) * radii.minCoeff() > 10.0 * r0n)
    falloff_expected = p.n - 1.0;
  else if (std::abs(p.a) * radii.maxCoeff() < 0.1 * r0n)
    falloff_expected = p.n;

  const double e_scale = std::max({std::abs(rep.E_HH_closed), 1e-12});

  PointOutcome out;
  out.row.add("r_plus", rep.r_plus);
  out.row.add("beta", rep.beta);
  out.row.add("E_HH", rep.E_HH);
  out.row.add("E_HH_closed", rep.E_HH_closed);
  out.row.add("E_ham", rep.E_ham);
  out.row.add("E_ham_closed", rep.E_ham_closed);
  out.row.add("proportionality_dev", rep.ratio_check);
  out.row.add("density_limit", density_fit.limit);
  out.row.add("falloff_slope", falloff_slope);

  out.checks.push_back(
      make_check("mass_extrapolation_matches_closed", rep.E_HH, rep.E_HH_closed, tol.tol_extrap));
  out.checks.push_back(make_check("mass_closed_forms_agree", rep.E_HH_closed_beta,
                                  rep.E_HH_closed, 1e-12 * e_scale));
  out.checks.push_back(
      make_check("mass_negative", rep.E_HH < 0.0 ? 1.0 : 0.0, 1.0, 0.0));
  out.checks.push_back(make_check("hamiltonian_extrapolation_matches_closed", rep.E_ham,
                                  rep.E_ham_closed, tol.tol_extrap));
  out.checks.push_back(make_check("hawking_horowitz_vs_hamiltonian", rep.E_HH,
                                  p.torus_volume() * p.ell / (2.0 * p.G) * rep.E_ham,
                                  tol.tol_extrap));
  out.checks.push_back(make_check("density_tail_limit", density_fit.limit, density_target,
                                  tol.tol_extrap * std::max(1.0, std::abs(density_target))));
  out.checks.push_back(make_check("mean_curvature_tends_to_H0", h_far_dev, 0.0, 1e-6));
  out.checks.push_back(
      make_check("frame_falloff_order", falloff_slope, falloff_expected, 0.05));
  return out;
}

PointOutcome run_compare_point(const SolitonParams& p, const Tolerances&) {
  const ComparisonReport rep = compare_with_hm(p);
  const double ineq_margin = scalar_inequality_margin(p.n, rep.s);

  PointOutcome out;
  out.row.add("a", p.a);
  out.row.add("s", rep.s);
  out.row.add("ratio", rep.ratio);
  out.row.add("rbar0", rep.rbar0);
  out.row.add("E_HH_g", rep.E_HH_g);
  out.row.add("E_HH_hm", rep.E_HH_hm);
  out.row.add("scalar_inequality_margin", ineq_margin);

  out.checks.push_back(
      make_check("ratio_at_most_one", std::max(rep.ratio - 1.0, 0.0), 0.0, 1e-12));
  if (p.a == 0.0) {
    out.checks.push_back(make_check("ratio_equals_one_at_a0", rep.ratio, 1.0, 1e-10));
  } else if (std::abs(p.a) >= 0.1) {
    out.checks.push_back(make_check("ratio_strictly_below_one",
                                    rep.ratio < 1.0 - 1e-6 ? 1.0 : 0.0, 1.0, 0.0));
  } else if (std::abs(p.a) >= 1e-4) {
    out.checks.push_back(
        make_check("ratio_below_one", rep.ratio < 1.0 ? 1.0 : 0.0, 1.0, 0.0));
  } else {
    // The gap scales like a^2 and drowns in rounding for microscopic a.
    out.checks.push_back(
        make_check("ratio_at_most_one_tiny_a", std::max(rep.ratio - 1.0, 0.0), 0.0, 1e-12));
  }
  out.checks.push_back(make_check("scalar_inequality_holds",
                                  std::max(-ineq_margin, 0.0), 0.0, 1e-12));
  out.checks.push_back(make_check("energy_dominates_companion",
                                  rep.E_HH_g >= rep.E_HH_hm - 1e-12 * std::abs(rep.E_HH_hm)
                                      ? 1.0
                                      : 0.0,
                                  1.0, 0.0));
  return out;
}

PointOutcome run_point(const RunConfig& cfg, const SolitonParams& p) {
  switch (cfg.command) {
    case Command::Curvature: {
      const RegularizedSoliton reg = regularize(p);
      return run_curvature_point(p, cfg.tol, pick_radius(cfg, reg));
    }
    case Command::Regularity:
      return run_regularity_point(p, cfg.tol);
    case Command::StaticCheck:
      return run_static_point(p, cfg.tol);
    case Command::Complex: {
      const RegularizedSoliton reg = regularize(p);
      return run_complex_point(p, cfg.tol, pick_radius(cfg, reg));
    }
    case Command::Energy:
      return run_energy_point(p, cfg.tol);
    case Command::Compare:
      return run_compare_point(p, cfg.tol);
    case Command::VerifyAll: {
      const RegularizedSoliton reg = regularize(p);
      const double r = cfg.r != 0.0 ? cfg.r : pick_radius(cfg, reg);
      PointOutcome all;
      auto absorb = [&all](const std::string& prefix, PointOutcome&& one) {
        for (std::size_t i = 0; i < one.row.names.size(); ++i)
          all.row.add(prefix + "." + one.row.names[i], one.row.values[i]);
        for (auto& c : one.checks) {
          c.name = prefix + "." + c.name;
          all.checks.push_back(std::move(c));
        }
      };
      absorb("curvature", run_curvature_point(p, cfg.tol, r));
      absorb("regularity", run_regularity_point(p, cfg.tol));
      absorb("static", run_static_point(p, cfg.tol));
      if (p.n % 2 == 0) absorb("complex", run_complex_point(p, cfg.tol, r));
      absorb("energy", run_energy_point(p, cfg.tol));
      absorb("compare", run_compare_point(p, cfg.tol));
      return all;
    }
  }
  throw std::invalid_argument("unknown command");
}

SolitonParams with_sweep_value(const SolitonParams& base, const std::string& param,
                               double value) {
  SolitonParams p = base;
  if (param == "a") {
    p.a = value;
  } else if (param == "r0") {
    p.r0 = value;
  } else if (param == "ell") {
    p.ell = value;
  } else if (param == "n") {
    const int n = static_cast<int>(std::lround(value));
    p.n = n;
    p.lambdas = Eigen::VectorXd::Constant(std::max(n - 2, 0), 2.0 * kPi);
  } else {
    throw std::invalid_argument("sweep parameter must be one of a, r0, ell, n");
  }
  p.validate();
  return p;
}

}  // namespace

Report run_report(const RunConfig& cfg) {
  cfg.params.validate();
  Report report;
  report.command = command_name(cfg.command);
  report.params = cfg.params;
  report.tol = cfg.tol;
  report.sweep = cfg.sweep;

  if (!cfg.sweep) {
    PointOutcome outcome = run_point(cfg, cfg.params);
    report.result_names = std::move(outcome.row.names);
    report.rows.push_back(std::move(outcome.row.values));
    report.checks = std::move(outcome.checks);
    return report;
  }

  const SweepSpec& sweep = *cfg.sweep;
  std::vector<PointOutcome> outcomes(sweep.count);
  parallel_for_indexed(sweep.count, [&](int i) {
    const double value =
        sweep.count == 1
            ? sweep.lo
            : sweep.lo + (static_cast<double>(i) * (sweep.hi - sweep.lo)) / (sweep.count - 1);
    const SolitonParams p = with_sweep_value(cfg.params, sweep.param, value);
    RunConfig local = cfg;
    local.r = 0.0;  // radius is member-dependent under a sweep
    outcomes[i] = run_point(local, p);
    auto& names = outcomes[i].row.names;
    if (std::find(names.begin(), names.end(), sweep.param) == names.end()) {
      names.insert(names.begin(), sweep.param);
      outcomes[i].row.values.insert(outcomes[i].row.values.begin(), value);
    }
  });

  report.result_names = outcomes.front().row.names;
  // Aggregate checks by name: worst deviation, AND of passes.
  std::map<std::string, Check> merged;
  std::vector<std::string> order;
  for (auto& outcome : outcomes) {
    report.rows.push_back(std::move(outcome.row.values));
    for (const auto& c : outcome.checks) {
      auto it = merged.find(c.name);
      if (it == merged.end()) {
        merged.emplace(c.name, c);
        order.push_back(c.name);
      } else {
        Check& acc = it->second;
        acc.pass = acc.pass && c.pass;
        if (c.deviation > acc.deviation) {
          const bool pass = acc.pass;
          acc = c;
          acc.pass = pass;
        }
      }
    }
  }
  for (const auto& name : order) report.checks.push_back(merged.at(name));
  return report;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

nlohmann::ordered_json to_json(const Report& report) {
  nlohmann::ordered_json j;
  j["command"] = report.command;
  nlohmann::ordered_json params;
  params["n"] = report.params.n;
  params["ell"] = report.params.ell;
  params["a"] = report.params.a;
  params["r0"] = report.params.r0;
  params["lambda"] = std::vector<double>(report.params.lambdas.begin(),
                                         report.params.lambdas.end());
  params["G"] = report.params.G;
  j["params"] = params;
  nlohmann::ordered_json tol;
  tol["tol_fd"] = report.tol.tol_fd;
  tol["tol_extrap"] = report.tol.tol_extrap;
  tol["root_tol"] = report.tol.root_tol;
  j["tolerances"] = tol;
  if (report.sweep) {
    nlohmann::ordered_json s;
    s["param"] = report.sweep->param;
    s["lo"] = report.sweep->lo;
    s["hi"] = report.sweep->hi;
    s["count"] = report.sweep->count;
    j["sweep"] = s;
  } else {
    j["sweep"] = nullptr;
  }
  nlohmann::ordered_json results = nlohmann::ordered_json::array();
  for (const auto& row : report.rows) {
    nlohmann::ordered_json entry;
    for (std::size_t i = 0; i < report.result_names.size(); ++i)
      entry[report.result_names[i]] = row[i];
    results.push_back(entry);
  }
  j["results"] = results;
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const auto& c : report.checks) {
    nlohmann::ordered_json entry;
    entry["name"] = c.name;
    entry["value"] = c.value;
    entry["reference"] = c.reference;
    entry["deviation"] = c.deviation;
    entry["tolerance"] = c.tolerance;
    entry["pass"] = c.pass;
    checks.push_back(entry);
  }
  j["checks"] = checks;
  return j;
}

Report report_from_json(const nlohmann::ordered_json& j) {
  Report report;
  report.command = j.at("command").get<std::string>();
  const auto& params = j.at("params");
  report.params.n = params.at("n").get<int>();
  report.params.ell = params.at("ell").get<double>();
  report.params.a = params.at("a").get<double>();
  report.params.r0 = params.at("r0").get<double>();
  const auto lam = params.at("lambda").get<std::vector<double>>();
  report.params.lambdas =
      Eigen::Map<const Eigen::VectorXd>(lam.data(), static_cast<Eigen::Index>(lam.size()));
  report.params.G = params.at("G").get<double>();
  const auto& tol = j.at("tolerances");
  report.tol.tol_fd = tol.at("tol_fd").get<double>();
  report.tol.tol_extrap = tol.at("tol_extrap").get<double>();
  report.tol.root_tol = tol.at("root_tol").get<double>();
  if (!j.at("sweep").is_null()) {
    SweepSpec s;
    s.param = j["sweep"].at("param").get<std::string>();
    s.lo = j["sweep"].at("lo").get<double>();
    s.hi = j["sweep"].at("hi").get<double>();
    s.count = j["sweep"].at("count").get<int>();
    report.sweep = s;
  }
  for (const auto& entry : j.at("results")) {
    if (report.result_names.empty())
      for (const auto& [key, _] : entry.items()) report.result_names.push_back(key);
    std::vector<double> row;
    for (const auto& name : report.result_names) row.push_back(entry.at(name).get<double>());
    report.rows.push_back(std::move(row));
  }
  for (const auto& entry : j.at("checks")) {
    Check c;
    c.name = entry.at("name").get<std::string>();
    c.value = entry.at("value").get<double>();
    c.reference = entry.at("reference").get<double>();
    c.deviation = entry.at("deviation").get<double>();
    c.tolerance = entry.at("tolerance").get<double>();
    c.pass = entry.at("pass").get<bool>();
    report.checks.push_back(c);
  }
  return report;
}

std::string emit(const Report& report, OutputFormat format) {
  if (format == OutputFormat::Json) return to_json(report).dump(2) + "\n";

  std::ostringstream os;
  if (format == OutputFormat::Csv) {
    for (std::size_t i = 0; i < report.result_names.size(); ++i)
      os << (i ? "," : "") << report.result_names[i];
    os << "\n";
    for (const auto& row : report.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << fmt15(row[i]);
      os << "\n";
    }
    return os.str();
  }

  os << "command: " << report.command << "\n";
  os << "params: n=" << report.params.n << " ell=" << fmt15(report.params.ell)
     << " a=" << fmt15(report.params.a) << " r0=" << fmt15(report.params.r0) << " lambda=[";
  for (Eigen::Index i = 0; i < report.params.lambdas.size(); ++i)
    os << (i ? "," : "") << fmt15(report.params.lambdas[i]);
  os << "] G=" << fmt15(report.params.G) << "\n";
  if (report.sweep)
    os << "sweep: " << report.sweep->param << "=" << fmt15(report.sweep->lo) << ".."
       << fmt15(report.sweep->hi) << ":" << report.sweep->count << "\n";
  os << "\nresults:\n";
  if (report.rows.size() == 1) {
    for (std::size_t i = 0; i < report.result_names.size(); ++i)
      os << "  " << report.result_names[i] << " = " << fmt15(report.rows[0][i]) << "\n";
  } else {
    for (std::size_t i = 0; i < report.result_names.size(); ++i)
      os << (i ? "," : "  ") << report.result_names[i];
    os << "\n";
    for (const auto& row : report.rows) {
      os << "  ";
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << fmt15(row[i]);
      os << "\n";
    }
  }
  os << "\nchecks:\n";
  for (const auto& c : report.checks) {
    os << "  [" << (c.pass ? "PASS" : "FAIL") << "] " << c.name << ": value=" << fmt15(c.value)
       << " reference=" << fmt15(c.reference) << " deviation=" << fmt15(c.deviation)
       << " tolerance=" << fmt15(c.tolerance) << "\n";
  }
  os << "\noverall: " << (report.all_pass() ? "PASS" : "FAIL") << "\n";
  return os.str();
}

}  // namespace hmlab
