#include "hmlab/complex_structure.hpp"

#include "hmlab/curvature.hpp"
#include "hmlab/tail_fit.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>

using namespace hmlab;

namespace {

ChartPoint generic_point(const SolitonParams& p, double r) {
  ChartPoint pt = ChartPoint::at_r(p, r, 0.37);
  for (Eigen::Index i = 0; i < pt.thetas.size(); ++i)
    pt.thetas[i] = 0.21 * static_cast<double>(i + 1);
  return pt;
}

}  // namespace

TEST_CASE("coframe action at the n=4 reference point") {
  const auto p = SolitonParams::make(4, 1.0, 0.0, 1.0);
  const auto j = j_matrix(p, generic_point(p, 2.0));
  const double v = 3.75;  // V(2) = 4 (1 - 1/16)
  CHECK(j.coframe(1, 0) == doctest::Approx(v).epsilon(1e-14));     // J(dr) = V dphi
  CHECK(j.coframe(0, 1) == doctest::Approx(-1.0 / v).epsilon(1e-14));
  CHECK(j.coframe(3, 2) == 1.0);   // dtheta^1 -> dtheta^2
  CHECK(j.coframe(2, 3) == -1.0);  // dtheta^2 -> -dtheta^1
}

TEST_CASE("J squared is minus the identity") {
  testing::MemberSampler sampler(41);
  for (int n : {4, 6, 8}) {
    for (int i = 0; i < 10; ++i) {
      const auto p = SolitonParams::make(n, sampler.uniform(0.5, 2.0),
                                         sampler.uniform(-3.0, 3.0),
                                         sampler.uniform(0.5, 2.0));
      const auto reg = regularize(p);
      const double r = sampler.uniform(1.05, 5.0) * reg.r_plus;
      const auto j = j_matrix(p, generic_point(p, r));
      const Eigen::MatrixXd jsq =
          j.coframe * j.coframe + Eigen::MatrixXd::Identity(n, n);
      CHECK(jsq.cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("J is compatible with the metric") {
  testing::MemberSampler sampler(42);
  for (int i = 0; i < 20; ++i) {
    const auto p = SolitonParams::make(sampler.uniform_int(2, 3) * 2,
                                       sampler.uniform(0.5, 2.0),
                                       sampler.uniform(-3.0, 3.0),
                                       sampler.uniform(0.5, 2.0));
    const auto reg = regularize(p);
    const ChartPoint pt = generic_point(p, sampler.uniform(1.05, 5.0) * reg.r_plus);
    const auto j = j_matrix(p, pt);
    const Eigen::MatrixXd g = metric_diagonal(p, pt).asDiagonal();
    const Eigen::MatrixXd act = j.vector_action();
    CHECK((act.transpose() * g * act - g).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("theta block of the coframe is constant") {
  const auto p = SolitonParams::make(6, 1.0, 1.0, 1.0);
  const auto j = j_matrix(p, generic_point(p, 2.0));
  for (int a = 2; a < 6; ++a)
    for (int b = 2; b < 6; ++b)
      CHECK((j.coframe(a, b) == 0.0 || std::abs(j.coframe(a, b)) == 1.0));
}

TEST_CASE("Nijenhuis tensor vanishes numerically") {
  testing::MemberSampler sampler(43);
  const auto p4 = SolitonParams::make(4, 1.0, 1.0, 1.0);
  const auto reg4 = regularize(p4);
  for (int i = 0; i < 10; ++i) {
    const double r = sampler.uniform(1.05, 5.0) * reg4.r_plus;
    CHECK(nijenhuis_norm(p4, generic_point(p4, r)) < 1e-8);
  }
  const auto p6 = SolitonParams::make(6, 1.3, -2.0, 0.8);
  const auto reg6 = regularize(p6);
  for (int i = 0; i < 5; ++i) {
    const double r = sampler.uniform(1.05, 5.0) * reg6.r_plus;
    CHECK(nijenhuis_norm(p6, generic_point(p6, r)) < 1e-8);
  }
}

TEST_CASE("fundamental form components and non-closedness") {
  const auto p = SolitonParams::make(4, 1.0, 0.0, 1.0);
  const ChartPoint pt = generic_point(p, 2.0);
  const auto form = fundamental_form(p, pt);
  CHECK(form.omega(0, 1) == doctest::Approx(1.0).epsilon(1e-13));   // omega(d_r, d_phi)
  CHECK(form.omega(1, 0) == doctest::Approx(-1.0).epsilon(1e-13));
  CHECK(form.omega(2, 3) == doctest::Approx(4.0).epsilon(1e-13));   // r^2 at r=2
  CHECK((form.omega + form.omega.transpose()).cwiseAbs().maxCoeff() < 1e-12);

  // d omega (d_r, d_theta^1, d_theta^2) = 2r, the non-Kaehler witness.
  CHECK(d_omega_component(p, pt, 0, 2, 3) == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(form.d_omega_norm == doctest::Approx(4.0).epsilon(1e-8));
  // Purely angular components carry no r-dependence.
  CHECK(std::abs(d_omega_component(p, pt, 1, 2, 3)) < 1e-10);
}

TEST_CASE("d omega components for n=6 pairs") {
  const auto p = SolitonParams::make(6, 1.2, 1.0, 0.9);
  const ChartPoint pt = generic_point(p, 1.7);
  CHECK(d_omega_component(p, pt, 0, 2, 4) == doctest::Approx(2.0 * 1.7).epsilon(1e-9));
  CHECK(d_omega_component(p, pt, 0, 3, 5) == doctest::Approx(2.0 * 1.7).epsilon(1e-9));
  CHECK(std::abs(d_omega_component(p, pt, 0, 2, 3)) < 1e-9);  // unpaired block
  CHECK(std::abs(d_omega_component(p, pt, 2, 3, 4)) < 1e-10);
}

TEST_CASE("extension data reaches u(0) = 1 and the rotation matrix") {
  for (const auto& p : {SolitonParams::make(4, 1.0, 0.0, 1.0),
                        SolitonParams::make(4, 1.0, 2.0, 1.0),
                        SolitonParams::make(6, 1.5, -1.0, 1.2)}) {
    const auto reg = regularize(p);
    const double rho0 = 1e-2 * std::sqrt(reg.vprime_at_rplus * reg.r_plus);
    const auto probes =
        extension_probe(reg, {rho0, rho0 / std::sqrt(2.0), rho0 / 2.0});
    CHECK(probes[0].u_value > 0.0);
    const double u0 = richardson_limit3(probes[0].u_value, probes[1].u_value,
                                        probes[2].u_value);
    CHECK(u0 == doctest::Approx(1.0).epsilon(1e-8));
    // Deviation from the rotation matrix scales like rho^2.
    CHECK(probes[2].rotation_deviation <= 0.3 * probes[0].rotation_deviation + 1e-12);
    const double a0 = richardson_limit3(probes[0].rotation_deviation,
                                        probes[1].rotation_deviation,
                                        probes[2].rotation_deviation);
    CHECK(std::abs(a0) < 1e-8);
  }
}

TEST_CASE("u is linear in s at leading order") {
  const auto p = SolitonParams::make(4, 1.0, 2.0, 1.0);
  const auto reg = regularize(p);
  const double rho0 = 1e-2 * std::sqrt(reg.vprime_at_rplus * reg.r_plus);
  const auto probes = extension_probe(reg, {rho0, rho0 / 2.0, rho0 / 4.0});
  const double u1_a = (probes[0].u_value - 1.0) / (rho0 * rho0);
  const double u1_b = (probes[1].u_value - 1.0) / (rho0 * rho0 / 4.0);
  const double u1_c = (probes[2].u_value - 1.0) / (rho0 * rho0 / 16.0);
  // Successive slope estimates converge linearly in s.
  CHECK(std::abs(u1_c - u1_b) < 0.6 * std::abs(u1_b - u1_a) + 1e-12);
}

TEST_CASE("odd fiber dimensions are rejected") {
  const auto p3 = SolitonParams::make(3, 1.0, 0.0, 1.0);
  CHECK_THROWS_AS(j_matrix(p3, ChartPoint::at_r(p3, 2.0)), std::invalid_argument);
  const auto p5 = SolitonParams::make(5, 1.0, 0.0, 1.0);
  CHECK_THROWS_AS(nijenhuis_norm(p5, ChartPoint::at_r(p5, 2.0)), std::invalid_argument);
  CHECK_THROWS_AS(extension_probe(regularize(p3), {0.01}), std::invalid_argument);
}
