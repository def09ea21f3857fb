#include "hmlab/curvature.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <cmath>

using namespace hmlab;

namespace {

const SolitonParams kRef = SolitonParams::make(3, 1.0, 0.0, 1.0);

}  // namespace

TEST_CASE("christoffel symbols at the reference point") {
  const ChartPoint pt = ChartPoint::at_r(kRef, 2.0);
  const auto bundle = christoffels_closed(kRef, pt);
  // Gamma^r_rr = -V'/(2V) = -4.25/7
  CHECK(bundle.christoffel[0](0, 0) == doctest::Approx(-4.25 / 7.0).epsilon(1e-14));
  // Gamma^theta_{r theta} = 1/r
  CHECK(bundle.christoffel[2](0, 2) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(bundle.christoffel[2](2, 0) == doctest::Approx(0.5).epsilon(1e-14));
  // Gamma^phi_{r phi} = V'/(2V), Gamma^r_{phi phi} = -V V'/2
  CHECK(bundle.christoffel[1](0, 1) == doctest::Approx(4.25 / 7.0).epsilon(1e-14));
  CHECK(bundle.christoffel[0](1, 1) == doctest::Approx(-0.5 * 3.5 * 4.25).epsilon(1e-14));
  // Gamma^r_{theta theta} = -r V
  CHECK(bundle.christoffel[0](2, 2) == doctest::Approx(-2.0 * 3.5).epsilon(1e-14));
}

TEST_CASE("components outside the six families vanish identically") {
  const auto p = SolitonParams::make(5, 1.3, 0.7, 1.1);
  const ChartPoint pt = ChartPoint::at_r(p, 2.4);
  const auto bundle = christoffels_closed(p, pt);
  int nonzero = 0;
  for (int k = 0; k < p.n; ++k)
    for (int i = 0; i < p.n; ++i)
      for (int j = 0; j < p.n; ++j)
        if (bundle.christoffel[k](i, j) != 0.0) ++nonzero;
  // r_rr, phiphi_r (x2), r_phiphi, theta_rtheta (2 per theta), r_thetatheta
  CHECK(nonzero == 4 + 3 * (p.n - 2));
  // Gamma^phi_{r theta^1} in particular
  CHECK(bundle.christoffel[1](0, 2) == 0.0);
  CHECK(bundle.christoffel[1](2, 1) == 0.0);
}

TEST_CASE("closed-form scalar curvature is the constant -n(n-1)/ell^2") {
  testing::MemberSampler sampler(11);
  for (int i = 0; i < 40; ++i) {
    const auto p = sampler.member();
    const auto reg = regularize(p);
    const double r = sampler.chart_radius(reg);
    const auto bundle = ricci_closed(p, ChartPoint::at_r(p, r));
    CHECK(std::abs(bundle.scalar - p.scalar_curvature()) < 1e-12);
  }
}

TEST_CASE("finite-difference scalar matches the constant") {
  testing::MemberSampler sampler(12);
  for (int i = 0; i < 15; ++i) {
    const auto p = sampler.member();
    const auto reg = regularize(p);
    const double r = sampler.chart_radius(reg);
    const auto bundle = curvature_numeric(p, ChartPoint::at_r(p, r));
    CHECK(bundle.source == CurvatureSource::Numeric);
    CHECK(std::abs(bundle.scalar - p.scalar_curvature()) < 1e-6);
  }
}

TEST_CASE("finite-difference scalar at the quoted member") {
  const auto p = SolitonParams::make(4, 2.0, -1.0, 1.0);
  const auto bundle = curvature_numeric(p, ChartPoint::at_r(p, 5.0));
  CHECK(std::abs(bundle.scalar - (-3.0)) < 1e-6);
}

TEST_CASE("hyperbolic reference profile has constant-curvature Ricci") {
  // r0 = 0, a = 0: V = r^2/ell^2 exactly, Ric = -(n-1)/ell^2 g.
  SolitonParams p;
  p.n = 3;
  p.ell = 1.0;
  p.a = 0.0;
  p.r0 = 0.0;
  p.lambdas = Eigen::VectorXd::Constant(1, 2.0 * kPi);
  for (double r : {0.5, 1.0, 2.0, 7.0}) {
    const ChartPoint pt = ChartPoint::at_r(p, r);
    const auto bundle = ricci_closed(p, pt);
    // Ric(theta, theta) = -r V' = -2 r^2 / ell^2
    CHECK(bundle.ricci(2, 2) == doctest::Approx(-2.0 * r * r).epsilon(1e-14));
    const Eigen::VectorXd g = metric_diagonal(p, pt);
    for (int i = 0; i < p.n; ++i)
      CHECK(bundle.ricci(i, i) == doctest::Approx(-(p.n - 1) * g[i]).epsilon(1e-13));
  }
}

TEST_CASE("numeric christoffels match closed form componentwise") {
  testing::MemberSampler sampler(13);
  for (int i = 0; i < 10; ++i) {
    const auto p = sampler.member();
    const auto reg = regularize(p);
    const double r = sampler.chart_radius(reg, 1e-2);
    const ChartPoint pt = ChartPoint::at_r(p, r);
    const auto closed = christoffels_closed(p, pt);
    const auto numeric = curvature_numeric(p, pt);
    for (int k = 0; k < p.n; ++k)
      for (int a = 0; a < p.n; ++a)
        for (int b = 0; b < p.n; ++b) {
          const double scale = std::max(1.0, std::abs(closed.christoffel[k](a, b)));
          CHECK(std::abs(closed.christoffel[k](a, b) - numeric.christoffel[k](a, b)) /
                    scale <
                1e-6);
        }
  }
}

TEST_CASE("numeric Ricci is diagonal and matches the closed diagonal") {
  testing::MemberSampler sampler(14);
  for (int i = 0; i < 8; ++i) {
    const auto p = sampler.member();
    const auto reg = regularize(p);
    const ChartPoint pt = ChartPoint::at_r(p, sampler.chart_radius(reg, 1e-2));
    const auto closed = ricci_closed(p, pt);
    const auto numeric = curvature_numeric(p, pt);
    const double scale = std::max(1.0, closed.ricci.diagonal().cwiseAbs().maxCoeff());
    for (int a = 0; a < p.n; ++a)
      for (int b = 0; b < p.n; ++b) {
        if (a == b) {
          const double s = std::max(1.0, std::abs(closed.ricci(a, a)));
          CHECK(std::abs(closed.ricci(a, a) - numeric.ricci(a, a)) / s < 1e-6);
        } else {
          CHECK(std::abs(numeric.ricci(a, b)) / scale < 1e-6);
        }
      }
  }
}

TEST_CASE("closed Ricci theta components are exactly equal") {
  const auto p = SolitonParams::make(6, 1.4, 2.0, 0.9);
  const auto bundle = ricci_closed(p, ChartPoint::at_r(p, 3.1));
  for (int i = 3; i < p.n; ++i) CHECK(bundle.ricci(i, i) == bundle.ricci(2, 2));
}

TEST_CASE("numeric christoffels vanish in the flat torus block") {
  const auto p = SolitonParams::make(4, 1.0, 0.5, 1.0);
  const auto numeric = curvature_numeric(p, ChartPoint::at_r(p, 2.0));
  CHECK(std::abs(numeric.christoffel[2](2, 2)) < 1e-12);  // Gamma^theta1_{theta1 theta1}
  CHECK(std::abs(numeric.christoffel[3](2, 3)) < 1e-12);
}

TEST_CASE("curvature holds in higher fiber dimensions") {
  for (int n : {7, 8}) {
    const auto p = SolitonParams::make(n, 1.5, 2.0, 1.0);
    const ChartPoint pt = ChartPoint::at_r(p, 2.0);
    CHECK(std::abs(ricci_closed(p, pt).scalar - p.scalar_curvature()) < 1e-12);
    CHECK(std::abs(curvature_numeric(p, pt).scalar - p.scalar_curvature()) < 1e-6);
  }
}

TEST_CASE("out-of-chart points are rejected") {
  CHECK_THROWS_AS(ricci_closed(kRef, ChartPoint::at_r(kRef, 0.5)), std::invalid_argument);
  CHECK_THROWS_AS(curvature_numeric(kRef, ChartPoint::at_r(kRef, 0.9)),
                  std::invalid_argument);
}

TEST_CASE("oversized finite-difference steps are refused with a diagnostic") {
  // r - 2h reaches below r_plus = 1.
  CHECK_THROWS_AS(curvature_numeric(kRef, ChartPoint::at_r(kRef, 1.01), 0.1),
                  std::runtime_error);
}
