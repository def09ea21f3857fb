#include "hmlab/complex_structure.hpp"

#include "hmlab/curvature.hpp"
#include "hmlab/finite_diff.hpp"

#include <cmath>
#include <stdexcept>

namespace hmlab {

namespace {

void require_even_fiber(const SolitonParams& p) {
  if (p.n < 4 || p.n % 2 != 0)
    throw std::invalid_argument("complex structure requires even n = 2 + 2k, n >= 4");
}

template <class Scalar>
DenseMatrix<Scalar> j_coframe(const SolitonParams& p, Scalar r) {
  const Scalar v = eval_profile<Scalar>(p, r).v;
  const int k = (p.n - 2) / 2;
  DenseMatrix<Scalar> m = DenseMatrix<Scalar>::Zero(p.n, p.n);
  m(1, 0) = v;               // J(dr) = V dphi
  m(0, 1) = Scalar(-1) / v;  // J(dphi) = -(1/V) dr
  for (int j = 0; j < k; ++j) {
    m(2 + k + j, 2 + j) = Scalar(1);   // dtheta^j -> dtheta^{k+j}
    m(2 + j, 2 + k + j) = Scalar(-1);  // dtheta^{k+j} -> -dtheta^j
  }
  return m;
}

}  // namespace

AlmostComplexAt j_matrix(const SolitonParams& p, const ChartPoint& pt) {
  require_even_fiber(p);
  require_in_chart(p, pt.r);
  AlmostComplexAt out;
  out.point = pt;
  out.coframe = j_coframe<double>(p, pt.r);
  return out;
}

double nijenhuis_norm(const SolitonParams& p, const ChartPoint& pt) {
  require_even_fiber(p);
  require_in_chart(p, pt.r);
  const int n = p.n;

  // Vector action A(x) = coframe(x)^T; only the r coordinate enters, but the
  // bracket machinery differentiates along every coordinate.
  auto action = [&p](const DenseVector<long double>& x) -> DenseMatrix<long double> {
    return j_coframe<long double>(p, x[0]).transpose().eval();
  };

  DenseVector<long double> x = pt.coords().cast<long double>();
  const long double h_r = static_cast<long double>(default_fd_step(p, pt.r));

  const DenseMatrix<long double> a0 = action(x);
  std::vector<DenseMatrix<long double>> da(n);
  for (int m = 0; m < n; ++m) {
    const long double h = (m == 0) ? h_r : 1e-4L;
    da[m] = d1_central<long double>(
        [&](long double t) {
          DenseVector<long double> y = x;
          y[m] = t;
          return action(y);
        },
        x[m], h);
  }

  // N(d_i, d_j) = [U_i, U_j] + J(d_j U_i) - J(d_i U_j) with U_i = J d_i;
  // [U_i, U_j]^m = U_i^l d_l U_j^m - U_j^l d_l U_i^m.
  long double worst = 0.0L;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      DenseVector<long double> bracket = DenseVector<long double>::Zero(n);
      for (int l = 0; l < n; ++l)
        bracket += a0(l, i) * da[l].col(j) - a0(l, j) * da[l].col(i);
      DenseVector<long double> dju_i = DenseVector<long double>::Zero(n);
      DenseVector<long double> diu_j = DenseVector<long double>::Zero(n);
      for (int m = 0; m < n; ++m) {
        dju_i[m] = da[j](m, i);
        diu_j[m] = da[i](m, j);
      }
      const DenseVector<long double> nij = bracket + a0 * dju_i - a0 * diu_j;
      worst = std::max(worst, static_cast<long double>(nij.cwiseAbs().maxCoeff()));
    }
  }
  return static_cast<double>(worst);
}

FundamentalForm fundamental_form(const SolitonParams& p, const ChartPoint& pt) {
  require_even_fiber(p);
  require_in_chart(p, pt.r);
  const int n = p.n;

  auto omega_at = [&p](const DenseVector<long double>& x) -> DenseMatrix<long double> {
    DenseMatrix<long double> g = DenseMatrix<long double>::Zero(x.size(), x.size());
    g.diagonal() = metric_diagonal<long double>(p, x[0]);
    return (g * j_coframe<long double>(p, x[0]).transpose()).eval();
  };

  DenseVector<long double> x = pt.coords().cast<long double>();
  FundamentalForm out;
  out.omega = omega_at(x).cast<double>();

  std::vector<DenseMatrix<long double>> domega(n);
  const long double h_r = static_cast<long double>(default_fd_step(p, pt.r));
  for (int m = 0; m < n; ++m) {
    const long double h = (m == 0) ? h_r : 1e-4L;
    domega[m] = d1_central<long double>(
        [&](long double t) {
          DenseVector<long double> y = x;
          y[m] = t;
          return omega_at(y);
        },
        x[m], h);
  }
  long double worst = 0.0L;
  for (int m = 0; m < n; ++m)
    for (int i = m + 1; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const long double c = domega[m](i, j) - domega[i](m, j) + domega[j](m, i);
        worst = std::max(worst, std::abs(c));
      }
  out.d_omega_norm = static_cast<double>(worst);
  return out;
}

double d_omega_component(const SolitonParams& p, const ChartPoint& pt, int i, int j, int k) {
  require_even_fiber(p);
  require_in_chart(p, pt.r);
  if (i < 0 || j < 0 || k < 0 || i >= p.n || j >= p.n || k >= p.n)
    throw std::invalid_argument("d_omega_component: index out of range");

  // omega_{ab} = g(d_a, J d_b) = g_aa (J^T)(a, b)
  auto omega_entry = [&p](double r, int a, int b) {
    const Eigen::VectorXd g = metric_diagonal<double>(p, r);
    const Eigen::MatrixXd jm = j_coframe<double>(p, r);
    return g[a] * jm(b, a);
  };

  auto d_along = [&](int m, int a, int b) {
    if (m != 0) return 0.0;  // omega depends on r only
    const double h = default_fd_step(p, pt.r);
    return d1_central<double>([&](double r) { return omega_entry(r, a, b); }, pt.r, h);
  };
  return d_along(i, j, k) - d_along(j, i, k) + d_along(k, i, j);
}

std::vector<ExtensionMatrixA> extension_probe(const RegularizedSoliton& reg,
                                              const std::vector<double>& rhos) {
  require_even_fiber(reg.params);
  const Eigen::Matrix2d rotation = (Eigen::Matrix2d() << 0.0, -1.0, 1.0, 0.0).finished();
  std::vector<ExtensionMatrixA> out;
  out.reserve(rhos.size());
  for (double rho : rhos) {
    if (!(rho > 0.0)) throw std::invalid_argument("extension_probe: rho must be positive");
    const double s = rho * rho;
    const double r = invert_profile(reg, s);
    const double u = reg.beta / (2.0 * kPi) * eval_profile(reg.params, r).dv / 2.0;

    ExtensionMatrixA sample;
    sample.rho = rho;
    sample.u_value = u;
    sample.rotation_deviation = -1.0;
    for (int step = 0; step < 12; ++step) {
      const double phi = 2.0 * kPi * step / 12.0;
      const double cx = std::cos(phi), sy = std::sin(phi);
      // x = rho cos, y = rho sin; only the ratios x^2/rho^2 etc. enter.
      Eigen::Matrix2d A;
      A(0, 0) = cx * sy * (1.0 / u - u);
      A(0, 1) = (1.0 - 1.0 / u) * cx * cx + (1.0 - u) * sy * sy;
      A(1, 0) = (u - 1.0) * cx * cx + (1.0 / u - 1.0) * sy * sy;
      A(1, 1) = cx * sy * (u - 1.0 / u);
      A += rotation;
      const double dev = (A - rotation).cwiseAbs().maxCoeff();
      if (dev > sample.rotation_deviation) {
        sample.rotation_deviation = dev;
        sample.A = A;
      }
    }
    out.push_back(sample);
  }
  return out;
}

}  // namespace hmlab
