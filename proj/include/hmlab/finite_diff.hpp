#pragma once

#include <Eigen/Dense>

#include <type_traits>
#include <vector>

namespace hmlab {

template <class Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// Central differences at steps h and h/2 combined by one Richardson step
// (fourth order). Works for scalars and for Eigen matrices.

template <class Scalar, class F>
auto d1_central(F&& f, Scalar x, Scalar h) {
  using Value = std::decay_t<decltype(f(x))>;
  const Value fp = f(x + h);
  const Value fm = f(x - h);
  const Value fp2 = f(x + h / 2);
  const Value fm2 = f(x - h / 2);
  const Value d_h = (fp - fm) * (Scalar(1) / (2 * h));
  const Value d_h2 = (fp2 - fm2) * (Scalar(1) / h);
  return Value((Scalar(4) * d_h2 - d_h) * (Scalar(1) / Scalar(3)));
}

template <class Scalar, class F>
auto d2_central(F&& f, Scalar x, Scalar h) {
  using Value = std::decay_t<decltype(f(x))>;
  const Value f0 = f(x);
  const Scalar g = h / 2;
  const Value d_h = (f(x + h) - 2 * f0 + f(x - h)) * (Scalar(1) / (h * h));
  const Value d_h2 = (f(x + g) - 2 * f0 + f(x - g)) * (Scalar(1) / (g * g));
  return Value((Scalar(4) * d_h2 - d_h) * (Scalar(1) / Scalar(3)));
}

// ---------------------------------------------------------------------------
// Curvature oracle kernel. Kept scalar-generic on a plain dense matrix type
// so the same code instantiates at long double and, for members whose
// curvature terms overflow long-double cancellation headroom, __float128.
// ---------------------------------------------------------------------------

template <class S>
struct SquareMat {
  int n = 0;
  std::vector<S> a;

  SquareMat() = default;
  explicit SquareMat(int dim) : n(dim), a(static_cast<std::size_t>(dim) * dim, S(0)) {}

  S& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
  const S& operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }

  SquareMat& operator+=(const SquareMat& o) {
    for (std::size_t k = 0; k < a.size(); ++k) a[k] += o.a[k];
    return *this;
  }
  SquareMat& operator-=(const SquareMat& o) {
    for (std::size_t k = 0; k < a.size(); ++k) a[k] -= o.a[k];
    return *this;
  }
  SquareMat& operator*=(S c) {
    for (auto& v : a) v *= c;
    return *this;
  }
};

template <class S>
SquareMat<S> operator+(SquareMat<S> x, const SquareMat<S>& y) { return x += y; }
template <class S>
SquareMat<S> operator-(SquareMat<S> x, const SquareMat<S>& y) { return x -= y; }
template <class S>
SquareMat<S> operator*(S c, SquareMat<S> x) { return x *= c; }

template <class S>
S abs_val(S x) { return x < S(0) ? -x : x; }

/// Gauss-Jordan inverse with partial pivoting.
template <class S>
SquareMat<S> inverse(SquareMat<S> m) {
  const int n = m.n;
  SquareMat<S> inv(n);
  for (int i = 0; i < n; ++i) inv(i, i) = S(1);
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int row = col + 1; row < n; ++row)
      if (abs_val(m(row, col)) > abs_val(m(pivot, col))) pivot = row;
    if (pivot != col) {
      for (int j = 0; j < n; ++j) {
        std::swap(m(col, j), m(pivot, j));
        std::swap(inv(col, j), inv(pivot, j));
      }
    }
    const S diag = m(col, col);
    const S scale = S(1) / diag;
    for (int j = 0; j < n; ++j) {
      m(col, j) *= scale;
      inv(col, j) *= scale;
    }
    for (int row = 0; row < n; ++row) {
      if (row == col) continue;
      const S factor = m(row, col);
      if (factor == S(0)) continue;
      for (int j = 0; j < n; ++j) {
        m(row, j) -= factor * m(col, j);
        inv(row, j) -= factor * inv(col, j);
      }
    }
  }
  return inv;
}

/// Metric value together with all first and second coordinate derivatives,
/// from a black-box field x -> g(x) by Richardson-refined central stencils.
template <class S>
struct MetricJets {
  SquareMat<S> g;
  std::vector<SquareMat<S>> dg;                // dg[m] = d_m g
  std::vector<std::vector<SquareMat<S>>> d2g;  // d2g[m][l] = d_m d_l g
};

namespace detail_fd {

/// Richardson ladder for central stencils with even error series h^2, h^4...
/// Takes estimates at h, h/2 (levels = 2) or h, h/2, h/4 (levels = 3).
template <class S>
SquareMat<S> richardson(const std::vector<SquareMat<S>>& estimates) {
  std::vector<SquareMat<S>> column = estimates;
  S factor = S(4);
  while (column.size() > 1) {
    std::vector<SquareMat<S>> next;
    for (std::size_t i = 0; i + 1 < column.size(); ++i)
      next.push_back((S(1) / (factor - 1)) * (factor * column[i + 1] - column[i]));
    column.swap(next);
    factor *= S(4);
  }
  return column.front();
}

}  // namespace detail_fd

/// levels = 2 gives fourth order, levels = 3 sixth order (used by the
/// quad-precision path, whose steep members are truncation-limited).
template <class S, class Field>
MetricJets<S> metric_jets(Field&& field, const std::vector<S>& x, const std::vector<S>& h,
                          int levels = 2) {
  const int dim = static_cast<int>(x.size());
  MetricJets<S> jets;
  jets.g = field(x);
  jets.dg.resize(dim);
  jets.d2g.assign(dim, std::vector<SquareMat<S>>(dim));

  for (int m = 0; m < dim; ++m) {
    std::vector<SquareMat<S>> d1_ladder, d2_ladder;
    for (int level = 0; level < levels; ++level) {
      const S step = h[m] / S(1 << level);
      std::vector<S> y = x;
      y[m] = x[m] + step;
      const SquareMat<S> fp = field(y);
      y[m] = x[m] - step;
      const SquareMat<S> fm = field(y);
      d1_ladder.push_back((S(1) / (2 * step)) * (fp - fm));
      d2_ladder.push_back((S(1) / (step * step)) * (fp - S(2) * jets.g + fm));
    }
    jets.dg[m] = detail_fd::richardson(d1_ladder);
    jets.d2g[m][m] = detail_fd::richardson(d2_ladder);
  }

  // Mixed derivatives from a four-point cross stencil, same ladder.
  for (int m = 0; m < dim; ++m) {
    for (int l = 0; l < m; ++l) {
      auto cross = [&](S hm, S hl) {
        std::vector<S> y = x;
        y[m] = x[m] + hm;
        y[l] = x[l] + hl;
        SquareMat<S> acc = field(y);
        y[l] = x[l] - hl;
        acc -= field(y);
        y[m] = x[m] - hm;
        acc += field(y);
        y[l] = x[l] + hl;
        acc -= field(y);
        return (S(1) / (4 * hm * hl)) * acc;
      };
      std::vector<SquareMat<S>> ladder;
      for (int level = 0; level < levels; ++level) {
        const S scale = S(1 << level);
        ladder.push_back(cross(h[m] / scale, h[l] / scale));
      }
      jets.d2g[m][l] = detail_fd::richardson(ladder);
      jets.d2g[l][m] = jets.d2g[m][l];
    }
  }
  return jets;
}

template <class S>
struct NumericCurvature {
  std::vector<SquareMat<S>> christoffel;  // christoffel[k](i,j) = Gamma^k_{ij}
  SquareMat<S> ricci;
  S scalar = S(0);
};

/// Levi-Civita curvature from metric jets by plain index gymnastics:
///   Gamma^k_{ij} = 1/2 g^{kl} (d_i g_{lj} + d_j g_{li} - d_l g_{ij}),
///   R_{ij} = d_k Gamma^k_{ij} - d_j Gamma^k_{ik}
///            + Gamma^k_{kl} Gamma^l_{ij} - Gamma^k_{jl} Gamma^l_{ik}.
template <class S>
NumericCurvature<S> curvature_from_jets(const MetricJets<S>& jets) {
  const int dim = jets.g.n;
  const SquareMat<S> ginv = inverse(jets.g);
  const S half = S(1) / S(2);

  // C[l](i,j) = d_i g_{lj} + d_j g_{li} - d_l g_{ij}
  std::vector<SquareMat<S>> C(dim, SquareMat<S>(dim));
  for (int l = 0; l < dim; ++l)
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        C[l](i, j) = jets.dg[i](l, j) + jets.dg[j](l, i) - jets.dg[l](i, j);

  NumericCurvature<S> out;
  out.christoffel.assign(dim, SquareMat<S>(dim));
  for (int k = 0; k < dim; ++k)
    for (int l = 0; l < dim; ++l) {
      const S w = half * ginv(k, l);
      if (w == S(0)) continue;
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) out.christoffel[k](i, j) += w * C[l](i, j);
    }

  // d_m Gamma^k_{ij}, with d_m g^{kl} = -(ginv dg[m] ginv)^{kl}.
  std::vector<std::vector<SquareMat<S>>> dgamma(dim, std::vector<SquareMat<S>>(dim));
  for (int m = 0; m < dim; ++m) {
    SquareMat<S> tmp(dim), dginv(dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) {
        S acc = S(0);
        for (int l = 0; l < dim; ++l) acc += ginv(i, l) * jets.dg[m](l, j);
        tmp(i, j) = acc;
      }
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) {
        S acc = S(0);
        for (int l = 0; l < dim; ++l) acc += tmp(i, l) * ginv(l, j);
        dginv(i, j) = -acc;
      }
    for (int k = 0; k < dim; ++k) {
      SquareMat<S> acc(dim);
      for (int l = 0; l < dim; ++l) {
        const S w1 = half * dginv(k, l);
        const S w2 = half * ginv(k, l);
        for (int i = 0; i < dim; ++i)
          for (int j = 0; j < dim; ++j) {
            S term = w1 * C[l](i, j);
            term += w2 * (jets.d2g[m][i](l, j) + jets.d2g[m][j](l, i) -
                          jets.d2g[m][l](i, j));
            acc(i, j) += term;
          }
      }
      dgamma[m][k] = acc;
    }
  }

  out.ricci = SquareMat<S>(dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      S r = S(0);
      for (int k = 0; k < dim; ++k) {
        r += dgamma[k][k](i, j) - dgamma[j][k](i, k);
        for (int l = 0; l < dim; ++l)
          r += out.christoffel[k](k, l) * out.christoffel[l](i, j) -
               out.christoffel[k](j, l) * out.christoffel[l](i, k);
      }
      out.ricci(i, j) = r;
    }
  }
  out.scalar = S(0);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) out.scalar += ginv(i, j) * out.ricci(i, j);
  return out;
}

}  // namespace hmlab
