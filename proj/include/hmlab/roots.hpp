#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hmlab {

/// Bisection on a bracketing interval [lo, hi] with f(lo), f(hi) of opposite
/// sign, to relative tolerance rel_tol on the abscissa.
template <class F>
double bisect(F&& f, double lo, double hi, double rel_tol, int max_iter = 200) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0) == (fhi > 0)) throw std::invalid_argument("bisect: root not bracketed");
  for (int i = 0; i < max_iter && (hi - lo) > rel_tol * std::abs(hi); ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0) == (fhi > 0)) {
      hi = mid;
      fhi = fm;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  return 0.5 * (lo + hi);
}

/// A few Newton steps to polish a root already located to bracketing
/// accuracy. Steps leaving [lo, hi] are rejected.
template <class F, class DF>
double newton_polish(F&& f, DF&& df, double x, double lo, double hi, int steps = 4) {
  for (int i = 0; i < steps; ++i) {
    const double d = df(x);
    if (d == 0.0) break;
    const double next = x - f(x) / d;
    if (!(next > lo) || !(next < hi)) break;
    x = next;
  }
  return x;
}

/// Monotone-safeguarded Newton solve of f(x) = target on [lo, hi] where f is
/// increasing. Used to invert V near its root.
template <class F, class DF>
double invert_increasing(F&& f, DF&& df, double target, double lo, double hi, double seed,
                         double rel_tol = 1e-15, int max_iter = 80) {
  double x = std::clamp(seed, lo, hi);
  for (int i = 0; i < max_iter; ++i) {
    const double fx = f(x) - target;
    if (fx > 0)
      hi = x;
    else
      lo = x;
    const double d = df(x);
    double next = d > 0 ? x - fx / d : 0.5 * (lo + hi);
    if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= rel_tol * std::abs(hi)) return next;
    x = next;
  }
  return x;
}

}  // namespace hmlab
