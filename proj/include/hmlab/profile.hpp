#pragma once

#include "hmlab/params.hpp"

#include <cmath>
#include <functional>
#include <string>

namespace hmlab {

template <class Scalar>
struct ProfileTriple {
  Scalar v;    // V(r)
  Scalar dv;   // V'(r)
  Scalar d2v;  // V''(r)
};

namespace detail {

template <class Scalar>
Scalar ipow(Scalar base, int e) {
  Scalar acc = Scalar(1);
  while (e > 0) {
    if (e & 1) acc *= base;
    base *= base;
    e >>= 1;
  }
  return acc;
}

}  // namespace detail

/// V(r) = (r^2 + a r^{3-n} - r0^n r^{2-n}) / ell^2 together with its exact
/// first and second derivatives.
template <class Scalar>
ProfileTriple<Scalar> eval_profile(const SolitonParams& p, Scalar r) {
  if (!(r > Scalar(0))) throw std::invalid_argument("eval_profile: r must be positive");
  const Scalar inv_ell2 = Scalar(1) / (Scalar(p.ell) * Scalar(p.ell));
  const Scalar r0n = detail::ipow(Scalar(p.r0), p.n);
  const Scalar q = Scalar(1) / detail::ipow(r, p.n);  // r^{-n}
  const Scalar a = Scalar(p.a);
  const Scalar c1 = Scalar(3 - p.n);
  const Scalar c2 = Scalar(2 - p.n);
  ProfileTriple<Scalar> out;
  out.v = inv_ell2 * (r * r + a * q * r * r * r - r0n * q * r * r);
  out.dv = inv_ell2 * (Scalar(2) * r + c1 * a * q * r * r - c2 * r0n * q * r);
  out.d2v = inv_ell2 * (Scalar(2) + c1 * c2 * a * q * r - c2 * Scalar(1 - p.n) * r0n * q);
  return out;
}

/// Double front end. Evaluates in extended precision so the rounded triple
/// carries no visible cancellation noise even close to the root of V.
inline ProfileTriple<double> eval_profile(const SolitonParams& p, double r) {
  const auto t = eval_profile<long double>(p, static_cast<long double>(r));
  return {static_cast<double>(t.v), static_cast<double>(t.dv), static_cast<double>(t.d2v)};
}

/// Radial profile abstraction: the family profile by default, or any other
/// V(r) evaluator (tests drive the integral machinery with perturbed ones).
struct RadialProfile {
  std::function<ProfileTriple<double>(double)> eval;
  std::string label;

  ProfileTriple<double> operator()(double r) const { return eval(r); }

  static RadialProfile family(const SolitonParams& p) {
    return {[p](double r) { return eval_profile(p, r); }, "family"};
  }
};

/// The chart is r > r_plus, equivalently V(r) > 0: V has a single positive
/// root, below which it is negative.
inline bool in_chart(const SolitonParams& p, double r) {
  return r > 0.0 && eval_profile(p, r).v > 0.0;
}

inline void require_in_chart(const SolitonParams& p, double r) {
  if (!in_chart(p, r))
    throw std::invalid_argument("point outside the chart r > r_plus (V <= 0)");
}

}  // namespace hmlab
