#pragma once

#include <cmath>
#include <complex>

namespace qnetsim::detail {

// Adaptive Simpson quadrature for real- or complex-valued integrands.
template <class F>
auto integrate(F&& f, double a, double b, double tolerance = 1e-12, int max_depth = 50) {
  using T = decltype(f(a));
  struct Rec {
    F& f;
    T step(double a, double b, T fa, T fm, T fb, T whole, double tol, int depth) {
      const double m = 0.5 * (a + b);
      const double lm = 0.5 * (a + m);
      const double rm = 0.5 * (m + b);
      const T flm = f(lm);
      const T frm = f(rm);
      const T left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
      const T right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
      const T delta = left + right - whole;
      if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
      return step(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
             step(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
    }
  };
  if (a == b) return T{};
  Rec rec{f};
  // Force a few levels of subdivision so oscillatory integrands are not
  // mistaken for converged on the first coarse estimate.
  constexpr int kPresplit = 8;
  T acc{};
  const double h = (b - a) / kPresplit;
  for (int i = 0; i < kPresplit; ++i) {
    const double lo = a + i * h;
    const double hi = (i + 1 == kPresplit) ? b : lo + h;
    const T flo = f(lo);
    const T fhi = f(hi);
    const T fmid = f(0.5 * (lo + hi));
    const T est = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
    acc += rec.step(lo, hi, flo, fmid, fhi, est, tolerance / kPresplit, max_depth);
  }
  return acc;
}

}  // namespace qnetsim::detail
