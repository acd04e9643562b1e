#pragma once

#include <cmath>

namespace gsum::detail {

template <class F>
double adaptive_simpson_impl(const F& f, double a, double b, double fa, double fm,
                             double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double flm = f(0.5 * (a + m));
  const double frm = f(0.5 * (m + b));
  const double h = b - a;
  const double left = h / 12.0 * (fa + 4.0 * flm + fm);
  const double right = h / 12.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson_impl(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson_impl(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

// Adaptive Simpson quadrature with Richardson correction, absolute tolerance.
template <class F>
double adaptive_simpson(const F& f, double a, double b, double abs_tol,
                        int max_depth = 52) {
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fm = f(m);
  const double fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson_impl(f, a, b, fa, fm, fb, whole, abs_tol, max_depth);
}

}  // namespace gsum::detail
