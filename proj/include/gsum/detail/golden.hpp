#pragma once

#include <utility>

namespace gsum::detail {

// Golden-section maximization on [a, b] to abscissa tolerance tol.
// Intended for refining a peak already bracketed by a grid scan.
template <class F>
std::pair<double, double> golden_max(const F& f, double a, double b, double tol) {
  constexpr double inv_phi = 0.61803398874989484820;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    }
  }
  const double xm = 0.5 * (a + b);
  double best_x = xm;
  double best_f = f(xm);
  if (f1 > best_f) {
    best_x = x1;
    best_f = f1;
  }
  if (f2 > best_f) {
    best_x = x2;
    best_f = f2;
  }
  return {best_x, best_f};
}

}  // namespace gsum::detail
