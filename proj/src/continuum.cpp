#include "gsum/continuum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gsum/detail/quadrature.hpp"

namespace gsum {
namespace {

using int128 = __int128;

int128 gcd128(int128 a, int128 b) {
  while (b != 0) {
    const int128 t = a % b;
    a = b;
    b = t;
  }
  return a < 0 ? -a : a;
}

// Exact reduced fraction for c_n; a 128-bit accumulator holds every
// intermediate through n = 20 (numerators stay below 2^80).
double c_rational(int n) {
  int128 num = 0;
  int128 den = 1;
  int128 binom = 1;
  const int m = n - 1;
  for (int k = 0; k <= m; ++k) {
    if (k > 0) binom = binom * (m - k + 1) / k;
    const int128 q = 2 * k + 1;
    num = num * q + binom * den;
    den = den * q;
    const int128 g = gcd128(num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }
  return static_cast<double>(num) / static_cast<double>(den);
}

void check_t(double t) {
  if (!std::isfinite(t) || t < 0.0) {
    throw std::domain_error("t must be a finite nonnegative real");
  }
}

}  // namespace

double c_coeff(int n) {
  if (n < 1) throw std::domain_error("c_coeff requires n >= 1");
  if (n <= 20) return c_rational(n);
  double c = c_rational(20);
  for (int j = 21; j <= n; ++j) {
    c = (std::exp2(static_cast<double>(j - 1)) + (2.0 * j - 2.0) * c) / (2.0 * j - 1.0);
  }
  return c;
}

double p_sq_continuum(double t) {
  check_t(t);
  const double half_t2 = 0.5 * t * t;
  const double integral = detail::adaptive_simpson(
      [half_t2](double phi) {
        const double c = std::cos(phi);
        return std::exp(-half_t2 / (c * c));
      },
      0.0, std::numbers::pi / 4.0, 1e-13);
  return 1.0 - (4.0 / std::numbers::pi) * integral;
}

SeriesResult p_sq_series(double t, int n_terms) {
  check_t(t);
  if (n_terms < 1) {
    throw std::domain_error("p_sq_series requires at least one term");
  }
  if (t == 0.0) return {0.0, 0.0, true};

  const double log_x = std::log(0.5 * t * t);

  // Terms are (-1)^(n-1) c_n x^n / n! with x = t^2/2. Magnitudes are carried
  // as logarithms, with the c_n recurrence folded in through log-sum-exp, and
  // the alternating sum is compensated.
  double sum = 0.0;
  double comp = 0.0;
  double log_fact = 0.0;
  double log_c = 0.0;
  for (int n = 1; n <= n_terms; ++n) {
    log_fact += std::log(static_cast<double>(n));
    if (n > 1) {
      const double a = static_cast<double>(n - 1) * std::numbers::ln2;
      const double b = std::log(2.0 * n - 2.0) + log_c;
      const double hi = std::max(a, b);
      const double lo = std::min(a, b);
      log_c = hi + std::log1p(std::exp(lo - hi)) - std::log(2.0 * n - 1.0);
    }
    const double magnitude = std::exp(static_cast<double>(n) * log_x - log_fact + log_c);
    const double term = (n % 2 == 1) ? magnitude : -magnitude;
    const double s = sum + term;
    if (std::abs(sum) >= std::abs(term)) {
      comp += (sum - s) + term;
    } else {
      comp += (term - s) + sum;
    }
    sum = s;
  }

  SeriesResult out;
  out.value = (4.0 / std::numbers::pi) * (sum + comp);
  out.bound = std::exp(2.0 * n_terms * std::log(t) - log_fact -
                       std::log(static_cast<double>(n_terms)));
  out.informative = out.bound <= 1.0;
  return out;
}

}  // namespace gsum
