#include "gsum/oracle.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gsum {
namespace detail {

double p_series_small(double t) {
  const double t2 = t * t;
  // sum_{j>=0} t^(2j) / (2j+1)!!, all terms positive, Neumaier compensation
  double term = 1.0;
  double sum = 1.0;
  double comp = 0.0;
  for (int j = 1; j < 400; ++j) {
    term *= t2 / (2.0 * static_cast<double>(j) + 1.0);
    const double s = sum + term;
    if (std::abs(sum) >= std::abs(term)) {
      comp += (sum - s) + term;
    } else {
      comp += (term - s) + sum;
    }
    sum = s;
    if (term < 1e-18 * sum) break;
  }
  const double series = sum + comp;
  return std::sqrt(2.0 / std::numbers::pi) * t * std::exp(-0.5 * t2) * series;
}

double q_cf_large(double t) {
  // Laplace continued fraction for the Mills ratio, modified Lentz iteration:
  // K = 1/(t + 1/(t + 2/(t + 3/(t + ...))))
  constexpr double tiny = 1e-300;
  double f = tiny;
  double c = f;
  double d = 0.0;
  for (int j = 1; j <= 300; ++j) {
    const double a = (j == 1) ? 1.0 : static_cast<double>(j - 1);
    d = t + a * d;
    if (d == 0.0) d = tiny;
    c = t + a / c;
    if (c == 0.0) c = tiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-15) break;
  }
  const double density = std::exp(-0.5 * t * t) / std::sqrt(2.0 * std::numbers::pi);
  return 2.0 * density * f;
}

}  // namespace detail

namespace {

void check_t_domain(double t) {
  if (!std::isfinite(t) || t < 0.0) {
    throw std::domain_error("t must be a finite nonnegative real");
  }
}

}  // namespace

double p_exact(double t) {
  check_t_domain(t);
  if (t < detail::oracle_regime_switch) return detail::p_series_small(t);
  return 1.0 - detail::q_cf_large(t);
}

double q_exact(double t) {
  check_t_domain(t);
  if (t < detail::oracle_regime_switch) return 1.0 - detail::p_series_small(t);
  return detail::q_cf_large(t);
}

}  // namespace gsum
