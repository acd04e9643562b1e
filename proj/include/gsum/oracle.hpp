#pragma once

namespace gsum {

// Probability mass of the standard normal distribution on [-t, t].
// Accuracy target: absolute error below 1e-14 for all finite t >= 0.
double p_exact(double t);

// Complement 1 - p_exact(t), evaluated to high relative accuracy for large t.
double q_exact(double t);

namespace detail {

// Crossover between the series and continued-fraction evaluators.
inline constexpr double oracle_regime_switch = 3.0;

// Scaled power series; accurate for t up to roughly 6.
double p_series_small(double t);

// Complement via the Laplace continued fraction; accurate for t >= 1.5.
double q_cf_large(double t);

}  // namespace detail

}  // namespace gsum
