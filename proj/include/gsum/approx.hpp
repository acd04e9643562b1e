#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "gsum/geometry.hpp"

namespace gsum {

// Upper envelope width constant 2/sqrt(pi).
inline constexpr double k_upper_envelope = 1.1283791670955126;

// Widths and convex weights of a sum-of-Gaussians approximant.
// Immutable after construction; squared widths are cached for evaluation.
class ParameterSet {
 public:
  ParameterSet(std::vector<double> k, std::vector<double> w,
               std::optional<Scheme> scheme_tag = std::nullopt);
  static ParameterSet uniform(std::vector<double> k,
                              std::optional<Scheme> scheme_tag = std::nullopt);

  std::size_t size() const { return k_.size(); }
  const std::vector<double>& k() const { return k_; }
  const std::vector<double>& w() const { return w_; }
  const std::vector<double>& k_squared() const { return k_sq_; }
  const std::optional<Scheme>& scheme_tag() const { return scheme_; }

 private:
  std::vector<double> k_;
  std::vector<double> w_;
  std::vector<double> k_sq_;
  std::optional<Scheme> scheme_;
};

// sqrt(1 - sum_n w_n e^(-k_n^2 t^2 / 2)), radicand clamped at 0.
double p_approx(const ParameterSet& params, double t);

// Single-width special case, k in [1, sqrt 2].
double p_leading(double k, double t);

struct EnvelopeRange {
  double p_m = 0.0;
  double p_M = 0.0;
  double range = 0.0;
};

// Lower and upper envelopes with k = 1 and k = 2/sqrt(pi), and their gap.
EnvelopeRange envelope_range(double t);

struct ShentonBounds {
  double p_m = 0.0;
  double p_M = 0.0;
};

ShentonBounds shenton_bounds(double t);

// Complements (1 - p_M, 1 - p_m) evaluated without cancellation at large t.
struct ShentonComplements {
  double q_low = 0.0;
  double q_high = 0.0;
};

ShentonComplements shenton_complements(double t);

}  // namespace gsum
