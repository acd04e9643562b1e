#include "gsum/approx.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace gsum {
namespace {

void check_t(double t) {
  if (!std::isfinite(t) || t < 0.0) {
    throw std::domain_error("t must be a finite nonnegative real");
  }
}

}  // namespace

ParameterSet::ParameterSet(std::vector<double> k, std::vector<double> w,
                           std::optional<Scheme> scheme_tag)
    : k_(std::move(k)), w_(std::move(w)), scheme_(std::move(scheme_tag)) {
  if (k_.empty()) {
    throw std::invalid_argument("parameter set must contain at least one width");
  }
  if (k_.size() != w_.size()) {
    throw std::invalid_argument("widths and weights must have equal length");
  }
  const double upper = std::sqrt(2.0) + endpoint_tolerance;
  double w_sum = 0.0;
  for (std::size_t i = 0; i < k_.size(); ++i) {
    if (!std::isfinite(k_[i]) || k_[i] < 1.0 - endpoint_tolerance || k_[i] > upper) {
      throw std::invalid_argument("each width must lie in [1, sqrt(2)]");
    }
    if (i > 0 && !(k_[i] > k_[i - 1])) {
      throw std::invalid_argument("widths must be strictly increasing");
    }
    if (!std::isfinite(w_[i]) || w_[i] <= 0.0) {
      throw std::invalid_argument("weights must be positive");
    }
    w_sum += w_[i];
  }
  if (std::abs(w_sum - 1.0) > 1e-12) {
    throw std::invalid_argument("weights must sum to 1 within 1e-12");
  }
  k_sq_.resize(k_.size());
  for (std::size_t i = 0; i < k_.size(); ++i) k_sq_[i] = k_[i] * k_[i];
}

ParameterSet ParameterSet::uniform(std::vector<double> k, std::optional<Scheme> scheme_tag) {
  const std::size_t n = k.size();
  std::vector<double> w(n, n == 0 ? 1.0 : 1.0 / static_cast<double>(n));
  return ParameterSet(std::move(k), std::move(w), std::move(scheme_tag));
}

double p_approx(const ParameterSet& params, double t) {
  check_t(t);
  const double half_t2 = 0.5 * t * t;
  const auto& w = params.w();
  const auto& k_sq = params.k_squared();
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    acc += w[i] * std::exp(-k_sq[i] * half_t2);
  }
  const double radicand = 1.0 - acc;
  return radicand > 0.0 ? std::sqrt(radicand) : 0.0;
}

double p_leading(double k, double t) {
  if (!std::isfinite(k) || k < 1.0 - endpoint_tolerance ||
      k > std::sqrt(2.0) + endpoint_tolerance) {
    throw std::domain_error("leading width k must lie in [1, sqrt(2)]");
  }
  check_t(t);
  const double radicand = 1.0 - std::exp(-0.5 * k * k * t * t);
  return radicand > 0.0 ? std::sqrt(radicand) : 0.0;
}

EnvelopeRange envelope_range(double t) {
  check_t(t);
  const double p_m = p_leading(1.0, t);
  const double p_M = p_leading(k_upper_envelope, t);
  return {p_m, p_M, p_M - p_m};
}

ShentonComplements shenton_complements(double t) {
  check_t(t);
  const double e = std::exp(-0.5 * t * t);
  const double q_high =
      4.0 * std::sqrt(2.0 / std::numbers::pi) * e / (3.0 * t + std::sqrt(t * t + 8.0));
  // sqrt(t^2 + 4) - t rewritten to avoid cancellation at large t
  const double diff = 4.0 / (std::sqrt(t * t + 4.0) + t);
  const double q_low = diff * e / std::sqrt(2.0 * std::numbers::pi);
  return {q_low, q_high};
}

ShentonBounds shenton_bounds(double t) {
  const ShentonComplements q = shenton_complements(t);
  return {1.0 - q.q_high, 1.0 - q.q_low};
}

}  // namespace gsum
