#include "gsum/geometry.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "gsum/approx.hpp"

namespace gsum {

Scheme::Scheme(int base, int depth) : base_(base), depth_(depth), size_(1) {
  if (base != 2 && base != 3) {
    throw std::invalid_argument("scheme base must be 2 or 3");
  }
  if (depth < 0) {
    throw std::invalid_argument("scheme depth must be nonnegative");
  }
  for (int i = 0; i < depth; ++i) {
    if (size_ > std::numeric_limits<std::int64_t>::max() / base) {
      throw std::invalid_argument("scheme size base^depth overflows the index type");
    }
    size_ *= base;
  }
}

BoundTable::BoundTable(std::vector<double> endpoints, std::optional<Scheme> scheme)
    : endpoints_(std::move(endpoints)), scheme_(std::move(scheme)) {}

BoundTable BoundTable::from_scheme(const Scheme& scheme) {
  const std::int64_t n = scheme.size();
  std::vector<double> endpoints(static_cast<std::size_t>(n) + 1);
  const double denom = 4.0 * static_cast<double>(n);
  for (std::int64_t i = 0; i <= n; ++i) {
    endpoints[static_cast<std::size_t>(i)] =
        1.0 / std::cos(std::numbers::pi * static_cast<double>(i) / denom);
  }
  return BoundTable(std::move(endpoints), scheme);
}

BoundTable BoundTable::from_endpoints(std::vector<double> endpoints) {
  if (endpoints.size() < 2) {
    throw std::invalid_argument("bound table needs at least two endpoints");
  }
  for (std::size_t i = 0; i < endpoints.size(); ++i) {
    if (!std::isfinite(endpoints[i])) {
      throw std::invalid_argument("bound table endpoints must be finite");
    }
    if (i > 0 && !(endpoints[i] > endpoints[i - 1])) {
      throw std::invalid_argument("bound table endpoints must be strictly increasing");
    }
  }
  if (endpoints.front() < 1.0 - endpoint_tolerance ||
      endpoints.back() > std::sqrt(2.0) + endpoint_tolerance) {
    throw std::invalid_argument("bound table endpoints must lie within [1, sqrt(2)]");
  }
  return BoundTable(std::move(endpoints), std::nullopt);
}

BoundTable bounds(const Scheme& scheme) { return BoundTable::from_scheme(scheme); }

bool validate(const ParameterSet& params, const BoundTable& table) {
  if (params.size() != table.size()) {
    throw std::invalid_argument("parameter set and bound table lengths differ");
  }
  for (std::size_t i = 0; i < table.size(); ++i) {
    const double k = params.k()[i];
    if (k < table.lower(i) - endpoint_tolerance || k > table.upper(i) + endpoint_tolerance) {
      return false;
    }
  }
  return true;
}

}  // namespace gsum
