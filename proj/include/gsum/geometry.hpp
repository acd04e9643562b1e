#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace gsum {

// Endpoint tolerance shared by all closed-interval membership checks.
inline constexpr double endpoint_tolerance = 1e-12;

// Partition scheme with N = base^depth chained width intervals.
class Scheme {
 public:
  Scheme(int base, int depth);

  int base() const { return base_; }
  int depth() const { return depth_; }
  std::int64_t size() const { return size_; }

 private:
  int base_;
  int depth_;
  std::int64_t size_;
};

// Chained closed intervals [k_min, k_max] constraining each width parameter.
class BoundTable {
 public:
  static BoundTable from_scheme(const Scheme& scheme);
  // Custom chain from explicit endpoints, strictly increasing within [1, sqrt 2].
  static BoundTable from_endpoints(std::vector<double> endpoints);

  std::size_t size() const { return endpoints_.size() - 1; }
  double lower(std::size_t n) const { return endpoints_[n]; }
  double upper(std::size_t n) const { return endpoints_[n + 1]; }
  const std::vector<double>& endpoints() const { return endpoints_; }
  const std::optional<Scheme>& scheme() const { return scheme_; }

 private:
  BoundTable(std::vector<double> endpoints, std::optional<Scheme> scheme);

  std::vector<double> endpoints_;
  std::optional<Scheme> scheme_;
};

BoundTable bounds(const Scheme& scheme);

class ParameterSet;

// True iff every width lies in its interval, closed with endpoint tolerance.
bool validate(const ParameterSet& params, const BoundTable& table);

}  // namespace gsum
