#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "gsum/analysis.hpp"
#include "gsum/approx.hpp"
#include "gsum/geometry.hpp"

namespace gsum {

struct FitConfig {
  std::optional<std::vector<double>> nodes;
  GridSpec scan_grid;
  std::uint64_t iterations = 512;
  std::uint64_t seed = 1;
  bool refine = true;
};

// Solve the interpolation system Q(t_i) = 0 by nested elimination: each level
// fixes one width as a function of the outer ones via bracketed bisection.
// Throws NoSolution when no root lies inside the admissible box.
ParameterSet fit_nodes(const BoundTable& table, const std::vector<double>& weights,
                       const std::vector<double>& nodes);

// Seeded uniform random search inside the bound table, keeping the candidate
// with the smallest sup-norm deviation over the scan grid; optional local
// refinement. Deterministic for a fixed seed, independent of thread count.
std::pair<ParameterSet, ErrorReport> fit_random(const BoundTable& table,
                                                const std::vector<double>& weights,
                                                const FitConfig& config,
                                                int threads = 1);

// Canonical convergence-analysis choice: every width at its interval upper
// endpoint, uniform weights.
ParameterSet upper_boundary_params(const Scheme& scheme);

}  // namespace gsum
