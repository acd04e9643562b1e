#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "gsum/approx.hpp"
#include "gsum/geometry.hpp"

namespace gsum {

// Uniform evaluation grid t = t_min + i * step for i = 0 .. point_count() - 1.
struct GridSpec {
  double t_min = 0.0;
  double t_max = 8.0;
  double step = 1.0 / 512.0;

  std::size_t point_count() const;
  double point(std::size_t i) const { return t_min + static_cast<double>(i) * step; }
};

struct ErrorReport {
  double max_abs_dev = 0.0;
  double argmax_t = 0.0;
  GridSpec grid;
  bool refined = false;
};

// Signed deviation p_approx(params, t) - p_exact(t).
double deviation_at(const ParameterSet& params, double t);

// Sup of |deviation_at| over the grid, optionally refined by a golden-section
// search around the grid argmax. Ties resolve toward smaller t. The result is
// independent of the thread count.
ErrorReport max_deviation(const ParameterSet& params, const GridSpec& grid = {},
                          bool refine = true, int threads = 1);

struct ConvergenceRow {
  int p = 0;
  std::int64_t n = 0;
  double abs_dev = 0.0;
};

// |deviation_at(upper_boundary_params(base, p), t0)| for each depth in range.
std::vector<ConvergenceRow> convergence_table(int base, int p_min, int p_max,
                                              double t0 = 1.0668, int threads = 1);

// Term-by-term envelope width (1/N) sum_n (e^(-k_min^2 t^2/2) - e^(-k_max^2 t^2/2));
// telescopes to (e^(-t^2/2) - e^(-t^2)) / N.
double telescoped_range(const Scheme& scheme, double t);

// Numeric maximum of (e^(-t^2/2) - e^(-t^2)) sqrt(1 - e^(-t^2/2)) over [0, 10].
// Checked internally against sqrt(108/3125) + 1e-9.
double bound_constant_check();

struct TDistribution {
  double t_min = 0.0;
  double t_max = 4.0;
};

struct BenchResult {
  double ns_per_eval_approx = 0.0;
  double ns_per_eval_exact = 0.0;
  double speedup = 0.0;
  double dispersion_approx = 0.0;
  double dispersion_exact = 0.0;
  bool low_sample_warning = false;
};

// Median-of-batches wall-clock timing of p_approx vs p_exact over a shared
// wheel of uniform random arguments. Single-threaded by contract.
BenchResult bench(const ParameterSet& params, std::uint64_t n_evals,
                  TDistribution dist = {});

}  // namespace gsum
