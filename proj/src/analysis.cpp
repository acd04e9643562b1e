#include "gsum/analysis.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

#include "gsum/detail/golden.hpp"
#include "gsum/detail/rng.hpp"
#include "gsum/fit.hpp"
#include "gsum/oracle.hpp"

namespace gsum {
namespace {

struct GridBest {
  double val = -1.0;
  std::size_t idx = 0;
};

// Merge rule (larger value, then smaller index) makes the result independent
// of how the index range was chunked across threads.
GridBest merge_best(const GridBest& a, const GridBest& b) {
  if (b.val > a.val || (b.val == a.val && b.idx < a.idx)) return b;
  return a;
}

int clamp_threads(int threads) { return std::clamp(threads, 1, 256); }

}  // namespace

std::size_t GridSpec::point_count() const {
  if (!std::isfinite(t_min) || !std::isfinite(t_max) || !(step > 0.0) || t_max < t_min) {
    return 0;
  }
  const double span = (t_max - t_min) / step;
  return static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
}

double deviation_at(const ParameterSet& params, double t) {
  return p_approx(params, t) - p_exact(t);
}

ErrorReport max_deviation(const ParameterSet& params, const GridSpec& grid, bool refine,
                          int threads) {
  const std::size_t count = grid.point_count();
  if (count == 0) {
    throw std::invalid_argument("scan grid is empty");
  }

  auto scan_range = [&](std::size_t lo, std::size_t hi) {
    GridBest best;
    for (std::size_t i = lo; i < hi; ++i) {
      const double d = std::abs(deviation_at(params, grid.point(i)));
      if (d > best.val) {
        best.val = d;
        best.idx = i;
      }
    }
    return best;
  };

  const int n_threads = clamp_threads(threads);
  GridBest best;
  if (n_threads == 1 || count < 2 * static_cast<std::size_t>(n_threads)) {
    best = scan_range(0, count);
  } else {
    std::vector<GridBest> parts(static_cast<std::size_t>(n_threads));
    std::vector<std::thread> workers;
    const std::size_t chunk = (count + n_threads - 1) / n_threads;
    for (int w = 0; w < n_threads; ++w) {
      const std::size_t lo = chunk * static_cast<std::size_t>(w);
      const std::size_t hi = std::min(count, lo + chunk);
      if (lo >= hi) break;
      workers.emplace_back(
          [&parts, &scan_range, w, lo, hi] { parts[static_cast<std::size_t>(w)] = scan_range(lo, hi); });
    }
    for (auto& worker : workers) worker.join();
    for (const auto& part : parts) best = merge_best(best, part);
  }

  double max_val = best.val;
  double arg = grid.point(best.idx);
  if (refine) {
    const double lo = best.idx > 0 ? grid.point(best.idx - 1) : grid.point(0);
    const double hi = best.idx + 1 < count ? grid.point(best.idx + 1) : grid.point(count - 1);
    if (hi > lo) {
      const auto [x, v] = detail::golden_max(
          [&](double t) { return std::abs(deviation_at(params, t)); }, lo, hi, 1e-12);
      if (v > max_val) {
        max_val = v;
        arg = x;
      }
    }
  }
  return {max_val, arg, grid, refine};
}

std::vector<ConvergenceRow> convergence_table(int base, int p_min, int p_max, double t0,
                                              int threads) {
  if (p_min < 0 || p_max < p_min) {
    throw std::invalid_argument("depth range must satisfy 0 <= p_min <= p_max");
  }
  const Scheme base_probe(base, 0);
  (void)base_probe;

  const int rows = p_max - p_min + 1;
  std::vector<ConvergenceRow> out(static_cast<std::size_t>(rows));
  auto compute = [&](int lo, int hi) {
    for (int r = lo; r < hi; ++r) {
      const Scheme scheme(base, p_min + r);
      const ParameterSet params = upper_boundary_params(scheme);
      out[static_cast<std::size_t>(r)] = {p_min + r, scheme.size(),
                                          std::abs(deviation_at(params, t0))};
    }
  };

  const int n_threads = std::min(clamp_threads(threads), rows);
  if (n_threads == 1) {
    compute(0, rows);
  } else {
    std::vector<std::thread> workers;
    const int chunk = (rows + n_threads - 1) / n_threads;
    for (int w = 0; w < n_threads; ++w) {
      const int lo = chunk * w;
      const int hi = std::min(rows, lo + chunk);
      if (lo >= hi) break;
      workers.emplace_back([&compute, lo, hi] { compute(lo, hi); });
    }
    for (auto& worker : workers) worker.join();
  }
  return out;
}

double telescoped_range(const Scheme& scheme, double t) {
  if (!std::isfinite(t) || t < 0.0) {
    throw std::domain_error("t must be a finite nonnegative real");
  }
  const BoundTable table = bounds(scheme);
  const double half_t2 = 0.5 * t * t;
  const double inv_n = 1.0 / static_cast<double>(table.size());
  double acc = 0.0;
  for (std::size_t n = 0; n < table.size(); ++n) {
    const double lo = table.lower(n);
    const double hi = table.upper(n);
    acc += inv_n * (std::exp(-lo * lo * half_t2) - std::exp(-hi * hi * half_t2));
  }
  return acc;
}

double bound_constant_check() {
  auto g = [](double t) {
    const double t2 = t * t;
    const double h = std::exp(-0.5 * t2) - std::exp(-t2);
    const double r = 1.0 - std::exp(-0.5 * t2);
    return h * std::sqrt(r > 0.0 ? r : 0.0);
  };
  double best_t = 0.0;
  double best_v = 0.0;
  for (int i = 0; i <= 10000; ++i) {
    const double t = 10.0 * static_cast<double>(i) / 10000.0;
    const double v = g(t);
    if (v > best_v) {
      best_v = v;
      best_t = t;
    }
  }
  const auto [x, v] = detail::golden_max(g, std::max(0.0, best_t - 1e-3),
                                         std::min(10.0, best_t + 1e-3), 1e-12);
  (void)x;
  if (v > best_v) best_v = v;
  if (best_v > std::sqrt(108.0 / 3125.0) + 1e-9) {
    throw std::logic_error("envelope bound constant check failed");
  }
  return best_v;
}

BenchResult bench(const ParameterSet& params, std::uint64_t n_evals, TDistribution dist) {
  if (n_evals == 0) {
    throw std::invalid_argument("bench requires at least one evaluation");
  }
  if (!std::isfinite(dist.t_min) || !std::isfinite(dist.t_max) || dist.t_min < 0.0 ||
      !(dist.t_max > dist.t_min)) {
    throw std::invalid_argument("bench t distribution must satisfy 0 <= t_min < t_max");
  }

  BenchResult result;
  result.low_sample_warning = n_evals < 100000;

  constexpr std::size_t wheel_size = 4096;
  constexpr std::uint64_t wheel_seed = 0x243F6A8885A308D3ULL;
  std::vector<double> wheel(wheel_size);
  detail::Xoshiro256pp rng(wheel_seed);
  for (auto& t : wheel) t = dist.t_min + rng.uniform01() * (dist.t_max - dist.t_min);

  constexpr int n_batches = 5;
  const std::uint64_t per_batch = std::max<std::uint64_t>(1, n_evals / n_batches);

  volatile double sink = 0.0;
  auto time_path = [&](auto&& f, double& median_ns, double& dispersion) {
    double acc = 0.0;
    const std::uint64_t warmup = std::min<std::uint64_t>(per_batch, wheel_size * 8);
    for (std::uint64_t i = 0; i < warmup; ++i) acc += f(wheel[i & (wheel_size - 1)]);
    sink = sink + acc;

    std::array<double, n_batches> ns{};
    for (int b = 0; b < n_batches; ++b) {
      acc = 0.0;
      const auto start = std::chrono::steady_clock::now();
      for (std::uint64_t i = 0; i < per_batch; ++i) acc += f(wheel[i & (wheel_size - 1)]);
      const auto stop = std::chrono::steady_clock::now();
      sink = sink + acc;
      ns[static_cast<std::size_t>(b)] =
          std::chrono::duration<double, std::nano>(stop - start).count() /
          static_cast<double>(per_batch);
    }
    std::sort(ns.begin(), ns.end());
    median_ns = ns[n_batches / 2];
    dispersion = median_ns > 0.0 ? (ns[n_batches - 1] - ns[0]) / median_ns : 0.0;
  };

  time_path([&](double t) { return p_approx(params, t); }, result.ns_per_eval_approx,
            result.dispersion_approx);
  time_path([](double t) { return p_exact(t); }, result.ns_per_eval_exact,
            result.dispersion_exact);
  result.speedup = result.ns_per_eval_exact / result.ns_per_eval_approx;
  return result;
}

}  // namespace gsum
