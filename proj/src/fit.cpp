#include "gsum/fit.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "gsum/detail/rng.hpp"
#include "gsum/errors.hpp"
#include "gsum/oracle.hpp"

namespace gsum {
namespace {

void check_weights(const std::vector<double>& w, std::size_t n) {
  if (w.size() != n) {
    throw std::invalid_argument("weights length must match the bound table");
  }
  double sum = 0.0;
  for (double x : w) {
    if (!std::isfinite(x) || x <= 0.0) {
      throw std::invalid_argument("weights must be finite and positive");
    }
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw std::invalid_argument("weights must sum to 1");
  }
}

// Interpolation residual R_eq(k) = sum_n w_n e^(-k_n^2 t_eq^2/2) - (1 - P(t_eq)^2).
// Strictly decreasing in every component, which makes the single-variable
// slices bracketable by sign.
struct NodeSystem {
  const BoundTable* table = nullptr;
  std::vector<double> w;
  std::vector<double> half_t2;
  std::vector<double> target;

  double resid(const std::vector<double>& k, std::size_t eq) const {
    double s = 0.0;
    for (std::size_t i = 0; i < k.size(); ++i) {
      s += w[i] * std::exp(-k[i] * k[i] * half_t2[eq]);
    }
    return s - target[eq];
  }
};

constexpr int scan_cells = 48;
constexpr int bisect_iters = 200;
constexpr double bisect_width = 1e-13;

// Equation 0 in k_0 alone, all other widths fixed in kbuf. Bisection on the
// monotone slice, then one guarded Newton step from a central difference.
std::optional<double> solve_leaf(const NodeSystem& sys, std::vector<double>& kbuf) {
  const BoundTable& table = *sys.table;
  const double lo = table.lower(0);
  const double hi = table.upper(0);
  auto f = [&](double x) {
    kbuf[0] = x;
    return sys.resid(kbuf, 0);
  };

  const double fa = f(lo);
  if (fa == 0.0) {
    kbuf[0] = lo;
    return lo;
  }
  const double fb = f(hi);
  if (fb == 0.0) {
    kbuf[0] = hi;
    return hi;
  }
  if (fa < 0.0 || fb > 0.0) return std::nullopt;

  double a = lo;
  double b = hi;
  for (int it = 0; it < bisect_iters && (b - a) > bisect_width; ++it) {
    const double mid = 0.5 * (a + b);
    const double fm = f(mid);
    if (fm == 0.0) {
      a = mid;
      b = mid;
      break;
    }
    if (fm > 0.0) {
      a = mid;
    } else {
      b = mid;
    }
  }

  double x = 0.5 * (a + b);
  const double fx = f(x);
  const double xl = std::max(lo, x - 1e-7);
  const double xr = std::min(hi, x + 1e-7);
  if (xr > xl) {
    const double d = (f(xr) - f(xl)) / (xr - xl);
    if (std::isfinite(d) && d != 0.0) {
      const double xn = x - fx / d;
      if (xn >= lo && xn <= hi && std::abs(f(xn)) <= std::abs(fx)) x = xn;
    }
  }
  kbuf[0] = x;
  return x;
}

// All solutions of equations 0 .. m-1 in the widths k_0 .. k_{m-1}, with
// k_m .. k_{N-1} held fixed in kbuf. Each level scans its own width over its
// interval, recursively solves the inner subsystem at every scan point, and
// bisects sign changes of the level residual separately per solution branch.
// Branch indices refer to the lexicographically sorted inner solution list.
std::vector<std::vector<double>> solve_prefix(const NodeSystem& sys, std::size_t m,
                                              std::vector<double>& kbuf) {
  std::vector<std::vector<double>> found;
  if (m == 1) {
    if (auto x = solve_leaf(sys, kbuf)) found.push_back({*x});
    return found;
  }

  const BoundTable& table = *sys.table;
  const std::size_t v = m - 1;
  const double lo = table.lower(v);
  const double hi = table.upper(v);

  auto branch_resids = [&](double x) {
    kbuf[v] = x;
    auto inner = solve_prefix(sys, v, kbuf);
    std::vector<double> out(inner.size());
    for (std::size_t b = 0; b < inner.size(); ++b) {
      std::copy(inner[b].begin(), inner[b].end(), kbuf.begin());
      kbuf[v] = x;
      out[b] = sys.resid(kbuf, v);
    }
    return out;
  };

  auto eval_branch = [&](double x, std::size_t b) -> std::optional<double> {
    auto r = branch_resids(x);
    if (b >= r.size()) return std::nullopt;
    return r[b];
  };

  auto accept = [&](double x, std::size_t b) {
    kbuf[v] = x;
    auto inner = solve_prefix(sys, v, kbuf);
    if (b < inner.size()) {
      std::vector<double> cand = std::move(inner[b]);
      cand.push_back(x);
      found.push_back(std::move(cand));
    }
  };

  std::vector<double> xs(scan_cells + 1);
  std::vector<std::vector<double>> rs(scan_cells + 1);
  for (int j = 0; j <= scan_cells; ++j) {
    xs[static_cast<std::size_t>(j)] =
        lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(scan_cells);
    rs[static_cast<std::size_t>(j)] = branch_resids(xs[static_cast<std::size_t>(j)]);
  }

  std::size_t max_branches = 0;
  for (const auto& r : rs) max_branches = std::max(max_branches, r.size());

  const std::size_t cells = static_cast<std::size_t>(scan_cells);
  for (std::size_t b = 0; b < max_branches; ++b) {
    for (std::size_t j = 0; j < cells; ++j) {
      if (b >= rs[j].size() || b >= rs[j + 1].size()) continue;
      const double r0 = rs[j][b];
      const double r1 = rs[j + 1][b];
      if (r0 == 0.0) {
        accept(xs[j], b);
        continue;
      }
      if (r1 == 0.0) {
        if (j + 1 == cells) accept(xs[j + 1], b);
        continue;
      }
      if ((r0 > 0.0) == (r1 > 0.0)) continue;

      double a = xs[j];
      double bb = xs[j + 1];
      double ra = r0;
      for (int it = 0; it < bisect_iters && (bb - a) > bisect_width; ++it) {
        const double mid = 0.5 * (a + bb);
        const auto rm = eval_branch(mid, b);
        if (!rm) {
          // The branch vanished at the midpoint; keep the half that still
          // carries it at the bracket end.
          bb = mid;
          continue;
        }
        if (*rm == 0.0) {
          a = mid;
          bb = mid;
          break;
        }
        if ((*rm > 0.0) == (ra > 0.0)) {
          a = mid;
          ra = *rm;
        } else {
          bb = mid;
        }
      }
      accept(0.5 * (a + bb), b);
    }
  }

  std::sort(found.begin(), found.end());
  return found;
}

// Random-search candidate ranked by sup deviation, ties broken by the
// lexicographically smaller width vector.
struct Candidate {
  double err = 0.0;
  std::vector<double> k;
};

bool candidate_less(const Candidate& a, const Candidate& b) {
  if (a.err != b.err) return a.err < b.err;
  return a.k < b.k;
}

constexpr std::size_t top_keep = 3;

void push_top(std::vector<Candidate>& tops, Candidate c) {
  tops.push_back(std::move(c));
  std::sort(tops.begin(), tops.end(), candidate_less);
  if (tops.size() > top_keep) tops.resize(top_keep);
}

// Grid-only sup deviation with the exact values precomputed once.
struct GridObjective {
  std::vector<double> w;
  std::vector<double> half_t2;
  std::vector<double> p_ref;

  double operator()(const std::vector<double>& k) const {
    double worst = 0.0;
    for (std::size_t i = 0; i < half_t2.size(); ++i) {
      double s = 0.0;
      for (std::size_t n = 0; n < k.size(); ++n) {
        s += w[n] * std::exp(-k[n] * k[n] * half_t2[i]);
      }
      const double radicand = 1.0 - s;
      const double val = radicand > 0.0 ? std::sqrt(radicand) : 0.0;
      const double dev = std::abs(val - p_ref[i]);
      if (dev > worst) worst = dev;
    }
    return worst;
  }
};

struct SimplexPoint {
  double f = 0.0;
  std::vector<double> x;
};

bool simplex_less(const SimplexPoint& a, const SimplexPoint& b) {
  if (a.f != b.f) return a.f < b.f;
  return a.x < b.x;
}

struct NMResult {
  std::vector<double> x;
  double f = 0.0;
};

// Deterministic Nelder-Mead restricted to the box, with width ordering
// enforced through a penalty value. Fully tie-broken so the trajectory does
// not depend on evaluation order.
NMResult nelder_mead(const GridObjective& obj, const std::vector<double>& lo,
                     const std::vector<double>& hi, const std::vector<double>& x0,
                     double scale, int max_iter = 1500) {
  const std::size_t d = x0.size();
  auto clamp_vec = [&](std::vector<double> x) {
    for (std::size_t j = 0; j < d; ++j) x[j] = std::clamp(x[j], lo[j], hi[j]);
    return x;
  };
  auto eval = [&](const std::vector<double>& x) {
    for (std::size_t j = 0; j + 1 < d; ++j) {
      if (!(x[j] < x[j + 1])) return 1e9;
    }
    return obj(x);
  };

  std::vector<SimplexPoint> s;
  s.reserve(d + 1);
  {
    std::vector<double> v0 = clamp_vec(x0);
    s.push_back({eval(v0), v0});
    for (std::size_t j = 0; j < d; ++j) {
      std::vector<double> v = v0;
      const double off = scale * (hi[j] - lo[j]);
      v[j] = v0[j] + off;
      if (v[j] > hi[j]) v[j] = v0[j] - off;
      v = clamp_vec(std::move(v));
      s.push_back({eval(v), v});
    }
  }
  std::stable_sort(s.begin(), s.end(), simplex_less);

  auto shrink = [&] {
    for (std::size_t i = 1; i <= d; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        s[i].x[j] = s[0].x[j] + 0.5 * (s[i].x[j] - s[0].x[j]);
      }
      s[i].x = clamp_vec(std::move(s[i].x));
      s[i].f = eval(s[i].x);
    }
  };

  for (int iter = 0; iter < max_iter; ++iter) {
    double diam = 0.0;
    for (std::size_t i = 1; i <= d; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        diam = std::max(diam, std::abs(s[i].x[j] - s[0].x[j]));
      }
    }
    if (diam < 1e-12 && s[d].f - s[0].f < 1e-15) break;

    std::vector<double> centroid(d, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) centroid[j] += s[i].x[j];
    }
    for (std::size_t j = 0; j < d; ++j) centroid[j] /= static_cast<double>(d);

    auto mix = [&](double coef) {
      std::vector<double> x(d);
      for (std::size_t j = 0; j < d; ++j) {
        x[j] = centroid[j] + coef * (s[d].x[j] - centroid[j]);
      }
      return clamp_vec(std::move(x));
    };

    const std::vector<double> xr = mix(-1.0);
    const double fr = eval(xr);
    if (fr < s[0].f) {
      const std::vector<double> xe = mix(-2.0);
      const double fe = eval(xe);
      if (fe < fr) {
        s[d] = {fe, xe};
      } else {
        s[d] = {fr, xr};
      }
    } else if (fr < s[d - 1].f) {
      s[d] = {fr, xr};
    } else if (fr < s[d].f) {
      const std::vector<double> xc = mix(-0.5);
      const double fc = eval(xc);
      if (fc <= fr) {
        s[d] = {fc, xc};
      } else {
        shrink();
      }
    } else {
      const std::vector<double> xc = mix(0.5);
      const double fc = eval(xc);
      if (fc < s[d].f) {
        s[d] = {fc, xc};
      } else {
        shrink();
      }
    }
    std::stable_sort(s.begin(), s.end(), simplex_less);
  }
  return {s[0].x, s[0].f};
}

}  // namespace

ParameterSet fit_nodes(const BoundTable& table, const std::vector<double>& weights,
                       const std::vector<double>& nodes) {
  const std::size_t n = table.size();
  check_weights(weights, n);
  if (nodes.size() != n) {
    throw std::invalid_argument("node count must match the bound table");
  }
  for (double t : nodes) {
    if (!std::isfinite(t) || t <= 0.0) {
      throw std::invalid_argument("nodes must be finite and positive");
    }
  }
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    if (!(nodes[i] < nodes[i + 1])) {
      throw std::invalid_argument("nodes must be strictly increasing");
    }
  }

  NodeSystem sys;
  sys.table = &table;
  sys.w = weights;
  sys.half_t2.resize(n);
  sys.target.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    sys.half_t2[i] = 0.5 * nodes[i] * nodes[i];
    const double p = p_exact(nodes[i]);
    sys.target[i] = 1.0 - p * p;
  }

  std::vector<double> kbuf(n, 0.0);
  auto sols = solve_prefix(sys, n, kbuf);

  std::vector<std::vector<double>> verified;
  for (auto& k : sols) {
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      if (k[i] < table.lower(i) - endpoint_tolerance ||
          k[i] > table.upper(i) + endpoint_tolerance) {
        ok = false;
      }
    }
    for (std::size_t i = 0; i + 1 < n && ok; ++i) {
      if (!(k[i] < k[i + 1])) ok = false;
    }
    for (std::size_t eq = 0; eq < n && ok; ++eq) {
      if (std::abs(sys.resid(k, eq)) > 1e-10) ok = false;
    }
    if (!ok) continue;
    bool dup = false;
    for (const auto& seen : verified) {
      double dist = 0.0;
      for (std::size_t i = 0; i < n; ++i) dist = std::max(dist, std::abs(seen[i] - k[i]));
      if (dist < 1e-9) {
        dup = true;
        break;
      }
    }
    if (!dup) verified.push_back(std::move(k));
  }

  if (verified.empty()) {
    std::string msg = "no node solution inside the admissible box";
    if (n <= 6) {
      msg += "; residual signs at the box corners:";
      for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        for (std::size_t i = 0; i < n; ++i) {
          kbuf[i] = ((mask >> i) & 1) != 0 ? table.upper(i) : table.lower(i);
        }
        msg += ' ';
        for (std::size_t i = 0; i < n; ++i) {
          msg += ((mask >> i) & 1) != 0 ? 'h' : 'l';
        }
        msg += ':';
        for (std::size_t eq = 0; eq < n; ++eq) {
          const double r = sys.resid(kbuf, eq);
          msg += r > 0.0 ? '+' : (r < 0.0 ? '-' : '0');
        }
      }
    }
    throw NoSolution(msg);
  }

  std::sort(verified.begin(), verified.end());
  return ParameterSet(verified.front(), weights, table.scheme());
}

std::pair<ParameterSet, ErrorReport> fit_random(const BoundTable& table,
                                                const std::vector<double>& weights,
                                                const FitConfig& config, int threads) {
  const std::size_t n = table.size();
  check_weights(weights, n);
  if (config.iterations == 0) {
    throw std::invalid_argument("fit_random requires a positive iteration budget");
  }
  const std::size_t grid_count = config.scan_grid.point_count();
  if (grid_count == 0) {
    throw std::invalid_argument("scan grid is empty");
  }

  GridObjective obj;
  obj.w = weights;
  obj.half_t2.resize(grid_count);
  obj.p_ref.resize(grid_count);
  for (std::size_t i = 0; i < grid_count; ++i) {
    const double t = config.scan_grid.point(i);
    obj.half_t2[i] = 0.5 * t * t;
    obj.p_ref[i] = p_exact(t);
  }

  std::vector<double> lo(n);
  std::vector<double> hi(n);
  for (std::size_t i = 0; i < n; ++i) {
    lo[i] = table.lower(i);
    hi[i] = table.upper(i);
  }

  const int n_threads = std::clamp(threads, 1, 256);

  // Iteration it always draws from the substream seeded with seed + it, so the
  // candidate pool is a pure function of the seed and budget. Workers take
  // strided slices of the iteration range and keep local leaders; merging the
  // local leader lists reproduces the global leaders for any thread count.
  auto worker_tops = [&](int tid) {
    std::vector<Candidate> tops;
    std::vector<double> k(n);
    for (std::uint64_t it = static_cast<std::uint64_t>(tid); it < config.iterations;
         it += static_cast<std::uint64_t>(n_threads)) {
      detail::Xoshiro256pp rng(config.seed + it);
      for (std::size_t i = 0; i < n; ++i) {
        k[i] = lo[i] + rng.uniform01() * (hi[i] - lo[i]);
      }
      bool increasing = true;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        if (!(k[i] < k[i + 1])) {
          increasing = false;
          break;
        }
      }
      push_top(tops, Candidate{increasing ? obj(k) : 1e9, k});
    }
    return tops;
  };

  std::vector<Candidate> tops;
  if (n_threads == 1) {
    tops = worker_tops(0);
  } else {
    std::vector<std::vector<Candidate>> parts(static_cast<std::size_t>(n_threads));
    std::vector<std::thread> workers;
    for (int w = 0; w < n_threads; ++w) {
      workers.emplace_back(
          [&parts, &worker_tops, w] { parts[static_cast<std::size_t>(w)] = worker_tops(w); });
    }
    for (auto& worker : workers) worker.join();
    for (auto& part : parts) {
      for (auto& c : part) push_top(tops, std::move(c));
    }
  }

  Candidate best = tops.front();
  if (config.refine) {
    for (const auto& c : tops) {
      const NMResult coarse = nelder_mead(obj, lo, hi, c.k, 0.05);
      NMResult fine = nelder_mead(obj, lo, hi, coarse.x, 0.005);
      Candidate refined{fine.f, std::move(fine.x)};
      if (candidate_less(refined, best)) best = std::move(refined);
    }
  }

  ParameterSet params(best.k, weights, table.scheme());
  ErrorReport report = max_deviation(params, config.scan_grid, true, threads);
  return {std::move(params), std::move(report)};
}

ParameterSet upper_boundary_params(const Scheme& scheme) {
  const BoundTable table = bounds(scheme);
  std::vector<double> k(table.size());
  for (std::size_t i = 0; i < table.size(); ++i) k[i] = table.upper(i);
  return ParameterSet::uniform(std::move(k), scheme);
}

}  // namespace gsum
