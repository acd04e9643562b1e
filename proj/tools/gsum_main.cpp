#include <charconv>
#include <cmath>
#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gsum/analysis.hpp"
#include "gsum/approx.hpp"
#include "gsum/continuum.hpp"
#include "gsum/fit.hpp"
#include "gsum/geometry.hpp"
#include "gsum/oracle.hpp"
#include "gsum/param_io.hpp"

namespace {

using nlohmann::json;

constexpr double k_published_leading = 1.116;

std::string fmt(double x) {
  char buf[40];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  (void)ec;
  return std::string(buf, ptr);
}

std::string trim(const std::string& s) {
  const std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& s) {
  const std::string item = trim(s);
  double value = 0.0;
  const char* last = item.data() + item.size();
  const auto [ptr, ec] = std::from_chars(item.data(), last, value);
  if (item.empty() || ec != std::errc() || ptr != last) {
    throw std::invalid_argument("invalid number '" + s + "'");
  }
  return value;
}

int parse_int(const std::string& s) {
  const std::string item = trim(s);
  int value = 0;
  const char* last = item.data() + item.size();
  const auto [ptr, ec] = std::from_chars(item.data(), last, value);
  if (item.empty() || ec != std::errc() || ptr != last) {
    throw std::invalid_argument("invalid integer '" + s + "'");
  }
  return value;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t next = text.find(sep, pos);
    parts.push_back(
        text.substr(pos, next == std::string::npos ? std::string::npos : next - pos));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return parts;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& part : split(text, ',')) out.push_back(parse_double(part));
  return out;
}

gsum::GridSpec parse_grid(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.size() != 3) {
    throw std::invalid_argument("grid expects lo:hi:step, got '" + spec + "'");
  }
  gsum::GridSpec grid{parse_double(parts[0]), parse_double(parts[1]), parse_double(parts[2])};
  if (grid.point_count() == 0) {
    throw std::invalid_argument("grid '" + spec + "' is empty");
  }
  return grid;
}

std::vector<double> expand_t_spec(const std::string& spec) {
  if (spec.find(':') == std::string::npos) return {parse_double(spec)};
  const gsum::GridSpec grid = parse_grid(spec);
  std::vector<double> out;
  out.reserve(grid.point_count());
  for (std::size_t i = 0; i < grid.point_count(); ++i) out.push_back(grid.point(i));
  return out;
}

std::pair<int, int> parse_p_range(const std::string& spec) {
  const std::size_t dots = spec.find("..");
  if (dots == std::string::npos) {
    const int p = parse_int(spec);
    return {p, p};
  }
  return {parse_int(spec.substr(0, dots)), parse_int(spec.substr(dots + 2))};
}

std::vector<double> resolve_weights(const std::string& arg, std::size_t n) {
  if (arg == "uniform") {
    return std::vector<double>(n, 1.0 / static_cast<double>(n));
  }
  return parse_list(arg);
}

json report_to_json(const gsum::ErrorReport& report) {
  return json{{"max_abs_dev", report.max_abs_dev},
              {"argmax_t", report.argmax_t},
              {"grid",
               {{"t_min", report.grid.t_min},
                {"t_max", report.grid.t_max},
                {"step", report.grid.step}}},
              {"refined", report.refined}};
}

void print_json(const json& j) { std::cout << j.dump(2) << '\n'; }

void print_csv_row(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) std::cout << ',';
    std::cout << cells[i];
  }
  std::cout << '\n';
}

struct EvalOpts {
  std::string t_spec;
  std::string params_arg;
  bool exact = false;
  std::string format = "json";
};

int run_eval(const EvalOpts& o) {
  std::optional<gsum::ParameterSet> params;
  if (!o.params_arg.empty()) params = gsum::load_params_arg(o.params_arg);
  if (!params && !o.exact) {
    std::cerr << "error: eval needs --exact and/or --params\n";
    return 2;
  }
  const std::vector<double> ts = expand_t_spec(o.t_spec);

  if (o.format == "csv") {
    std::vector<std::string> header{"t"};
    if (o.exact) header.push_back("p_exact");
    if (params) header.push_back("p_approx");
    print_csv_row(header);
    for (double t : ts) {
      std::vector<std::string> row{fmt(t)};
      if (o.exact) row.push_back(fmt(gsum::p_exact(t)));
      if (params) row.push_back(fmt(gsum::p_approx(*params, t)));
      print_csv_row(row);
    }
    return 0;
  }

  json j;
  j["t"] = ts;
  if (o.exact) {
    std::vector<double> vals;
    vals.reserve(ts.size());
    for (double t : ts) vals.push_back(gsum::p_exact(t));
    j["p_exact"] = vals;
  }
  if (params) {
    std::vector<double> vals;
    vals.reserve(ts.size());
    for (double t : ts) vals.push_back(gsum::p_approx(*params, t));
    j["p_approx"] = vals;
  }
  print_json(j);
  return 0;
}

struct BoundsOpts {
  int base = 2;
  int depth = 0;
  std::string format = "json";
};

int run_bounds(const BoundsOpts& o) {
  const gsum::Scheme scheme(o.base, o.depth);
  const gsum::BoundTable table = gsum::bounds(scheme);
  if (o.format == "csv") {
    print_csv_row({"index", "endpoint"});
    for (std::size_t i = 0; i < table.endpoints().size(); ++i) {
      print_csv_row({std::to_string(i), fmt(table.endpoints()[i])});
    }
    return 0;
  }
  print_json(json{{"base", o.base},
                  {"depth", o.depth},
                  {"n", static_cast<std::int64_t>(table.size())},
                  {"endpoints", table.endpoints()}});
  return 0;
}

struct FitOpts {
  int base = 2;
  int depth = 0;
  std::string weights_arg = "uniform";
  std::string method = "random";
  std::string nodes_arg;
  std::uint64_t iters = 512;
  std::uint64_t seed = 1;
  bool refine = true;
  std::string grid_arg;
  int threads = 1;
  std::string out_path;
  std::string format = "json";
};

int run_fit(const FitOpts& o) {
  const gsum::Scheme scheme(o.base, o.depth);
  const gsum::BoundTable table = gsum::bounds(scheme);
  const std::vector<double> weights = resolve_weights(o.weights_arg, table.size());
  const gsum::GridSpec grid = o.grid_arg.empty() ? gsum::GridSpec{} : parse_grid(o.grid_arg);

  std::optional<gsum::ParameterSet> params;
  gsum::ErrorReport report;
  json meta{{"scheme", {{"base", o.base}, {"depth", o.depth}}}, {"method", o.method}};

  if (o.method == "nodes") {
    if (o.nodes_arg.empty()) {
      std::cerr << "error: fit --method nodes needs --nodes\n";
      return 2;
    }
    const std::vector<double> nodes = parse_list(o.nodes_arg);
    params = gsum::fit_nodes(table, weights, nodes);
    report = gsum::max_deviation(*params, grid, true, o.threads);
    meta["nodes"] = nodes;
  } else {
    gsum::FitConfig config;
    config.scan_grid = grid;
    config.iterations = o.iters;
    config.seed = o.seed;
    config.refine = o.refine;
    auto [fitted, rep] = gsum::fit_random(table, weights, config, o.threads);
    params = std::move(fitted);
    report = rep;
    meta["iterations"] = o.iters;
    meta["seed"] = o.seed;
    meta["refine"] = o.refine;
  }

  if (!o.out_path.empty()) gsum::save_params(o.out_path, *params, meta);

  if (o.format == "csv") {
    print_csv_row({"n", "k", "w"});
    for (std::size_t i = 0; i < params->size(); ++i) {
      print_csv_row({std::to_string(i), fmt(params->k()[i]), fmt(params->w()[i])});
    }
    return 0;
  }
  print_json(json{{"params", gsum::params_to_json(*params, meta)},
                  {"error_report", report_to_json(report)}});
  return 0;
}

struct ScanOpts {
  std::string params_arg;
  std::string grid_arg;
  int threads = 1;
  std::string format = "json";
};

int run_scan(const ScanOpts& o) {
  const gsum::ParameterSet params = gsum::load_params_arg(o.params_arg);
  const gsum::GridSpec grid = o.grid_arg.empty() ? gsum::GridSpec{} : parse_grid(o.grid_arg);
  const gsum::ErrorReport report = gsum::max_deviation(params, grid, true, o.threads);
  if (o.format == "csv") {
    print_csv_row({"max_abs_dev", "argmax_t"});
    print_csv_row({fmt(report.max_abs_dev), fmt(report.argmax_t)});
    return 0;
  }
  print_json(report_to_json(report));
  return 0;
}

struct TableOpts {
  int base = 2;
  std::string p_range;
  double t0 = 1.0668;
  int threads = 1;
  std::string format = "json";
};

int run_table(const TableOpts& o) {
  const auto [p_min, p_max] = parse_p_range(o.p_range);
  const auto rows = gsum::convergence_table(o.base, p_min, p_max, o.t0, o.threads);
  if (o.format == "csv") {
    print_csv_row({"p", "n", "abs_dev"});
    for (const auto& row : rows) {
      print_csv_row({std::to_string(row.p), std::to_string(row.n), fmt(row.abs_dev)});
    }
    return 0;
  }
  json out{{"base", o.base}, {"t0", o.t0}, {"rows", json::array()}};
  for (const auto& row : rows) {
    out["rows"].push_back(json{{"p", row.p}, {"n", row.n}, {"abs_dev", row.abs_dev}});
  }
  print_json(out);
  return 0;
}

struct BenchOpts {
  std::string params_arg;
  double n_evals = 1e7;
  double t_min = 0.0;
  double t_max = 4.0;
  std::string format = "json";
};

int run_bench(const BenchOpts& o) {
  const gsum::ParameterSet params = gsum::load_params_arg(o.params_arg);
  if (!(o.n_evals >= 0.0) || !std::isfinite(o.n_evals)) {
    throw std::invalid_argument("--n must be a finite nonnegative count");
  }
  const auto result = gsum::bench(params, static_cast<std::uint64_t>(o.n_evals),
                                  gsum::TDistribution{o.t_min, o.t_max});
  if (o.format == "csv") {
    print_csv_row({"ns_per_eval_approx", "ns_per_eval_exact", "speedup", "dispersion_approx",
                   "dispersion_exact", "low_sample_warning"});
    print_csv_row({fmt(result.ns_per_eval_approx), fmt(result.ns_per_eval_exact),
                   fmt(result.speedup), fmt(result.dispersion_approx),
                   fmt(result.dispersion_exact), result.low_sample_warning ? "true" : "false"});
    return 0;
  }
  print_json(json{{"ns_per_eval_approx", result.ns_per_eval_approx},
                  {"ns_per_eval_exact", result.ns_per_eval_exact},
                  {"speedup", result.speedup},
                  {"dispersion_approx", result.dispersion_approx},
                  {"dispersion_exact", result.dispersion_exact},
                  {"low_sample_warning", result.low_sample_warning}});
  return 0;
}

struct ContinuumOpts {
  double t = 0.0;
  int series = 0;
  bool series_set = false;
  std::string format = "json";
};

int run_continuum(const ContinuumOpts& o) {
  const double p_sq = gsum::p_sq_continuum(o.t);
  const double pe = gsum::p_exact(o.t);
  std::optional<gsum::SeriesResult> series;
  if (o.series_set) series = gsum::p_sq_series(o.t, o.series);

  if (o.format == "csv") {
    std::vector<std::string> header{"t", "p_sq_continuum", "p_exact_sq"};
    std::vector<std::string> row{fmt(o.t), fmt(p_sq), fmt(pe * pe)};
    if (series) {
      header.insert(header.end(), {"series_value", "series_bound", "series_informative"});
      row.push_back(fmt(series->value));
      row.push_back(fmt(series->bound));
      row.push_back(series->informative ? "true" : "false");
    }
    print_csv_row(header);
    print_csv_row(row);
    return 0;
  }
  json j{{"t", o.t}, {"p_sq_continuum", p_sq}, {"p_exact_sq", pe * pe}};
  if (series) {
    j["series_value"] = series->value;
    j["series_bound"] = series->bound;
    j["series_informative"] = series->informative;
  }
  print_json(j);
  return 0;
}

struct CompareOpts {
  std::string t_grid = "0:8:0.25";
  std::string params_arg;
  std::string format = "json";
};

int run_compare(const CompareOpts& o) {
  std::optional<gsum::ParameterSet> params;
  if (!o.params_arg.empty()) params = gsum::load_params_arg(o.params_arg);
  const std::vector<double> ts = expand_t_spec(o.t_grid);

  if (o.format == "csv") {
    std::vector<std::string> header{"t",          "p_exact",    "leading", "envelope_m",
                                    "envelope_M", "shenton_m", "shenton_M"};
    if (params) header.push_back("params");
    print_csv_row(header);
    for (double t : ts) {
      const auto env = gsum::envelope_range(t);
      const auto sh = gsum::shenton_bounds(t);
      std::vector<std::string> row{fmt(t),
                                   fmt(gsum::p_exact(t)),
                                   fmt(gsum::p_leading(k_published_leading, t)),
                                   fmt(env.p_m),
                                   fmt(env.p_M),
                                   fmt(sh.p_m),
                                   fmt(sh.p_M)};
      if (params) row.push_back(fmt(gsum::p_approx(*params, t)));
      print_csv_row(row);
    }
    return 0;
  }

  json rows = json::array();
  for (double t : ts) {
    const auto env = gsum::envelope_range(t);
    const auto sh = gsum::shenton_bounds(t);
    json row{{"t", t},
             {"p_exact", gsum::p_exact(t)},
             {"leading", gsum::p_leading(k_published_leading, t)},
             {"envelope_m", env.p_m},
             {"envelope_M", env.p_M},
             {"shenton_m", sh.p_m},
             {"shenton_M", sh.p_M}};
    if (params) row["params"] = gsum::p_approx(*params, t);
    rows.push_back(std::move(row));
  }
  print_json(json{{"rows", std::move(rows)}});
  return 0;
}

void add_format(CLI::App* cmd, std::string& target) {
  cmd->add_option("--format", target, "output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sum-of-Gaussians toolkit for the bounded Gauss integral P(t)"};
  app.require_subcommand(1);

  EvalOpts eval_opts;
  auto* eval_cmd =
      app.add_subcommand("eval", "Evaluate the exact integral and/or an approximant");
  eval_cmd->add_option("--t", eval_opts.t_spec, "t value or lo:hi:step sweep")->required();
  eval_cmd->add_option("--params", eval_opts.params_arg,
                       "parameter file path or inline k=...;w=...");
  eval_cmd->add_flag("--exact", eval_opts.exact, "include exact values");
  add_format(eval_cmd, eval_opts.format);

  BoundsOpts bounds_opts;
  auto* bounds_cmd = app.add_subcommand("bounds", "Print the width interval endpoints");
  bounds_cmd->add_option("--base", bounds_opts.base, "subdivision base")
      ->required()
      ->check(CLI::IsMember({2, 3}));
  bounds_cmd->add_option("--depth", bounds_opts.depth, "subdivision depth p, N = base^p")
      ->required()
      ->check(CLI::NonNegativeNumber);
  add_format(bounds_cmd, bounds_opts.format);

  FitOpts fit_opts;
  auto* fit_cmd = app.add_subcommand("fit", "Fit widths inside the bound table");
  fit_cmd->add_option("--base", fit_opts.base, "subdivision base")
      ->required()
      ->check(CLI::IsMember({2, 3}));
  fit_cmd->add_option("--depth", fit_opts.depth, "subdivision depth p, N = base^p")
      ->required()
      ->check(CLI::NonNegativeNumber);
  fit_cmd->add_option("--weights", fit_opts.weights_arg, "uniform or comma list summing to 1")
      ->capture_default_str();
  fit_cmd->add_option("--method", fit_opts.method, "nodes or random")
      ->check(CLI::IsMember({"nodes", "random"}))
      ->capture_default_str();
  fit_cmd->add_option("--nodes", fit_opts.nodes_arg,
                      "comma list of interpolation nodes (method nodes)");
  fit_cmd->add_option("--iters", fit_opts.iters, "random search budget")->capture_default_str();
  fit_cmd->add_option("--seed", fit_opts.seed, "random search seed")->capture_default_str();
  fit_cmd->add_flag("--refine,!--no-refine", fit_opts.refine, "local refinement after search");
  fit_cmd->add_option("--grid", fit_opts.grid_arg, "scan grid lo:hi:step (default 0:8:1/512)");
  fit_cmd->add_option("--threads", fit_opts.threads, "worker threads (results unchanged)")
      ->check(CLI::PositiveNumber);
  fit_cmd->add_option("--out", fit_opts.out_path, "write fitted parameters to a JSON file");
  add_format(fit_cmd, fit_opts.format);

  ScanOpts scan_opts;
  auto* scan_cmd = app.add_subcommand("scan", "Sup-norm deviation of a parameter set");
  scan_cmd->add_option("--params", scan_opts.params_arg,
                       "parameter file path or inline k=...;w=...")
      ->required();
  scan_cmd->add_option("--grid", scan_opts.grid_arg, "scan grid lo:hi:step (default 0:8:1/512)");
  scan_cmd->add_option("--threads", scan_opts.threads, "worker threads (results unchanged)")
      ->check(CLI::PositiveNumber);
  add_format(scan_cmd, scan_opts.format);

  TableOpts table_opts;
  auto* table_cmd = app.add_subcommand("table", "Convergence table at a fixed t0");
  table_cmd->add_option("--base", table_opts.base, "subdivision base")
      ->required()
      ->check(CLI::IsMember({2, 3}));
  table_cmd->add_option("--p-range", table_opts.p_range, "depth range a..b")->required();
  table_cmd->add_option("--t0", table_opts.t0, "evaluation point")->capture_default_str();
  table_cmd->add_option("--threads", table_opts.threads, "worker threads (results unchanged)")
      ->check(CLI::PositiveNumber);
  add_format(table_cmd, table_opts.format);

  BenchOpts bench_opts;
  auto* bench_cmd = app.add_subcommand("bench", "Time p_approx against p_exact");
  bench_cmd->add_option("--params", bench_opts.params_arg,
                        "parameter file path or inline k=...;w=...")
      ->required();
  bench_cmd->add_option("--n", bench_opts.n_evals, "total evaluations per path")
      ->capture_default_str();
  bench_cmd->add_option("--t-min", bench_opts.t_min, "argument range lower end")
      ->capture_default_str();
  bench_cmd->add_option("--t-max", bench_opts.t_max, "argument range upper end")
      ->capture_default_str();
  add_format(bench_cmd, bench_opts.format);

  ContinuumOpts cont_opts;
  auto* cont_cmd = app.add_subcommand("continuum", "Continuum limit and angular series");
  cont_cmd->add_option("--t", cont_opts.t, "evaluation point")->required();
  cont_cmd->add_option("--series", cont_opts.series, "series term count N")
      ->check(CLI::PositiveNumber);
  add_format(cont_cmd, cont_opts.format);

  CompareOpts comp_opts;
  auto* comp_cmd = app.add_subcommand("compare", "Side-by-side bound and approximant table");
  comp_cmd->add_option("--t-grid", comp_opts.t_grid, "t sweep lo:hi:step")->capture_default_str();
  comp_cmd->add_option("--params", comp_opts.params_arg,
                       "parameter file path or inline k=...;w=...");
  add_format(comp_cmd, comp_opts.format);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  cont_opts.series_set = cont_cmd->count("--series") > 0;

  try {
    if (*eval_cmd) return run_eval(eval_opts);
    if (*bounds_cmd) return run_bounds(bounds_opts);
    if (*fit_cmd) return run_fit(fit_opts);
    if (*scan_cmd) return run_scan(scan_opts);
    if (*table_cmd) return run_table(table_opts);
    if (*bench_cmd) return run_bench(bench_opts);
    if (*cont_cmd) return run_continuum(cont_opts);
    if (*comp_cmd) return run_compare(comp_opts);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
