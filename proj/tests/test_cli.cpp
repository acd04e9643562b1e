#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include <sys/wait.h>

#include <json.hpp>

namespace {

using nlohmann::json;

struct CmdResult {
  int code = -1;
  std::string out;
};

CmdResult run_gsum(const std::string& args) {
  const std::string cmd = std::string("'") + GSUM_BINARY_PATH + "' " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  std::size_t got = 0;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) {
    out.append(buf, got);
  }
  const int rc = pclose(pipe);
  CmdResult result;
  result.out = std::move(out);
  if (rc >= 0 && WIFEXITED(rc)) result.code = WEXITSTATUS(rc);
  return result;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) {
      lines.push_back(text.substr(pos));
      break;
    }
    lines.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  return lines;
}

std::vector<std::string> cells_of(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    const std::size_t comma = line.find(',', pos);
    if (comma == std::string::npos) {
      cells.push_back(line.substr(pos));
      break;
    }
    cells.push_back(line.substr(pos, comma - pos));
    pos = comma + 1;
  }
  return cells;
}

bool close_rel(double x, double ref, double rel) {
  return std::fabs(x - ref) <= rel * std::fabs(ref);
}

}  // namespace

TEST_CASE("cli bounds prints the depth-2 endpoints") {
  const CmdResult r = run_gsum("bounds --base 2 --depth 2 --format csv");
  REQUIRE(r.code == 0);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 6);
  CHECK(lines[0] == "index,endpoint");
  const std::vector<double> frozen{1.0, 1.0195911582083184, 1.082392200292394,
                                   1.2026897738700906, 1.4142135623730949};
  for (std::size_t i = 0; i < frozen.size(); ++i) {
    const auto cells = cells_of(lines[i + 1]);
    REQUIRE(cells.size() == 2);
    CHECK(std::stoul(cells[0]) == i);
    CHECK(std::stod(cells[1]) == frozen[i]);
  }

  const CmdResult j = run_gsum("bounds --base 2 --depth 2");
  REQUIRE(j.code == 0);
  const json parsed = json::parse(j.out);
  CHECK(parsed["base"] == 2);
  CHECK(parsed["n"] == 4);
  CHECK(parsed["endpoints"].size() == 5);
}

TEST_CASE("cli eval matches the library oracle") {
  const CmdResult exact = run_gsum("eval --exact --t 2 --format csv");
  REQUIRE(exact.code == 0);
  const auto lines = lines_of(exact.out);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == "t,p_exact");
  CHECK(std::stod(cells_of(lines[1])[1]) == 0.95449973610364169);

  const CmdResult approx = run_gsum("eval --params k=1.116 --t 0 --format csv");
  REQUIRE(approx.code == 0);
  const auto alines = lines_of(approx.out);
  CHECK(alines[0] == "t,p_approx");
  CHECK(std::stod(cells_of(alines[1])[1]) == 0.0);

  const CmdResult both = run_gsum("eval --exact --params k=1.116 --t 0:1:0.5");
  REQUIRE(both.code == 0);
  const json parsed = json::parse(both.out);
  REQUIRE(parsed["t"].size() == 3);
  CHECK(parsed["t"][2].get<double>() == 1.0);
  CHECK(parsed["p_exact"][2].get<double>() == 0.68268949213708596);
  CHECK(parsed["p_approx"].size() == 3);
}

TEST_CASE("cli exit codes distinguish usage and runtime failures") {
  CHECK(run_gsum("--bogus").code == 2);
  CHECK(run_gsum("frobnicate").code == 2);
  CHECK(run_gsum("").code == 2);
  CHECK(run_gsum("eval").code == 2);
  CHECK(run_gsum("eval --t 1 --format xml").code == 2);
  CHECK(run_gsum("eval --t 1").code == 2);
  CHECK(run_gsum("fit --base 2 --depth 0 --method nodes").code == 2);

  CHECK(run_gsum("scan --params /tmp/gsum_definitely_missing.json").code == 1);
  CHECK(run_gsum("eval --exact --t=-1").code == 1);
  CHECK(run_gsum("fit --base 2 --depth 1 --iters 0").code == 1);

  CHECK(run_gsum("--help").code == 0);
  CHECK(run_gsum("eval --help").code == 0);
}

TEST_CASE("cli fit writes parameters that scan reproduces bit for bit") {
  const std::string path = "/tmp/gsum_cli_fit.json";
  const CmdResult fit =
      run_gsum("fit --base 2 --depth 1 --method nodes --nodes 1,1.5 --out " + path);
  REQUIRE(fit.code == 0);
  const json fit_json = json::parse(fit.out);
  REQUIRE(fit_json.contains("params"));
  REQUIRE(fit_json.contains("error_report"));
  CHECK(fit_json["params"]["meta"]["method"] == "nodes");

  const CmdResult scan = run_gsum("scan --params " + path);
  REQUIRE(scan.code == 0);
  const json scan_json = json::parse(scan.out);
  CHECK(fit_json["error_report"] == scan_json);
}

TEST_CASE("cli scan output is thread-count independent") {
  const std::string params = "'k=1.00725,1.04665,1.12192,1.3129'";
  const CmdResult one = run_gsum("scan --params " + params + " --threads 1");
  const CmdResult three = run_gsum("scan --params " + params + " --threads 3");
  REQUIRE(one.code == 0);
  REQUIRE(three.code == 0);
  CHECK(one.out == three.out);
  const json parsed = json::parse(one.out);
  CHECK(close_rel(parsed["max_abs_dev"].get<double>(), 1.0335699021424283e-05, 1e-12));
}

TEST_CASE("cli table prints the convergence rows") {
  const CmdResult r = run_gsum("table --base 2 --p-range 0..2 --format csv");
  REQUIRE(r.code == 0);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] == "p,n,abs_dev");
  const auto row0 = cells_of(lines[1]);
  CHECK(row0[0] == "0");
  CHECK(row0[1] == "1");
  CHECK(close_rel(std::stod(row0[2]), 0.11041684247071637, 1e-10));
  CHECK(std::stod(cells_of(lines[2])[2]) < std::stod(cells_of(lines[1])[2]));
  CHECK(std::stod(cells_of(lines[3])[2]) < std::stod(cells_of(lines[2])[2]));
}

TEST_CASE("cli continuum reports the angular integral and series") {
  const CmdResult with_series = run_gsum("continuum --t 0.5 --series 8");
  REQUIRE(with_series.code == 0);
  const json j = json::parse(with_series.out);
  CHECK(close_rel(j["p_sq_continuum"].get<double>(), 0.14663149630841188, 1e-12));
  CHECK(close_rel(j["p_exact_sq"].get<double>(), 0.14663149630841188, 1e-10));
  CHECK(j["series_informative"] == true);
  CHECK(j["series_bound"].get<double>() > 0.0);
  CHECK(close_rel(j["series_value"].get<double>(), 0.14663149630757094, 1e-12));

  const CmdResult bare = run_gsum("continuum --t 0.5");
  REQUIRE(bare.code == 0);
  CHECK_FALSE(json::parse(bare.out).contains("series_value"));
}

TEST_CASE("cli compare emits the side-by-side table") {
  const CmdResult r = run_gsum("compare --t-grid 0:2:1 --format csv");
  REQUIRE(r.code == 0);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] == "t,p_exact,leading,envelope_m,envelope_M,shenton_m,shenton_M");
  CHECK(cells_of(lines[1]).size() == 7);

  const CmdResult with_params = run_gsum("compare --t-grid 0:2:1 --params k=1.116 --format csv");
  REQUIRE(with_params.code == 0);
  const auto plines = lines_of(with_params.out);
  CHECK(plines[0] == "t,p_exact,leading,envelope_m,envelope_M,shenton_m,shenton_M,params");
  CHECK(cells_of(plines[1]).size() == 8);
}

TEST_CASE("cli bench flags small sample counts") {
  const CmdResult r = run_gsum("bench --params k=1.116 --n 1000");
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["low_sample_warning"] == true);
  CHECK(j["ns_per_eval_approx"].get<double>() > 0.0);
  CHECK(j["speedup"].get<double>() > 0.0);
}
