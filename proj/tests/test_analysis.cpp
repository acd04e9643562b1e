#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "gsum/analysis.hpp"
#include "gsum/approx.hpp"
#include "gsum/fit.hpp"
#include "gsum/geometry.hpp"
#include "gsum/oracle.hpp"
#include "reference.hpp"

using gsum::bench;
using gsum::bound_constant_check;
using gsum::ConvergenceRow;
using gsum::convergence_table;
using gsum::deviation_at;
using gsum::GridSpec;
using gsum::max_deviation;
using gsum::ParameterSet;
using gsum::Scheme;
using gsum::telescoped_range;

namespace {

bool close_rel(double x, double ref, double rel) {
  return std::fabs(x - ref) <= rel * std::fabs(ref);
}

}  // namespace

TEST_CASE("grid spec point counting") {
  const GridSpec def;
  CHECK(def.point_count() == 4097);
  CHECK(def.point(0) == 0.0);
  CHECK(def.point(4096) == 8.0);
  CHECK(GridSpec{0.0, 1.0, 0.25}.point_count() == 5);
  CHECK(GridSpec{0.0, 1.0, 0.3}.point_count() == 4);
  CHECK(GridSpec{0.0, 0.0, 0.5}.point_count() == 1);
  CHECK(GridSpec{0.0, 1.0, -1.0}.point_count() == 0);
  CHECK(GridSpec{1.0, 0.0, 0.5}.point_count() == 0);
}

TEST_CASE("deviation_at is signed") {
  const ParameterSet one = ParameterSet::uniform({1.116});
  const double at_low = deviation_at(one, 0.6);
  CHECK(at_low < 0.0);
  CHECK(deviation_at(one, 3.0) > 0.0);
  CHECK(close_rel(at_low, gsum::p_approx(one, 0.6) - gsum::p_exact(0.6), 1e-15));
  CHECK(deviation_at(one, 0.0) == 0.0);
}

TEST_CASE("sup deviations of the published sets match the frozen measurements") {
  struct Row {
    std::vector<double> k;
    std::vector<double> w;
    double dev;
    double argmax;
  };
  const std::vector<Row> rows{
      {{1.116}, {1.0}, 0.003353193782324848, 0.6065662340409967},
      {{1.1283791670955126}, {1.0}, 0.0062916596991691165, 1.6537533173424757},
      {{1.01, 1.23345}, {0.5, 0.5}, 0.00023577149951109488, 0.4763929962254354},
      {{1.02335, 1.05674, 1.28633},
       {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0},
       3.152682510665361e-05,
       0.42131234738309403},
      {{1.025187, 1.1249, 1.31336},
       {0.5, 0.25, 0.25},
       1.5858810340496632e-05,
       0.5322927775844333},
      {{1.00725, 1.04665, 1.12192, 1.3129},
       {0.25, 0.25, 0.25, 0.25},
       1.0335699021424283e-05,
       0.40107384288936204}};
  for (const auto& row : rows) {
    const auto rep = max_deviation(ParameterSet(row.k, row.w));
    CHECK(close_rel(rep.max_abs_dev, row.dev, 1e-12));
    CHECK(std::fabs(rep.argmax_t - row.argmax) <= 1e-6);
    CHECK(rep.refined);
  }
}

TEST_CASE("refinement only ever raises the grid supremum") {
  const ParameterSet one = ParameterSet::uniform({1.116});
  const auto coarse = max_deviation(one, {}, false);
  const auto fine = max_deviation(one, {}, true);
  CHECK_FALSE(coarse.refined);
  CHECK(fine.max_abs_dev >= coarse.max_abs_dev);
  CHECK(close_rel(fine.max_abs_dev, coarse.max_abs_dev, 1e-4));
}

TEST_CASE("max_deviation is independent of the thread count") {
  const ParameterSet set({1.00725, 1.04665, 1.12192, 1.3129},
                         {0.25, 0.25, 0.25, 0.25});
  const auto one = max_deviation(set, {}, true, 1);
  const auto three = max_deviation(set, {}, true, 3);
  CHECK(one.max_abs_dev == three.max_abs_dev);
  CHECK(one.argmax_t == three.argmax_t);
}

TEST_CASE("max_deviation rejects an empty grid") {
  const ParameterSet one = ParameterSet::uniform({1.116});
  CHECK_THROWS_AS(max_deviation(one, GridSpec{1.0, 0.0, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(max_deviation(one, GridSpec{0.0, 1.0, -0.5}), std::invalid_argument);
}

TEST_CASE("convergence table matches the frozen deviations at t0 = 1.0668") {
  const std::vector<double> base2{4.2005703307479436e-05, 2.1001167945677857e-05,
                                  1.0500163027948872e-05, 5.2499762723812182e-06,
                                  2.6249618287899068e-06};
  const auto rows2 = convergence_table(2, 11, 15);
  REQUIRE(rows2.size() == 5);
  for (std::size_t i = 0; i < rows2.size(); ++i) {
    CHECK(rows2[i].p == 11 + static_cast<int>(i));
    CHECK(rows2[i].n == std::int64_t{1} << (11 + i));
    CHECK(close_rel(rows2[i].abs_dev, base2[i], 1e-9));
  }

  const std::vector<double> base3{1.180420204831556e-04, 3.9335529837258854e-05,
                                  1.311053082697633e-05, 4.370031106426531e-06,
                                  1.4566608311783469e-06};
  const auto rows3 = convergence_table(3, 6, 10);
  REQUIRE(rows3.size() == 5);
  for (std::size_t i = 0; i < rows3.size(); ++i) {
    CHECK(rows3[i].p == 6 + static_cast<int>(i));
    CHECK(close_rel(rows3[i].abs_dev, base3[i], 1e-9));
  }

  // Printed table agreement at the listed precision.
  CHECK(testref::round_sig(rows2[0].abs_dev, 1) == 0.00004);
  CHECK(testref::round_sig(rows2[1].abs_dev, 1) == 0.00002);
  CHECK(testref::round_sig(rows2[2].abs_dev, 1) == 0.00001);
  CHECK(testref::round_sig(rows2[3].abs_dev, 1) == 0.000005);
  CHECK(testref::round_sig(rows2[4].abs_dev, 2) == 0.0000026);
  CHECK(testref::round_sig(rows3[0].abs_dev, 1) == 0.0001);
  CHECK(testref::round_sig(rows3[1].abs_dev, 1) == 0.00004);
  CHECK(testref::round_sig(rows3[2].abs_dev, 1) == 0.00001);
  CHECK(testref::round_sig(rows3[3].abs_dev, 1) == 0.000004);
  CHECK(testref::round_sig(rows3[4].abs_dev, 1) == 0.000001);
}

TEST_CASE("convergence table edge cases and threading") {
  const auto row0 = convergence_table(2, 0, 0);
  REQUIRE(row0.size() == 1);
  CHECK(row0[0].n == 1);
  CHECK(close_rel(row0[0].abs_dev, 0.11041684247071637, 1e-10));

  const auto serial = convergence_table(2, 4, 9, 1.0668, 1);
  const auto threaded = convergence_table(2, 4, 9, 1.0668, 3);
  REQUIRE(serial.size() == threaded.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].abs_dev == threaded[i].abs_dev);
  }
  for (std::size_t i = 0; i + 1 < serial.size(); ++i) {
    CHECK(serial[i + 1].abs_dev < serial[i].abs_dev);
  }

  CHECK_THROWS_AS(convergence_table(2, 3, 1), std::invalid_argument);
  CHECK_THROWS_AS(convergence_table(2, -1, 2), std::invalid_argument);
  CHECK_THROWS_AS(convergence_table(5, 0, 2), std::invalid_argument);
}

TEST_CASE("scaled deviations stay below the 0.09 ceiling") {
  for (int p = 6; p <= 12; ++p) {
    const auto rows = convergence_table(2, p, p);
    const double scaled = static_cast<double>(rows[0].n) * rows[0].abs_dev;
    CHECK(scaled <= 0.09);
    CHECK(scaled >= 0.08);
  }
}

TEST_CASE("telescoped range matches the closed form") {
  CHECK(close_rel(telescoped_range(Scheme(2, 3), 1.0), 0.029831402317648886, 1e-13));
  CHECK(close_rel(telescoped_range(Scheme(3, 2), 2.0), 0.013002182705319837, 1e-13));
  CHECK(close_rel(telescoped_range(Scheme(2, 1), 0.5), 0.051848059756595288, 1e-13));
  CHECK(telescoped_range(Scheme(2, 2), 0.0) == 0.0);
  CHECK_THROWS_AS(telescoped_range(Scheme(2, 2), -1.0), std::domain_error);

  for (int base : {2, 3}) {
    for (int depth : {1, 2, 3}) {
      for (double t : {0.5, 1.0, 2.0}) {
        const Scheme scheme(base, depth);
        const double h = std::exp(-0.5 * t * t) - std::exp(-t * t);
        const double closed = h / static_cast<double>(scheme.size());
        CHECK(std::fabs(telescoped_range(scheme, t) - closed) <= 1e-13);
      }
    }
  }
}

TEST_CASE("bound constant maximum equals sqrt(108/3125)") {
  const double measured = bound_constant_check();
  CHECK(std::fabs(measured - std::sqrt(108.0 / 3125.0)) <= 1e-12);
}

TEST_CASE("bench input contract") {
  const ParameterSet one = ParameterSet::uniform({1.116});
  CHECK_THROWS_AS(bench(one, 0), std::invalid_argument);
  CHECK_THROWS_AS(bench(one, 1000, {2.0, 1.0}), std::invalid_argument);
  const auto result = bench(one, 1000);
  CHECK(result.low_sample_warning);
  CHECK(result.ns_per_eval_approx > 0.0);
  CHECK(result.ns_per_eval_exact > 0.0);
  CHECK(result.speedup > 0.0);
}
