#include "doctest.h"

#include <cmath>
#include <sstream>

#include "fran/optimizer.hpp"
#include "fran/planner.hpp"

using namespace fran;

namespace {

constexpr double kR = 0.2;

bool slice_has(const RegionSlice& s, double x, double y) {
  for (const auto& p : s.points) {
    if (std::abs(p.d12 - x) <= 1e-9 && std::abs(p.d11 - y) <= 1e-9) return true;
  }
  return false;
}

std::vector<std::vector<double>> parse_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST_CASE("slice points at labelled allocations") {
  const auto a = slice_point({2, 2, 0.375, kR, 0.75, 0.0});
  CHECK(std::abs(a.d12 - 4.0) <= 1e-9);
  CHECK(std::abs(a.d11 - 1.25) <= 1e-9);

  const auto b = slice_point({2, 2, 0.25, kR, 0.25, 0.25});
  CHECK(std::abs(b.d12 - 3.75) <= 1e-9);
  CHECK(std::abs(b.d11 - 3.75) <= 1e-9);
  CHECK(std::abs(b.d22 - 3.75) <= 1e-9);

  const auto c = slice_point({2, 2, 0.75, kR, 1.0, 0.5});
  CHECK(std::abs(c.d12 - 1.5) <= 1e-9);
  CHECK(std::abs(c.d11 - 1.0) <= 1e-9);

  CHECK_THROWS_AS(slice_point({2, 2, 0.25, kR, 0.5, 0.5}), ConstraintError);
}

TEST_CASE("saturated class-2 fraction") {
  CHECK(saturated_class2_fraction(2, 2, 0.375, 0.75) == 0.0);
  CHECK(saturated_class2_fraction(2, 2, 0.75, 0.0) == 1.0);
  CHECK(saturated_class2_fraction(1, 3, 0.5, 0.5) == doctest::Approx(0.5));
}

TEST_CASE("sweep candidates include every kink") {
  const auto v = sweep_class1_fractions(2, 2, 0.375, 0.01);
  for (double k : {0.0, 0.25, 0.375, 0.5, 0.75}) {
    CHECK(std::find(v.begin(), v.end(), k) != v.end());
  }
  CHECK(std::is_sorted(v.begin(), v.end()));
  CHECK(v.back() == 0.75);
  for (std::size_t i = 1; i < v.size(); ++i) CHECK(v[i] - v[i - 1] <= 0.01 + 1e-12);
}

TEST_CASE("region slice envelopes") {
  const auto half = trace_region_slice(2, 2, 0.5, kR, 1e-3);
  CHECK(slice_has(half, 1.5, 1.5));
  CHECK(slice_has(half, 4.0, 1.0));

  const auto three_eighths = trace_region_slice(2, 2, 0.375, kR, 1e-3);
  CHECK(slice_has(three_eighths, 2.625, 2.625));
  CHECK(slice_has(three_eighths, 2.75, 1.5));
  CHECK(slice_has(three_eighths, 4.0, 1.25));
  CHECK_FALSE(three_eighths.breakpoints.empty());

  for (double r : {0.1, 1.0, 2.0}) {
    const auto full = trace_region_slice(2, 2, 1.0, r, 1e-2);
    REQUIRE(full.points.size() == 1);
    CHECK(std::abs(full.points[0].d12 - 1.0) <= 1e-12);
    CHECK(std::abs(full.points[0].d11 - 1.0) <= 1e-12);
  }
}

TEST_CASE("region envelope is a strictly decreasing staircase that saturates the cache") {
  for (double mu : {0.1, 0.25, 0.375, 0.6}) {
    for (double r : {0.2, 1.0, 1.5}) {
      const auto s = trace_region_slice(2, 3, mu, r, 1e-3);
      for (std::size_t i = 1; i < s.points.size(); ++i) {
        CHECK(s.points[i].d12 > s.points[i - 1].d12);
        CHECK(s.points[i].d11 < s.points[i - 1].d11);
      }
      for (const auto& p : s.points) {
        if (p.mu1 < 1.0 && p.mu2 < 1.0) {
          CHECK(std::abs(2 * p.mu1 + 3 * p.mu2 - 5 * mu) <= 1e-9);
        }
      }
    }
  }
}

TEST_CASE("golden points survive refinement") {
  struct Golden {
    double mu, x, y;
  };
  const Golden golden[] = {{0.25, 4, 1.5},    {0.25, 3.75, 3.75}, {0.375, 4, 1.25},
                           {0.375, 2.75, 1.5}, {0.375, 2.625, 2.625}, {0.5, 4, 1},
                           {0.5, 1.5, 1.5},   {0.75, 1.5, 1},     {0.75, 1.25, 1.25}};
  for (double step : {0.05, 0.01, 0.005, 1e-3}) {
    for (const auto& g : golden) {
      INFO("mu=" << g.mu << " step=" << step);
      CHECK(slice_has(trace_region_slice(2, 2, g.mu, kR, step), g.x, g.y));
    }
  }
  // Halving the step moves no envelope point by more than the coarse step.
  const auto coarse = trace_region_slice(2, 2, 0.375, kR, 0.01);
  const auto fine = trace_region_slice(2, 2, 0.375, kR, 0.005);
  for (const auto& p : fine.points) {
    double nearest = INFINITY;
    for (const auto& q : coarse.points) nearest = std::min(nearest, std::abs(p.mu1 - q.mu1));
    CHECK(nearest <= 0.01 + 1e-12);
  }
}

TEST_CASE("interior sweep reproduces the saturated envelope") {
  for (double mu : {0.25, 0.375, 0.5}) {
    const auto sat = trace_region_slice(2, 2, mu, kR, 0.02);
    const auto all = trace_region_slice(2, 2, mu, kR, 0.02, SweepMode::Interior);
    REQUIRE(sat.points.size() == all.points.size());
    for (std::size_t i = 0; i < sat.points.size(); ++i) {
      CHECK(std::abs(sat.points[i].d12 - all.points[i].d12) <= 1e-12);
      CHECK(std::abs(sat.points[i].d11 - all.points[i].d11) <= 1e-12);
    }
  }
}

TEST_CASE("pareto envelope") {
  const std::vector<Point2> pts = {{1, 3}, {2, 2}, {3, 1}, {2, 3}};
  const auto env = pareto_envelope(pts);
  REQUIRE(env.size() == 3);
  CHECK(env[0].x == 1);
  CHECK(env[1].y == 2);
  CHECK(env[2].x == 3);

  const std::vector<Point2> one = {{0.5, 0.5}};
  CHECK(pareto_envelope(one).size() == 1);
  const std::vector<Point2> same = {{1, 1}, {1, 1}, {1, 1}};
  CHECK(pareto_envelope(same).size() == 1);
  CHECK(pareto_envelope(std::vector<Point2>{}).empty());
}

TEST_CASE("average latencies") {
  const auto half = average_ndt(1.5, 2.75, 2.0, PopularityProfile(0.5));
  REQUIRE(half.class1);
  CHECK(std::abs(*half.class1 - 7.0 / 3.0) <= 1e-12);

  const auto flat = average_ndt(2.0, 2.0, 2.0, PopularityProfile(0.5));
  CHECK(std::abs(*flat.class1 - 2.0) <= 1e-12);
  CHECK(std::abs(*flat.class2 - 2.0) <= 1e-12);

  const auto only1 = average_ndt(1.5, 2.75, 2.0, PopularityProfile(1.0));
  CHECK(only1.class1 == 1.5);
  CHECK_FALSE(only1.class2);
  const auto only2 = average_ndt(1.5, 2.75, 2.0, PopularityProfile(0.0));
  CHECK_FALSE(only2.class1);
  CHECK(only2.class2 == 2.0);

  const auto near1 = average_ndt(1.5, 2.75, 2.0, PopularityProfile(1.0 - 1e-9));
  CHECK(std::abs(*near1.class1 - 1.5) <= 1e-8);

  const auto printed =
      average_ndt(1.5, 2.75, 2.0, PopularityProfile(0.5), AverageFormula::AsPrinted);
  CHECK(std::abs(*printed.class2 - (0.25 * 1.5 + 0.5 * 2.75) / 0.75) <= 1e-12);
  CHECK(std::abs(*half.class2 - (0.25 * 2.0 + 0.5 * 2.75) / 0.75) <= 1e-12);
}

TEST_CASE("average trade-off is symmetric for equal classes") {
  const auto curve = trace_average_tradeoff(2, 2, 0.375, kR, 0.5, 1e-3);
  REQUIRE(curve.points.size() >= 2);
  // The sweep spans (3/4, 0) to (0, 3/4), but both lopsided extremes are
  // dominated here: at (3/4, 0) the class-1 average is 37/12, worse than
  // 7/3 at (1/2, 1/4). The surviving endpoints are mirror allocations.
  const auto swept = sweep_class1_fractions(2, 2, 0.375, 1e-3);
  CHECK(swept.front() == 0.0);
  CHECK(swept.back() == 0.75);
  const auto lopsided = slice_point({2, 2, 0.375, kR, 0.75, 0.0});
  const auto avg = average_ndt(lopsided.d11, lopsided.d12, lopsided.d22, PopularityProfile(0.5));
  CHECK(std::abs(*avg.class1 - 37.0 / 12.0) <= 1e-12);
  CHECK(std::abs(curve.points.front().source.mu1 - curve.points.back().source.mu2) <= 1e-12);
  CHECK(std::abs(curve.points.front().source.mu2 - curve.points.back().source.mu1) <= 1e-12);
  for (const auto& p : curve.points) {
    bool mirrored = false;
    for (const auto& q : curve.points) {
      mirrored = mirrored || (std::abs(p.avg1 - q.avg2) <= 1e-9 && std::abs(p.avg2 - q.avg1) <= 1e-9);
    }
    CHECK(mirrored);
    if (std::abs(p.source.mu1 - p.source.mu2) <= 1e-12) CHECK(std::abs(p.avg1 - p.avg2) <= 1e-12);
  }
}

TEST_CASE("popularity a and 1 - a give mirror-image curves") {
  const auto lo = trace_average_tradeoff(2, 2, 0.375, kR, 0.1, 1e-3);
  const auto hi = trace_average_tradeoff(2, 2, 0.375, kR, 0.9, 1e-3);
  REQUIRE(lo.points.size() == hi.points.size());
  const std::size_t n = lo.points.size();
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(std::abs(lo.points[i].avg1 - hi.points[n - 1 - i].avg2) <= 1e-9);
    CHECK(std::abs(lo.points[i].avg2 - hi.points[n - 1 - i].avg1) <= 1e-9);
  }
  CHECK_THROWS_AS(trace_average_tradeoff(2, 2, 0.375, kR, 1.0, 1e-3), ConstraintError);
}

TEST_CASE("trade-off points re-verify through the planner") {
  const auto curve = trace_average_tradeoff(2, 2, 0.375, kR, 0.3, 5e-3);
  const SystemParams params = SystemParams::two_class(0.375, kR, 2, 2);
  for (const auto& p : curve.points) {
    const std::vector<double> alloc = {p.source.mu1, p.source.mu1, p.source.mu2, p.source.mu2};
    const auto placement = build_cache_placement(alloc, kR, params);
    const Demand mixed(0, 2);
    const Demand same(0, 1);
    const auto plan12 = build_delivery_plan(placement, mixed, kR);
    const auto plan11 = build_delivery_plan(placement, same, kR);
    CHECK(verify_plan(plan12, placement, mixed, kR).ok());
    CHECK(verify_plan(plan11, placement, same, kR).ok());
    CHECK(std::abs(plan_ndt(plan12, kR).total() - p.source.d12) <= 1e-12);
    CHECK(std::abs(plan_ndt(plan11, kR).total() - p.source.d11) <= 1e-12);
  }
}

TEST_CASE("CSV output re-parses to the in-memory values") {
  const auto slice = trace_region_slice(2, 2, 0.375, kR, 1e-2);
  std::ostringstream plain, extended;
  write_slice_csv(plain, slice, false);
  write_slice_csv(extended, slice, true);
  const auto rows = parse_csv(plain.str());
  const auto wide = parse_csv(extended.str());
  REQUIRE(rows.size() == slice.points.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    REQUIRE(rows[i].size() == 2);
    REQUIRE(wide[i].size() == 5);
    CHECK(std::abs(rows[i][0] - slice.points[i].d12) <= 1e-12);
    CHECK(std::abs(rows[i][1] - slice.points[i].d11) <= 1e-12);
    CHECK(std::abs(wide[i][2] - slice.points[i].mu1) <= 1e-12);
    CHECK(std::abs(wide[i][3] - slice.points[i].mu2) <= 1e-12);
    CHECK(wide[i][4] == slice.points[i].regime12.value());
  }

  const auto curve = trace_average_tradeoff(2, 2, 0.375, kR, 0.5, 1e-2);
  std::ostringstream avg;
  write_tradeoff_csv(avg, curve, false);
  const auto arows = parse_csv(avg.str());
  REQUIRE(arows.size() == curve.points.size());
  for (std::size_t i = 0; i < arows.size(); ++i) {
    CHECK(std::abs(arows[i][0] - curve.points[i].avg1) <= 1e-12);
    CHECK(std::abs(arows[i][1] - curve.points[i].avg2) <= 1e-12);
  }
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(2.625) == "2.625");
}
