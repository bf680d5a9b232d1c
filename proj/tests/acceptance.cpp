// One line per acceptance criterion; exits nonzero if any fails.

#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "fran/bounds_oracle.hpp"
#include "fran/closed_form.hpp"
#include "fran/optimizer.hpp"
#include "fran/planner.hpp"

using namespace fran;

namespace {

const std::vector<double> kRates = {0.1, 0.2, 0.5, 1.0, 1.5, 2.0};

std::vector<double> grid(int n) {
  std::vector<double> v;
  for (int k = 0; k <= n; ++k) v.push_back(static_cast<double>(k) / n);
  return v;
}

/// Counts checks and remembers the first failure.
struct Tally {
  long checks = 0;
  long failures = 0;
  std::string first;

  void expect(bool ok, const std::string& what) {
    ++checks;
    if (ok) return;
    if (failures++ == 0) first = what;
  }
  bool passed() const { return failures == 0 && checks > 0; }
};

std::string fmt(const char* pattern, double a, double b, double c) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

CachePlacement symmetric_placement(const std::vector<double>& alloc, double r,
                                   const SystemParams& params) {
  return build_cache_placement(alloc, r, params);
}

// 1. The nine labelled slice points at r = 1/5 with equal class sizes.
Tally golden_points() {
  struct Golden {
    double mu, mu1, mu2, d12, d11;
  };
  const Golden golden[] = {
      {0.25, 0.5, 0.0, 4.0, 1.5},      {0.25, 0.25, 0.25, 3.75, 3.75},
      {0.375, 0.75, 0.0, 4.0, 1.25},   {0.375, 0.5, 0.25, 2.75, 1.5},
      {0.375, 0.375, 0.375, 2.625, 2.625}, {0.5, 1.0, 0.0, 4.0, 1.0},
      {0.5, 0.5, 0.5, 1.5, 1.5},       {0.75, 1.0, 0.5, 1.5, 1.0},
      {0.75, 0.75, 0.75, 1.25, 1.25},
  };
  Tally t;
  for (const auto& g : golden) {
    const SlicePoint p = slice_point({2, 2, g.mu, 0.2, g.mu1, g.mu2});
    t.expect(std::abs(p.d12 - g.d12) <= 1e-9 && std::abs(p.d11 - g.d11) <= 1e-9,
             fmt("slice point mu=%g gives d12=%.12g d11=%.12g", g.mu, p.d12, p.d11));
    // The traced envelope must also pass through it.
    const RegionSlice s = trace_region_slice(2, 2, g.mu, 0.2, 1e-3);
    bool found = false;
    for (const auto& q : s.points) {
      found = found || (std::abs(q.d12 - g.d12) <= 1e-9 && std::abs(q.d11 - g.d11) <= 1e-9);
    }
    t.expect(found, fmt("envelope at mu=%g misses (%g, %g)", g.mu, g.d12, g.d11));
  }
  return t;
}

// 2. inner == outer == LP on the 0.01 grid.
Tally tightness() {
  Tally t;
  for (double r : kRates) {
    for (double mi : grid(100)) {
      for (double mj : grid(100)) {
        const double inner = ndt_inner(mi, mj, r).total;
        const CacheQuad q = CacheQuad::symmetric(mi, mj);
        const double outer = ndt_outer(q, r).total;
        const double lp = lp_min_total(constraint_polytope(q, r)).optimum;
        t.expect(std::abs(inner - outer) <= 1e-9 && std::abs(inner - lp) <= 1e-9,
                 fmt("mismatch at (%g, %g, r=%g)", mi, mj, r));
      }
    }
  }
  return t;
}

// 3. Every planner-built plan verifies and costs exactly the inner bound.
Tally planner_soundness() {
  Tally t;
  for (double r : kRates) {
    for (double mi : grid(20)) {
      for (double mj : grid(20)) {
        const std::vector<double> alloc = {mi, mj};
        const SystemParams params(0.5 * (mi + mj), r, 2);
        const auto placement = symmetric_placement(alloc, r, params);
        const Demand d(0, 1);
        const auto plan = build_delivery_plan(placement, d, r);
        const bool ok = verify_plan(plan, placement, d, r).ok() &&
                        std::abs(plan_ndt(plan, r).total() - ndt_inner(mi, mj, r).total) <= 1e-12;
        t.expect(ok, fmt("plan at (%g, %g, r=%g)", mi, mj, r));
      }
    }
  }
  return t;
}

// 4. Each outer component is a nonnegative combination of the constraints.
Tally dual_reconstruction() {
  Tally t;
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int s = 0; s < 1000; ++s) {
    const CacheQuad q{unit(rng), unit(rng), unit(rng), unit(rng)};
    const double r = 0.05 + 2.95 * unit(rng);
    const Polytope poly = constraint_polytope(q, r);
    const double lp = lp_min_total(poly).optimum;
    for (int ell : r <= 1.0 ? std::vector<int>{1, 2, 3} : std::vector<int>{4}) {
      const auto w = dual_weights(RegimeId(ell), r);
      bool nonneg = true;
      for (double x : w) nonneg = nonneg && x >= 0.0;
      const HalfPlane h = combine(poly, w);
      const double comp = ndt_outer_component(RegimeId(ell), q, r);
      t.expect(nonneg && std::abs(h.a_e - 1) <= 1e-12 && std::abs(h.a_f - 1) <= 1e-12 &&
                   std::abs(h.b - comp) <= 1e-12 && comp <= lp + 1e-9,
               fmt("component %g at r=%g: combination %.15g", ell, r, h.b));
    }
  }
  return t;
}

// 5. Symmetrizing never raises a component; strict for doubly asymmetric
//    inputs, equal for symmetric ones.
Tally symmetrization() {
  Tally t;
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Demand d(0, 1);
  for (int s = 0; s < 1000; ++s) {
    const CachePartition p({unit(rng), unit(rng)}, {unit(rng), unit(rng)});
    const double r = 0.05 + 2.95 * unit(rng);
    const auto rep = check_symmetrization(p, d, r);
    bool ok = rep.ok;
    const bool both_asym = std::abs(p.at(0, 0) - p.at(1, 0)) > 1e-9 &&
                           std::abs(p.at(0, 1) - p.at(1, 1)) > 1e-9;
    for (const auto& c : rep.components) {
      ok = ok && c.decrease >= -1e-12 && (!both_asym || c.decrease > 0.0);
    }
    t.expect(ok, fmt("random partition %g at r=%g (%g)", s, r, 0.0));
  }
  for (double r : kRates) {
    for (double a : grid(10)) {
      for (double b : grid(10)) {
        const auto sym = check_symmetrization(CachePartition({a, b}, {a, b}), d, r);
        bool equal = sym.ok;
        for (const auto& c : sym.components) equal = equal && std::abs(c.decrease) <= 1e-12;
        t.expect(equal, fmt("symmetric (%g, %g) at r=%g changed", a, b, r));

        // Constructed family: shift each column apart around its mean.
        const double e = 0.05;
        const double lo = std::clamp(a, e, 1.0 - e);
        const double hi = std::clamp(b, e, 1.0 - e);
        const auto asym =
            check_symmetrization(CachePartition({lo + e, hi - e}, {lo - e, hi + e}), d, r);
        bool strict = asym.ok;
        for (const auto& c : asym.components) strict = strict && c.decrease > 1e-9;
        t.expect(strict, fmt("asymmetric family (%g, %g) at r=%g not strict", lo, hi, r));
      }
    }
  }
  return t;
}

// 6. Mixed plans cost the convex combination and fit the cache.
Tally mixing() {
  Tally t;
  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int files = 4;
  auto draw = [&](double mu) {
    std::vector<double> v(files);
    double sum = 0.0;
    for (auto& x : v) sum += (x = unit(rng));
    if (sum > mu * files) {
      for (auto& x : v) x *= mu * files / sum;
    }
    return v;
  };
  for (int s = 0; s < 200; ++s) {
    const double mu = unit(rng);
    const double r = kRates[rng() % kRates.size()];
    const SystemParams params(mu, r, files);
    const Demand d(static_cast<int>(rng() % 2), 2 + static_cast<int>(rng() % 2));
    const auto pa = symmetric_placement(draw(mu), r, params);
    const auto pb = symmetric_placement(draw(mu), r, params);
    const auto a = build_delivery_plan(pa, d, r);
    const auto b = build_delivery_plan(pb, d, r);
    for (double alpha : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      const auto m = mix_plans(a, b, alpha);
      const auto mp = mix_placements(pa, pb, alpha);
      const NdtPoint got = plan_ndt(m, r);
      const NdtPoint na = plan_ndt(a, r);
      const NdtPoint nb = plan_ndt(b, r);
      const bool linear =
          std::abs(got.fronthaul() - (alpha * na.fronthaul() + (1 - alpha) * nb.fronthaul())) <=
              1e-12 &&
          std::abs(got.edge() - (alpha * na.edge() + (1 - alpha) * nb.edge())) <= 1e-12;
      const bool fits = validate_partition(mp.partition(), params).ok();
      const bool sound = verify_plan(m, mp, d, r).ok();
      t.expect(linear && fits && sound,
               fmt("pair %g alpha=%g r=%g", s, alpha, r));
    }
  }
  return t;
}

// 7. Average-latency trade-off properties at mu = 3/8, r = 1/5.
Tally tradeoff() {
  Tally t;
  const double mu = 0.375;
  const double r = 0.2;
  const auto half = trace_average_tradeoff(2, 2, mu, r, 0.5, 1e-3);
  const auto low = trace_average_tradeoff(2, 2, mu, r, 0.1, 1e-3);
  const auto high = trace_average_tradeoff(2, 2, mu, r, 0.9, 1e-3);

  // Symmetric about the diagonal: reflecting the curve gives the curve.
  const std::size_t n = half.points.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = half.points[i];
    const auto& q = half.points[n - 1 - i];
    t.expect(std::abs(p.avg1 - q.avg2) <= 1e-9 && std::abs(p.avg2 - q.avg1) <= 1e-9,
             fmt("a=0.5 point (%g, %g) has no mirror (%g)", p.avg1, p.avg2, 0.0));
  }

  t.expect(low.points.size() == high.points.size(), "a=0.1 and a=0.9 differ in length");
  const std::size_t m = std::min(low.points.size(), high.points.size());
  for (std::size_t i = 0; i < m; ++i) {
    const auto& p = low.points[i];
    const auto& q = high.points[m - 1 - i];
    t.expect(std::abs(p.avg1 - q.avg2) <= 1e-9 && std::abs(p.avg2 - q.avg1) <= 1e-9,
             fmt("a=0.1 point (%g, %g) vs a=0.9 (%g)", p.avg1, p.avg2, q.avg2));
  }

  const SystemParams params = SystemParams::two_class(mu, r, 2, 2);
  for (const auto* curve : {&half, &low, &high}) {
    for (std::size_t i = 1; i < curve->points.size(); ++i) {
      t.expect(curve->points[i].avg1 > curve->points[i - 1].avg1 &&
                   curve->points[i].avg2 < curve->points[i - 1].avg2,
               fmt("not a decreasing staircase at index %g (%g, %g)", static_cast<double>(i),
                   curve->points[i].avg1, curve->points[i].avg2));
    }
    for (const auto& p : curve->points) {
      const std::vector<double> alloc = {p.source.mu1, p.source.mu1, p.source.mu2, p.source.mu2};
      const auto placement = symmetric_placement(alloc, r, params);
      bool ok = true;
      for (const auto& [d, expected] :
           {std::pair{Demand(0, 2), p.source.d12}, std::pair{Demand(0, 1), p.source.d11},
            std::pair{Demand(2, 3), p.source.d22}}) {
        const auto plan = build_delivery_plan(placement, d, r);
        ok = ok && verify_plan(plan, placement, d, r).ok() &&
             std::abs(plan_ndt(plan, r).total() - expected) <= 1e-12;
      }
      t.expect(ok, fmt("allocation (%g, %g) does not re-verify (%g)", p.source.mu1,
                       p.source.mu2, 0.0));
    }
  }
  return t;
}

// 8. Boundary agreement at 1/2 and monotonicity along 0.001 rays.
Tally continuity() {
  Tally t;
  for (double r : kRates) {
    if (r <= 1.0) {
      for (double x : grid(1000)) {
        const double mid = ndt_inner_component(RegimeId(2), x, 0.5, r);
        const double side = ndt_inner_component(RegimeId(x <= 0.5 ? 1 : 3), x, 0.5, r);
        t.expect(std::abs(mid - side) <= 1e-9, fmt("boundary at x=%g r=%g (%g)", x, r, mid));
        // Approaching the boundary from both sides of 1/2.
        const double below = ndt_inner(x, 0.5 - 1e-12, r).total;
        const double above = ndt_inner(x, 0.5 + 1e-12, r).total;
        t.expect(std::abs(below - above) <= 1e-9, fmt("jump at x=%g r=%g (%g)", x, r, below));
      }
    }
    for (double fixed : grid(20)) {
      double prev = ndt_inner(0.0, fixed, r).total;
      for (double x : grid(1000)) {
        const double v = ndt_inner(x, fixed, r).total;
        t.expect(v <= prev + 1e-12, fmt("increase at (%g, %g, r=%g)", x, fixed, r));
        prev = v;
      }
    }
  }
  return t;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Tally()>>> criteria = {
      {"1 slice golden points", golden_points},
      {"2 tightness grid", tightness},
      {"3 planner soundness", planner_soundness},
      {"4 dual reconstruction", dual_reconstruction},
      {"5 symmetrization", symmetrization},
      {"6 plan mixing", mixing},
      {"7 average trade-off", tradeoff},
      {"8 continuity and monotonicity", continuity},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Tally t;
    try {
      t = check();
    } catch (const std::exception& e) {
      t.expect(false, std::string("exception: ") + e.what());
    }
    std::printf("[%s] %s (%ld checks", t.passed() ? "PASS" : "FAIL", name, t.checks);
    if (t.failures > 0) std::printf(", %ld failed; first: %s", t.failures, t.first.c_str());
    std::printf(")\n");
    if (!t.passed()) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
