#include "fran/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <string>

namespace fran {

void ClassScenario::validate() const {
  if (j1 < 1 || j2 < 1) throw ConstraintError("each class needs at least one file");
  require_fraction(mu, "cache capacity mu");
  require_rate(rate);
  require_fraction(mu1, "class-1 fraction mu_(1)");
  require_fraction(mu2, "class-2 fraction mu_(2)");
  const double used = j1 * mu1 + j2 * mu2;
  const double budget = mu * (j1 + j2);
  if (used > budget + kTolerance) {
    throw ConstraintError("class allocation uses " + format_number(used) +
                          " > mu*(J1+J2) = " + format_number(budget));
  }
}

SlicePoint slice_point(const ClassScenario& s) {
  s.validate();
  const InnerNdt mixed = ndt_inner(s.mu1, s.mu2, s.rate);
  const InnerNdt first = ndt_inner(s.mu1, s.mu1, s.rate);
  const InnerNdt second = ndt_inner(s.mu2, s.mu2, s.rate);
  return {mixed.total, first.total, second.total, s.mu1, s.mu2, mixed.regime,
          first.regime};
}

std::vector<std::size_t> pareto_front(std::span<const Point2> points, double tol) {
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (points[a].x != points[b].x) return points[a].x < points[b].x;
    return points[a].y < points[b].y;
  });
  std::vector<std::size_t> front;
  double best_y = INFINITY;
  for (std::size_t idx : order) {
    if (points[idx].y < best_y - tol) {
      front.push_back(idx);
      best_y = points[idx].y;
    }
  }
  return front;
}

std::vector<Point2> pareto_envelope(std::span<const Point2> points, double tol) {
  std::vector<Point2> out;
  for (std::size_t idx : pareto_front(points, tol)) out.push_back(points[idx]);
  return out;
}

double saturated_class2_fraction(int j1, int j2, double mu, double mu1) {
  const double left = (mu * (j1 + j2) - j1 * mu1) / j2;
  return std::clamp(left, 0.0, 1.0);
}

namespace {

struct Candidate {
  double value;
  bool kink;
};

/// Grid over [0, hi] plus kinks, sorted, near-duplicates collapsed in
/// favour of the exact kink value.
std::vector<double> merge_candidates(double hi, double step,
                                     std::vector<double> kinks) {
  if (!(step > 0.0)) throw ConstraintError("sweep step must be positive");
  std::vector<Candidate> all;
  const auto n = static_cast<long>(std::max(1.0, std::ceil(hi / step - 1e-9)));
  for (long k = 0; k <= n; ++k) {
    all.push_back({hi * static_cast<double>(k) / static_cast<double>(n), false});
  }
  for (double v : kinks) {
    if (v >= -kTolerance && v <= hi + kTolerance) {
      all.push_back({std::clamp(v, 0.0, hi), true});
    }
  }
  std::sort(all.begin(), all.end(),
            [](const Candidate& a, const Candidate& b) { return a.value < b.value; });
  std::vector<double> out;
  bool last_kink = false;
  for (const auto& c : all) {
    if (!out.empty() && c.value - out.back() <= 1e-12) {
      if (c.kink && !last_kink) {
        out.back() = c.value;
        last_kink = true;
      }
      continue;
    }
    out.push_back(c.value);
    last_kink = c.kink;
  }
  return out;
}

}  // namespace

std::vector<double> sweep_class1_fractions(int j1, int j2, double mu, double step) {
  const double budget = mu * (j1 + j2);
  const double hi = std::min(1.0, budget / j1);
  std::vector<double> kinks = {0.0, 0.5, 1.0, hi, mu};
  for (double c : {0.0, 0.5, 1.0}) kinks.push_back((budget - j2 * c) / j1);
  return merge_candidates(hi, step, std::move(kinks));
}

RegionSlice trace_region_slice(int j1, int j2, double mu, double rate, double step,
                               SweepMode mode) {
  std::vector<SlicePoint> candidates;
  for (double mu1 : sweep_class1_fractions(j1, j2, mu, step)) {
    const double top = saturated_class2_fraction(j1, j2, mu, mu1);
    if (mode == SweepMode::Saturated) {
      candidates.push_back(slice_point({j1, j2, mu, rate, mu1, top}));
      continue;
    }
    for (double mu2 : merge_candidates(top, step, {0.0, 0.5, 1.0, mu1, top})) {
      candidates.push_back(slice_point({j1, j2, mu, rate, mu1, mu2}));
    }
  }

  std::vector<Point2> coords;
  coords.reserve(candidates.size());
  for (const auto& c : candidates) coords.push_back({c.d12, c.d11});

  RegionSlice slice;
  for (std::size_t idx : pareto_front(coords, 1e-12)) {
    const SlicePoint& p = candidates[idx];
    if (!slice.points.empty() && !(slice.points.back().regime12 == p.regime12)) {
      slice.breakpoints.push_back(slice.points.size());
    }
    slice.points.push_back(p);
  }
  return slice;
}

AverageNdt average_ndt(double d11, double d12, double d22,
                       const PopularityProfile& profile, AverageFormula formula) {
  const double p11 = profile.p11();
  const double p12 = profile.p12();
  const double p22 = profile.p22();
  AverageNdt out;
  if (p11 + p12 > 0.0) {
    out.class1 = (p11 * d11 + p12 * d12) / (p11 + p12);
  }
  if (p22 + p12 > 0.0) {
    const double same_class = formula == AverageFormula::AsPrinted ? d11 : d22;
    out.class2 = (p22 * same_class + p12 * d12) / (p22 + p12);
  }
  return out;
}

TradeoffCurve trace_average_tradeoff(int j1, int j2, double mu, double rate,
                                     double a, double step, AverageFormula formula) {
  if (!(a > 0.0 && a < 1.0)) {
    throw ConstraintError("popularity a must lie strictly between 0 and 1");
  }
  const PopularityProfile profile(a);
  std::vector<TradeoffPoint> candidates;
  for (double mu1 : sweep_class1_fractions(j1, j2, mu, step)) {
    const SlicePoint sp =
        slice_point({j1, j2, mu, rate, mu1, saturated_class2_fraction(j1, j2, mu, mu1)});
    const AverageNdt avg = average_ndt(sp.d11, sp.d12, sp.d22, profile, formula);
    candidates.push_back({*avg.class1, *avg.class2, sp});
  }
  std::vector<Point2> coords;
  coords.reserve(candidates.size());
  for (const auto& c : candidates) coords.push_back({c.avg1, c.avg2});

  TradeoffCurve curve{{}, profile};
  for (std::size_t idx : pareto_front(coords, 1e-12)) {
    curve.points.push_back(candidates[idx]);
  }
  return curve;
}

std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", value == 0.0 ? 0.0 : value);
  return buf;
}

void write_slice_csv(std::ostream& os, const RegionSlice& slice, bool extended) {
  for (const auto& p : slice.points) {
    os << format_number(p.d12) << ',' << format_number(p.d11);
    if (extended) {
      os << ',' << format_number(p.mu1) << ',' << format_number(p.mu2) << ','
         << p.regime12.value();
    }
    os << '\n';
  }
}

void write_tradeoff_csv(std::ostream& os, const TradeoffCurve& curve, bool extended) {
  for (const auto& p : curve.points) {
    os << format_number(p.avg1) << ',' << format_number(p.avg2);
    if (extended) {
      os << ',' << format_number(p.source.mu1) << ',' << format_number(p.source.mu2)
         << ',' << p.source.regime12.value();
    }
    os << '\n';
  }
}

}  // namespace fran
