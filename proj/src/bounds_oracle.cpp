#include "fran/bounds_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fran {

Polytope constraint_polytope(const CacheQuad& quad, double rate) {
  require_rate(rate);
  const double m = quad.min_entry();
  return {{
      {1.0, rate, 2.0 - m},
      {0.0, rate, 0.5 - 0.5 * std::min(quad.sum_i(), quad.sum_j())},
      {0.0, rate, 1.0 - 0.5 * quad.sum_i() - 0.5 * quad.sum_j()},
      {1.0, 0.0, 1.0},
      {0.0, 1.0, 0.0},
  }};
}

LpSolution lp_min_total(std::span<const HalfPlane> halfplanes) {
  LpSolution best{std::numeric_limits<double>::infinity(), 0.0, 0.0, {}};
  const std::size_t n = halfplanes.size();
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = p + 1; q < n; ++q) {
      const HalfPlane& u = halfplanes[p];
      const HalfPlane& v = halfplanes[q];
      const double det = u.a_e * v.a_f - u.a_f * v.a_e;
      if (std::abs(det) < 1e-14) continue;
      const double edge = (u.b * v.a_f - u.a_f * v.b) / det;
      const double fronthaul = (u.a_e * v.b - u.b * v.a_e) / det;
      const bool feasible = std::all_of(
          halfplanes.begin(), halfplanes.end(),
          [&](const HalfPlane& h) { return h.slack(edge, fronthaul) >= -kTolerance; });
      if (feasible && edge + fronthaul < best.optimum) {
        best = {edge + fronthaul, edge, fronthaul, {}};
      }
    }
  }
  if (!std::isfinite(best.optimum)) {
    throw std::logic_error("constraint polygon has no feasible vertex");
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (std::abs(halfplanes[k].slack(best.edge, best.fronthaul)) <= kTolerance) {
      best.binding.push_back(static_cast<int>(k));
    }
  }
  return best;
}

std::array<double, kNumConstraints> dual_weights(RegimeId ell, double rate) {
  require_rate(rate);
  const double k = 1.0 / rate - 1.0;
  if (ell.value() == 4) {
    if (rate <= 1.0) {
      throw ConstraintError("the fourth outer component is certified only for r > 1");
    }
    return {1.0 / rate, 0.0, 0.0, 1.0 - 1.0 / rate, 0.0};
  }
  if (rate > 1.0) {
    throw ConstraintError("outer components 1-3 are certified only for r <= 1");
  }
  switch (ell.value()) {
    case 1: return {1.0, 0.0, k, 0.0, 0.0};
    case 2: return {1.0, k, 0.0, 0.0, 0.0};
    // Constraint 4 reads fronthaul >= 0, so (1/r - 1) on r*fronthaul is (1 - r).
    default: return {1.0, 0.0, 0.0, 0.0, 1.0 - rate};
  }
}

HalfPlane combine(std::span<const HalfPlane> halfplanes,
                  std::span<const double> weights) {
  if (halfplanes.size() != weights.size()) {
    throw StructuralError("one weight per half-plane required");
  }
  HalfPlane out{0.0, 0.0, 0.0};
  for (std::size_t k = 0; k < halfplanes.size(); ++k) {
    out.a_e += weights[k] * halfplanes[k].a_e;
    out.a_f += weights[k] * halfplanes[k].a_f;
    out.b += weights[k] * halfplanes[k].b;
  }
  return out;
}

TightnessReport check_tightness(double mu_i, double mu_j, double rate) {
  const CacheQuad quad = CacheQuad::symmetric(mu_i, mu_j);
  const InnerNdt inner = ndt_inner(mu_i, mu_j, rate);
  const OuterNdt outer = ndt_outer(quad, rate);
  const Polytope poly = constraint_polytope(quad, rate);
  LpSolution lp = lp_min_total(poly);
  const bool ok = approx_equal(inner.total, outer.total) &&
                  approx_equal(inner.total, lp.optimum);
  return {inner.total, outer.total, lp.optimum, inner.regime, outer.binding,
          std::move(lp.binding), ok};
}

SymmetrizationReport check_symmetrization(const CachePartition& partition,
                                          const Demand& demand, double rate) {
  const CacheQuad original = CacheQuad::of(partition, demand);
  const CacheQuad sym = CacheQuad::of(symmetrize(partition), demand);
  const bool expect_equality =
      approx_equal(std::min(sym.en1_i, sym.en1_j), original.min_entry());

  SymmetrizationReport report{original, sym, original.columns_symmetric(), {}, true};
  for (int ell = 1; ell <= 4; ++ell) {
    const RegimeId id(ell);
    const double before = ndt_outer_component(id, original, rate);
    const double after = ndt_outer_component(id, sym, rate);
    const double decrease = before - after;
    const bool equal = std::abs(decrease) <= kTolerance;
    const bool ok = decrease >= -kTolerance && equal == expect_equality;
    report.components.push_back({id, before, after, decrease, expect_equality, ok});
    report.ok = report.ok && ok;
  }
  return report;
}

}  // namespace fran
