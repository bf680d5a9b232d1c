#pragma once

// Independent check of the converse bound: the five half-planes that every
// feasible (edge NDT, fronthaul NDT) pair must satisfy, and the exact
// minimum of their sum over that polygon.

#include <array>
#include <span>
#include <string>
#include <vector>

#include "fran/closed_form.hpp"
#include "fran/core.hpp"

namespace fran {

/// a_e * edge + a_f * fronthaul >= b.
struct HalfPlane {
  double a_e;
  double a_f;
  double b;

  double slack(double edge, double fronthaul) const {
    return a_e * edge + a_f * fronthaul - b;
  }
};

inline constexpr std::size_t kNumConstraints = 5;
using Polytope = std::array<HalfPlane, kNumConstraints>;

/// Constraint order:
///   0: edge + r fronthaul >= 2 - min of the four fractions
///   1: r fronthaul >= 1/2 - 1/2 min(column sums)
///   2: r fronthaul >= 1 - (column sum i)/2 - (column sum j)/2
///   3: edge >= 1
///   4: fronthaul >= 0
Polytope constraint_polytope(const CacheQuad& quad, double rate);

struct LpSolution {
  double optimum;
  double edge;
  double fronthaul;
  /// Indices of constraints tight at the witness.
  std::vector<int> binding;
};

/// Minimizes edge + fronthaul by enumerating every pairwise intersection of
/// the constraint lines and keeping the best feasible one. Parallel pairs
/// are skipped. Throws std::logic_error if no feasible vertex exists.
LpSolution lp_min_total(std::span<const HalfPlane> halfplanes);

/// Nonnegative multipliers on the five constraints whose combination reads
/// edge + fronthaul >= outer component `ell`. Components 1..3 need r <= 1
/// and component 4 needs r > 1; other combinations throw ConstraintError.
std::array<double, kNumConstraints> dual_weights(RegimeId ell, double rate);

/// Weighted sum of half-planes.
HalfPlane combine(std::span<const HalfPlane> halfplanes,
                  std::span<const double> weights);

struct TightnessReport {
  double inner;
  double outer;
  double lp;
  RegimeId regime;
  RegimeId outer_binding;
  std::vector<int> lp_binding;
  bool ok;
};

/// Compares ndt_inner, ndt_outer and the LP minimum on the symmetric
/// allocation (mu_i, mu_i, mu_j, mu_j).
TightnessReport check_tightness(double mu_i, double mu_j, double rate);

struct ComponentComparison {
  RegimeId ell;
  double original;
  double symmetrized;
  /// original - symmetrized.
  double decrease;
  bool expect_equality;
  bool ok;
};

struct SymmetrizationReport {
  CacheQuad original;
  CacheQuad symmetrized;
  bool columns_symmetric;
  std::vector<ComponentComparison> components;
  bool ok;
};

/// For every outer component, checks that evaluating on the symmetrized
/// fractions never exceeds evaluating on the originals. The two agree
/// exactly when min(column means) equals the smallest original entry, i.e.
/// when a demanded column is symmetric and holds the overall minimum.
SymmetrizationReport check_symmetrization(const CachePartition& partition,
                                          const Demand& demand, double rate);

}  // namespace fran
