#pragma once

// Costs of the four constituent delivery strategies and the closed-form
// achievable (inner) and converse (outer) NDT of a demand pair.

#include <string_view>

#include "fran/core.hpp"

namespace fran {

enum class Strategy { HT, ZF, ST_ZF, X_IA };

std::string_view to_string(Strategy s);
/// Accepts "HT", "ZF", "ST+ZF" and "X-IA". Throws StructuralError otherwise.
Strategy parse_strategy(std::string_view text);

/// One use of a strategy on messages of nu*L bits each.
struct StrategyInvocation {
  Strategy kind;
  double nu;
};

/// HT: (nu/r, 0). ZF: (0, nu). ST+ZF: (nu/r, nu). X-IA: (0, 3 nu).
NdtPoint strategy_ndt(const StrategyInvocation& inv, double rate);

/// Selects one of the four regime formulas.
class RegimeId {
 public:
  explicit RegimeId(int ell);
  int value() const { return ell_; }
  friend bool operator==(RegimeId, RegimeId) = default;

 private:
  int ell_;
};

/// Inner-bound formula `ell` evaluated regardless of whether its regime
/// applies. Symmetric in (mu_i, mu_j).
double ndt_inner_component(RegimeId ell, double mu_i, double mu_j, double rate);

struct InnerNdt {
  double total;
  RegimeId regime;
};

/// Regime dispatch: r > 1 selects 4; otherwise both fractions below 1/2
/// select 1, both above 1/2 select 3, and anything touching 1/2 selects 2.
InnerNdt ndt_inner(double mu_i, double mu_j, double rate);

/// The four cache fractions a demand {i, j} depends on.
struct CacheQuad {
  double en1_i;
  double en2_i;
  double en1_j;
  double en2_j;

  static CacheQuad symmetric(double mu_i, double mu_j) {
    return {mu_i, mu_i, mu_j, mu_j};
  }
  static CacheQuad of(const CachePartition& partition, const Demand& demand);

  double min_entry() const;
  double sum_i() const { return en1_i + en2_i; }
  double sum_j() const { return en1_j + en2_j; }
  double total() const { return sum_i() + sum_j(); }
  bool columns_symmetric(double tol = kTolerance) const;
  /// Per-column means, as produced by symmetrize().
  CacheQuad symmetrized() const;
};

/// Outer-bound formula `ell` on a possibly asymmetric allocation.
double ndt_outer_component(RegimeId ell, const CacheQuad& quad, double rate);

struct OuterNdt {
  double total;
  /// Component attaining the maximum (lowest index on ties).
  RegimeId binding;
};

/// max of components 1..3 when r <= 1, component 4 when r > 1.
OuterNdt ndt_outer(const CacheQuad& quad, double rate);

}  // namespace fran
