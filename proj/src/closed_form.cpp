#include "fran/closed_form.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace fran {

namespace {

void require_quad(const CacheQuad& q) {
  require_fraction(q.en1_i, "mu_{1,i}");
  require_fraction(q.en2_i, "mu_{2,i}");
  require_fraction(q.en1_j, "mu_{1,j}");
  require_fraction(q.en2_j, "mu_{2,j}");
}

}  // namespace

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::HT: return "HT";
    case Strategy::ZF: return "ZF";
    case Strategy::ST_ZF: return "ST+ZF";
    case Strategy::X_IA: return "X-IA";
  }
  return "?";
}

Strategy parse_strategy(std::string_view text) {
  if (text == "HT") return Strategy::HT;
  if (text == "ZF") return Strategy::ZF;
  if (text == "ST+ZF") return Strategy::ST_ZF;
  if (text == "X-IA") return Strategy::X_IA;
  throw StructuralError("unknown strategy '" + std::string(text) + "'");
}

NdtPoint strategy_ndt(const StrategyInvocation& inv, double rate) {
  require_rate(rate);
  require_fraction(inv.nu, "message fraction nu");
  switch (inv.kind) {
    case Strategy::HT: return {inv.nu / rate, 0.0};
    case Strategy::ZF: return {0.0, inv.nu};
    case Strategy::ST_ZF: return {inv.nu / rate, inv.nu};
    case Strategy::X_IA: return {0.0, 3.0 * inv.nu};
  }
  throw StructuralError("invalid strategy");
}

RegimeId::RegimeId(int ell) : ell_(ell) {
  if (ell < 1 || ell > 4) {
    throw StructuralError("regime index " + std::to_string(ell) +
                          " outside [1:4]");
  }
}

double ndt_inner_component(RegimeId ell, double mu_i, double mu_j,
                           double rate) {
  require_fraction(mu_i, "mu_i");
  require_fraction(mu_j, "mu_j");
  require_rate(rate);
  const double lo = std::min(mu_i, mu_j);
  const double hi = std::max(mu_i, mu_j);
  const double inv_r = 1.0 / rate;
  switch (ell.value()) {
    case 1: return 1.0 + inv_r - (inv_r - 1.0) * hi - inv_r * lo;
    case 2: return 1.5 + inv_r * (0.5 - lo);
    case 3: return 2.0 - lo;
    case 4: return 1.0 + inv_r - inv_r * lo;
  }
  return 0.0;
}

InnerNdt ndt_inner(double mu_i, double mu_j, double rate) {
  require_fraction(mu_i, "mu_i");
  require_fraction(mu_j, "mu_j");
  require_rate(rate);
  if (rate > 1.0) {
    RegimeId r4(4);
    return {ndt_inner_component(r4, mu_i, mu_j, rate), r4};
  }
  const double lo = std::min(mu_i, mu_j);
  const double hi = std::max(mu_i, mu_j);
  int ell = 2;
  if (hi < 0.5) {
    ell = 1;
  } else if (lo > 0.5) {
    ell = 3;
  }
  const RegimeId chosen(ell);
  const double value = ndt_inner_component(chosen, mu_i, mu_j, rate);
  // On a boundary the neighbouring formulas coincide.
  if (ell == 2) {
    const bool agrees =
        (hi != 0.5 || approx_equal(value, ndt_inner_component(RegimeId(1), mu_i, mu_j, rate))) &&
        (lo != 0.5 || approx_equal(value, ndt_inner_component(RegimeId(3), mu_i, mu_j, rate)));
    if (!agrees) {
      throw std::logic_error("regime formulas disagree on the mu = 1/2 boundary");
    }
  }
  return {value, chosen};
}

CacheQuad CacheQuad::of(const CachePartition& partition, const Demand& demand) {
  return {partition.at(0, demand.i()), partition.at(1, demand.i()),
          partition.at(0, demand.j()), partition.at(1, demand.j())};
}

double CacheQuad::min_entry() const {
  return std::min({en1_i, en2_i, en1_j, en2_j});
}

bool CacheQuad::columns_symmetric(double tol) const {
  return approx_equal(en1_i, en2_i, tol) && approx_equal(en1_j, en2_j, tol);
}

CacheQuad CacheQuad::symmetrized() const {
  const double mi = 0.5 * sum_i();
  const double mj = 0.5 * sum_j();
  return {mi, mi, mj, mj};
}

double ndt_outer_component(RegimeId ell, const CacheQuad& quad, double rate) {
  require_quad(quad);
  require_rate(rate);
  const double inv_r = 1.0 / rate;
  const double m = quad.min_entry();
  switch (ell.value()) {
    case 1:
      return 1.0 + inv_r - m - 0.5 * (inv_r - 1.0) * quad.total();
    case 2:
      return 1.5 + 0.5 * inv_r - m -
             0.5 * (inv_r - 1.0) * std::min(quad.sum_i(), quad.sum_j());
    case 3:
      return 2.0 - m;
    case 4:
      return 1.0 + inv_r - inv_r * m;
  }
  return 0.0;
}

OuterNdt ndt_outer(const CacheQuad& quad, double rate) {
  if (rate > 1.0) {
    RegimeId r4(4);
    return {ndt_outer_component(r4, quad, rate), r4};
  }
  OuterNdt best{ndt_outer_component(RegimeId(1), quad, rate), RegimeId(1)};
  for (int ell = 2; ell <= 3; ++ell) {
    const double v = ndt_outer_component(RegimeId(ell), quad, rate);
    if (v > best.total) best = {v, RegimeId(ell)};
  }
  return best;
}

}  // namespace fran
