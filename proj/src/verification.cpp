#include "fran/verification.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "fran/bounds_oracle.hpp"
#include "fran/closed_form.hpp"
#include "fran/planner.hpp"

namespace fran {

namespace {

constexpr std::size_t kMaxSamples = 5;

std::vector<double> grid(double step) {
  const auto n = static_cast<int>(std::lround(1.0 / step));
  std::vector<double> values;
  for (int k = 0; k <= n; ++k) values.push_back(static_cast<double>(k) / n);
  return values;
}

std::string at(double mu_i, double mu_j, double r) {
  std::ostringstream os;
  os << "(mu_i=" << mu_i << ", mu_j=" << mu_j << ", r=" << r << ")";
  return os.str();
}

/// Random symmetric allocation of a J-file library within mu*J.
std::vector<double> random_allocation(std::mt19937_64& rng, int files, double mu) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> alloc(files);
  double sum = 0.0;
  for (auto& v : alloc) sum += (v = unit(rng));
  if (sum > mu * files) {
    for (auto& v : alloc) v *= mu * files / sum;
  }
  return alloc;
}

}  // namespace

void SuiteResult::record(bool ok, const std::string& message) {
  ++checks;
  if (ok) return;
  ++failures;
  if (samples.size() < kMaxSamples) samples.push_back(message);
}

const std::vector<double>& default_rates() {
  static const std::vector<double> rates = {0.1, 0.2, 0.5, 1.0, 1.5, 2.0};
  return rates;
}

SuiteResult tightness_suite(double grid_step) {
  SuiteResult result("tightness");
  const auto values = grid(grid_step);
  for (double r : default_rates()) {
    for (double mi : values) {
      for (double mj : values) {
        const auto rep = check_tightness(mi, mj, r);
        std::ostringstream os;
        os << at(mi, mj, r) << " inner " << rep.inner << " outer " << rep.outer
           << " lp " << rep.lp;
        result.record(rep.ok, os.str());
      }
    }
  }
  return result;
}

SuiteResult symmetrization_suite(int samples, std::uint64_t seed) {
  SuiteResult result("symmetrization");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> rate(0.05, 3.0);
  const Demand demand(0, 1);
  for (int s = 0; s < samples; ++s) {
    const CachePartition p({unit(rng), unit(rng)}, {unit(rng), unit(rng)});
    const double r = rate(rng);
    const auto rep = check_symmetrization(p, demand, r);
    std::ostringstream os;
    os << "partition (" << p.at(0, 0) << ", " << p.at(1, 0) << ", " << p.at(0, 1)
       << ", " << p.at(1, 1) << "), r=" << r;
    result.record(rep.ok, os.str());
  }
  // Symmetric inputs leave every component unchanged.
  for (double m : grid(0.1)) {
    const CachePartition p({m, 1.0 - m}, {m, 1.0 - m});
    result.record(check_symmetrization(p, demand, 0.5).ok, "symmetric partition");
  }
  return result;
}

SuiteResult planner_suite(double grid_step) {
  SuiteResult result("planner");
  const auto values = grid(grid_step);
  for (double r : default_rates()) {
    for (double mi : values) {
      for (double mj : values) {
        const std::vector<double> alloc = {mi, mj};
        const SystemParams params(std::max(0.5 * (mi + mj), 0.0), r, 2);
        const auto placement = build_cache_placement(alloc, r, params);
        const Demand demand(0, 1);
        const auto plan = build_delivery_plan(placement, demand, r);
        const auto report = verify_plan(plan, placement, demand, r);
        const double expected = ndt_inner(mi, mj, r).total;
        const bool ok = report.ok() &&
                        std::abs(plan_ndt(plan, r).total() - expected) <= 1e-12;
        result.record(ok, at(mi, mj, r) +
                              (report.ok() ? " total mismatch" : " " + report.failures.front()));
      }
    }
  }
  return result;
}

SuiteResult dual_reconstruction_suite(int samples, std::uint64_t seed) {
  SuiteResult result("dual-reconstruction");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> rate(0.05, 3.0);
  for (int s = 0; s < samples; ++s) {
    const CacheQuad q{unit(rng), unit(rng), unit(rng), unit(rng)};
    const double r = rate(rng);
    const Polytope poly = constraint_polytope(q, r);
    const double lp = lp_min_total(poly).optimum;
    const int first = r <= 1.0 ? 1 : 4;
    const int last = r <= 1.0 ? 3 : 4;
    for (int ell = first; ell <= last; ++ell) {
      const RegimeId id(ell);
      const auto w = dual_weights(id, r);
      const HalfPlane h = combine(poly, w);
      const double component = ndt_outer_component(id, q, r);
      bool ok = std::abs(h.a_e - 1.0) <= 1e-12 && std::abs(h.a_f - 1.0) <= 1e-12 &&
                std::abs(h.b - component) <= 1e-12 && component <= lp + kTolerance;
      for (double wk : w) ok = ok && wk >= 0.0;
      std::ostringstream os;
      os << "component " << ell << " r=" << r << " combination rhs " << h.b
         << " vs " << component << ", lp " << lp;
      result.record(ok, os.str());
    }
  }
  return result;
}

SuiteResult mixing_suite(int samples, std::uint64_t seed) {
  SuiteResult result("mixing");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int files = 4;
  for (int s = 0; s < samples; ++s) {
    const double mu = unit(rng);
    const double r = default_rates()[rng() % default_rates().size()];
    const SystemParams params(mu, r, files);
    const int i = static_cast<int>(rng() % files);
    const int j = (i + 1 + static_cast<int>(rng() % (files - 1))) % files;
    const Demand demand(i, j);
    const auto pa = build_cache_placement(random_allocation(rng, files, mu), r, params);
    const auto pb = build_cache_placement(random_allocation(rng, files, mu), r, params);
    const auto plan_a = build_delivery_plan(pa, demand, r);
    const auto plan_b = build_delivery_plan(pb, demand, r);
    for (double alpha : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      const auto mixed = mix_plans(plan_a, plan_b, alpha);
      const auto placement = mix_placements(pa, pb, alpha);
      const NdtPoint got = plan_ndt(mixed, r);
      const NdtPoint a = plan_ndt(plan_a, r);
      const NdtPoint b = plan_ndt(plan_b, r);
      const bool linear =
          std::abs(got.fronthaul() - (alpha * a.fronthaul() + (1 - alpha) * b.fronthaul())) <= 1e-12 &&
          std::abs(got.edge() - (alpha * a.edge() + (1 - alpha) * b.edge())) <= 1e-12;
      const bool capacity = validate_partition(placement.partition(), params).ok();
      const bool verified = verify_plan(mixed, placement, demand, r).ok();
      std::ostringstream os;
      os << "sample " << s << " alpha=" << alpha << (linear ? "" : " nonlinear")
         << (capacity ? "" : " capacity") << (verified ? "" : " verify");
      result.record(linear && capacity && verified, os.str());
    }
  }
  return result;
}

SuiteResult continuity_suite(double ray_step) {
  SuiteResult result("continuity");
  const auto fine = grid(ray_step);
  for (double r : default_rates()) {
    if (r <= 1.0) {
      for (double x : fine) {
        const double at_half = ndt_inner_component(RegimeId(2), x, 0.5, r);
        const double other =
            ndt_inner_component(RegimeId(x <= 0.5 ? 1 : 3), x, 0.5, r);
        result.record(std::abs(at_half - other) <= kTolerance,
                      "boundary mismatch " + at(x, 0.5, r));
      }
    }
    for (double fixed : grid(0.05)) {
      double prev = ndt_inner(0.0, fixed, r).total;
      for (double x : fine) {
        const double v = ndt_inner(x, fixed, r).total;
        result.record(v <= prev + kTolerance, "increase along ray " + at(x, fixed, r));
        prev = v;
      }
    }
  }
  // r = 1 is the last rate of the r <= 1 branch; the r > 1 formula joins it.
  for (double x : grid(0.05)) {
    for (double y : grid(0.05)) {
      result.record(std::abs(ndt_inner(x, y, 1.0).total -
                             ndt_inner_component(RegimeId(4), x, y, 1.0)) <= kTolerance,
                    "discontinuity at r = 1 " + at(x, y, 1.0));
    }
  }
  return result;
}

std::vector<SuiteResult> run_all_suites() {
  return {tightness_suite(), symmetrization_suite(), planner_suite(),
          dual_reconstruction_suite(), mixing_suite(), continuity_suite()};
}

nlohmann::json suites_to_json(const std::vector<SuiteResult>& results) {
  nlohmann::json suites = nlohmann::json::array();
  bool all = true;
  for (const auto& r : results) {
    suites.push_back({{"name", r.name},
                      {"passed", r.passed()},
                      {"checks", r.checks},
                      {"failures", r.failures},
                      {"samples", r.samples}});
    all = all && r.passed();
  }
  return {{"passed", all}, {"suites", std::move(suites)}};
}

}  // namespace fran
