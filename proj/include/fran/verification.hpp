#pragma once

// Property sweeps run by the `verify` subcommand. Each suite counts its
// individual checks and keeps the first few failure messages.

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace fran {

struct SuiteResult {
  explicit SuiteResult(std::string suite_name) : name(std::move(suite_name)) {}

  std::string name;
  std::size_t checks = 0;
  std::size_t failures = 0;
  std::vector<std::string> samples;

  bool passed() const { return failures == 0 && checks > 0; }
  void record(bool ok, const std::string& message);
};

/// Rates swept by the grid suites.
const std::vector<double>& default_rates();

/// inner == outer == LP minimum on a symmetric grid of the given step.
SuiteResult tightness_suite(double grid_step = 0.01);
/// Random partitions: symmetrizing never raises an outer component.
SuiteResult symmetrization_suite(int samples = 1000, std::uint64_t seed = 7);
/// Built plans verify and match ndt_inner.
SuiteResult planner_suite(double grid_step = 0.05);
/// Dual multipliers reproduce each outer component and stay below the LP.
SuiteResult dual_reconstruction_suite(int samples = 1000, std::uint64_t seed = 11);
/// Mixed plans cost the convex combination and respect the capacity.
SuiteResult mixing_suite(int samples = 200, std::uint64_t seed = 13);
/// Boundary agreement at mu = 1/2 and monotonicity along rays.
SuiteResult continuity_suite(double ray_step = 0.001);

std::vector<SuiteResult> run_all_suites();
nlohmann::json suites_to_json(const std::vector<SuiteResult>& results);

}  // namespace fran
