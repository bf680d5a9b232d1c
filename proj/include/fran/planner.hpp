#pragma once

// Explicit cache placements and delivery plans: which bit ranges of the
// requested files travel through which strategy, and what each phase costs.
//
// All positions are fractions of the file length, so a file is [0, 1).

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fran/closed_form.hpp"
#include "fran/core.hpp"

namespace fran {

/// Tolerance for interval endpoints and lengths.
inline constexpr double kIntervalTolerance = 1e-12;

/// Half-open range [lo, hi) of normalized bit positions.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  bool empty() const { return length() <= kIntervalTolerance; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Sorts and merges touching or overlapping intervals; drops empty ones.
std::vector<Interval> normalize_intervals(std::vector<Interval> intervals);
/// True when `iv` lies inside the union of `set`.
bool covers(std::span<const Interval> set, const Interval& iv);
/// Length of the intersection of `iv` with the union of `set`.
double overlap_length(std::span<const Interval> set, const Interval& iv);

/// Receiver of a payload: an EN (fronthaul) or a user (edge).
struct Endpoint {
  enum class Kind { EdgeNode, User };
  Kind kind = Kind::User;
  int index = 0;

  static Endpoint edge_node(int en) { return {Kind::EdgeNode, en}; }
  static Endpoint user(int u) { return {Kind::User, u}; }
  bool is_edge_node() const { return kind == Kind::EdgeNode; }
  friend bool operator==(const Endpoint&, const Endpoint&) = default;
};

/// "EN1", "EN2", "user1", "user2".
std::string to_string(const Endpoint& e);
Endpoint parse_endpoint(const std::string& text);

struct Payload {
  int file = 0;
  Interval interval;
  Endpoint endpoint;
  /// Transmitting EN; set for X-IA payloads only.
  std::optional<int> source_en;
};

struct Phase {
  Strategy kind = Strategy::ZF;
  std::vector<Payload> payloads;
  NdtPoint ndt;
};

struct DeliveryPlan {
  Demand demand{0, 1};
  std::vector<Phase> phases;
  NdtPoint total;
};

/// How a placement's intervals were laid out.
enum class CacheLayout {
  /// Head of each file at EN1, tail at EN2 (minimal overlap).
  Split,
  /// Head of each file at both ENs (maximal overlap).
  Shared,
  /// Anything else, e.g. a mixture of two placements.
  Custom,
};

/// Per (file, EN) list of disjoint, sorted cached intervals.
class CachePlacement {
 public:
  CachePlacement(int num_files, CacheLayout layout);

  void add(int file, int en, const Interval& iv);

  int num_files() const { return static_cast<int>(cached_.size()); }
  CacheLayout layout() const { return layout_; }
  std::span<const Interval> intervals(int file, int en) const;
  double fraction(int file, int en) const;
  bool holds(int file, int en, const Interval& iv) const;
  /// Cache fractions implied by the stored intervals.
  CachePartition partition() const;

 private:
  void check_index(int file, int en) const;

  CacheLayout layout_;
  std::vector<std::array<std::vector<Interval>, kNumEdgeNodes>> cached_;
};

/// Caches file j as [0, mu_j) at EN1 and [1 - mu_j, 1) at EN2 when r <= 1,
/// and as [0, mu_j) at both ENs when r > 1. Throws ConstraintError when a
/// fraction leaves [0,1] or the per-EN total exceeds mu*J.
CachePlacement build_cache_placement(std::span<const double> mu_per_file,
                                     double rate, const SystemParams& params);

/// Thrown when a placement is not one produced by build_cache_placement
/// for the requested rate (asymmetric fractions, mixed layouts, ...).
class UnsupportedPlacement : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a phase's payloads do not match its strategy's message
/// pattern.
class PlanShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Builds the regime-specific delivery (HT, then X-IA, then ST+ZF or ZF)
/// whose total NDT equals ndt_inner of the two requested files' fractions.
DeliveryPlan build_delivery_plan(const CachePlacement& placement,
                                 const Demand& demand, double rate);

/// Recomputes every phase cost from its payload lengths and sums them.
NdtPoint plan_ndt(const DeliveryPlan& plan, double rate);

struct PlanReport {
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

/// Checks coverage of both requested files, source availability of every
/// payload and the plan's NDT accounting.
PlanReport verify_plan(const DeliveryPlan& plan, const CachePlacement& placement,
                       const Demand& demand, double rate);

/// Splits every file at alpha: plan_a delivers the rescaled [0, alpha)
/// and plan_b the rescaled [alpha, 1).
DeliveryPlan mix_plans(const DeliveryPlan& plan_a, const DeliveryPlan& plan_b,
                       double alpha);

/// The cache placement matching mix_plans: placement_a squeezed into
/// [0, alpha) of every file and placement_b into [alpha, 1).
CachePlacement mix_placements(const CachePlacement& placement_a,
                              const CachePlacement& placement_b, double alpha);

/// Fixed-width table with one row per phase and a total row.
std::string format_plan_table(const DeliveryPlan& plan);

}  // namespace fran
