#pragma once

// Two-class trade-off curves. Every file of class k gets the same cache
// fraction mu_k at both ENs; sweeping the split of the cache budget between
// the classes traces the boundary of the NDT region slice and of the
// popularity-weighted average latencies.

#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "fran/closed_form.hpp"
#include "fran/core.hpp"

namespace fran {

struct ClassScenario {
  int j1;
  int j2;
  double mu;
  double rate;
  double mu1;
  double mu2;

  /// Throws ConstraintError unless the fractions lie in [0,1] and
  /// j1*mu1 + j2*mu2 <= mu*(j1+j2).
  void validate() const;
};

struct SlicePoint {
  /// NDT of a demand with one file from each class.
  double d12;
  /// NDT of two distinct class-1 files.
  double d11;
  /// NDT of two distinct class-2 files. Not part of the slice envelope.
  double d22;
  double mu1;
  double mu2;
  /// Inner-bound regime of the mixed-class demand.
  RegimeId regime12;
  RegimeId regime11;
};

SlicePoint slice_point(const ClassScenario& scenario);

struct Point2 {
  double x;
  double y;
};

/// Non-dominated subset (smaller is better in both coordinates), sorted by
/// x with y strictly decreasing. Returns indices into `points`.
std::vector<std::size_t> pareto_front(std::span<const Point2> points,
                                      double tol = kTolerance);
std::vector<Point2> pareto_envelope(std::span<const Point2> points,
                                    double tol = kTolerance);

enum class SweepMode {
  /// mu2 takes all capacity left over by mu1 (capped at 1).
  Saturated,
  /// Full 2-D grid of feasible (mu1, mu2); for validation.
  Interior,
};

struct RegionSlice {
  /// Envelope points sorted by d12.
  std::vector<SlicePoint> points;
  /// Indices into `points` where regime12 differs from the previous point.
  std::vector<std::size_t> breakpoints;
};

/// Candidate class-1 fractions: a uniform grid over [0, mu1_max] no coarser
/// than `step`, plus every kink (0, 1/2, 1, mu1 = mu2 and the mu1 values at
/// which mu2 crosses 0, 1/2 or 1).
std::vector<double> sweep_class1_fractions(int j1, int j2, double mu, double step);

/// Largest mu2 left once class 1 holds mu1.
double saturated_class2_fraction(int j1, int j2, double mu, double mu1);

RegionSlice trace_region_slice(int j1, int j2, double mu, double rate, double step,
                               SweepMode mode = SweepMode::Saturated);

enum class AverageFormula {
  /// Class-2 average pairs class-2 files with d22.
  ClassConsistent,
  /// Class-2 average uses d11 in its first term instead of d22.
  AsPrinted,
};

struct AverageNdt {
  std::optional<double> class1;
  std::optional<double> class2;
};

/// Averages over the partner file. A side whose class is never requested
/// (a = 0 for class 1, a = 1 for class 2) is left empty.
AverageNdt average_ndt(double d11, double d12, double d22,
                       const PopularityProfile& profile,
                       AverageFormula formula = AverageFormula::ClassConsistent);

struct TradeoffPoint {
  double avg1;
  double avg2;
  SlicePoint source;
};

struct TradeoffCurve {
  std::vector<TradeoffPoint> points;
  PopularityProfile profile;
};

/// Requires 0 < a < 1.
TradeoffCurve trace_average_tradeoff(
    int j1, int j2, double mu, double rate, double a, double step,
    AverageFormula formula = AverageFormula::ClassConsistent);

/// Two comma-separated columns (d12, d11), no header. `extended` appends
/// mu1, mu2 and regime12.
void write_slice_csv(std::ostream& os, const RegionSlice& slice, bool extended);
/// Two columns (class-1 average, class-2 average), same conventions.
void write_tradeoff_csv(std::ostream& os, const TradeoffCurve& curve, bool extended);

/// Shortest text that preserves 15 significant digits.
std::string format_number(double value);

}  // namespace fran
