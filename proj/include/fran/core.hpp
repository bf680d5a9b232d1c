#pragma once

// Domain types shared by every module: system parameters, cache partitions,
// demands, NDT points and popularity profiles.

#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fran {

/// Absolute tolerance for all comparisons of NDT values and cache fractions.
inline constexpr double kTolerance = 1e-9;

/// A value lies outside its admissible domain (capacity exceeded, fraction
/// outside [0,1], non-positive rate, ...).
class ConstraintError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed input whose shape is wrong (dimension mismatch, bad index,
/// unparsable text). Distinct from a constraint violation.
class StructuralError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr int kNumEdgeNodes = 2;

struct FileClass {
  int id = 0;
  int count = 0;
};

/// Fractional cache capacity mu, fronthaul rate r and library size J.
class SystemParams {
 public:
  SystemParams(double mu, double rate, int num_files,
               std::vector<FileClass> classes = {});

  /// Two-class library: files [0, j1) form class 1 and [j1, j1+j2) class 2.
  static SystemParams two_class(double mu, double rate, int j1, int j2);

  double mu() const { return mu_; }
  double rate() const { return rate_; }
  int num_files() const { return num_files_; }
  const std::vector<FileClass>& classes() const { return classes_; }

  /// Per-EN cache budget mu*J in units of one file.
  double capacity() const { return mu_ * num_files_; }

 private:
  double mu_;
  double rate_;
  int num_files_;
  std::vector<FileClass> classes_;
};

/// Per-EN, per-file cache fractions. Row m holds EN m's fractions of every
/// file. The type only enforces its shape; use validate_partition for the
/// range and capacity constraints.
class CachePartition {
 public:
  CachePartition() = default;
  CachePartition(std::vector<double> en1, std::vector<double> en2);

  /// Both ENs cache the same fraction of each file.
  static CachePartition symmetric(std::span<const double> per_file);

  int num_files() const { return static_cast<int>(rows_[0].size()); }
  double at(int en, int file) const;
  std::span<const double> row(int en) const;
  double row_sum(int en) const;
  bool is_symmetric(double tol = kTolerance) const;

  friend bool operator==(const CachePartition&, const CachePartition&) = default;

 private:
  std::array<std::vector<double>, kNumEdgeNodes> rows_;
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks every entry in [0,1] and both row sums <= mu*J. A partition whose
/// width differs from params.num_files() raises StructuralError instead.
ValidationReport validate_partition(const CachePartition& partition,
                                    const SystemParams& params);

/// Replaces each file's two per-EN fractions by their mean.
CachePartition symmetrize(const CachePartition& partition);

/// A pair of distinct requested files; user 0 asks for file i, user 1 for j.
class Demand {
 public:
  Demand(int i, int j);
  int i() const { return i_; }
  int j() const { return j_; }
  int file_of_user(int user) const { return user == 0 ? i_ : j_; }
  bool contains(int file) const { return file == i_ || file == j_; }

  friend bool operator==(const Demand&, const Demand&) = default;

 private:
  int i_;
  int j_;
};

/// Fronthaul and edge NDT of one delivery, plus their sum.
class NdtPoint {
 public:
  NdtPoint() = default;
  NdtPoint(double fronthaul, double edge);

  double fronthaul() const { return fronthaul_; }
  double edge() const { return edge_; }
  double total() const { return fronthaul_ + edge_; }

  NdtPoint& operator+=(const NdtPoint& other);
  friend NdtPoint operator+(NdtPoint a, const NdtPoint& b) { return a += b; }
  NdtPoint scaled(double factor) const;

 private:
  double fronthaul_ = 0.0;
  double edge_ = 0.0;
};

/// Class-1 request probability a and the induced pair probabilities.
class PopularityProfile {
 public:
  explicit PopularityProfile(double a);
  double a() const { return a_; }
  double p11() const { return a_ * a_; }
  double p12() const { return 2.0 * a_ * (1.0 - a_); }
  double p22() const { return (1.0 - a_) * (1.0 - a_); }

 private:
  double a_;
};

bool approx_equal(double x, double y, double tol = kTolerance);

/// Throws ConstraintError unless 0 <= value <= 1.
void require_fraction(double value, const char* what);
/// Throws ConstraintError unless r > 0 and finite.
void require_rate(double rate);

}  // namespace fran
