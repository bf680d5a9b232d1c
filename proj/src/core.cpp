#include "fran/core.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace fran {

bool approx_equal(double x, double y, double tol) {
  return std::abs(x - y) <= tol;
}

void require_fraction(double value, const char* what) {
  if (!(value >= 0.0 && value <= 1.0)) {
    std::ostringstream os;
    os << what << " = " << value << " is outside [0,1]";
    throw ConstraintError(os.str());
  }
}

void require_rate(double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    std::ostringstream os;
    os << "fronthaul rate r = " << rate << " must be positive and finite";
    throw ConstraintError(os.str());
  }
}

SystemParams::SystemParams(double mu, double rate, int num_files,
                           std::vector<FileClass> classes)
    : mu_(mu), rate_(rate), num_files_(num_files), classes_(std::move(classes)) {
  require_fraction(mu, "cache capacity mu");
  require_rate(rate);
  if (num_files < 2) {
    throw ConstraintError("library must hold at least two files");
  }
  if (!classes_.empty()) {
    int total = 0;
    for (const auto& c : classes_) {
      if (c.count < 1) {
        throw ConstraintError("file class " + std::to_string(c.id) +
                              " must contain at least one file");
      }
      total += c.count;
    }
    if (total != num_files) {
      throw ConstraintError("class file counts sum to " +
                            std::to_string(total) + ", library has " +
                            std::to_string(num_files));
    }
  }
}

SystemParams SystemParams::two_class(double mu, double rate, int j1, int j2) {
  return SystemParams(mu, rate, j1 + j2, {{1, j1}, {2, j2}});
}

CachePartition::CachePartition(std::vector<double> en1, std::vector<double> en2)
    : rows_{std::move(en1), std::move(en2)} {
  if (rows_[0].size() != rows_[1].size()) {
    throw StructuralError("cache partition rows have different lengths (" +
                          std::to_string(rows_[0].size()) + " vs " +
                          std::to_string(rows_[1].size()) + ")");
  }
}

CachePartition CachePartition::symmetric(std::span<const double> per_file) {
  std::vector<double> row(per_file.begin(), per_file.end());
  return CachePartition(row, row);
}

double CachePartition::at(int en, int file) const {
  if (en < 0 || en >= kNumEdgeNodes || file < 0 || file >= num_files()) {
    throw StructuralError("cache partition index (" + std::to_string(en) +
                          ", " + std::to_string(file) + ") out of range");
  }
  return rows_[en][file];
}

std::span<const double> CachePartition::row(int en) const {
  if (en < 0 || en >= kNumEdgeNodes) {
    throw StructuralError("EN index " + std::to_string(en) + " out of range");
  }
  return rows_[en];
}

double CachePartition::row_sum(int en) const {
  auto r = row(en);
  return std::accumulate(r.begin(), r.end(), 0.0);
}

bool CachePartition::is_symmetric(double tol) const {
  for (int f = 0; f < num_files(); ++f) {
    if (!approx_equal(rows_[0][f], rows_[1][f], tol)) return false;
  }
  return true;
}

ValidationReport validate_partition(const CachePartition& partition,
                                    const SystemParams& params) {
  if (partition.num_files() != params.num_files()) {
    throw StructuralError("cache partition has " +
                          std::to_string(partition.num_files()) +
                          " columns, library has " +
                          std::to_string(params.num_files()) + " files");
  }
  ValidationReport report;
  for (int en = 0; en < kNumEdgeNodes; ++en) {
    for (int f = 0; f < partition.num_files(); ++f) {
      const double v = partition.at(en, f);
      if (!(v >= 0.0 && v <= 1.0)) {
        std::ostringstream os;
        os << "entry (EN" << en + 1 << ", file " << f + 1 << ") = " << v
           << " outside [0,1]";
        report.violations.push_back(os.str());
      }
    }
    const double sum = partition.row_sum(en);
    if (sum > params.capacity() + kTolerance) {
      std::ostringstream os;
      os << "row EN" << en + 1 << " sums to " << sum << " > mu*J = "
         << params.capacity();
      report.violations.push_back(os.str());
    }
  }
  return report;
}

CachePartition symmetrize(const CachePartition& partition) {
  const int n = partition.num_files();
  std::vector<double> mean(n);
  for (int f = 0; f < n; ++f) {
    mean[f] = 0.5 * (partition.at(0, f) + partition.at(1, f));
  }
  return CachePartition(mean, mean);
}

Demand::Demand(int i, int j) : i_(i), j_(j) {
  if (i < 0 || j < 0) {
    throw StructuralError("file indices must be non-negative");
  }
  if (i == j) {
    throw ConstraintError("requested files must be distinct (both are file " +
                          std::to_string(i + 1) + ")");
  }
}

NdtPoint::NdtPoint(double fronthaul, double edge)
    : fronthaul_(fronthaul), edge_(edge) {
  if (!(fronthaul >= 0.0) || !(edge >= 0.0)) {
    std::ostringstream os;
    os << "NDT components must be non-negative (fronthaul " << fronthaul
       << ", edge " << edge << ")";
    throw ConstraintError(os.str());
  }
}

NdtPoint& NdtPoint::operator+=(const NdtPoint& other) {
  fronthaul_ += other.fronthaul_;
  edge_ += other.edge_;
  return *this;
}

NdtPoint NdtPoint::scaled(double factor) const {
  return NdtPoint(fronthaul_ * factor, edge_ * factor);
}

PopularityProfile::PopularityProfile(double a) : a_(a) {
  require_fraction(a, "popularity a");
}

}  // namespace fran
