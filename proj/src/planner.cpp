#include "fran/planner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace fran {

std::vector<Interval> normalize_intervals(std::vector<Interval> intervals) {
  std::erase_if(intervals, [](const Interval& iv) { return iv.empty(); });
  std::sort(intervals.begin(), intervals.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  std::vector<Interval> merged;
  for (const auto& iv : intervals) {
    if (!merged.empty() && iv.lo <= merged.back().hi + kIntervalTolerance) {
      merged.back().hi = std::max(merged.back().hi, iv.hi);
    } else {
      merged.push_back(iv);
    }
  }
  return merged;
}

double overlap_length(std::span<const Interval> set, const Interval& iv) {
  double total = 0.0;
  for (const auto& s : normalize_intervals({set.begin(), set.end()})) {
    const double lo = std::max(s.lo, iv.lo);
    const double hi = std::min(s.hi, iv.hi);
    if (hi > lo) total += hi - lo;
  }
  return total;
}

bool covers(std::span<const Interval> set, const Interval& iv) {
  if (iv.empty()) return true;
  return overlap_length(set, iv) >= iv.length() - kIntervalTolerance;
}

std::string to_string(const Endpoint& e) {
  return (e.is_edge_node() ? "EN" : "user") + std::to_string(e.index + 1);
}

Endpoint parse_endpoint(const std::string& text) {
  auto parse_index = [&](std::size_t prefix) {
    const std::string digits = text.substr(prefix);
    if (digits != "1" && digits != "2") {
      throw StructuralError("bad endpoint '" + text + "'");
    }
    return std::stoi(digits) - 1;
  };
  if (text.rfind("EN", 0) == 0) return Endpoint::edge_node(parse_index(2));
  if (text.rfind("user", 0) == 0) return Endpoint::user(parse_index(4));
  throw StructuralError("bad endpoint '" + text + "'");
}

// --- CachePlacement ---------------------------------------------------------

CachePlacement::CachePlacement(int num_files, CacheLayout layout)
    : layout_(layout), cached_(static_cast<std::size_t>(std::max(num_files, 0))) {
  if (num_files < 1) throw StructuralError("placement needs at least one file");
}

void CachePlacement::check_index(int file, int en) const {
  if (file < 0 || file >= num_files() || en < 0 || en >= kNumEdgeNodes) {
    throw StructuralError("placement index (file " + std::to_string(file + 1) +
                          ", EN" + std::to_string(en + 1) + ") out of range");
  }
}

void CachePlacement::add(int file, int en, const Interval& iv) {
  check_index(file, en);
  if (iv.lo < -kIntervalTolerance || iv.hi > 1.0 + kIntervalTolerance ||
      iv.hi < iv.lo - kIntervalTolerance) {
    throw ConstraintError("cached interval outside [0,1)");
  }
  auto& slot = cached_[file][en];
  slot.push_back(iv);
  slot = normalize_intervals(std::move(slot));
}

std::span<const Interval> CachePlacement::intervals(int file, int en) const {
  check_index(file, en);
  return cached_[file][en];
}

double CachePlacement::fraction(int file, int en) const {
  double total = 0.0;
  for (const auto& iv : intervals(file, en)) total += iv.length();
  return total;
}

bool CachePlacement::holds(int file, int en, const Interval& iv) const {
  return covers(intervals(file, en), iv);
}

CachePartition CachePlacement::partition() const {
  std::vector<double> en1(num_files()), en2(num_files());
  for (int f = 0; f < num_files(); ++f) {
    en1[f] = fraction(f, 0);
    en2[f] = fraction(f, 1);
  }
  return CachePartition(std::move(en1), std::move(en2));
}

CachePlacement build_cache_placement(std::span<const double> mu_per_file,
                                     double rate, const SystemParams& params) {
  require_rate(rate);
  if (static_cast<int>(mu_per_file.size()) != params.num_files()) {
    throw StructuralError("allocation lists " + std::to_string(mu_per_file.size()) +
                          " files, library has " + std::to_string(params.num_files()));
  }
  const auto report =
      validate_partition(CachePartition::symmetric(mu_per_file), params);
  if (!report.ok()) throw ConstraintError(report.violations.front());

  const bool split = rate <= 1.0;
  CachePlacement placement(params.num_files(),
                           split ? CacheLayout::Split : CacheLayout::Shared);
  for (int f = 0; f < params.num_files(); ++f) {
    const double m = mu_per_file[f];
    placement.add(f, 0, {0.0, m});
    placement.add(f, 1, split ? Interval{1.0 - m, 1.0} : Interval{0.0, m});
  }
  return placement;
}

// --- Delivery construction ---------------------------------------------------

namespace {

class PlanBuilder {
 public:
  PlanBuilder(const Demand& demand, double rate) : rate_(rate) {
    plan_.demand = demand;
  }

  /// HT: the same file to EN1 and EN2 over parallel fronthaul links.
  void hard_transfer(int file, Interval to_en1, Interval to_en2) {
    if (to_en1.empty() && to_en2.empty()) return;
    push(Strategy::HT, to_en1.length(),
         {{file, to_en1, Endpoint::edge_node(0), std::nullopt},
          {file, to_en2, Endpoint::edge_node(1), std::nullopt}});
  }

  /// X-IA: EN1 sends `from_en1` of both files, EN2 sends `from_en2`.
  void x_channel(Interval from_en1, Interval from_en2) {
    if (from_en1.empty()) return;
    std::vector<Payload> payloads;
    for (int en = 0; en < kNumEdgeNodes; ++en) {
      for (int user = 0; user < 2; ++user) {
        payloads.push_back({plan_.demand.file_of_user(user),
                            en == 0 ? from_en1 : from_en2, Endpoint::user(user),
                            en});
      }
    }
    push(Strategy::X_IA, from_en1.length(), std::move(payloads));
  }

  /// ZF or ST+ZF: the same range of both files, one per user.
  void beamform(Strategy kind, Interval range) {
    if (range.empty()) return;
    push(kind, range.length(),
         {{plan_.demand.file_of_user(0), range, Endpoint::user(0), std::nullopt},
          {plan_.demand.file_of_user(1), range, Endpoint::user(1), std::nullopt}});
  }

  DeliveryPlan finish() && { return std::move(plan_); }

 private:
  void push(Strategy kind, double nu, std::vector<Payload> payloads) {
    const NdtPoint cost = strategy_ndt({kind, nu}, rate_);
    plan_.phases.push_back({kind, std::move(payloads), cost});
    plan_.total += cost;
  }

  double rate_;
  DeliveryPlan plan_;
};

}  // namespace

DeliveryPlan build_delivery_plan(const CachePlacement& placement,
                                 const Demand& demand, double rate) {
  require_rate(rate);
  if (demand.i() >= placement.num_files() || demand.j() >= placement.num_files()) {
    throw StructuralError("demand names a file outside the placement");
  }
  const CacheLayout expected = rate <= 1.0 ? CacheLayout::Split : CacheLayout::Shared;
  if (placement.layout() != expected) {
    throw UnsupportedPlacement(
        "placement layout does not match the delivery regime for this rate");
  }
  for (int f : {demand.i(), demand.j()}) {
    if (!approx_equal(placement.fraction(f, 0), placement.fraction(f, 1),
                      kIntervalTolerance)) {
      throw UnsupportedPlacement("file " + std::to_string(f + 1) +
                                 " is cached asymmetrically across the ENs");
    }
  }

  // The file with the smaller cached fraction gets the HT top-up.
  int small = demand.i();
  int large = demand.j();
  if (placement.fraction(small, 0) > placement.fraction(large, 0)) {
    std::swap(small, large);
  }
  const double a = placement.fraction(small, 0);
  const double b = placement.fraction(large, 0);

  PlanBuilder builder(demand, rate);
  if (rate > 1.0) {
    builder.beamform(Strategy::ZF, {0.0, a});
    builder.beamform(Strategy::ST_ZF, {a, 1.0});
  } else if (b < 0.5) {
    builder.hard_transfer(small, {a, b}, {1.0 - b, 1.0 - a});
    builder.x_channel({0.0, b}, {1.0 - b, 1.0});
    builder.beamform(Strategy::ST_ZF, {b, 1.0 - b});
  } else if (a <= 0.5) {
    builder.hard_transfer(small, {a, 0.5}, {0.5, 1.0 - a});
    builder.x_channel({0.0, 0.5}, {0.5, 1.0});
  } else {
    builder.x_channel({0.0, 1.0 - a}, {a, 1.0});
    builder.beamform(Strategy::ZF, {1.0 - a, a});
  }
  return std::move(builder).finish();
}

// --- Accounting and verification ----------------------------------------------

namespace {

std::string describe(const Interval& iv) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "[%.12g, %.12g)", iv.lo, iv.hi);
  return buf;
}

double common_length(const Phase& phase) {
  const double nu = phase.payloads.front().interval.length();
  for (const auto& p : phase.payloads) {
    if (!approx_equal(p.interval.length(), nu, kIntervalTolerance)) {
      throw PlanShapeError(std::string(to_string(phase.kind)) +
                           " phase payloads have unequal lengths");
    }
    if (p.interval.lo < -kIntervalTolerance || p.interval.hi > 1.0 + kIntervalTolerance ||
        p.interval.length() < -kIntervalTolerance) {
      throw PlanShapeError("payload interval " + describe(p.interval) +
                           " is outside [0,1)");
    }
  }
  return std::max(nu, 0.0);
}

/// Returns nu after checking the payload pattern of the phase's strategy.
double phase_message_size(const Phase& phase, const Demand& demand) {
  const std::string name(to_string(phase.kind));
  if (phase.payloads.empty()) throw PlanShapeError(name + " phase has no payloads");
  for (const auto& p : phase.payloads) {
    if (!demand.contains(p.file)) {
      throw PlanShapeError(name + " phase carries unrequested file " +
                           std::to_string(p.file + 1));
    }
  }
  switch (phase.kind) {
    case Strategy::HT: {
      if (phase.payloads.size() != 2 || !phase.payloads[0].endpoint.is_edge_node() ||
          !phase.payloads[1].endpoint.is_edge_node() ||
          phase.payloads[0].endpoint == phase.payloads[1].endpoint) {
        throw PlanShapeError("HT phase must send one interval to each EN");
      }
      break;
    }
    case Strategy::ZF:
    case Strategy::ST_ZF: {
      if (phase.payloads.size() != 2) {
        throw PlanShapeError(name + " phase must carry one interval per user");
      }
      for (const auto& p : phase.payloads) {
        if (p.endpoint.is_edge_node() || p.source_en ||
            demand.file_of_user(p.endpoint.index) != p.file) {
          throw PlanShapeError(name + " payload of file " + std::to_string(p.file + 1) +
                               " is not addressed to the user requesting it");
        }
      }
      if (phase.payloads[0].endpoint == phase.payloads[1].endpoint) {
        throw PlanShapeError(name + " phase serves the same user twice");
      }
      break;
    }
    case Strategy::X_IA: {
      if (phase.payloads.size() != 4) {
        throw PlanShapeError("X-IA phase must carry four intervals");
      }
      int seen[kNumEdgeNodes][2] = {{0, 0}, {0, 0}};
      for (const auto& p : phase.payloads) {
        if (!p.source_en || *p.source_en < 0 || *p.source_en >= kNumEdgeNodes ||
            p.endpoint.is_edge_node() ||
            demand.file_of_user(p.endpoint.index) != p.file) {
          throw PlanShapeError("X-IA payload needs a source EN and the requesting user");
        }
        ++seen[*p.source_en][p.endpoint.index];
      }
      for (auto& row : seen) {
        for (int count : row) {
          if (count != 1) {
            throw PlanShapeError("X-IA phase needs one message from each EN to each user");
          }
        }
      }
      break;
    }
  }
  return common_length(phase);
}

}  // namespace

NdtPoint plan_ndt(const DeliveryPlan& plan, double rate) {
  NdtPoint total;
  for (const auto& phase : plan.phases) {
    total += strategy_ndt({phase.kind, phase_message_size(phase, plan.demand)}, rate);
  }
  return total;
}

PlanReport verify_plan(const DeliveryPlan& plan, const CachePlacement& placement,
                       const Demand& demand, double rate) {
  PlanReport report;
  auto fail = [&](std::string msg) { report.failures.push_back(std::move(msg)); };

  if (!(plan.demand == demand)) {
    fail("plan was built for a different demand");
    return report;
  }
  if (demand.i() >= placement.num_files() || demand.j() >= placement.num_files()) {
    fail("demand names a file outside the placement");
    return report;
  }

  // Coverage: delivered ranges of each requested file tile [0,1).
  for (int user = 0; user < 2; ++user) {
    const int file = demand.file_of_user(user);
    std::vector<Interval> delivered;
    for (const auto& phase : plan.phases) {
      if (phase.kind == Strategy::HT) continue;
      for (const auto& p : phase.payloads) {
        if (p.file == file && !p.endpoint.is_edge_node()) delivered.push_back(p.interval);
      }
    }
    std::sort(delivered.begin(), delivered.end(),
              [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
    const std::string name = "file " + std::to_string(file + 1);
    double cursor = 0.0;
    for (const auto& iv : delivered) {
      if (iv.empty()) continue;
      if (iv.lo > cursor + kIntervalTolerance) {
        fail("coverage: " + name + " misses " + describe({cursor, iv.lo}));
      } else if (iv.lo < cursor - kIntervalTolerance) {
        fail("coverage: " + name + " delivers " +
             describe({iv.lo, std::min(cursor, iv.hi)}) + " twice");
      }
      cursor = std::max(cursor, iv.hi);
    }
    if (cursor < 1.0 - kIntervalTolerance) {
      fail("coverage: " + name + " misses " + describe({cursor, 1.0}));
    }
  }

  // Source availability, replaying HT deliveries in phase order.
  std::vector<std::array<std::vector<Interval>, kNumEdgeNodes>> received(
      placement.num_files());
  auto available = [&](int file, int en, const Interval& iv) {
    std::vector<Interval> have(placement.intervals(file, en).begin(),
                               placement.intervals(file, en).end());
    have.insert(have.end(), received[file][en].begin(), received[file][en].end());
    return covers(have, iv);
  };
  for (const auto& phase : plan.phases) {
    const std::string kind(to_string(phase.kind));
    for (const auto& p : phase.payloads) {
      if (p.file < 0 || p.file >= placement.num_files()) {
        fail("source: payload names unknown file " + std::to_string(p.file + 1));
        continue;
      }
      const std::string where =
          "file " + std::to_string(p.file + 1) + " " + describe(p.interval);
      switch (phase.kind) {
        case Strategy::HT:
          if (!p.endpoint.is_edge_node()) {
            fail("source: HT payload " + where + " is not addressed to an EN");
          } else if (overlap_length(placement.intervals(p.file, p.endpoint.index),
                                    p.interval) > kIntervalTolerance) {
            fail("source: HT payload " + where + " is already cached at " +
                 to_string(p.endpoint));
          } else {
            received[p.file][p.endpoint.index].push_back(p.interval);
          }
          break;
        case Strategy::ZF:
          if (!placement.holds(p.file, 0, p.interval) ||
              !placement.holds(p.file, 1, p.interval)) {
            fail("source: ZF payload " + where + " is not cached at both ENs");
          }
          break;
        case Strategy::X_IA:
          if (!p.source_en || *p.source_en < 0 || *p.source_en >= kNumEdgeNodes) {
            fail("source: X-IA payload " + where + " has no source EN");
          } else if (!available(p.file, *p.source_en, p.interval)) {
            fail("source: X-IA payload " + where + " is not available at EN" +
                 std::to_string(*p.source_en + 1));
          }
          break;
        case Strategy::ST_ZF:
          break;  // cloud-sourced
      }
    }
  }

  // Accounting.
  try {
    NdtPoint recomputed;
    for (std::size_t k = 0; k < plan.phases.size(); ++k) {
      const auto& phase = plan.phases[k];
      const NdtPoint cost =
          strategy_ndt({phase.kind, phase_message_size(phase, demand)}, rate);
      if (!approx_equal(cost.fronthaul(), phase.ndt.fronthaul()) ||
          !approx_equal(cost.edge(), phase.ndt.edge())) {
        fail("accounting: phase " + std::to_string(k + 1) + " (" +
             std::string(to_string(phase.kind)) + ") records the wrong NDT");
      }
      recomputed += cost;
    }
    if (!approx_equal(recomputed.fronthaul(), plan.total.fronthaul()) ||
        !approx_equal(recomputed.edge(), plan.total.edge())) {
      fail("accounting: plan total does not equal the sum of phase NDTs");
    }
  } catch (const PlanShapeError& e) {
    fail(std::string("shape: ") + e.what());
  }
  return report;
}

// --- Mixing -------------------------------------------------------------------

namespace {

Interval squeeze(const Interval& iv, double offset, double scale) {
  return {offset + scale * iv.lo, offset + scale * iv.hi};
}

void append_scaled(DeliveryPlan& out, const DeliveryPlan& in, double offset,
                   double scale) {
  if (scale <= 0.0) return;
  for (const auto& phase : in.phases) {
    Phase mapped{phase.kind, {}, phase.ndt.scaled(scale)};
    for (auto p : phase.payloads) {
      p.interval = squeeze(p.interval, offset, scale);
      mapped.payloads.push_back(p);
    }
    out.phases.push_back(std::move(mapped));
  }
  out.total += in.total.scaled(scale);
}

}  // namespace

DeliveryPlan mix_plans(const DeliveryPlan& plan_a, const DeliveryPlan& plan_b,
                       double alpha) {
  require_fraction(alpha, "mixing weight alpha");
  if (!(plan_a.demand == plan_b.demand)) {
    throw ConstraintError("cannot mix plans built for different demands");
  }
  DeliveryPlan mixed;
  mixed.demand = plan_a.demand;
  append_scaled(mixed, plan_a, 0.0, alpha);
  append_scaled(mixed, plan_b, alpha, 1.0 - alpha);
  return mixed;
}

CachePlacement mix_placements(const CachePlacement& placement_a,
                              const CachePlacement& placement_b, double alpha) {
  require_fraction(alpha, "mixing weight alpha");
  if (placement_a.num_files() != placement_b.num_files()) {
    throw StructuralError("cannot mix placements over different libraries");
  }
  CachePlacement mixed(placement_a.num_files(), CacheLayout::Custom);
  for (int f = 0; f < mixed.num_files(); ++f) {
    for (int en = 0; en < kNumEdgeNodes; ++en) {
      for (const auto& iv : placement_a.intervals(f, en)) {
        mixed.add(f, en, squeeze(iv, 0.0, alpha));
      }
      for (const auto& iv : placement_b.intervals(f, en)) {
        mixed.add(f, en, squeeze(iv, alpha, 1.0 - alpha));
      }
    }
  }
  return mixed;
}

std::string format_plan_table(const DeliveryPlan& plan) {
  std::ostringstream os;
  char line[160];
  std::snprintf(line, sizeof line, "demand {file %d, file %d}\n",
                plan.demand.i() + 1, plan.demand.j() + 1);
  os << line;
  std::snprintf(line, sizeof line, "%-3s %-6s %-14s %-14s %s\n", "#", "kind",
                "fronthaul", "edge", "payloads");
  os << line;
  for (std::size_t k = 0; k < plan.phases.size(); ++k) {
    const auto& phase = plan.phases[k];
    std::string payloads;
    for (const auto& p : phase.payloads) {
      if (!payloads.empty()) payloads += "; ";
      payloads += "F" + std::to_string(p.file + 1) + describe(p.interval);
      if (p.source_en) payloads += " EN" + std::to_string(*p.source_en + 1);
      payloads += "->" + to_string(p.endpoint);
    }
    std::snprintf(line, sizeof line, "%-3zu %-6s %-14.12g %-14.12g ", k + 1,
                  std::string(to_string(phase.kind)).c_str(), phase.ndt.fronthaul(),
                  phase.ndt.edge());
    os << line << payloads << '\n';
  }
  std::snprintf(line, sizeof line, "%-3s %-6s %-14.12g %-14.12g sum %.12g\n", "", "total",
                plan.total.fronthaul(), plan.total.edge(), plan.total.total());
  os << line;
  return os.str();
}

}  // namespace fran
