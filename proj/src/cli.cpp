#include "fran/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fran/bounds_oracle.hpp"
#include "fran/closed_form.hpp"
#include "fran/optimizer.hpp"
#include "fran/plan_io.hpp"
#include "fran/planner.hpp"
#include "fran/verification.hpp"

namespace fran::cli {

namespace {

using nlohmann::json;

constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

/// Raw option values shared by every subcommand.
struct Options {
  std::string config;
  double mu = kUnset;
  double rate = kUnset;
  std::string alloc;
  std::string alloc2;
  std::string demand;
  int j1 = 2;
  int j2 = 2;
  double popularity = kUnset;
  double step = 1e-3;
  std::string format;
  std::string out;
  bool extended = false;
  bool strict_average = false;
};

/// Per-file allocation and demand resolved from --alloc / --j1 / --j2.
struct ScenarioConfig {
  std::vector<double> en1;
  std::vector<double> en2;
  std::optional<std::pair<int, int>> classes;
  Demand demand{0, 1};
};

std::string fmt12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);
  return buf;
}

double parse_number(const std::string& text, const char* field) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw StructuralError(std::string(field) + ": '" + text + "' is not a number");
  }
}

std::vector<double> parse_list(const std::string& text, const char* field) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) values.push_back(parse_number(item, field));
  if (values.empty()) throw StructuralError(std::string(field) + " is empty");
  return values;
}

class Command {
 public:
  explicit Command(CLI::App* app) : app_(app) {}

  template <typename T>
  void add(const std::string& name, T& target, const std::string& help,
           std::function<void(const json&)> from_json) {
    CLI::Option* opt = app_->add_option("--" + name, target, help);
    bindings_[name] = {opt, std::move(from_json)};
  }

  void flag(const std::string& name, bool& target, const std::string& help) {
    CLI::Option* opt = app_->add_flag("--" + name, target, help);
    bindings_[name] = {opt, [&target](const json& v) { target = v.get<bool>(); }};
  }

  bool given(const std::string& name) const {
    auto it = bindings_.find(name);
    return it != bindings_.end() && it->second.option->count() > 0;
  }

  /// Fills options absent from the command line from a JSON config file.
  void apply_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw StructuralError("cannot open config file '" + path + "'");
    json doc;
    try {
      doc = json::parse(in);
    } catch (const json::exception& e) {
      throw StructuralError("config file '" + path + "': " + e.what());
    }
    if (!doc.is_object()) throw StructuralError("config file must hold a JSON object");
    for (const auto& [key, value] : doc.items()) {
      auto it = bindings_.find(key);
      if (it == bindings_.end()) {
        throw StructuralError("config key '" + key + "' is not an option of '" +
                              app_->get_name() + "'");
      }
      if (it->second.option->count() > 0) continue;
      try {
        it->second.from_json(value);
      } catch (const json::exception&) {
        throw StructuralError("config key '" + key + "' has the wrong type");
      }
    }
  }

  CLI::App* app() const { return app_; }

 private:
  struct Binding {
    CLI::Option* option;
    std::function<void(const json&)> from_json;
  };
  CLI::App* app_;
  std::map<std::string, Binding> bindings_;
};

template <typename T>
std::function<void(const json&)> assign(T& target) {
  return [&target](const json& v) { target = v.get<T>(); };
}

/// Accepts "0.5,0.25" or a JSON array of numbers.
std::function<void(const json&)> assign_list(std::string& target) {
  return [&target](const json& v) {
    if (v.is_string()) {
      target = v.get<std::string>();
      return;
    }
    std::string joined;
    for (const auto& item : v) {
      if (!joined.empty()) joined += ',';
      joined += format_number(item.get<double>());
    }
    target = joined;
  };
}

void add_common(Command& cmd, Options& o) {
  cmd.add("config", o.config, "JSON file with option values; flags take precedence",
          assign(o.config));
}

void add_scenario(Command& cmd, Options& o) {
  cmd.add("mu", o.mu, "fractional cache capacity", assign(o.mu));
  cmd.add("rate", o.rate, "fronthaul rate r", assign(o.rate));
  cmd.add("alloc", o.alloc,
          "per-file fractions 'a,b,...' or class pair 'c1:c2'", assign_list(o.alloc));
  cmd.add("alloc2", o.alloc2, "EN2 fractions when they differ from EN1",
          assign_list(o.alloc2));
  cmd.add("demand", o.demand, "requested files 'i,j' (1-based)", assign(o.demand));
  cmd.add("j1", o.j1, "files in class 1", assign(o.j1));
  cmd.add("j2", o.j2, "files in class 2", assign(o.j2));
  cmd.add("format", o.format, "text or json", assign(o.format));
  cmd.add("out", o.out, "output file", assign(o.out));
}

void add_sweep(Command& cmd, Options& o) {
  cmd.add("mu", o.mu, "fractional cache capacity", assign(o.mu));
  cmd.add("rate", o.rate, "fronthaul rate r", assign(o.rate));
  cmd.add("j1", o.j1, "files in class 1", assign(o.j1));
  cmd.add("j2", o.j2, "files in class 2", assign(o.j2));
  cmd.add("step", o.step, "sweep resolution for the class-1 fraction", assign(o.step));
  cmd.add("format", o.format, "csv or json", assign(o.format));
  cmd.add("out", o.out, "output file (default stdout)", assign(o.out));
  cmd.flag("extended", o.extended, "append mu_(1), mu_(2) and regime columns");
}

void require_set(double value, const char* name) {
  if (std::isnan(value)) throw StructuralError(std::string("--") + name + " is required");
}

void require_format(const std::string& format, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed) {
    if (format == a) return;
  }
  throw StructuralError("--format '" + format + "' is not supported here");
}

ScenarioConfig resolve_scenario(const Options& o, const Command& cmd) {
  if (o.alloc.empty()) throw StructuralError("--alloc is required");
  ScenarioConfig cfg;
  const auto colon = o.alloc.find(':');
  if (colon != std::string::npos) {
    const double c1 = parse_number(o.alloc.substr(0, colon), "--alloc");
    const double c2 = parse_number(o.alloc.substr(colon + 1), "--alloc");
    if (o.j1 < 1 || o.j2 < 1) throw StructuralError("--j1 and --j2 must be positive");
    cfg.classes = std::make_pair(o.j1, o.j2);
    cfg.en1.assign(o.j1, c1);
    cfg.en1.insert(cfg.en1.end(), o.j2, c2);
  } else {
    if (cmd.given("j1") || cmd.given("j2")) {
      throw StructuralError("--j1/--j2 apply only to a class pair allocation 'c1:c2'");
    }
    cfg.en1 = parse_list(o.alloc, "--alloc");
  }
  cfg.en2 = o.alloc2.empty() ? cfg.en1 : parse_list(o.alloc2, "--alloc2");
  if (cfg.en2.size() != cfg.en1.size()) {
    throw StructuralError("--alloc2 must list as many files as --alloc");
  }
  if (cfg.en1.size() < 2) throw StructuralError("the library needs at least two files");

  if (o.demand.empty()) {
    cfg.demand = cfg.classes ? Demand(0, cfg.classes->first) : Demand(0, 1);
  } else {
    const auto parts = parse_list(o.demand, "--demand");
    if (parts.size() != 2 || parts[0] != std::floor(parts[0]) ||
        parts[1] != std::floor(parts[1])) {
      throw StructuralError("--demand takes two file numbers 'i,j'");
    }
    const int n = static_cast<int>(cfg.en1.size());
    const int i = static_cast<int>(parts[0]);
    const int j = static_cast<int>(parts[1]);
    if (i < 1 || i > n || j < 1 || j > n) {
      throw StructuralError("--demand names a file outside 1.." + std::to_string(n));
    }
    cfg.demand = Demand(i - 1, j - 1);
  }
  return cfg;
}

SystemParams scenario_params(const Options& o, const ScenarioConfig& cfg) {
  require_set(o.rate, "rate");
  const int n = static_cast<int>(cfg.en1.size());
  double mu = o.mu;
  if (std::isnan(mu)) {
    // Smallest capacity that holds the allocation.
    double widest = 0.0;
    for (const auto* row : {&cfg.en1, &cfg.en2}) {
      double sum = 0.0;
      for (double v : *row) sum += v;
      widest = std::max(widest, sum);
    }
    mu = std::min(1.0, widest / n);
  }
  if (cfg.classes) {
    return SystemParams::two_class(mu, o.rate, cfg.classes->first, cfg.classes->second);
  }
  return SystemParams(mu, o.rate, n);
}

CachePartition checked_partition(const ScenarioConfig& cfg, const SystemParams& params) {
  CachePartition partition(cfg.en1, cfg.en2);
  const auto report = validate_partition(partition, params);
  if (!report.ok()) {
    std::string msg = "cache partition violates its constraints:";
    for (const auto& v : report.violations) msg += "\n  " + v;
    throw ConstraintError(msg);
  }
  return partition;
}

/// Writes to --out when given, otherwise to `fallback`.
void emit(const Options& o, std::ostream& fallback, const std::string& text) {
  if (o.out.empty()) {
    fallback << text;
    return;
  }
  std::ofstream file(o.out);
  if (!file) throw StructuralError("cannot write '" + o.out + "'");
  file << text;
}

std::string join_binding(const std::vector<int>& binding) {
  std::string s;
  for (int k : binding) {
    if (!s.empty()) s += ',';
    s += std::to_string(k + 1);
  }
  return s;
}

int run_eval(const Options& o, const Command& cmd, std::ostream& out) {
  const std::string format = o.format.empty() ? "text" : o.format;
  require_format(format, {"text", "json"});
  const ScenarioConfig cfg = resolve_scenario(o, cmd);
  const SystemParams params = scenario_params(o, cfg);
  const CachePartition partition = checked_partition(cfg, params);
  const CacheQuad quad = CacheQuad::of(partition, cfg.demand);
  const CacheQuad sym = quad.symmetrized();
  const bool symmetric = quad.columns_symmetric();

  const InnerNdt inner = ndt_inner(sym.en1_i, sym.en1_j, params.rate());
  const OuterNdt outer = ndt_outer(quad, params.rate());
  const LpSolution lp = lp_min_total(constraint_polytope(quad, params.rate()));

  std::ostringstream os;
  if (format == "json") {
    json doc = {
        {"demand", {{"i", cfg.demand.i() + 1}, {"j", cfg.demand.j() + 1}}},
        {"rate", params.rate()},
        {"inner", {{"ndt", inner.total}, {"regime", inner.regime.value()},
                   {"symmetrized", !symmetric}}},
        {"outer", {{"ndt", outer.total}, {"binding", outer.binding.value()}}},
        {"lp", {{"ndt", lp.optimum}, {"edge", lp.edge}, {"fronthaul", lp.fronthaul},
                {"binding", json::array()}}},
    };
    for (int k : lp.binding) doc["lp"]["binding"].push_back(k + 1);
    os << doc.dump(2) << '\n';
  } else {
    os << "demand  files " << cfg.demand.i() + 1 << "," << cfg.demand.j() + 1
       << "  r = " << fmt12(params.rate()) << '\n';
    os << "inner   " << fmt12(inner.total) << "  regime " << inner.regime.value()
       << (symmetric ? "" : "  (on symmetrized allocation)") << '\n';
    os << "outer   " << fmt12(outer.total) << "  binding component "
       << outer.binding.value() << '\n';
    os << "lp      " << fmt12(lp.optimum) << "  at edge " << fmt12(lp.edge)
       << ", fronthaul " << fmt12(lp.fronthaul) << "  binding constraints "
       << join_binding(lp.binding) << '\n';
  }
  emit(o, out, os.str());
  return kOk;
}

int run_plan(const Options& o, const Command& cmd, std::ostream& out, std::ostream& err) {
  const std::string format = o.format.empty() ? "json" : o.format;
  require_format(format, {"json", "text"});
  const ScenarioConfig cfg = resolve_scenario(o, cmd);
  const SystemParams params = scenario_params(o, cfg);
  const CachePartition partition = checked_partition(cfg, params);
  if (!partition.is_symmetric()) {
    throw UnsupportedPlacement(
        "delivery plans exist only for allocations cached equally at both ENs");
  }
  const auto placement = build_cache_placement(cfg.en1, params.rate(), params);
  const auto plan = build_delivery_plan(placement, cfg.demand, params.rate());
  const auto report = verify_plan(plan, placement, cfg.demand, params.rate());

  const std::string table = format_plan_table(plan);
  if (format == "text") {
    emit(o, out, table);
  } else {
    emit(o, out, plan_to_json(plan).dump(2) + "\n");
    // Keep stdout parseable when the JSON goes there.
    (o.out.empty() ? err : out) << table;
  }
  if (!report.ok()) {
    for (const auto& f : report.failures) err << "plan check failed: " << f << '\n';
    return kVerificationFailed;
  }
  return kOk;
}

json slice_to_json(const RegionSlice& slice) {
  json points = json::array();
  for (const auto& p : slice.points) {
    points.push_back({{"d12", p.d12}, {"d11", p.d11}, {"d22", p.d22}, {"mu1", p.mu1},
                      {"mu2", p.mu2}, {"regime", p.regime12.value()}});
  }
  return {{"points", std::move(points)}, {"breakpoints", slice.breakpoints}};
}

void require_sweep(const Options& o) {
  require_set(o.mu, "mu");
  require_set(o.rate, "rate");
  if (o.j1 < 1 || o.j2 < 1) throw StructuralError("--j1 and --j2 must be positive");
  if (!(o.step > 0.0)) throw StructuralError("--step must be positive");
  require_fraction(o.mu, "cache capacity mu");
  require_rate(o.rate);
}

int run_region(const Options& o, std::ostream& out) {
  const std::string format = o.format.empty() ? "csv" : o.format;
  require_format(format, {"csv", "json"});
  require_sweep(o);
  const RegionSlice slice = trace_region_slice(o.j1, o.j2, o.mu, o.rate, o.step);
  std::ostringstream os;
  if (format == "json") {
    os << slice_to_json(slice).dump(2) << '\n';
  } else {
    write_slice_csv(os, slice, o.extended);
  }
  emit(o, out, os.str());
  return kOk;
}

int run_average(const Options& o, std::ostream& out) {
  const std::string format = o.format.empty() ? "csv" : o.format;
  require_format(format, {"csv", "json"});
  require_sweep(o);
  require_set(o.popularity, "popularity");
  const auto formula =
      o.strict_average ? AverageFormula::AsPrinted : AverageFormula::ClassConsistent;
  const TradeoffCurve curve =
      trace_average_tradeoff(o.j1, o.j2, o.mu, o.rate, o.popularity, o.step, formula);
  std::ostringstream os;
  if (format == "json") {
    json points = json::array();
    for (const auto& p : curve.points) {
      points.push_back({{"avg1", p.avg1}, {"avg2", p.avg2}, {"mu1", p.source.mu1},
                        {"mu2", p.source.mu2}, {"regime", p.source.regime12.value()}});
    }
    os << json{{"popularity", o.popularity}, {"points", std::move(points)}}.dump(2) << '\n';
  } else {
    write_tradeoff_csv(os, curve, o.extended);
  }
  emit(o, out, os.str());
  return kOk;
}

int run_verify(const Options& o, std::ostream& out) {
  const auto results = run_all_suites();
  bool all = true;
  for (const auto& r : results) {
    out << (r.passed() ? "PASS " : "FAIL ") << r.name << "  (" << r.checks << " checks, "
        << r.failures << " failures)\n";
    for (const auto& s : r.samples) out << "       " << s << '\n';
    all = all && r.passed();
  }
  out << (all ? "all suites passed" : "verification FAILED") << '\n';
  if (!o.out.empty()) {
    std::ofstream file(o.out);
    if (!file) throw StructuralError("cannot write '" + o.out + "'");
    file << suites_to_json(results).dump(2) << '\n';
  }
  return all ? kOk : kVerificationFailed;
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"High-SNR delivery latency of a two-EN fog radio access network", "fran_ndt"};
  app.require_subcommand(1);

  Options o;
  Command eval(app.add_subcommand("eval", "inner, outer and LP bound for one allocation"));
  Command plan(app.add_subcommand("plan", "delivery plan for one allocation and demand"));
  Command region(app.add_subcommand("region", "two-class NDT region slice as CSV"));
  Command average(app.add_subcommand("average", "two-class average latency trade-off as CSV"));
  Command verify(app.add_subcommand("verify", "run the property suites"));

  for (Command* c : {&eval, &plan, &region, &average, &verify}) add_common(*c, o);
  add_scenario(eval, o);
  add_scenario(plan, o);
  add_sweep(region, o);
  add_sweep(average, o);
  average.add("popularity", o.popularity, "probability a of a class-1 request",
              assign(o.popularity));
  average.flag("strict-paper-average", o.strict_average,
               "use d11 instead of d22 in the class-2 average");
  verify.add("out", o.out, "write a JSON report", assign(o.out));

  std::vector<std::string> argv_storage = {"fran_ndt"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : argv_storage) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    for (Command* c : {&eval, &plan, &region, &average, &verify}) {
      if (c->app()->parsed()) {
        if (!o.config.empty()) c->apply_config(o.config);
        if (c == &eval) return run_eval(o, *c, out);
        if (c == &plan) return run_plan(o, *c, out, err);
        if (c == &region) return run_region(o, out);
        if (c == &average) return run_average(o, out);
        return run_verify(o, out);
      }
    }
  } catch (const StructuralError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const ConstraintError& e) {
    err << "constraint violation: " << e.what() << '\n';
    return kConstraintViolation;
  } catch (const UnsupportedPlacement& e) {
    err << "constraint violation: " << e.what() << '\n';
    return kConstraintViolation;
  }
  return kUsageError;
}

}  // namespace fran::cli
