#include "fran/plan_io.hpp"

namespace fran {

using nlohmann::json;

namespace {

json ndt_to_json(const NdtPoint& p) {
  return {{"f", p.fronthaul()}, {"e", p.edge()}};
}

}  // namespace

json plan_to_json(const DeliveryPlan& plan) {
  json phases = json::array();
  for (const auto& phase : plan.phases) {
    json payloads = json::array();
    for (const auto& p : phase.payloads) {
      json item = {{"file", p.file + 1},
                   {"lo", p.interval.lo},
                   {"hi", p.interval.hi},
                   {"endpoint", to_string(p.endpoint)}};
      if (p.source_en) item["source"] = "EN" + std::to_string(*p.source_en + 1);
      payloads.push_back(std::move(item));
    }
    phases.push_back({{"kind", std::string(to_string(phase.kind))},
                      {"payloads", std::move(payloads)},
                      {"ndt", ndt_to_json(phase.ndt)}});
  }
  json total = ndt_to_json(plan.total);
  total["sum"] = plan.total.total();
  return {{"demand", {{"i", plan.demand.i() + 1}, {"j", plan.demand.j() + 1}}},
          {"phases", std::move(phases)},
          {"total", std::move(total)}};
}

DeliveryPlan plan_from_json(const json& doc) {
  try {
    DeliveryPlan plan;
    plan.demand = Demand(doc.at("demand").at("i").get<int>() - 1,
                         doc.at("demand").at("j").get<int>() - 1);
    for (const auto& jp : doc.at("phases")) {
      Phase phase;
      phase.kind = parse_strategy(jp.at("kind").get<std::string>());
      phase.ndt = NdtPoint(jp.at("ndt").at("f").get<double>(),
                           jp.at("ndt").at("e").get<double>());
      for (const auto& item : jp.at("payloads")) {
        Payload p;
        p.file = item.at("file").get<int>() - 1;
        p.interval = {item.at("lo").get<double>(), item.at("hi").get<double>()};
        p.endpoint = parse_endpoint(item.at("endpoint").get<std::string>());
        if (item.contains("source")) {
          const Endpoint src = parse_endpoint(item.at("source").get<std::string>());
          if (!src.is_edge_node()) throw StructuralError("payload source must be an EN");
          p.source_en = src.index;
        }
        phase.payloads.push_back(p);
      }
      plan.phases.push_back(std::move(phase));
    }
    plan.total = NdtPoint(doc.at("total").at("f").get<double>(),
                          doc.at("total").at("e").get<double>());
    return plan;
  } catch (const json::exception& e) {
    throw StructuralError(std::string("malformed plan document: ") + e.what());
  }
}

}  // namespace fran
