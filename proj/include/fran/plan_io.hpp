#pragma once

// JSON form of a delivery plan:
//   {"demand": {"i", "j"},
//    "phases": [{"kind", "payloads": [{"file", "lo", "hi", "endpoint"[, "source"]}],
//                "ndt": {"f", "e"}}],
//    "total": {"f", "e", "sum"}}
// File ids, ENs and users are 1-based in the document.

#include "json.hpp"

#include "fran/planner.hpp"

namespace fran {

nlohmann::json plan_to_json(const DeliveryPlan& plan);
/// Throws StructuralError on a malformed document.
DeliveryPlan plan_from_json(const nlohmann::json& doc);

}  // namespace fran
