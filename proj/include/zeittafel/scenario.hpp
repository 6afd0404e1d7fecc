#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "zeittafel/planner.hpp"
#include "zeittafel/registry.hpp"

namespace zeittafel {

// Everything a planning run needs: the service matrix plus the default
// request (deadline, FC order, NC set, constraints, optional template).
struct Scenario {
  ServiceMatrix matrix;
  PlanRequest request;
};

// Reads the canonical JSON encoding. Errors are ValidationErrors that name
// the offending field, e.g. "offers[2].estimate.optimistic".
Scenario parse_scenario(const nlohmann::json& doc);
Scenario load_scenario(const std::filesystem::path& path);

nlohmann::json to_json(const Scenario& scenario);
nlohmann::json to_json(const ServiceOffer& offer);
nlohmann::json to_json(const Category& category);
nlohmann::json to_json(const ConstraintSet& constraints);

ConstraintSet parse_constraints(const nlohmann::json& doc, const std::string& path);
ServiceOffer parse_offer(const nlohmann::json& doc, const std::string& path);
AvailabilityWindow parse_window(const nlohmann::json& doc, const std::string& path);

// Overlays the fields present in `doc` onto `base` and validates the result
// against the matrix.
PlanRequest parse_plan_request(const nlohmann::json& doc, const PlanRequest& base, const ServiceMatrix& matrix);

}  // namespace zeittafel
