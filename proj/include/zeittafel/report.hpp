#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "json.hpp"
#include "zeittafel/composer.hpp"
#include "zeittafel/planner.hpp"

namespace zeittafel {

// An answer to a planner pause: a negotiation decision or a tie choice.
struct TieChoice {
  std::size_t index = 0;
};

using Decision = std::variant<NegotiationDecision, TieChoice>;

nlohmann::json to_json(const CandidatePlan& plan);
nlohmann::json to_json(const NegotiationPrompt& prompt);
nlohmann::json to_json(const NegotiationDecision& decision);
nlohmann::json to_json(const Itinerary& itinerary);
nlohmann::json to_json(const Decision& decision);

nlohmann::json decisions_to_json(const std::vector<Decision>& decisions);
std::vector<Decision> decisions_from_json(const nlohmann::json& doc);

// The plan report: outcome, orders tried, negotiation transcript. Contains no
// timing, so equal inputs give byte-equal dumps.
nlohmann::json plan_report(const PlanOutcome& outcome, const PlanRequest& request);

// Sampled standard normal density and CDF around the plan's variate, plus
// the shaded region below it that equals the completion probability.
nlohmann::json completion_curve(const CandidatePlan& plan, double z_step = 0.1);

}  // namespace zeittafel
