#include "zeittafel/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "zeittafel/error.hpp"
#include "zeittafel/normal.hpp"

namespace zeittafel {

using nlohmann::json;

namespace {

json slot_json(const Slot& s) { return {{"start", s.start}, {"end", s.end}}; }

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

json to_json(const CandidatePlan& plan) {
  json edges = json::array();
  for (const auto& e : plan.edges) edges.push_back({{"before", e.before}, {"after", e.after}});
  json activities = json::array();
  for (std::size_t i = 0; i < plan.analysis.activities.size(); ++i) {
    const auto& a = plan.analysis.activities[i];
    json entry = {{"category_id", a.id},
                  {"earliest_start", a.earliest_start},
                  {"earliest_finish", a.earliest_finish},
                  {"latest_start", a.latest_start},
                  {"latest_finish", a.latest_finish},
                  {"total_float", a.total_float},
                  {"critical", std::binary_search(plan.analysis.critical_activities.begin(),
                                                  plan.analysis.critical_activities.end(), a.id)}};
    if (i < plan.slots.size()) {
      entry["service_id"] = plan.slots[i].service_id;
      entry["slot"] = slot_json(plan.slots[i].slot);
    }
    activities.push_back(std::move(entry));
  }
  return {{"category_order", plan.combination.category_order},
          {"choices", plan.combination.choices},
          {"duration", plan.analysis.project_duration},
          {"critical_path", plan.analysis.critical_path},
          {"critical_activities", plan.analysis.critical_activities},
          {"critical_variance", plan.analysis.critical_variance},
          {"std_dev", plan.analysis.std_dev},
          {"deadline", plan.completion.deadline},
          {"z_value", optional_json(plan.completion.z_value)},
          {"probability", plan.completion.probability},
          {"activities", activities},
          {"edges", edges}};
}

json to_json(const NegotiationPrompt& prompt) {
  json cats = json::array();
  for (const auto& c : prompt.categories) {
    cats.push_back({{"category_id", c.category_id}, {"fixed", c.fixed}, {"reason", c.reason}});
  }
  return {{"round", prompt.round}, {"categories", cats}, {"diagnostics", prompt.diagnostics}};
}

json to_json(const NegotiationDecision& d) {
  return {{"kind", "negotiation"}, {"withdrawn", d.withdrawn}, {"approve_fixed", d.approve_fixed}};
}

json to_json(const Decision& d) {
  if (auto n = std::get_if<NegotiationDecision>(&d)) return to_json(*n);
  return {{"kind", "choice"}, {"index", std::get<TieChoice>(d).index}};
}

json to_json(const Itinerary& it) {
  json records = json::array();
  for (const auto& r : it.records) {
    records.push_back({{"service_id", r.service_id},
                       {"category_id", r.category_id},
                       {"slot", slot_json(r.slot)},
                       {"status", to_string(r.status)},
                       {"confirmation", r.confirmation}});
  }
  return {{"success", it.success},
          {"records", records},
          {"failed_service", it.failed_service ? json(*it.failed_service) : json(nullptr)},
          {"error", it.error}};
}

json decisions_to_json(const std::vector<Decision>& decisions) {
  json out = json::array();
  for (const auto& d : decisions) out.push_back(to_json(d));
  return out;
}

std::vector<Decision> decisions_from_json(const json& doc) {
  if (!doc.is_array()) throw ValidationError("decisions: expected an array");
  std::vector<Decision> out;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& d = doc[i];
    const std::string path = "decisions[" + std::to_string(i) + "]";
    if (!d.is_object() || !d.contains("kind") || !d["kind"].is_string()) {
      throw ValidationError(path + ".kind: missing");
    }
    const auto kind = d["kind"].get<std::string>();
    if (kind == "negotiation") {
      NegotiationDecision n;
      if (d.contains("withdrawn")) {
        if (!d["withdrawn"].is_array()) throw ValidationError(path + ".withdrawn: expected an array");
        for (const auto& id : d["withdrawn"]) {
          if (!id.is_string()) throw ValidationError(path + ".withdrawn: expected strings");
          n.withdrawn.push_back(id.get<std::string>());
        }
      }
      if (d.contains("approve_fixed")) {
        if (!d["approve_fixed"].is_boolean()) throw ValidationError(path + ".approve_fixed: expected a boolean");
        n.approve_fixed = d["approve_fixed"].get<bool>();
      }
      out.emplace_back(std::move(n));
    } else if (kind == "choice") {
      if (!d.contains("index") || !d["index"].is_number_unsigned()) {
        throw ValidationError(path + ".index: expected a non-negative integer");
      }
      out.emplace_back(TieChoice{d["index"].get<std::size_t>()});
    } else {
      throw ValidationError(path + ".kind: unknown decision kind " + kind);
    }
  }
  return out;
}

json plan_report(const PlanOutcome& outcome, const PlanRequest& request) {
  json report;
  report["deadline"] = request.deadline;
  report["search_mode"] = to_string(request.search_mode);

  std::visit(
      [&](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, SelectedPlan>) {
          report["status"] = "selected";
          report["selected"] = to_json(r.plan);
        } else if constexpr (std::is_same_v<T, TieSet>) {
          report["status"] = "tie";
          json tie = json::array();
          for (const auto& c : r.candidates) tie.push_back(to_json(c));
          report["tie"] = tie;
        } else if constexpr (std::is_same_v<T, NegotiationPrompt>) {
          report["status"] = "negotiation_needed";
          report["negotiation"] = to_json(r);
        } else {
          report["status"] = "failure";
          report["failure"] = {{"reason", r.reason},
                               {"category_reasons", r.category_reasons},
                               {"diagnostics", r.diagnostics}};
        }
      },
      outcome.result);

  json orders = json::array();
  for (const auto& a : outcome.orders_tried) {
    orders.push_back({{"round", a.round},
                      {"order", a.order},
                      {"combinations", a.combinations},
                      {"feasible", a.feasible},
                      {"truncated", a.truncated},
                      {"empty_category", a.empty_category ? json(*a.empty_category) : json(nullptr)}});
  }
  report["orders_tried"] = orders;

  json transcript = json::array();
  for (const auto& ex : outcome.transcript) {
    transcript.push_back({{"prompt", to_json(ex.prompt)}, {"decision", to_json(ex.decision)}});
  }
  report["transcript"] = transcript;
  report["withdrawn"] = outcome.withdrawn;
  report["candidates_evaluated"] = outcome.candidates_evaluated;
  report["tie_choice"] = outcome.tie_choice ? json(*outcome.tie_choice) : json(nullptr);
  return report;
}

json completion_curve(const CandidatePlan& plan, double z_step) {
  if (!(z_step > 0.0)) throw ValidationError("curve step must be positive");
  json out = {{"deadline", plan.completion.deadline},
              {"duration", plan.analysis.project_duration},
              {"std_dev", plan.analysis.std_dev},
              {"probability", plan.completion.probability},
              {"z_value", optional_json(plan.completion.z_value)}};
  if (!plan.completion.z_value) {
    out["degenerate"] = true;
    out["step"] = plan.completion.probability >= 1.0 ? "on_time" : "late";
    out["label"] = plan.completion.probability >= 1.0 ? "deterministic: on-time" : "deterministic: late";
    out["points"] = json::array();
    return out;
  }
  const double z = *plan.completion.z_value;
  const double lo = std::min(-4.0, std::floor(z) - 1.0);
  const double hi = std::max(4.0, std::ceil(z) + 1.0);
  json points = json::array();
  const auto count = static_cast<long>(std::llround((hi - lo) / z_step));
  for (long i = 0; i <= count; ++i) {
    const double x = lo + static_cast<double>(i) * z_step;
    points.push_back({{"z", x}, {"density", normal_pdf(x)}, {"cdf", normal_cdf(x)}});
  }
  char label[16];
  std::snprintf(label, sizeof label, "%.4f", plan.completion.probability);
  out["degenerate"] = false;
  out["label"] = label;
  out["points"] = points;
  out["shaded"] = {{"from_z", lo}, {"to_z", std::clamp(z, lo, hi)}, {"area", plan.completion.probability}};
  return out;
}

}  // namespace zeittafel
