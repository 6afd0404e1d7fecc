#include "zeittafel/session.hpp"

#include "zeittafel/error.hpp"

namespace zeittafel {

PlanOutcome run_with_decisions(const PlanRequest& request, const ServiceMatrix& matrix,
                               const std::vector<Decision>& decisions, bool interactive) {
  std::vector<NegotiationDecision> negotiation;
  std::optional<std::size_t> choice;
  for (const auto& d : decisions) {
    if (auto n = std::get_if<NegotiationDecision>(&d)) {
      if (choice) throw ValidationError("negotiation decision recorded after a tie choice");
      negotiation.push_back(*n);
    } else {
      if (choice) throw ValidationError("more than one tie choice recorded");
      choice = std::get<TieChoice>(d).index;
    }
  }

  std::size_t next = 0;
  Negotiator negotiator = [&](const NegotiationPrompt&) -> std::optional<NegotiationDecision> {
    if (next < negotiation.size()) return negotiation[next++];
    if (interactive) return std::nullopt;
    return NegotiationDecision{};
  };

  PlanOutcome outcome = plan(request, matrix, negotiator, interactive || choice.has_value());
  if (next < negotiation.size()) throw ValidationError("more negotiation decisions than prompts");
  if (const TieSet* tie = outcome.tie(); tie && choice) {
    if (*choice >= tie->candidates.size()) {
      throw ValidationError("tie choice " + std::to_string(*choice) + " out of range (" +
                            std::to_string(tie->candidates.size()) + " candidates)");
    }
    outcome.tie_choice = choice;
    CandidatePlan picked = tie->candidates[*choice];
    outcome.result = SelectedPlan{std::move(picked)};
  }
  return outcome;
}

std::string to_string(SessionState state) {
  switch (state) {
    case SessionState::running: return "running";
    case SessionState::awaiting_negotiation: return "awaiting_negotiation";
    case SessionState::awaiting_tie_choice: return "awaiting_tie_choice";
    case SessionState::done: return "done";
    case SessionState::failed: return "failed";
  }
  return "?";
}

nlohmann::json to_json(const PlanSession& s) {
  nlohmann::json j = {{"id", s.id},
                      {"state", to_string(s.state)},
                      {"interactive", s.interactive},
                      {"outcome", plan_report(s.outcome, s.request)},
                      {"transcript", decisions_to_json(s.transcript)}};
  j["itinerary"] = s.itinerary ? to_json(*s.itinerary) : nlohmann::json(nullptr);
  return j;
}

Scenario RegistryStore::snapshot() const {
  std::shared_lock lock(mutex_);
  return scenario_;
}

void RegistryStore::register_offer(ServiceOffer offer) {
  std::unique_lock lock(mutex_);
  scenario_.matrix = zeittafel::register_offer(scenario_.matrix, std::move(offer));
}

void RegistryStore::block(const std::string& service_id, const AvailabilityWindow& window) {
  std::unique_lock lock(mutex_);
  scenario_.matrix = zeittafel::block(scenario_.matrix, service_id, window);
}

void RegistryStore::unblock(const std::string& service_id, const AvailabilityWindow& window) {
  std::unique_lock lock(mutex_);
  scenario_.matrix = zeittafel::unblock(scenario_.matrix, service_id, window);
}

void SessionManager::advance(Entry& e) {
  auto& s = e.session;
  s.state = SessionState::running;
  s.outcome = run_with_decisions(s.request, e.matrix, s.transcript, s.interactive);
  if (s.outcome.selected()) {
    s.state = SessionState::done;
  } else if (s.outcome.tie()) {
    s.state = SessionState::awaiting_tie_choice;
  } else if (s.outcome.negotiation()) {
    s.state = SessionState::awaiting_negotiation;
  } else {
    s.state = SessionState::failed;
  }
}

PlanSession SessionManager::create(const nlohmann::json& body) {
  const Scenario scenario = registry_.snapshot();
  if (!body.is_object()) throw ValidationError("request: expected an object");
  auto entry = std::make_shared<Entry>();
  entry->matrix = scenario.matrix;
  entry->session.request = parse_plan_request(body, scenario.request, scenario.matrix);
  if (body.contains("interactive")) {
    if (!body["interactive"].is_boolean()) throw ValidationError("interactive: expected a boolean");
    entry->session.interactive = body["interactive"].get<bool>();
  }
  {
    std::lock_guard lock(mutex_);
    entry->session.id = "s" + std::to_string(next_id_++);
    sessions_[entry->session.id] = entry;
  }
  std::lock_guard lock(entry->mutex);
  advance(*entry);
  return entry->session;
}

std::shared_ptr<SessionManager::Entry> SessionManager::find(const std::string& id) const {
  std::lock_guard lock(mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw NotFoundError("unknown session: " + id);
  return it->second;
}

PlanSession SessionManager::get(const std::string& id) const {
  auto e = find(id);
  std::lock_guard lock(e->mutex);
  return e->session;
}

PlanSession SessionManager::negotiate(const std::string& id, const NegotiationDecision& decision) {
  auto e = find(id);
  std::lock_guard lock(e->mutex);
  if (e->session.state != SessionState::awaiting_negotiation) {
    throw StateError("session " + id + " is " + to_string(e->session.state) + ", not awaiting_negotiation");
  }
  const PlanSession before = e->session;
  e->session.transcript.emplace_back(decision);
  try {
    advance(*e);
  } catch (...) {
    e->session = before;
    throw;
  }
  return e->session;
}

PlanSession SessionManager::choose(const std::string& id, std::size_t index) {
  auto e = find(id);
  std::lock_guard lock(e->mutex);
  if (e->session.state != SessionState::awaiting_tie_choice) {
    throw StateError("session " + id + " is " + to_string(e->session.state) + ", not awaiting_tie_choice");
  }
  const PlanSession before = e->session;
  e->session.transcript.emplace_back(TieChoice{index});
  try {
    advance(*e);
  } catch (...) {
    e->session = before;
    throw;
  }
  return e->session;
}

Itinerary SessionManager::compose(const std::string& id, const std::set<std::string>& failing) {
  auto e = find(id);
  std::lock_guard lock(e->mutex);
  const CandidatePlan* selected = e->session.outcome.selected();
  if (e->session.state != SessionState::done || !selected) {
    throw StateError("session " + id + " has no selected plan to compose");
  }
  if (e->session.itinerary && e->session.itinerary->success) {
    throw StateError("session " + id + " is already composed");
  }
  MockInvoker invoker(failing);
  e->session.itinerary = zeittafel::compose(*selected, invoker);
  return *e->session.itinerary;
}

}  // namespace zeittafel
