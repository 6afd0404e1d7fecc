#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "zeittafel/composer.hpp"
#include "zeittafel/planner.hpp"
#include "zeittafel/report.hpp"
#include "zeittafel/scenario.hpp"

namespace zeittafel {

// Runs the planner against a recorded list of decisions. Negotiation
// decisions are consumed in order; a choice resolves the tie that follows
// them. When the decisions run out, an interactive run pauses at the pending
// prompt or tie, a non-interactive one declines and breaks ties itself.
// The same inputs always give the same outcome.
PlanOutcome run_with_decisions(const PlanRequest& request, const ServiceMatrix& matrix,
                               const std::vector<Decision>& decisions, bool interactive);

class NotFoundError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A decision posted to a session that is not waiting for it.
class StateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SessionState { running, awaiting_negotiation, awaiting_tie_choice, done, failed };

std::string to_string(SessionState state);

struct PlanSession {
  std::string id;
  PlanRequest request;
  bool interactive = true;
  SessionState state = SessionState::running;
  PlanOutcome outcome;
  std::vector<Decision> transcript;
  std::optional<Itinerary> itinerary;
};

nlohmann::json to_json(const PlanSession& session);

// Sole owner of the live registry. Writers are serialized; readers take
// snapshots that stay valid however the registry changes afterwards.
class RegistryStore {
 public:
  explicit RegistryStore(Scenario scenario) : scenario_(std::move(scenario)) {}

  Scenario snapshot() const;
  void register_offer(ServiceOffer offer);
  void block(const std::string& service_id, const AvailabilityWindow& window);
  void unblock(const std::string& service_id, const AvailabilityWindow& window);

 private:
  mutable std::shared_mutex mutex_;
  Scenario scenario_;
};

// In-memory planning sessions. Each session plans against the registry
// snapshot taken at creation and is mutated only through its own lock.
class SessionManager {
 public:
  explicit SessionManager(RegistryStore& registry) : registry_(registry) {}

  // `body` holds PlanRequest fields overriding the scenario defaults, plus an
  // optional "interactive" flag (default true).
  PlanSession create(const nlohmann::json& body);
  PlanSession get(const std::string& id) const;
  PlanSession negotiate(const std::string& id, const NegotiationDecision& decision);
  PlanSession choose(const std::string& id, std::size_t index);
  // Books the selected plan through a mock endpoint that fails on `failing`.
  Itinerary compose(const std::string& id, const std::set<std::string>& failing = {});

 private:
  struct Entry {
    mutable std::mutex mutex;
    PlanSession session;
    ServiceMatrix matrix;
  };

  std::shared_ptr<Entry> find(const std::string& id) const;
  static void advance(Entry& entry);

  RegistryStore& registry_;
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  std::size_t next_id_ = 1;
};

}  // namespace zeittafel
