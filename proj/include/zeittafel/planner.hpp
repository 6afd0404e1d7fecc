#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "zeittafel/interval.hpp"
#include "zeittafel/pert.hpp"
#include "zeittafel/registry.hpp"

namespace zeittafel {

// How the non-fixed categories are rearranged when an order yields nothing.
//   no_backtracking   identity arrangement only
//   rotations_only    identity, then its left rotations
//   all_permutations  rotations, then every remaining permutation
enum class SearchMode { no_backtracking, rotations_only, all_permutations };

std::string to_string(SearchMode mode);
SearchMode search_mode_from_string(const std::string& s);

// Precedence between two positions of a category order (0-based). When a
// request carries a template it replaces the default serial chain.
struct SlotPrecedence {
  std::size_t before = 0;
  std::size_t after = 0;

  bool operator==(const SlotPrecedence&) const = default;
};

inline constexpr std::size_t kDefaultCandidateCap = 10000;

struct PlanRequest {
  Minutes deadline = 0.0;
  std::vector<std::string> fc_order;
  std::vector<std::string> nc_set;
  ConstraintSet constraints;
  std::optional<std::vector<SlotPrecedence>> precedence_template;
  SearchMode search_mode = SearchMode::all_permutations;
  std::size_t candidate_cap = kDefaultCandidateCap;
  // Lets negotiation withdraw fixed categories without per-decision approval.
  bool allow_fixed_withdrawal = false;

  // Checks the request against the categories of `matrix`.
  void validate(const ServiceMatrix& matrix) const;
};

using CategoryOrder = std::vector<std::string>;

// Identity arrangement, its left rotations, then (all_permutations) the
// remaining permutations in lexicographic id order. The FC prefix never moves.
std::vector<CategoryOrder> generate_category_orders(const std::vector<std::string>& fc_order,
                                                    const std::vector<std::string>& nc_set,
                                                    SearchMode mode);

// Network edges for a category order: the template's slot edges mapped onto
// the order, or a serial chain when the request has no template.
std::vector<Precedence> precedence_edges(const CategoryOrder& order, const PlanRequest& request);

struct Combination {
  CategoryOrder category_order;
  // category id -> service id
  std::map<std::string, std::string> choices;

  // Chosen service ids listed in category order.
  std::vector<std::string> service_tuple() const;

  bool operator==(const Combination&) const = default;
};

// Lazily walks the Cartesian product of the order's columns, one offer per
// category, in lexicographic service-id order, stopping after `cap` items.
class CombinationEnumerator {
 public:
  CombinationEnumerator(const ServiceMatrix& available, CategoryOrder order, std::size_t cap);

  // First category (in order) with no offers; nothing is enumerated then.
  const std::optional<std::string>& empty_category() const { return empty_category_; }

  std::optional<Combination> next();

  // True once the cap cut the product short.
  bool truncated() const { return truncated_; }
  std::size_t emitted() const { return emitted_; }

 private:
  CategoryOrder order_;
  std::vector<std::vector<std::string>> ids_;
  std::vector<std::size_t> cursor_;
  std::size_t cap_;
  std::size_t emitted_ = 0;
  bool done_ = false;
  bool truncated_ = false;
  std::optional<std::string> empty_category_;
};

struct Enumeration {
  std::vector<Combination> combinations;
  bool truncated = false;
  std::optional<std::string> empty_category;
};

Enumeration enumerate_combinations(const ServiceMatrix& available, const CategoryOrder& order,
                                   std::size_t cap);

struct ScheduledActivity {
  std::string category_id;
  std::string service_id;
  Slot slot;
};

struct CandidatePlan {
  Combination combination;
  ScheduleAnalysis analysis;
  CompletionProbability completion;
  // One entry per category, in category order. Times include the plan epoch.
  std::vector<ScheduledActivity> slots;
  // Precedence edges between category ids, as used for the analysis.
  std::vector<Precedence> edges;
};

enum class InfeasibilityKind { deadline, availability };

struct Infeasibility {
  InfeasibilityKind kind = InfeasibilityKind::deadline;
  std::string category_id;  // empty for deadline violations
  Slot slot;
  Minutes duration = 0.0;
  std::string reason;
};

using ScheduleResult = std::variant<CandidatePlan, Infeasibility>;

// Builds the network for the combination, runs the CPM passes and accepts it
// iff it meets the deadline and every slot fits one of its service's windows.
ScheduleResult schedule_and_check(const Combination& combination, const ServiceMatrix& available,
                                  const PlanRequest& request);

// As above, reusing the structure of a network built for the same order.
ScheduleResult schedule_and_check(const Combination& combination, const ServiceMatrix& available,
                                  const PlanRequest& request, const PertNetwork& shape);

// Attaches the completion probability at the deadline.
CandidatePlan evaluate(CandidatePlan plan, Minutes deadline);

struct SelectedPlan {
  CandidatePlan plan;
};

// Candidates equal on probability and duration, awaiting an external choice.
// Sorted by service tuple; index 0 is what the automatic tie-break would pick.
struct TieSet {
  std::vector<CandidatePlan> candidates;
};

using Selection = std::variant<SelectedPlan, TieSet>;

inline constexpr double kProbabilityTieTolerance = 1e-9;

// Highest probability, then shortest duration, then (unless ties are deferred
// to a chooser) the smallest service tuple. Throws std::logic_error when empty.
Selection select(const std::vector<CandidatePlan>& candidates, bool defer_ties);

struct WithdrawableCategory {
  std::string category_id;
  bool fixed = false;
  std::string reason;
};

struct NegotiationPrompt {
  int round = 0;
  std::vector<WithdrawableCategory> categories;
  std::vector<std::string> diagnostics;
};

struct NegotiationDecision {
  // Empty means the client refuses to withdraw anything.
  std::vector<std::string> withdrawn;
  bool approve_fixed = false;

  bool refused() const { return withdrawn.empty(); }
};

struct NegotiationExchange {
  NegotiationPrompt prompt;
  NegotiationDecision decision;
};

struct FailureReport {
  std::string reason;
  // Per category diagnostics from the last round, keyed by category id.
  std::map<std::string, std::string> category_reasons;
  std::vector<std::string> diagnostics;
};

struct OrderAttempt {
  int round = 0;
  CategoryOrder order;
  std::size_t combinations = 0;
  std::size_t feasible = 0;
  bool truncated = false;
  std::optional<std::string> empty_category;
};

struct PlanOutcome {
  std::variant<SelectedPlan, TieSet, NegotiationPrompt, FailureReport> result;
  std::vector<OrderAttempt> orders_tried;
  std::vector<NegotiationExchange> transcript;
  std::vector<std::string> withdrawn;
  std::size_t candidates_evaluated = 0;
  // Index into the tie set picked by an external chooser, when one was asked.
  std::optional<std::size_t> tie_choice;

  bool succeeded() const { return std::holds_alternative<SelectedPlan>(result); }
  const CandidatePlan* selected() const;
  const TieSet* tie() const { return std::get_if<TieSet>(&result); }
  const NegotiationPrompt* negotiation() const { return std::get_if<NegotiationPrompt>(&result); }
  const FailureReport* failure() const { return std::get_if<FailureReport>(&result); }
};

// Supplies negotiation decisions. Returning nullopt suspends planning: plan()
// then returns the pending prompt as its outcome.
using Negotiator = std::function<std::optional<NegotiationDecision>(const NegotiationPrompt&)>;

// Refuses every prompt.
Negotiator decline_negotiation();

// Answers prompts from `decisions` in order; suspends once they run out.
Negotiator replay_negotiation(std::vector<NegotiationDecision> decisions);

// The full search: filter the registry, walk category orders, pool feasible
// candidates, evaluate and select; negotiate withdrawals when nothing fits.
PlanOutcome plan(const PlanRequest& request, const ServiceMatrix& matrix, const Negotiator& negotiator,
                 bool defer_ties = false);

}  // namespace zeittafel
