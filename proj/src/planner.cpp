#include "zeittafel/planner.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <memory>
#include <set>
#include <sstream>
#include <stdexcept>

#include "zeittafel/error.hpp"

namespace zeittafel {

std::string to_string(SearchMode mode) {
  switch (mode) {
    case SearchMode::no_backtracking: return "no_backtracking";
    case SearchMode::rotations_only: return "rotations_only";
    case SearchMode::all_permutations: return "all_permutations";
  }
  return "?";
}

SearchMode search_mode_from_string(const std::string& s) {
  if (s == "no_backtracking" || s == "none") return SearchMode::no_backtracking;
  if (s == "rotations_only" || s == "rotations") return SearchMode::rotations_only;
  if (s == "all_permutations" || s == "permutations") return SearchMode::all_permutations;
  throw ValidationError("unknown search mode: " + s);
}

void PlanRequest::validate(const ServiceMatrix& matrix) const {
  if (matrix.category_count() == 0) throw ValidationError("no categories to plan over");
  if (!std::isfinite(deadline) || deadline <= 0.0) throw ValidationError("deadline must be > 0");
  if (candidate_cap == 0) throw ValidationError("candidate_cap must be >= 1");
  constraints.validate();

  std::set<std::string> seen;
  auto check = [&](const std::string& id, CategoryKind expected, const char* list) {
    const Category* c = matrix.find_category(id);
    if (!c) throw ValidationError(std::string(list) + " references unknown category: " + id);
    if (c->kind != expected) {
      throw ValidationError("category " + id + " is " + to_string(c->kind) + " but listed in " + list);
    }
    if (!seen.insert(id).second) throw ValidationError("category listed twice: " + id);
  };
  for (const auto& id : fc_order) check(id, CategoryKind::fixed, "fc_order");
  for (const auto& id : nc_set) check(id, CategoryKind::non_fixed, "nc_set");
  for (const auto& c : matrix.categories()) {
    if (!seen.count(c.id)) throw ValidationError("category missing from fc_order/nc_set: " + c.id);
  }
  if (precedence_template) {
    const std::size_t n = matrix.category_count();
    for (const auto& e : *precedence_template) {
      if (e.before >= n || e.after >= n) {
        throw ValidationError("precedence_template slot out of range");
      }
      if (e.before == e.after) throw ValidationError("precedence_template has a self edge");
    }
    std::vector<Activity> slots;
    std::vector<Precedence> edges;
    for (std::size_t i = 0; i < n; ++i) slots.push_back(Activity::make("slot " + std::to_string(i), "", {}));
    for (const auto& e : *precedence_template) edges.push_back({slots[e.before].id, slots[e.after].id});
    try {
      PertNetwork::build(std::move(slots), std::move(edges));
    } catch (const CycleError& err) {
      throw ValidationError(std::string("precedence_template: ") + err.what());
    }
  }
}

std::vector<CategoryOrder> generate_category_orders(const std::vector<std::string>& fc_order,
                                                    const std::vector<std::string>& nc_set,
                                                    SearchMode mode) {
  std::vector<CategoryOrder> orders;
  std::set<std::vector<std::string>> seen;
  auto emit = [&](const std::vector<std::string>& arrangement) {
    if (!seen.insert(arrangement).second) return;
    CategoryOrder order = fc_order;
    order.insert(order.end(), arrangement.begin(), arrangement.end());
    orders.push_back(std::move(order));
  };

  emit(nc_set);
  if (mode == SearchMode::no_backtracking) return orders;

  std::vector<std::string> rotated = nc_set;
  for (std::size_t r = 1; r < nc_set.size(); ++r) {
    std::rotate(rotated.begin(), rotated.begin() + 1, rotated.end());
    emit(rotated);
  }
  if (mode == SearchMode::rotations_only) return orders;

  std::vector<std::string> perm = nc_set;
  std::sort(perm.begin(), perm.end());
  do {
    emit(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return orders;
}

std::vector<std::string> Combination::service_tuple() const {
  std::vector<std::string> out;
  out.reserve(category_order.size());
  for (const auto& c : category_order) out.push_back(choices.at(c));
  return out;
}

CombinationEnumerator::CombinationEnumerator(const ServiceMatrix& available, CategoryOrder order,
                                             std::size_t cap)
    : order_(std::move(order)), cap_(cap) {
  for (const auto& cat : order_) {
    std::vector<std::string> ids;
    for (const auto& o : available.column(cat)) ids.push_back(o.id);
    if (ids.empty() && !empty_category_) empty_category_ = cat;
    std::sort(ids.begin(), ids.end());
    ids_.push_back(std::move(ids));
  }
  cursor_.assign(order_.size(), 0);
  done_ = empty_category_.has_value();
}

std::optional<Combination> CombinationEnumerator::next() {
  if (done_) return std::nullopt;
  if (emitted_ == cap_) {
    truncated_ = true;
    done_ = true;
    return std::nullopt;
  }
  Combination c;
  c.category_order = order_;
  for (std::size_t i = 0; i < order_.size(); ++i) c.choices[order_[i]] = ids_[i][cursor_[i]];
  ++emitted_;

  // Odometer with the last category turning fastest gives lexicographic tuples.
  std::size_t i = order_.size();
  while (i > 0) {
    --i;
    if (++cursor_[i] < ids_[i].size()) break;
    cursor_[i] = 0;
    if (i == 0) done_ = true;
  }
  if (order_.empty()) done_ = true;
  return c;
}

Enumeration enumerate_combinations(const ServiceMatrix& available, const CategoryOrder& order,
                                   std::size_t cap) {
  CombinationEnumerator it(available, order, cap);
  Enumeration out;
  out.empty_category = it.empty_category();
  while (auto c = it.next()) out.combinations.push_back(std::move(*c));
  out.truncated = it.truncated();
  return out;
}

namespace {

std::string fmt_minutes(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc() ? std::string(buf, end) : std::string("?");
}

PertNetwork order_shape(const CategoryOrder& order, const PlanRequest& request) {
  std::vector<Activity> activities;
  for (const auto& cat : order) activities.push_back(Activity::make(cat, cat, ThreePointEstimate::exact(0.0)));
  return PertNetwork::build(std::move(activities), precedence_edges(order, request));
}

}  // namespace

std::vector<Precedence> precedence_edges(const CategoryOrder& order, const PlanRequest& request) {
  std::vector<Precedence> edges;
  if (request.precedence_template) {
    for (const auto& e : *request.precedence_template) {
      // Slots past the end belong to withdrawn categories.
      if (e.before < order.size() && e.after < order.size()) {
        edges.push_back({order[e.before], order[e.after]});
      }
    }
  } else {
    for (std::size_t i = 1; i < order.size(); ++i) edges.push_back({order[i - 1], order[i]});
  }
  return edges;
}

ScheduleResult schedule_and_check(const Combination& combination, const ServiceMatrix& available,
                                  const PlanRequest& request) {
  return schedule_and_check(combination, available, request, order_shape(combination.category_order, request));
}

ScheduleResult schedule_and_check(const Combination& combination, const ServiceMatrix& available,
                                  const PlanRequest& request, const PertNetwork& shape) {
  const auto& order = combination.category_order;
  if (shape.size() != order.size()) throw ValidationError("network shape does not match the category order");
  std::vector<const ServiceOffer*> offers;
  offers.reserve(order.size());
  for (const auto& cat : order) {
    auto it = combination.choices.find(cat);
    if (it == combination.choices.end()) throw ValidationError("combination has no choice for " + cat);
    const ServiceOffer* offer = available.find_offer(it->second);
    if (!offer || offer->category_id != cat) {
      throw ValidationError("service " + it->second + " is not an available offer of " + cat);
    }
    offers.push_back(offer);
  }

  // Forward pass only; the full analysis runs on survivors and repeats the
  // same arithmetic, so both agree bit for bit.
  const std::size_t n = order.size();
  std::vector<Minutes> es(n, 0.0), ef(n, 0.0);
  Minutes duration = 0.0;
  for (std::size_t i : shape.topological_order()) {
    for (std::size_t p : shape.predecessors(i)) es[i] = std::max(es[i], ef[p]);
    ef[i] = es[i] + expected_time(offers[i]->estimate);
    duration = std::max(duration, ef[i]);
  }

  const double eps = 1e-9 * std::max(1.0, request.deadline);
  if (duration > request.deadline + eps) {
    Infeasibility inf;
    inf.kind = InfeasibilityKind::deadline;
    inf.duration = duration;
    inf.reason = "duration " + fmt_minutes(duration) + " exceeds deadline " + fmt_minutes(request.deadline);
    return inf;
  }

  const Minutes epoch = request.constraints.plan_epoch;
  for (std::size_t i = 0; i < n; ++i) {
    Slot slot{epoch + es[i], epoch + ef[i]};
    if (!fits(offers[i]->windows, slot)) {
      Infeasibility inf;
      inf.kind = InfeasibilityKind::availability;
      inf.category_id = order[i];
      inf.slot = slot;
      inf.duration = duration;
      inf.reason = "service " + offers[i]->id + " unavailable for [" + fmt_minutes(slot.start) + ", " +
                   fmt_minutes(slot.end) + ")";
      return inf;
    }
  }

  std::vector<Activity> activities;
  activities.reserve(n);
  for (std::size_t i = 0; i < n; ++i) activities.push_back(Activity::make(order[i], offers[i]->name, offers[i]->estimate));
  CandidatePlan plan;
  plan.combination = combination;
  plan.analysis = analyze(shape.with_activities(std::move(activities)));
  plan.edges = shape.edges();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = plan.analysis.activities[i];
    plan.slots.push_back({order[i], offers[i]->id, Slot{epoch + a.earliest_start, epoch + a.earliest_finish}});
  }
  return plan;
}

CandidatePlan evaluate(CandidatePlan plan, Minutes deadline) {
  plan.completion = completion_probability(plan.analysis, deadline);
  return plan;
}

Selection select(const std::vector<CandidatePlan>& candidates, bool defer_ties) {
  if (candidates.empty()) throw std::logic_error("select: no candidates");

  double best_p = -1.0;
  for (const auto& c : candidates) best_p = std::max(best_p, c.completion.probability);
  double best_d = std::numeric_limits<double>::infinity();
  for (const auto& c : candidates) {
    if (c.completion.probability >= best_p - kProbabilityTieTolerance) {
      best_d = std::min(best_d, c.analysis.project_duration);
    }
  }
  const double d_eps = 1e-9 * std::max(1.0, best_d);

  // The same services reached through different category orders count once;
  // the first one found (earliest order) represents them.
  std::vector<const CandidatePlan*> tied;
  std::set<std::map<std::string, std::string>> seen_choices;
  for (const auto& c : candidates) {
    if (c.completion.probability < best_p - kProbabilityTieTolerance) continue;
    if (c.analysis.project_duration > best_d + d_eps) continue;
    if (!seen_choices.insert(c.combination.choices).second) continue;
    tied.push_back(&c);
  }
  std::stable_sort(tied.begin(), tied.end(), [](const CandidatePlan* a, const CandidatePlan* b) {
    return a->combination.service_tuple() < b->combination.service_tuple();
  });

  if (tied.size() == 1 || !defer_ties) return SelectedPlan{*tied.front()};
  TieSet ties;
  for (const auto* c : tied) ties.candidates.push_back(*c);
  return ties;
}

const CandidatePlan* PlanOutcome::selected() const {
  if (auto s = std::get_if<SelectedPlan>(&result)) return &s->plan;
  return nullptr;
}

Negotiator decline_negotiation() {
  return [](const NegotiationPrompt&) { return std::optional<NegotiationDecision>(NegotiationDecision{}); };
}

Negotiator replay_negotiation(std::vector<NegotiationDecision> decisions) {
  auto next = std::make_shared<std::size_t>(0);
  return [decisions = std::move(decisions), next](const NegotiationPrompt&) -> std::optional<NegotiationDecision> {
    if (*next >= decisions.size()) return std::nullopt;
    return decisions[(*next)++];
  };
}

namespace {

// Why a round produced no candidates, aggregated per category.
struct RoundDiagnostics {
  std::vector<std::string> empty_categories;
  std::map<std::string, std::size_t> slot_conflicts;
  std::size_t deadline_violations = 0;
  Minutes shortest_late = std::numeric_limits<double>::infinity();
};

std::map<std::string, std::string> category_reasons(const ServiceMatrix& active, const RoundDiagnostics& d,
                                                    Minutes deadline) {
  std::map<std::string, std::string> out;
  for (const auto& id : d.empty_categories) out[id] = "no offer passes availability/cost/capacity filtering";
  for (const auto& [id, n] : d.slot_conflicts) {
    out[id] = std::to_string(n) + " combination(s) rejected: scheduled slot outside availability";
  }
  if (d.deadline_violations > 0) {
    const std::string why = "shortest combination takes " + fmt_minutes(d.shortest_late) + " > deadline " +
                            fmt_minutes(deadline);
    for (const auto& c : active.categories()) out.emplace(c.id, why);
  }
  return out;
}

NegotiationPrompt make_prompt(int round, const ServiceMatrix& active, const RoundDiagnostics& d,
                              Minutes deadline) {
  NegotiationPrompt p;
  p.round = round;
  auto reasons = category_reasons(active, d, deadline);
  for (const auto& c : active.categories()) {
    auto it = reasons.find(c.id);
    if (it == reasons.end()) continue;
    p.categories.push_back({c.id, c.kind == CategoryKind::fixed, it->second});
  }
  if (d.deadline_violations > 0) {
    p.diagnostics.push_back(std::to_string(d.deadline_violations) + " combination(s) exceed the deadline");
  }
  if (!d.empty_categories.empty()) {
    std::string s = "empty categories:";
    for (const auto& id : d.empty_categories) s += " " + id;
    p.diagnostics.push_back(s);
  }
  return p;
}

void check_decision(const NegotiationPrompt& prompt, const NegotiationDecision& decision,
                    const PlanRequest& request) {
  std::set<std::string> seen;
  for (const auto& id : decision.withdrawn) {
    auto it = std::find_if(prompt.categories.begin(), prompt.categories.end(),
                           [&](const auto& w) { return w.category_id == id; });
    if (it == prompt.categories.end()) throw ValidationError("withdrawn category was not offered: " + id);
    if (it->fixed && !decision.approve_fixed && !request.allow_fixed_withdrawal) {
      throw ValidationError("withdrawing fixed category " + id + " needs explicit approval");
    }
    if (!seen.insert(id).second) throw ValidationError("category withdrawn twice: " + id);
  }
}

}  // namespace

PlanOutcome plan(const PlanRequest& request, const ServiceMatrix& matrix, const Negotiator& negotiator,
                 bool defer_ties) {
  request.validate(matrix);
  PlanOutcome outcome;

  for (int round = 0;; ++round) {
    const ServiceMatrix active = without_categories(matrix, outcome.withdrawn);
    if (active.category_count() == 0) {
      outcome.result = FailureReport{"every category was withdrawn", {}, {}};
      return outcome;
    }
    auto keep = [&](const std::vector<std::string>& ids) {
      std::vector<std::string> out;
      for (const auto& id : ids) {
        if (active.find_category(id)) out.push_back(id);
      }
      return out;
    };
    const auto fc = keep(request.fc_order);
    const auto nc = keep(request.nc_set);
    const auto available = available_submatrix(active, request.constraints);

    RoundDiagnostics diag;
    diag.empty_categories = available.empty_categories;
    std::vector<CandidatePlan> pool;

    for (const auto& order : generate_category_orders(fc, nc, request.search_mode)) {
      CombinationEnumerator combos(available.matrix, order, request.candidate_cap);
      OrderAttempt attempt{round, order, 0, 0, false, combos.empty_category()};
      const PertNetwork shape = order_shape(order, request);
      while (auto c = combos.next()) {
        auto result = schedule_and_check(*c, available.matrix, request, shape);
        if (auto* p = std::get_if<CandidatePlan>(&result)) {
          pool.push_back(std::move(*p));
          ++attempt.feasible;
        } else {
          const auto& inf = std::get<Infeasibility>(result);
          if (inf.kind == InfeasibilityKind::deadline) {
            ++diag.deadline_violations;
            diag.shortest_late = std::min(diag.shortest_late, inf.duration);
          } else {
            ++diag.slot_conflicts[inf.category_id];
          }
        }
      }
      attempt.combinations = combos.emitted();
      attempt.truncated = combos.truncated();
      outcome.orders_tried.push_back(std::move(attempt));
      // An empty column empties every order; no point rearranging.
      if (combos.empty_category()) break;
    }

    if (!pool.empty()) {
      for (auto& c : pool) c = evaluate(std::move(c), request.deadline);
      outcome.candidates_evaluated = pool.size();
      std::visit([&](auto&& s) { outcome.result = std::move(s); }, select(pool, defer_ties));
      return outcome;
    }

    NegotiationPrompt prompt = make_prompt(round, active, diag, request.deadline);
    auto decision = negotiator ? negotiator(prompt) : std::optional<NegotiationDecision>(NegotiationDecision{});
    if (!decision) {
      outcome.result = std::move(prompt);
      return outcome;
    }
    check_decision(prompt, *decision, request);
    outcome.transcript.push_back({prompt, *decision});
    if (decision->refused()) {
      FailureReport failure;
      failure.reason = "no feasible composition and the client withdrew nothing";
      failure.category_reasons = category_reasons(active, diag, request.deadline);
      failure.diagnostics = prompt.diagnostics;
      outcome.result = std::move(failure);
      return outcome;
    }
    for (const auto& id : decision->withdrawn) outcome.withdrawn.push_back(id);
  }
}

}  // namespace zeittafel
