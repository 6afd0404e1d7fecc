#include "zeittafel/pert.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <set>
#include <sstream>

#include "zeittafel/error.hpp"
#include "zeittafel/normal.hpp"

namespace zeittafel {

void ThreePointEstimate::validate() const {
  if (!std::isfinite(optimistic) || !std::isfinite(most_likely) || !std::isfinite(pessimistic)) {
    throw ValidationError("three-point estimate: values must be finite");
  }
  if (optimistic < 0.0) {
    throw ValidationError("three-point estimate: optimistic time is negative");
  }
  if (optimistic > most_likely) {
    throw ValidationError("three-point estimate: optimistic time exceeds most likely time");
  }
  if (most_likely > pessimistic) {
    throw ValidationError("three-point estimate: most likely time exceeds pessimistic time");
  }
}

Minutes expected_time(const ThreePointEstimate& est) {
  est.validate();
  return (est.optimistic + 4.0 * est.most_likely + est.pessimistic) / 6.0;
}

double activity_variance(const ThreePointEstimate& est) {
  est.validate();
  const double spread = (est.pessimistic - est.optimistic) / 6.0;
  return spread * spread;
}

Activity Activity::make(std::string id, std::string label, const ThreePointEstimate& est) {
  Activity a;
  a.id = std::move(id);
  a.label = std::move(label);
  a.estimate = est;
  a.expected_time = zeittafel::expected_time(est);
  a.variance = activity_variance(est);
  return a;
}

namespace {

// Walks predecessor links among nodes Kahn's algorithm could not remove.
// Every such node has a remaining predecessor, so the walk must revisit a node.
std::vector<std::string> find_cycle(const std::vector<Activity>& acts,
                                    const std::vector<std::vector<std::size_t>>& preds,
                                    const std::vector<std::size_t>& indegree) {
  std::size_t start = acts.size();
  for (std::size_t i = 0; i < acts.size(); ++i) {
    if (indegree[i] > 0 && (start == acts.size() || acts[i].id < acts[start].id)) start = i;
  }
  std::vector<std::size_t> walk;
  std::map<std::size_t, std::size_t> seen_at;
  std::size_t cur = start;
  while (!seen_at.count(cur)) {
    seen_at[cur] = walk.size();
    walk.push_back(cur);
    std::size_t next = acts.size();
    for (std::size_t p : preds[cur]) {
      if (indegree[p] > 0 && (next == acts.size() || acts[p].id < acts[next].id)) next = p;
    }
    cur = next;
  }
  std::vector<std::size_t> cycle(walk.begin() + static_cast<std::ptrdiff_t>(seen_at[cur]), walk.end());
  std::reverse(cycle.begin(), cycle.end());
  auto smallest = std::min_element(cycle.begin(), cycle.end(),
                                   [&](std::size_t a, std::size_t b) { return acts[a].id < acts[b].id; });
  std::rotate(cycle.begin(), smallest, cycle.end());
  std::vector<std::string> ids;
  for (std::size_t i : cycle) ids.push_back(acts[i].id);
  return ids;
}

}  // namespace

PertNetwork PertNetwork::with_activities(std::vector<Activity> activities) const {
  if (activities.size() != activities_.size()) throw ValidationError("activity count differs from the network");
  for (std::size_t i = 0; i < activities.size(); ++i) {
    if (activities[i].id != activities_[i].id) {
      throw ValidationError("activity " + activities[i].id + " does not match network slot " + activities_[i].id);
    }
    activities[i].estimate.validate();
  }
  PertNetwork net = *this;
  net.activities_ = std::move(activities);
  return net;
}

PertNetwork PertNetwork::build(std::vector<Activity> activities, std::vector<Precedence> edges) {
  PertNetwork net;
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < activities.size(); ++i) {
    activities[i].estimate.validate();
    if (!index.emplace(activities[i].id, i).second) {
      throw ValidationError("duplicate activity id: " + activities[i].id);
    }
  }
  const std::size_t n = activities.size();
  net.preds_.assign(n, {});
  net.succs_.assign(n, {});

  std::set<std::pair<std::size_t, std::size_t>> unique_edges;
  for (const auto& e : edges) {
    auto from = index.find(e.before);
    if (from == index.end()) throw ValidationError("edge references unknown activity: " + e.before);
    auto to = index.find(e.after);
    if (to == index.end()) throw ValidationError("edge references unknown activity: " + e.after);
    if (unique_edges.emplace(from->second, to->second).second) {
      net.succs_[from->second].push_back(to->second);
      net.preds_[to->second].push_back(from->second);
      net.edges_.push_back(e);
    }
  }

  // Kahn's algorithm, smallest id first so the order is reproducible.
  std::vector<std::size_t> indegree(n);
  auto by_id = [&](std::size_t a, std::size_t b) { return activities[a].id > activities[b].id; };
  std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(by_id)> ready(by_id);
  for (std::size_t i = 0; i < n; ++i) {
    indegree[i] = net.preds_[i].size();
    if (indegree[i] == 0) ready.push(i);
  }
  while (!ready.empty()) {
    std::size_t i = ready.top();
    ready.pop();
    net.topo_.push_back(i);
    for (std::size_t s : net.succs_[i]) {
      if (--indegree[s] == 0) ready.push(s);
    }
  }
  if (net.topo_.size() != n) {
    auto cycle = find_cycle(activities, net.preds_, indegree);
    std::ostringstream msg;
    msg << "precedence cycle:";
    for (const auto& id : cycle) msg << ' ' << id;
    throw CycleError(msg.str(), std::move(cycle));
  }
  net.activities_ = std::move(activities);
  return net;
}

std::optional<std::size_t> PertNetwork::index_of(const std::string& id) const {
  for (std::size_t i = 0; i < activities_.size(); ++i) {
    if (activities_[i].id == id) return i;
  }
  return std::nullopt;
}

std::vector<std::string> PertNetwork::entry_activities() const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < activities_.size(); ++i) {
    if (preds_[i].empty()) out.push_back(activities_[i].id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> PertNetwork::exit_activities() const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < activities_.size(); ++i) {
    if (succs_[i].empty()) out.push_back(activities_[i].id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

const ActivitySchedule* ScheduleAnalysis::find(const std::string& id) const {
  for (const auto& a : activities) {
    if (a.id == id) return &a;
  }
  return nullptr;
}

ScheduleAnalysis analyze(const PertNetwork& network) {
  ScheduleAnalysis out;
  const auto& acts = network.activities();
  const std::size_t n = acts.size();
  out.activities.resize(n);
  if (n == 0) return out;

  const auto& topo = network.topological_order();
  for (std::size_t i : topo) {
    auto& s = out.activities[i];
    s.id = acts[i].id;
    s.earliest_start = 0.0;
    for (std::size_t p : network.predecessors(i)) {
      s.earliest_start = std::max(s.earliest_start, out.activities[p].earliest_finish);
    }
    s.earliest_finish = s.earliest_start + acts[i].expected_time;
    out.project_duration = std::max(out.project_duration, s.earliest_finish);
  }

  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    const std::size_t i = *it;
    auto& s = out.activities[i];
    s.latest_finish = out.project_duration;
    for (std::size_t succ : network.successors(i)) {
      s.latest_finish = std::min(s.latest_finish, out.activities[succ].latest_start);
    }
    s.latest_start = s.latest_finish - acts[i].expected_time;
    s.total_float = std::max(0.0, s.latest_start - s.earliest_start);
  }

  // Floats come from sums of doubles, so "zero" is relative to the duration.
  const double eps = 1e-9 * std::max(1.0, out.project_duration);
  auto critical = [&](std::size_t i) { return out.activities[i].total_float <= eps; };

  for (std::size_t i = 0; i < n; ++i) {
    if (critical(i)) out.critical_activities.push_back(acts[i].id);
  }
  std::sort(out.critical_activities.begin(), out.critical_activities.end());

  // Greedy smallest-id walk along tight zero-float edges. Every zero-float
  // activity either ends at the sink or has a tight zero-float successor, so
  // the walk cannot dead-end and greedy choice yields the lexicographic minimum.
  auto pick = [&](const std::vector<std::size_t>& options) {
    std::optional<std::size_t> best;
    for (std::size_t c : options) {
      if (!best || acts[c].id < acts[*best].id) best = c;
    }
    return best;
  };
  std::vector<std::size_t> starts;
  for (std::size_t i = 0; i < n; ++i) {
    if (network.predecessors(i).empty() && critical(i)) starts.push_back(i);
  }
  auto cur = pick(starts);
  while (cur) {
    out.critical_path.push_back(acts[*cur].id);
    out.critical_variance += acts[*cur].variance;
    std::vector<std::size_t> next;
    for (std::size_t s : network.successors(*cur)) {
      if (critical(s) &&
          std::abs(out.activities[s].earliest_start - out.activities[*cur].earliest_finish) <= eps) {
        next.push_back(s);
      }
    }
    cur = pick(next);
  }
  out.std_dev = std::sqrt(out.critical_variance);
  return out;
}

CompletionProbability completion_probability(const ScheduleAnalysis& analysis, Minutes deadline) {
  if (!std::isfinite(deadline) || deadline < 0.0) {
    throw ValidationError("deadline must be a non-negative finite number of minutes");
  }
  CompletionProbability cp;
  cp.deadline = deadline;
  if (analysis.std_dev > 0.0) {
    const double z = (deadline - analysis.project_duration) / analysis.std_dev;
    cp.z_value = z;
    cp.probability = normal_cdf(z);
  } else {
    cp.probability = analysis.project_duration <= deadline ? 1.0 : 0.0;
  }
  return cp;
}

}  // namespace zeittafel
