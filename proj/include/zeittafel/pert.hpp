#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace zeittafel {

// Durations are plain minutes from the plan epoch. No calendar semantics.
using Minutes = double;

// Optimistic / most likely / pessimistic duration of one activity.
struct ThreePointEstimate {
  Minutes optimistic = 0.0;
  Minutes most_likely = 0.0;
  Minutes pessimistic = 0.0;

  // Throws ValidationError naming the violated bound.
  void validate() const;

  static ThreePointEstimate exact(Minutes duration) { return {duration, duration, duration}; }

  bool operator==(const ThreePointEstimate&) const = default;
};

// (O + 4M + P) / 6
Minutes expected_time(const ThreePointEstimate& est);

// ((P - O) / 6)^2
double activity_variance(const ThreePointEstimate& est);

struct Activity {
  std::string id;
  std::string label;
  ThreePointEstimate estimate;
  Minutes expected_time = 0.0;
  double variance = 0.0;

  // Validates the estimate and fills the derived fields.
  static Activity make(std::string id, std::string label, const ThreePointEstimate& est);
};

struct Precedence {
  std::string before;
  std::string after;

  bool operator==(const Precedence&) const = default;
};

// Activity-on-node DAG. The virtual source precedes every entry activity (no
// predecessors) and the virtual sink follows every exit activity (no
// successors); both have zero duration and are not stored as activities.
class PertNetwork {
 public:
  // Throws CycleError with a witness cycle, or ValidationError for duplicate
  // ids and edges that reference unknown activities.
  static PertNetwork build(std::vector<Activity> activities, std::vector<Precedence> edges);

  // Same structure with new estimates. Ids must match position for position.
  PertNetwork with_activities(std::vector<Activity> activities) const;

  const std::vector<Activity>& activities() const { return activities_; }
  const std::vector<Precedence>& edges() const { return edges_; }
  std::size_t size() const { return activities_.size(); }
  bool empty() const { return activities_.empty(); }

  std::optional<std::size_t> index_of(const std::string& id) const;
  const std::vector<std::size_t>& predecessors(std::size_t i) const { return preds_[i]; }
  const std::vector<std::size_t>& successors(std::size_t i) const { return succs_[i]; }

  // Successors of the virtual source / predecessors of the virtual sink.
  std::vector<std::string> entry_activities() const;
  std::vector<std::string> exit_activities() const;

  // Indices in a topological order (ties broken by activity id).
  const std::vector<std::size_t>& topological_order() const { return topo_; }

 private:
  std::vector<Activity> activities_;
  std::vector<Precedence> edges_;
  std::vector<std::vector<std::size_t>> preds_;
  std::vector<std::vector<std::size_t>> succs_;
  std::vector<std::size_t> topo_;
};

struct ActivitySchedule {
  std::string id;
  Minutes earliest_start = 0.0;
  Minutes earliest_finish = 0.0;
  Minutes latest_start = 0.0;
  Minutes latest_finish = 0.0;
  Minutes total_float = 0.0;
};

struct ScheduleAnalysis {
  // Same order as PertNetwork::activities().
  std::vector<ActivitySchedule> activities;
  Minutes project_duration = 0.0;
  // Lexicographically smallest zero-float source-to-sink path.
  std::vector<std::string> critical_path;
  // Every zero-float activity, sorted by id. May exceed critical_path when
  // several critical paths exist.
  std::vector<std::string> critical_activities;
  double critical_variance = 0.0;
  double std_dev = 0.0;

  const ActivitySchedule* find(const std::string& id) const;
};

// Forward/backward pass, floats, critical path and its variance.
ScheduleAnalysis analyze(const PertNetwork& network);

struct CompletionProbability {
  Minutes deadline = 0.0;
  // Absent when std_dev is zero and the variate is undefined.
  std::optional<double> z_value;
  double probability = 0.0;
};

// Phi((deadline - duration) / std_dev); a step at the deadline when std_dev == 0.
CompletionProbability completion_probability(const ScheduleAnalysis& analysis, Minutes deadline);

}  // namespace zeittafel
