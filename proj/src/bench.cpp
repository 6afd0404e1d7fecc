#include "zeittafel/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

#include "zeittafel/error.hpp"

namespace zeittafel {

std::string to_string(BlockWindowModel model) {
  return model == BlockWindowModel::identity_slot ? "identity_slot" : "full_horizon";
}

BlockWindowModel block_window_model_from_string(const std::string& s) {
  if (s == "identity_slot" || s == "identity") return BlockWindowModel::identity_slot;
  if (s == "full_horizon" || s == "full") return BlockWindowModel::full_horizon;
  throw ValidationError("unknown block window model: " + s);
}

void ExperimentConfig::validate() const {
  if (trials < 1) throw ValidationError("trials must be >= 1");
  if (modes.empty()) throw ValidationError("at least one mode is required");
  if (!(window_scale > 0.0) || !std::isfinite(window_scale)) throw ValidationError("window_scale must be > 0");
  for (const auto& [id, p] : block_probability) {
    if (!scenario.matrix.find_category(id)) throw ValidationError("block probability for unknown category: " + id);
    if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("block probability for " + id + " must lie in [0, 1]");
  }
  scenario.request.validate(scenario.matrix);
}

std::map<std::string, AvailabilityWindow> identity_slot_spans(const Scenario& scenario) {
  const auto& req = scenario.request;
  const auto available = available_submatrix(scenario.matrix, req.constraints);
  CategoryOrder order = req.fc_order;
  order.insert(order.end(), req.nc_set.begin(), req.nc_set.end());

  // Earliest starts are monotone in durations, so the all-shortest and
  // all-longest networks bound every combination.
  std::vector<Activity> shortest, longest;
  for (const auto& cat : order) {
    const auto& column = available.matrix.column(cat).empty() ? scenario.matrix.column(cat)
                                                               : available.matrix.column(cat);
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const auto& o : column) {
      lo = std::min(lo, expected_time(o.estimate));
      hi = std::max(hi, expected_time(o.estimate));
    }
    shortest.push_back(Activity::make(cat, cat, ThreePointEstimate::exact(lo)));
    longest.push_back(Activity::make(cat, cat, ThreePointEstimate::exact(hi)));
  }
  const auto edges = precedence_edges(order, req);
  const auto lo = analyze(PertNetwork::build(shortest, edges));
  const auto hi = analyze(PertNetwork::build(longest, edges));

  std::map<std::string, AvailabilityWindow> spans;
  const Minutes epoch = req.constraints.plan_epoch;
  for (std::size_t i = 0; i < order.size(); ++i) {
    spans[order[i]] = {epoch + lo.activities[i].earliest_start, epoch + hi.activities[i].earliest_finish};
  }
  return spans;
}

namespace {

// Platform-independent uniform draw in [0, 1).
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

Minutes horizon(const ServiceMatrix& m) {
  Minutes h = 1.0;
  for (const auto& o : m.all_offers()) {
    for (const auto& w : o.windows) h = std::max(h, w.end);
  }
  return h;
}

}  // namespace

std::map<std::string, AvailabilityWindow> draw_blocks(const ExperimentConfig& config, std::size_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(config.seed), static_cast<std::uint32_t>(config.seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(std::uint64_t(trial) >> 32)};
  std::mt19937_64 rng(seq);

  std::map<std::string, AvailabilityWindow> spans;
  if (config.window_model == BlockWindowModel::identity_slot) spans = identity_slot_spans(config.scenario);
  const Minutes end_of_time = horizon(config.scenario.matrix);

  std::map<std::string, AvailabilityWindow> blocks;
  for (const auto& cat : config.scenario.matrix.categories()) {
    // One draw per category whatever the probability, so streams stay aligned.
    const double u = unit(rng);
    auto p = config.block_probability.find(cat.id);
    if (p == config.block_probability.end() || !(u < p->second)) continue;
    if (config.window_model == BlockWindowModel::full_horizon) {
      blocks[cat.id] = {0.0, end_of_time};
      continue;
    }
    const auto& span = spans.at(cat.id);
    const double centre = 0.5 * (span.start + span.end);
    const double half = 0.5 * (span.end - span.start) * config.window_scale;
    if (half <= 0.0) continue;
    blocks[cat.id] = {std::max(0.0, centre - half), centre + half};
  }
  return blocks;
}

namespace {

std::vector<TrialResult> run_trial(const ExperimentConfig& config, std::size_t trial) {
  const auto blocks = draw_blocks(config, trial);
  ServiceMatrix matrix = config.scenario.matrix;
  std::vector<std::string> blocked;
  for (const auto& [cat, window] : blocks) {
    blocked.push_back(cat);
    for (const auto& o : config.scenario.matrix.column(cat)) matrix = block(matrix, o.id, window);
  }

  std::vector<TrialResult> out;
  for (SearchMode mode : config.modes) {
    PlanRequest request = config.scenario.request;
    request.search_mode = mode;
    const auto t0 = std::chrono::steady_clock::now();
    const PlanOutcome outcome = plan(request, matrix, decline_negotiation());
    const auto t1 = std::chrono::steady_clock::now();

    TrialResult r;
    r.trial = trial;
    r.mode = mode;
    r.blocked_categories = blocked;
    r.orders_tried = outcome.orders_tried.size();
    r.wall_us = std::chrono::duration_cast<std::chrono::microseconds>(t1 - t0).count();
    if (const auto* p = outcome.selected()) {
      r.success = true;
      r.probability = p->completion.probability;
      r.selected_services = p->combination.service_tuple();
    } else if (const auto* f = outcome.failure()) {
      r.absence_reason = f->reason;
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  std::vector<std::vector<TrialResult>> per_trial(config.trials);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t = next++; t < config.trials; t = next++) per_trial[t] = run_trial(config, t);
  };
  unsigned threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, config.trials));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  ExperimentResult result;
  for (auto& rows : per_trial) {
    for (auto& r : rows) result.trials.push_back(std::move(r));
  }
  for (SearchMode mode : config.modes) {
    ModeSummary s;
    s.mode = mode;
    double wall = 0.0;
    for (const auto& r : result.trials) {
      if (r.mode != mode) continue;
      ++s.trials;
      s.successes += r.success ? 1 : 0;
      wall += static_cast<double>(r.wall_us);
    }
    s.success_rate = s.trials ? static_cast<double>(s.successes) / static_cast<double>(s.trials) : 0.0;
    s.mean_wall_us = s.trials ? wall / static_cast<double>(s.trials) : 0.0;
    result.summary.push_back(s);
  }
  return result;
}

std::string ExperimentResult::csv() const {
  std::ostringstream out;
  out << "trial,mode,success,orders_tried,wall_us,probability\n";
  for (const auto& r : trials) {
    out << r.trial << ',' << to_string(r.mode) << ',' << (r.success ? 1 : 0) << ',' << r.orders_tried << ','
        << r.wall_us << ',';
    if (r.probability) out << std::setprecision(12) << *r.probability;
    out << '\n';
  }
  return out.str();
}

std::string ExperimentResult::summary_text() const {
  std::ostringstream out;
  out << std::fixed;
  for (const auto& s : summary) {
    out << std::left << std::setw(18) << to_string(s.mode) << " success " << s.successes << '/' << s.trials
        << " (" << std::setprecision(1) << 100.0 * s.success_rate << "%)  mean wall " << std::setprecision(0)
        << s.mean_wall_us << " us\n";
  }
  return out.str();
}

}  // namespace zeittafel
