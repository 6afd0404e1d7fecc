#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "zeittafel/planner.hpp"
#include "zeittafel/scenario.hpp"

namespace zeittafel {

// Where a blocked category loses availability.
//   identity_slot  a window centred on the span the category can occupy in
//                  the identity order, so moving it later can cure the block
//   full_horizon   everything from the epoch to the last window end
enum class BlockWindowModel { identity_slot, full_horizon };

std::string to_string(BlockWindowModel model);
BlockWindowModel block_window_model_from_string(const std::string& s);

struct ExperimentConfig {
  Scenario scenario;
  std::size_t trials = 1;
  // Per category chance of being blocked in a trial; absent categories never are.
  std::map<std::string, double> block_probability;
  BlockWindowModel window_model = BlockWindowModel::identity_slot;
  // Width of the identity-slot window relative to the span it covers.
  double window_scale = 1.0;
  std::uint64_t seed = 0;
  std::vector<SearchMode> modes{SearchMode::no_backtracking, SearchMode::rotations_only,
                                SearchMode::all_permutations};
  // 0 uses the hardware concurrency.
  unsigned threads = 0;

  void validate() const;
};

struct TrialResult {
  std::size_t trial = 0;
  SearchMode mode = SearchMode::all_permutations;
  bool success = false;
  std::size_t orders_tried = 0;
  std::int64_t wall_us = 0;
  std::optional<double> probability;
  std::string absence_reason;
  std::vector<std::string> selected_services;
  std::vector<std::string> blocked_categories;
};

struct ModeSummary {
  SearchMode mode = SearchMode::all_permutations;
  std::size_t trials = 0;
  std::size_t successes = 0;
  double success_rate = 0.0;
  double mean_wall_us = 0.0;
};

struct ExperimentResult {
  // Ordered by trial, then by the configured mode order.
  std::vector<TrialResult> trials;
  std::vector<ModeSummary> summary;

  // Header: trial,mode,success,orders_tried,wall_us,probability
  std::string csv() const;
  std::string summary_text() const;
};

// Span [earliest possible start, latest possible finish] of each category in
// the identity order, over every choice of available offers.
std::map<std::string, AvailabilityWindow> identity_slot_spans(const Scenario& scenario);

// Blocks drawn for one trial, as category -> window.
std::map<std::string, AvailabilityWindow> draw_blocks(const ExperimentConfig& config, std::size_t trial);

ExperimentResult run_experiment(const ExperimentConfig& config);

}  // namespace zeittafel
