#pragma once

#include <map>
#include <string>
#include <vector>

#include "zeittafel/planner.hpp"
#include "zeittafel/registry.hpp"

namespace fixtures {

// Tour planner: six categories with three offers each; C1..C3 fixed.
inline const std::map<std::string, std::vector<double>>& tour_durations() {
  static const std::map<std::string, std::vector<double>> d{
      {"C1", {180, 210, 150}}, {"C2", {20, 30, 25}}, {"C3", {10, 12, 15}},
      {"C4", {90, 100, 85}},   {"C5", {30, 30, 25}}, {"C6", {120, 135, 125}}};
  return d;
}

inline zeittafel::ServiceMatrix tour_matrix(double window_end = 1000) {
  using namespace zeittafel;
  std::vector<Category> cats;
  std::vector<ServiceOffer> offers;
  for (const auto& [cat, ds] : tour_durations()) {
    const bool fixed = cat <= "C3";
    cats.push_back({cat, cat, fixed ? CategoryKind::fixed : CategoryKind::non_fixed});
    for (std::size_t i = 0; i < ds.size(); ++i) {
      ServiceOffer o;
      o.id = cat + ".WS" + std::to_string(i + 1);
      o.category_id = cat;
      o.name = o.id;
      o.estimate = ThreePointEstimate::exact(ds[i]);
      o.cost = 10.0 * static_cast<double>(i + 1);
      o.capacity = 20;
      o.windows = {{0, window_end}};
      offers.push_back(o);
    }
  }
  return ServiceMatrix::make(cats, offers);
}

inline zeittafel::PlanRequest tour_request(double deadline = 450) {
  zeittafel::PlanRequest r;
  r.deadline = deadline;
  r.fc_order = {"C1", "C2", "C3"};
  r.nc_set = {"C4", "C5", "C6"};
  return r;
}

// Applies `window` as a block to every offer of the category.
inline zeittafel::ServiceMatrix block_category(zeittafel::ServiceMatrix m, const std::string& cat,
                                               zeittafel::AvailabilityWindow window) {
  const auto column = m.column(cat);
  for (const auto& o : column) m = zeittafel::block(m, o.id, window);
  return m;
}

}  // namespace fixtures
