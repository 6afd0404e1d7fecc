#pragma once

#include <vector>

#include "zeittafel/pert.hpp"

namespace zeittafel {

// Half-open span [start, end) in minutes from the plan epoch.
struct AvailabilityWindow {
  Minutes start = 0.0;
  Minutes end = 0.0;

  // 0 <= start < end, both finite.
  void validate() const;

  bool operator==(const AvailabilityWindow&) const = default;
};

// A scheduled occupancy. Unlike a window it may be empty (zero-duration activity).
struct Slot {
  Minutes start = 0.0;
  Minutes end = 0.0;

  bool operator==(const Slot&) const = default;
};

using WindowSet = std::vector<AvailabilityWindow>;

// Sorted, pairwise disjoint, with touching or overlapping windows merged.
WindowSet normalize(WindowSet windows);

// Removes `block` from every window. Input must be normalized; so is the output.
WindowSet subtract(const WindowSet& windows, const AvailabilityWindow& block);

// Union with `window`.
WindowSet add(WindowSet windows, const AvailabilityWindow& window);

// True when the slot lies entirely inside a single window.
bool fits(const WindowSet& windows, const Slot& slot);

}  // namespace zeittafel
