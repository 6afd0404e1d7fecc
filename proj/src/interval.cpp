#include "zeittafel/interval.hpp"

#include <algorithm>
#include <cmath>

#include "zeittafel/error.hpp"

namespace zeittafel {

void AvailabilityWindow::validate() const {
  if (!std::isfinite(start) || !std::isfinite(end)) {
    throw ValidationError("availability window bounds must be finite");
  }
  if (start < 0.0) throw ValidationError("availability window starts before the plan epoch");
  if (!(start < end)) throw ValidationError("availability window must have start < end");
}

WindowSet normalize(WindowSet windows) {
  for (const auto& w : windows) w.validate();
  std::sort(windows.begin(), windows.end(), [](const auto& a, const auto& b) {
    return a.start < b.start || (a.start == b.start && a.end < b.end);
  });
  WindowSet out;
  for (const auto& w : windows) {
    if (!out.empty() && w.start <= out.back().end) {
      out.back().end = std::max(out.back().end, w.end);
    } else {
      out.push_back(w);
    }
  }
  return out;
}

WindowSet subtract(const WindowSet& windows, const AvailabilityWindow& block) {
  block.validate();
  WindowSet out;
  for (const auto& w : windows) {
    if (w.end <= block.start || block.end <= w.start) {
      out.push_back(w);
      continue;
    }
    if (w.start < block.start) out.push_back({w.start, block.start});
    if (block.end < w.end) out.push_back({block.end, w.end});
  }
  return out;
}

WindowSet add(WindowSet windows, const AvailabilityWindow& window) {
  window.validate();
  windows.push_back(window);
  return normalize(std::move(windows));
}

bool fits(const WindowSet& windows, const Slot& slot) {
  return std::any_of(windows.begin(), windows.end(), [&](const AvailabilityWindow& w) {
    return w.start <= slot.start && slot.end <= w.end;
  });
}

}  // namespace zeittafel
