#include "zeittafel/composer.hpp"

#include <algorithm>
#include <sstream>

#include "zeittafel/error.hpp"

namespace zeittafel {

std::string to_string(BookingStatus status) {
  switch (status) {
    case BookingStatus::confirmed: return "confirmed";
    case BookingStatus::rolled_back: return "rolled_back";
    case BookingStatus::failed: return "failed";
  }
  return "?";
}

InvocationResult MockInvoker::invoke(const BookingRequest& request) {
  invoked_.push_back(request.service_id);
  if (failing_.count(request.service_id)) {
    return {false, "service " + request.service_id + " rejected the booking"};
  }
  std::ostringstream code;
  code << "BK-" << request.service_id << '-' << request.slot.start;
  return {true, code.str()};
}

void MockInvoker::cancel(const BookingRecord& record) { cancelled_.push_back(record.service_id); }

Itinerary compose(const CandidatePlan& plan, ServiceInvoker& invoker) {
  if (plan.slots.empty()) throw ValidationError("compose: plan has no scheduled services");

  // Slot order; position in the category order breaks ties between parallel branches.
  std::vector<std::size_t> order(plan.slots.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return plan.slots[a].slot.start < plan.slots[b].slot.start;
  });

  Itinerary it;
  for (std::size_t i : order) {
    const auto& s = plan.slots[i];
    auto result = invoker.invoke({s.service_id, s.category_id, s.slot});
    BookingRecord rec{s.service_id, s.category_id, s.slot, BookingStatus::confirmed, result.detail};
    if (result.ok) {
      it.records.push_back(std::move(rec));
      continue;
    }
    rec.status = BookingStatus::failed;
    rec.confirmation.clear();
    for (auto& done : it.records) {
      invoker.cancel(done);
      done.status = BookingStatus::rolled_back;
    }
    it.records.push_back(std::move(rec));
    it.failed_service = s.service_id;
    it.error = result.detail;
    return it;
  }
  it.success = true;
  return it;
}

}  // namespace zeittafel
