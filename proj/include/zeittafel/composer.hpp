#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "zeittafel/interval.hpp"
#include "zeittafel/planner.hpp"

namespace zeittafel {

enum class BookingStatus { confirmed, rolled_back, failed };

std::string to_string(BookingStatus status);

struct BookingRecord {
  std::string service_id;
  std::string category_id;
  Slot slot;
  BookingStatus status = BookingStatus::failed;
  std::string confirmation;
};

struct BookingRequest {
  std::string service_id;
  std::string category_id;
  Slot slot;
};

struct InvocationResult {
  bool ok = false;
  // Confirmation code on success, error text otherwise.
  std::string detail;
};

// The endpoint side of a composition. Implementations stand in for the
// remote services being booked.
class ServiceInvoker {
 public:
  virtual ~ServiceInvoker() = default;
  virtual InvocationResult invoke(const BookingRequest& request) = 0;
  virtual void cancel(const BookingRecord& record) = 0;
};

// In-process endpoint: every call succeeds unless the service id was marked
// to fail. Confirmation codes are derived from the request, so runs repeat.
class MockInvoker : public ServiceInvoker {
 public:
  MockInvoker() = default;
  explicit MockInvoker(std::set<std::string> failing) : failing_(std::move(failing)) {}

  void fail_on(const std::string& service_id) { failing_.insert(service_id); }

  InvocationResult invoke(const BookingRequest& request) override;
  void cancel(const BookingRecord& record) override;

  const std::vector<std::string>& invoked() const { return invoked_; }
  const std::vector<std::string>& cancelled() const { return cancelled_; }

 private:
  std::set<std::string> failing_;
  std::vector<std::string> invoked_;
  std::vector<std::string> cancelled_;
};

struct Itinerary {
  std::vector<BookingRecord> records;
  bool success = false;
  std::optional<std::string> failed_service;
  std::string error;
};

// Books every chosen service once, in slot order. On the first failure all
// earlier bookings are cancelled and marked rolled_back; later services are
// never contacted. Throws ValidationError for a plan with no slots.
Itinerary compose(const CandidatePlan& plan, ServiceInvoker& invoker);

}  // namespace zeittafel
