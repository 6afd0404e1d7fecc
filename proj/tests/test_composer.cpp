#include "doctest.h"
#include "fixtures.hpp"
#include "zeittafel/composer.hpp"
#include "zeittafel/error.hpp"

using namespace zeittafel;

namespace {

CandidatePlan tour_plan() {
  auto out = plan(fixtures::tour_request(), fixtures::tour_matrix(), decline_negotiation());
  return *out.selected();
}

}  // namespace

TEST_CASE("all bookings succeed in slot order") {
  const auto p = tour_plan();
  MockInvoker invoker;
  const auto it = compose(p, invoker);
  CHECK(it.success);
  REQUIRE(it.records.size() == 6);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(it.records[i].status == BookingStatus::confirmed);
    CHECK_FALSE(it.records[i].confirmation.empty());
    if (i > 0) CHECK(it.records[i - 1].slot.start <= it.records[i].slot.start);
  }
  CHECK(invoker.invoked().size() == 6);
  CHECK(invoker.cancelled().empty());
}

TEST_CASE("failure at the third service rolls back the first two") {
  const auto p = tour_plan();
  MockInvoker invoker({p.slots[2].service_id});
  const auto it = compose(p, invoker);
  CHECK_FALSE(it.success);
  REQUIRE(it.records.size() == 3);
  CHECK(it.records[0].status == BookingStatus::rolled_back);
  CHECK(it.records[1].status == BookingStatus::rolled_back);
  CHECK(it.records[2].status == BookingStatus::failed);
  CHECK(it.records[2].confirmation.empty());
  CHECK(it.failed_service == p.slots[2].service_id);
  CHECK_FALSE(it.error.empty());
  CHECK(invoker.invoked().size() == 3);
  CHECK(invoker.cancelled() == std::vector<std::string>{p.slots[0].service_id, p.slots[1].service_id});
}

TEST_CASE("parallel slots keep category order") {
  auto p = tour_plan();
  p.slots[1].slot = p.slots[0].slot;
  MockInvoker invoker;
  const auto it = compose(p, invoker);
  CHECK(it.records[0].service_id == p.slots[0].service_id);
  CHECK(it.records[1].service_id == p.slots[1].service_id);
}

TEST_CASE("confirmation codes repeat across runs") {
  const auto p = tour_plan();
  MockInvoker a, b;
  CHECK(compose(p, a).records[4].confirmation == compose(p, b).records[4].confirmation);
}

TEST_CASE("empty plan is rejected") {
  MockInvoker invoker;
  CHECK_THROWS_AS(compose(CandidatePlan{}, invoker), ValidationError);
  CHECK(to_string(BookingStatus::rolled_back) == "rolled_back");
}
