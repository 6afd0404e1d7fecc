#include <thread>

#include "doctest.h"
#include "fixtures.hpp"
#include "zeittafel/error.hpp"
#include "zeittafel/session.hpp"

using namespace zeittafel;
using nlohmann::json;

namespace {

Scenario tour() { return {fixtures::tour_matrix(), fixtures::tour_request()}; }

Scenario tie_scenario() {
  auto s = tour();
  auto twin = *s.matrix.find_offer("C4.WS3");
  twin.id = "C4.WS4";
  s.matrix = register_offer(s.matrix, twin);
  return s;
}

}  // namespace

TEST_CASE("run_with_decisions") {
  const auto m = fixtures::tour_matrix();
  SUBCASE("interactive pauses, non-interactive declines") {
    auto req = fixtures::tour_request(100);
    CHECK(run_with_decisions(req, m, {}, true).negotiation());
    CHECK(run_with_decisions(req, m, {}, false).failure());
  }
  SUBCASE("replaying a withdrawal") {
    auto out = run_with_decisions(fixtures::tour_request(400), m, {NegotiationDecision{{"C6"}, false}}, false);
    REQUIRE(out.succeeded());
    CHECK(out.transcript.size() == 1);
  }
  SUBCASE("tie choice resolves the tie") {
    const auto s = tie_scenario();
    CHECK(run_with_decisions(s.request, s.matrix, {}, true).tie());
    auto out = run_with_decisions(s.request, s.matrix, {TieChoice{1}}, false);
    REQUIRE(out.succeeded());
    CHECK(out.tie_choice == std::optional<std::size_t>(1));
    CHECK(out.selected()->combination.choices.at("C4") == "C4.WS4");
    CHECK(run_with_decisions(s.request, s.matrix, {}, false).selected()->combination.choices.at("C4") == "C4.WS3");
  }
  SUBCASE("inconsistent transcripts") {
    const auto s = tie_scenario();
    CHECK_THROWS_AS(run_with_decisions(s.request, s.matrix, {TieChoice{5}}, false), ValidationError);
    CHECK_THROWS_AS(run_with_decisions(s.request, s.matrix, {TieChoice{0}, TieChoice{0}}, false), ValidationError);
    CHECK_THROWS_AS(run_with_decisions(s.request, s.matrix, {NegotiationDecision{{"C6"}, false}}, false),
                    ValidationError);
  }
}

TEST_CASE("session lifecycle") {
  RegistryStore registry(tour());
  SessionManager sessions(registry);

  SUBCASE("plan to done and compose") {
    auto s = sessions.create(json::object());
    CHECK(s.id == "s1");
    CHECK(s.state == SessionState::done);
    CHECK(s.outcome.selected()->analysis.project_duration == doctest::Approx(410));
    auto it = sessions.compose(s.id);
    CHECK(it.success);
    CHECK(sessions.get(s.id).itinerary.has_value());
    CHECK_THROWS_AS(sessions.compose(s.id), StateError);
  }
  SUBCASE("failed composition can be retried") {
    auto s = sessions.create(json::object());
    CHECK_FALSE(sessions.compose(s.id, {"C4.WS3"}).success);
    CHECK(sessions.compose(s.id).success);
  }
  SUBCASE("negotiation round trip") {
    auto s = sessions.create({{"deadline", 400}});
    REQUIRE(s.state == SessionState::awaiting_negotiation);
    CHECK_THROWS_AS(sessions.choose(s.id, 0), StateError);
    CHECK_THROWS_AS(sessions.compose(s.id), StateError);
    CHECK_THROWS_AS(sessions.negotiate(s.id, {{"C9"}, false}), ValidationError);
    CHECK(sessions.get(s.id).state == SessionState::awaiting_negotiation);
    CHECK(sessions.get(s.id).transcript.empty());
    s = sessions.negotiate(s.id, {{"C6"}, false});
    CHECK(s.state == SessionState::done);
    CHECK(s.outcome.withdrawn == std::vector<std::string>{"C6"});
    CHECK(s.transcript.size() == 1);
  }
  SUBCASE("refusal fails the session") {
    auto s = sessions.create({{"deadline", 100}});
    s = sessions.negotiate(s.id, {});
    CHECK(s.state == SessionState::failed);
    CHECK(s.outcome.failure()->category_reasons.size() == 6);
  }
  SUBCASE("non-interactive sessions never pause") {
    auto s = sessions.create({{"deadline", 100}, {"interactive", false}});
    CHECK(s.state == SessionState::failed);
  }
  SUBCASE("unknown ids and bad bodies") {
    CHECK_THROWS_AS(sessions.get("s99"), NotFoundError);
    CHECK_THROWS_AS(sessions.create({{"deadline", -5}}), ValidationError);
    CHECK_THROWS_AS(sessions.create({{"interactive", "yes"}}), ValidationError);
  }
}

TEST_CASE("empty column waits for a withdrawal") {
  auto s = tour();
  s.matrix = fixtures::block_category(s.matrix, "C4", {0, 1000});
  RegistryStore registry(s);
  SessionManager sessions(registry);
  auto session = sessions.create(json::object());
  REQUIRE(session.state == SessionState::awaiting_negotiation);
  REQUIRE(session.outcome.negotiation()->categories.size() == 1);
  CHECK(session.outcome.negotiation()->categories[0].category_id == "C4");
}

TEST_CASE("ties wait for a choice") {
  RegistryStore registry(tie_scenario());
  SessionManager sessions(registry);
  auto s = sessions.create(json::object());
  REQUIRE(s.state == SessionState::awaiting_tie_choice);
  CHECK(s.outcome.tie()->candidates.size() >= 2);
  CHECK_THROWS_AS(sessions.choose(s.id, 7), ValidationError);
  CHECK(sessions.get(s.id).state == SessionState::awaiting_tie_choice);
  s = sessions.choose(s.id, 1);
  CHECK(s.state == SessionState::done);
  CHECK(s.outcome.selected()->combination.choices.at("C4") == "C4.WS4");
}

TEST_CASE("sessions keep their registry snapshot") {
  RegistryStore registry(tour());
  SessionManager sessions(registry);
  auto s = sessions.create({{"deadline", 400}});
  const auto snapshot = registry.snapshot();
  for (const auto& o : snapshot.matrix.column("C5")) registry.block(o.id, {0, 1000});
  s = sessions.negotiate(s.id, {{"C6"}, false});
  CHECK(s.state == SessionState::done);
  CHECK(sessions.create(json::object()).state == SessionState::awaiting_negotiation);
  registry.unblock("C5.WS1", {0, 1000});
  CHECK(sessions.create(json::object()).state == SessionState::done);
}

TEST_CASE("concurrent sessions") {
  RegistryStore registry(tour());
  SessionManager sessions(registry);
  std::vector<std::thread> threads;
  std::vector<SessionState> states(8);
  for (int i = 0; i < 8; ++i) {
    threads.emplace_back([&, i] { states[i] = sessions.create({{"search_mode", "rotations_only"}}).state; });
  }
  for (auto& t : threads) t.join();
  for (auto st : states) CHECK(st == SessionState::done);
  CHECK_NOTHROW(sessions.get("s8"));
}

TEST_CASE("session json") {
  RegistryStore registry(tour());
  SessionManager sessions(registry);
  const auto j = to_json(sessions.create(json::object()));
  CHECK(j["id"] == "s1");
  CHECK(j["state"] == "done");
  CHECK(j["outcome"]["selected"]["duration"] == 410.0);
}
