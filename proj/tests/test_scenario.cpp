#include "doctest.h"
#include "fixtures.hpp"
#include "zeittafel/error.hpp"
#include "zeittafel/scenario.hpp"

using namespace zeittafel;
using nlohmann::json;

namespace {

json small_doc() {
  return json::parse(R"({
    "categories": [{"id": "A", "kind": "fixed"}, {"id": "B", "name": "Bee", "kind": "non_fixed"}],
    "offers": [
      {"id": "a1", "category_id": "A", "name": "a one",
       "estimate": {"optimistic": 1, "most_likely": 2, "pessimistic": 3},
       "cost": 5, "capacity": 4, "windows": [{"start": 0, "end": 100}], "attributes": {"lang": "en"}},
      {"id": "b1", "category_id": "B", "estimate": {"optimistic": 4, "most_likely": 4, "pessimistic": 4},
       "windows": [{"start": 0, "end": 100}]}
    ],
    "deadline": 50
  })");
}

std::string error_of(const json& doc) {
  try {
    parse_scenario(doc);
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("the bundled tour scenario matches the in-code fixture") {
  const auto s = load_scenario(ZEITTAFEL_SCENARIO);
  const auto m = fixtures::tour_matrix();
  CHECK(s.matrix.category_count() == 6);
  for (const auto& c : m.categories()) {
    REQUIRE(s.matrix.column(c.id).size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(s.matrix.column(c.id)[i].estimate == m.column(c.id)[i].estimate);
      CHECK(s.matrix.column(c.id)[i].id == m.column(c.id)[i].id);
    }
    CHECK(s.matrix.find_category(c.id)->kind == c.kind);
  }
  CHECK(s.request.deadline == 450);
  CHECK(s.request.fc_order == fixtures::tour_request().fc_order);
  CHECK(s.request.nc_set == fixtures::tour_request().nc_set);
}

TEST_CASE("parsing defaults") {
  const auto s = parse_scenario(small_doc());
  CHECK(s.request.fc_order == std::vector<std::string>{"A"});
  CHECK(s.request.nc_set == std::vector<std::string>{"B"});
  CHECK(s.request.search_mode == SearchMode::all_permutations);
  CHECK(s.matrix.find_category("A")->name == "A");
  CHECK(s.matrix.find_category("B")->name == "Bee");
  CHECK(s.matrix.find_offer("b1")->capacity == 1);
  CHECK(s.matrix.find_offer("a1")->attributes.at("lang") == "en");
  CHECK_FALSE(s.request.constraints.max_cost.has_value());
}

TEST_CASE("round trip through JSON") {
  const auto s = parse_scenario(small_doc());
  const auto again = parse_scenario(to_json(s));
  CHECK(to_json(again) == to_json(s));
  CHECK(again.matrix.find_offer("a1") != nullptr);
  CHECK(*again.matrix.find_offer("a1") == *s.matrix.find_offer("a1"));
}

TEST_CASE("errors name the offending field") {
  auto doc = small_doc();
  doc["offers"][1]["estimate"]["optimistic"] = 9;
  CHECK(error_of(doc).find("offers[1].estimate") != std::string::npos);

  doc = small_doc();
  doc["offers"][0]["windows"][0]["end"] = "late";
  CHECK(error_of(doc).find("offers[0].windows[0].end") != std::string::npos);

  doc = small_doc();
  doc["categories"][1]["kind"] = "maybe";
  CHECK(error_of(doc).find("categories[1].kind") != std::string::npos);

  doc = small_doc();
  doc.erase("deadline");
  CHECK(error_of(doc).find("deadline") != std::string::npos);

  doc = small_doc();
  doc["offers"].erase(1);
  CHECK(error_of(doc).find("B") != std::string::npos);

  doc = small_doc();
  doc["search_mode"] = "sideways";
  CHECK(error_of(doc).find("search_mode") != std::string::npos);

  CHECK_FALSE(error_of(json::array()).empty());
  CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.json"), ValidationError);
}

TEST_CASE("empty scenario is accepted") {
  const auto s = parse_scenario(json::parse(R"({"categories": [], "offers": []})"));
  CHECK(s.matrix.category_count() == 0);
}

TEST_CASE("plan request overlay") {
  const auto s = parse_scenario(small_doc());
  auto r = parse_plan_request(json::parse(R"({"deadline": 7, "search_mode": "rotations_only",
                                              "constraints": {"max_cost": 3, "party_size": 2}})"),
                              s.request, s.matrix);
  CHECK(r.deadline == 7);
  CHECK(r.search_mode == SearchMode::rotations_only);
  CHECK(*r.constraints.max_cost == 3);
  CHECK(r.constraints.party_size == 2);
  CHECK(r.fc_order == s.request.fc_order);

  r = parse_plan_request(json::parse(R"({"precedence_template": [{"before": 0, "after": 1}]})"), s.request, s.matrix);
  REQUIRE(r.precedence_template);
  CHECK(r.precedence_template->size() == 1);

  CHECK_THROWS_AS(parse_plan_request(json::parse(R"({"deadline": -1})"), s.request, s.matrix), ValidationError);
  CHECK_THROWS_AS(parse_plan_request(json::parse(R"({"candidate_cap": 0})"), s.request, s.matrix), ValidationError);
  CHECK_THROWS_AS(parse_plan_request(json::parse(R"({"nc_set": ["A"]})"), s.request, s.matrix), ValidationError);
}
