#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <set>

#include "doctest.h"
#include "zeittafel/error.hpp"
#include "zeittafel/pert.hpp"

using namespace zeittafel;

namespace {

Activity act(const std::string& id, double t) { return Activity::make(id, id, ThreePointEstimate::exact(t)); }

// Longest source-to-sink path by enumerating every path from each entry.
double brute_longest_path(const std::vector<Activity>& acts, const std::vector<Precedence>& edges) {
  std::map<std::string, double> t;
  std::map<std::string, std::vector<std::string>> succ;
  std::set<std::string> has_pred;
  for (const auto& a : acts) t[a.id] = a.expected_time;
  for (const auto& e : edges) {
    succ[e.before].push_back(e.after);
    has_pred.insert(e.after);
  }
  double best = 0.0;
  std::function<void(const std::string&, double)> walk = [&](const std::string& id, double sum) {
    sum += t[id];
    best = std::max(best, sum);
    for (const auto& s : succ[id]) walk(s, sum);
  };
  for (const auto& a : acts) {
    if (!has_pred.count(a.id)) walk(a.id, 0.0);
  }
  return best;
}

}  // namespace

TEST_CASE("expected time and variance of three-point estimates") {
  CHECK(expected_time({180, 180, 180}) == doctest::Approx(180.0));
  CHECK(expected_time({10, 12, 20}) == doctest::Approx(13.0));
  CHECK(expected_time({3, 4, 8}) == doctest::Approx(4.5));

  CHECK(activity_variance({7, 7, 7}) == 0.0);
  CHECK(activity_variance({10, 12, 20}) == doctest::Approx(2.7778).epsilon(1e-4));
  CHECK(activity_variance({3, 4, 8}) == doctest::Approx(0.6944).epsilon(1e-4));
}

TEST_CASE("invalid estimates name the violated bound") {
  CHECK_THROWS_WITH_AS(expected_time({5, 4, 8}), doctest::Contains("optimistic"), ValidationError);
  CHECK_THROWS_WITH_AS(expected_time({3, 9, 8}), doctest::Contains("pessimistic"), ValidationError);
  CHECK_THROWS_WITH_AS(activity_variance({-1, 0, 1}), doctest::Contains("negative"), ValidationError);
  CHECK_THROWS_AS(Activity::make("a", "a", {1, 2, std::nan("")}), ValidationError);
}

TEST_CASE("network construction") {
  SUBCASE("chain") {
    auto net = PertNetwork::build({act("a", 1), act("b", 1), act("c", 1)}, {{"a", "b"}, {"b", "c"}});
    CHECK(net.entry_activities() == std::vector<std::string>{"a"});
    CHECK(net.exit_activities() == std::vector<std::string>{"c"});
    CHECK(net.size() == 3);
  }
  SUBCASE("two-node cycle carries a witness") {
    try {
      PertNetwork::build({act("a", 1), act("b", 1)}, {{"a", "b"}, {"b", "a"}});
      FAIL("expected a cycle error");
    } catch (const CycleError& e) {
      CHECK(e.cycle() == std::vector<std::string>{"a", "b"});
    }
  }
  SUBCASE("longer cycle witness starts at its smallest id") {
    try {
      PertNetwork::build({act("x", 1), act("c", 1), act("b", 1), act("a", 1)},
                         {{"x", "c"}, {"c", "b"}, {"b", "a"}, {"a", "c"}});
      FAIL("expected a cycle error");
    } catch (const CycleError& e) {
      CHECK(e.cycle() == std::vector<std::string>{"a", "c", "b"});
    }
  }
  SUBCASE("diamond") {
    auto net = PertNetwork::build({act("a", 1), act("b", 1), act("c", 1), act("d", 1)},
                                  {{"a", "b"}, {"a", "c"}, {"b", "d"}, {"c", "d"}});
    CHECK(net.entry_activities() == std::vector<std::string>{"a"});
    CHECK(net.exit_activities() == std::vector<std::string>{"d"});
  }
  SUBCASE("dangling edges and duplicate ids") {
    CHECK_THROWS_WITH_AS(PertNetwork::build({act("a", 1)}, {{"a", "zz"}}), doctest::Contains("zz"), ValidationError);
    CHECK_THROWS_WITH_AS(PertNetwork::build({act("a", 1), act("a", 2)}, {}), doctest::Contains("duplicate"),
                         ValidationError);
  }
  SUBCASE("duplicate edges collapse") {
    auto net = PertNetwork::build({act("a", 1), act("b", 1)}, {{"a", "b"}, {"a", "b"}});
    CHECK(net.successors(0).size() == 1);
  }
  SUBCASE("empty network is allowed") { CHECK(PertNetwork::build({}, {}).empty()); }
}

TEST_CASE("with_activities keeps structure and checks ids") {
  auto net = PertNetwork::build({act("a", 1), act("b", 1)}, {{"a", "b"}});
  auto next = net.with_activities({act("a", 5), act("b", 7)});
  CHECK(analyze(next).project_duration == doctest::Approx(12.0));
  CHECK_THROWS_AS(net.with_activities({act("b", 5), act("a", 7)}), ValidationError);
  CHECK_THROWS_AS(net.with_activities({act("a", 5)}), ValidationError);
}

TEST_CASE("critical path analysis") {
  SUBCASE("chain") {
    auto r = analyze(PertNetwork::build({act("C1", 150), act("C2", 20), act("C3", 10)}, {{"C1", "C2"}, {"C2", "C3"}}));
    CHECK(r.project_duration == doctest::Approx(180.0));
    for (const auto& a : r.activities) CHECK(a.total_float == doctest::Approx(0.0));
    CHECK(r.critical_path == std::vector<std::string>{"C1", "C2", "C3"});
    CHECK(r.std_dev == 0.0);
  }
  SUBCASE("diamond") {
    auto r = analyze(PertNetwork::build({act("a", 5), act("b", 10), act("c", 3), act("d", 2)},
                                        {{"a", "b"}, {"a", "c"}, {"b", "d"}, {"c", "d"}}));
    CHECK(r.project_duration == doctest::Approx(17.0));
    CHECK(r.critical_path == std::vector<std::string>{"a", "b", "d"});
    CHECK(r.find("c")->total_float == doctest::Approx(7.0));
    CHECK(r.find("c")->latest_start == doctest::Approx(12.0));
    CHECK(r.critical_activities == std::vector<std::string>{"a", "b", "d"});
  }
  SUBCASE("empty") {
    auto r = analyze(PertNetwork::build({}, {}));
    CHECK(r.project_duration == 0.0);
    CHECK(r.critical_path.empty());
  }
  SUBCASE("parallel critical paths pick the smallest ids") {
    auto r = analyze(PertNetwork::build({act("a", 1), act("c", 4), act("b", 4), act("d", 1)},
                                        {{"a", "b"}, {"a", "c"}, {"b", "d"}, {"c", "d"}}));
    CHECK(r.critical_path == std::vector<std::string>{"a", "b", "d"});
    CHECK(r.critical_activities == std::vector<std::string>{"a", "b", "c", "d"});
  }
  SUBCASE("variance sums along the critical path only") {
    auto r = analyze(PertNetwork::build({Activity::make("a", "a", {10, 12, 20}), Activity::make("b", "b", {3, 4, 8}),
                                         Activity::make("c", "c", {0, 1, 2})},
                                        {{"a", "b"}}));
    CHECK(r.critical_path == std::vector<std::string>{"a", "b"});
    CHECK(r.critical_variance == doctest::Approx(100.0 / 36 + 25.0 / 36));
    CHECK(r.std_dev == doctest::Approx(std::sqrt(125.0 / 36)));
  }
}

TEST_CASE("completion probability") {
  ScheduleAnalysis a;
  a.project_duration = 410;
  CHECK(completion_probability(a, 450).probability == 1.0);
  CHECK_FALSE(completion_probability(a, 450).z_value.has_value());
  CHECK(completion_probability(a, 410).probability == 1.0);
  CHECK(completion_probability(a, 400).probability == 0.0);

  a.project_duration = 450;
  a.std_dev = 3;
  CHECK(completion_probability(a, 450).probability == doctest::Approx(0.5));

  a.project_duration = 430;
  a.std_dev = 10;
  auto c = completion_probability(a, 450);
  CHECK(*c.z_value == doctest::Approx(2.0));
  CHECK(c.probability == doctest::Approx(0.9772).epsilon(1e-4));

  CHECK_THROWS_AS(completion_probability(a, -1), ValidationError);
}

TEST_CASE("property: duration equals the brute-force longest path") {
  std::mt19937 rng(20261016);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 10);
    std::vector<Activity> acts;
    for (int i = 0; i < n; ++i) {
      double o = rng() % 20, m = o + rng() % 10, p = m + rng() % 10;
      acts.push_back(Activity::make("n" + std::to_string(i), "", {o, m, p}));
    }
    std::vector<Precedence> edges;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (rng() % 3 == 0) edges.push_back({acts[i].id, acts[j].id});
      }
    }
    auto r = analyze(PertNetwork::build(acts, edges));
    CHECK(r.project_duration == doctest::Approx(brute_longest_path(acts, edges)).epsilon(1e-12));
    for (const auto& s : r.activities) {
      CHECK(s.total_float >= 0.0);
      CHECK(s.earliest_finish <= r.project_duration + 1e-9);
    }
    for (const auto& id : r.critical_path) CHECK(r.find(id)->total_float <= 1e-9);
  }
}

TEST_CASE("property: scaling durations scales the schedule") {
  auto build = [](double k) {
    return analyze(PertNetwork::build({Activity::make("a", "", {k * 1, k * 2, k * 6}),
                                       Activity::make("b", "", {k * 2, k * 3, k * 4}),
                                       Activity::make("c", "", {k * 1, k * 1, k * 1})},
                                      {{"a", "c"}, {"b", "c"}}));
  };
  auto one = build(1), three = build(3);
  CHECK(three.project_duration == doctest::Approx(3 * one.project_duration));
  CHECK(three.std_dev == doctest::Approx(3 * one.std_dev));
  CHECK(three.critical_path == one.critical_path);
}
