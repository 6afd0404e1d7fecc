#include <thread>

#include "doctest.h"
#include "fixtures.hpp"
#include "httplib.h"
#include "zeittafel/error.hpp"
#include "zeittafel/server.hpp"

using namespace zeittafel;
using nlohmann::json;

namespace {

// Runs a server on a free loopback port for the lifetime of the object.
class LiveServer {
 public:
  explicit LiveServer(Scenario s) : server_(std::move(s)) {
    port_ = server_.bind("127.0.0.1", 0);
    thread_ = std::thread([this] { server_.listen(); });
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
    for (int i = 0; i < 200 && !client_->Get("/categories"); ++i) std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  ~LiveServer() {
    server_.stop();
    thread_.join();
  }

  std::pair<int, json> get(const std::string& path) { return unpack(client_->Get(path)); }
  std::pair<int, json> post(const std::string& path, const json& body) {
    return unpack(client_->Post(path, body.dump(), "application/json"));
  }
  std::pair<int, json> post_raw(const std::string& path, const std::string& body) {
    return unpack(client_->Post(path, body, "application/json"));
  }

 private:
  static std::pair<int, json> unpack(const httplib::Result& r) {
    REQUIRE(r);
    return {r->status, json::parse(r->body)};
  }

  ApiServer server_;
  int port_ = 0;
  std::thread thread_;
  std::unique_ptr<httplib::Client> client_;
};

Scenario tour() { return {fixtures::tour_matrix(), fixtures::tour_request()}; }

}  // namespace

TEST_CASE("listen address parsing") {
  CHECK(parse_listen_address("0.0.0.0:8080") == std::pair<std::string, int>{"0.0.0.0", 8080});
  CHECK(parse_listen_address(":9000").first == "127.0.0.1");
  CHECK_THROWS_AS(parse_listen_address("localhost"), ValidationError);
  CHECK_THROWS_AS(parse_listen_address("host:99999"), ValidationError);
  CHECK_THROWS_AS(parse_listen_address("host:12ab"), ValidationError);
}

TEST_CASE("registry endpoints") {
  LiveServer srv(tour());
  auto [status, cats] = srv.get("/categories");
  CHECK(status == 200);
  CHECK(cats.size() == 6);

  auto [s2, scenario] = srv.get("/scenario");
  CHECK(scenario["offers"].size() == 18);

  auto [s3, c4] = srv.get("/services?category=C4");
  CHECK(c4.size() == 3);
  CHECK(srv.get("/services?category=C9").first == 404);

  json offer = {{"id", "C2.WS4"},
                {"category_id", "C2"},
                {"estimate", {{"optimistic", 15}, {"most_likely", 15}, {"pessimistic", 15}}},
                {"windows", {{{"start", 0}, {"end", 1000}}}}};
  CHECK(srv.post("/services", offer).first == 200);
  CHECK(srv.get("/services?category=C2").second.size() == 4);
  offer["category_id"] = "C9";
  CHECK(srv.post("/services", offer).first == 400);

  auto [s4, blocked] = srv.post("/services/C4.WS1/block", {{"start", 180}, {"end", 300}});
  CHECK(s4 == 200);
  CHECK(blocked["windows"].size() == 2);
  auto [s5, reopened] = srv.post("/services/C4.WS1/unblock", {{"start", 180}, {"end", 300}});
  CHECK(reopened["windows"].size() == 1);
  CHECK(srv.post("/services/nope/block", {{"start", 0}, {"end", 1}}).first == 404);
  CHECK(srv.post_raw("/services/C4.WS1/block", "{not json").first == 400);
}

TEST_CASE("planning endpoints") {
  LiveServer srv(tour());

  auto [status, session] = srv.post("/plans", {{"deadline", 450}});
  CHECK(status == 201);
  CHECK(session["state"] == "done");
  CHECK(session["outcome"]["selected"]["duration"] == 410.0);
  CHECK(session["outcome"]["selected"]["probability"] == 1.0);
  const std::string id = session["id"];

  CHECK(srv.get("/plans/" + id).second["state"] == "done");
  auto [s2, curve] = srv.get("/plans/" + id + "/curve");
  CHECK(s2 == 200);
  CHECK(curve["step"] == "on_time");

  auto [s3, failed] = srv.post("/plans/" + id + "/compose", {{"fail", {"C4.WS3"}}});
  CHECK(s3 == 502);
  CHECK(failed["records"].size() == 4);
  auto [s4, booked] = srv.post("/plans/" + id + "/compose", json::object());
  CHECK(s4 == 200);
  CHECK(booked["records"].size() == 6);
  CHECK(srv.post("/plans/" + id + "/compose", json::object()).first == 409);

  CHECK(srv.get("/plans/s404").first == 404);
  CHECK(srv.post("/plans", {{"deadline", 0}}).first == 400);
  CHECK(srv.post("/plans/" + id + "/choice", {{"index", 0}}).first == 409);
}

TEST_CASE("negotiation over HTTP") {
  LiveServer srv(tour());
  auto [status, session] = srv.post("/plans", {{"deadline", 100}});
  CHECK(session["state"] == "awaiting_negotiation");
  CHECK(session["outcome"]["negotiation"]["categories"].size() == 6);
  const std::string id = session["id"];
  CHECK(srv.get("/plans/" + id + "/curve").first == 409);
  CHECK(srv.post("/plans/" + id + "/negotiation", {{"withdrawn", {"C1"}}}).first == 400);
  auto [s2, after] = srv.post("/plans/" + id + "/negotiation", {{"withdrawn", json::array()}});
  CHECK(s2 == 200);
  CHECK(after["state"] == "failed");
  CHECK(after["outcome"]["failure"]["category_reasons"].size() == 6);

  auto [s3, other] = srv.post("/plans", {{"deadline", 400}});
  auto [s4, done] = srv.post("/plans/" + other["id"].get<std::string>() + "/negotiation", {{"withdrawn", {"C6"}}});
  CHECK(done["state"] == "done");
  CHECK_FALSE(done["outcome"]["selected"]["choices"].contains("C6"));
}

TEST_CASE("tie choice over HTTP") {
  auto s = tour();
  auto twin = *s.matrix.find_offer("C4.WS3");
  twin.id = "C4.WS4";
  s.matrix = register_offer(s.matrix, twin);
  LiveServer srv(s);
  auto [status, session] = srv.post("/plans", json::object());
  CHECK(session["state"] == "awaiting_tie_choice");
  CHECK(session["outcome"]["tie"].size() == 2);
  const std::string id = session["id"];
  CHECK(srv.post("/plans/" + id + "/choice", {{"index", 5}}).first == 400);
  auto [s2, done] = srv.post("/plans/" + id + "/choice", {{"index", 1}});
  CHECK(done["state"] == "done");
  CHECK(done["outcome"]["tie_choice"] == 1);
}

TEST_CASE("empty scenario serves but rejects planning") {
  LiveServer srv(Scenario{});
  CHECK(srv.get("/categories").second.empty());
  CHECK(srv.post("/plans", {{"deadline", 10}}).first == 400);
}
