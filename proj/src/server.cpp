#include "zeittafel/server.hpp"

#include <charconv>

#include "httplib.h"
#include "zeittafel/error.hpp"

namespace zeittafel {

using nlohmann::json;

std::pair<std::string, int> parse_listen_address(const std::string& address) {
  const auto colon = address.rfind(':');
  if (colon == std::string::npos) throw ValidationError("listen address must be host:port, got " + address);
  std::string host = address.substr(0, colon);
  if (host.empty()) host = "127.0.0.1";
  const std::string port_text = address.substr(colon + 1);
  int port = -1;
  auto [ptr, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
  if (ec != std::errc() || ptr != port_text.data() + port_text.size() || port < 0 || port > 65535) {
    throw ValidationError("invalid port in listen address: " + address);
  }
  return {host, port};
}

namespace {

void reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

json body_of(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  try {
    return json::parse(req.body);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("request body is not valid JSON: ") + e.what());
  }
}

// Maps the error types onto status codes.
template <typename Fn>
httplib::Server::Handler guarded(Fn fn) {
  return [fn](const httplib::Request& req, httplib::Response& res) {
    try {
      fn(req, res);
    } catch (const ValidationError& e) {
      reply(res, 400, {{"error", e.what()}});
    } catch (const NotFoundError& e) {
      reply(res, 404, {{"error", e.what()}});
    } catch (const StateError& e) {
      reply(res, 409, {{"error", e.what()}});
    } catch (const std::exception& e) {
      reply(res, 500, {{"error", e.what()}});
    }
  };
}

}  // namespace

ApiServer::ApiServer(Scenario scenario)
    : registry_(std::move(scenario)), sessions_(registry_), http_(std::make_unique<httplib::Server>()) {
  install_routes();
}

ApiServer::~ApiServer() { stop(); }

int ApiServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = http_->bind_to_any_port(host);
    if (bound < 0) throw std::runtime_error("cannot bind " + host);
    return bound;
  }
  if (!http_->bind_to_port(host, port)) {
    throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
  }
  return port;
}

void ApiServer::listen() { http_->listen_after_bind(); }

void ApiServer::stop() {
  if (http_ && http_->is_running()) http_->stop();
}

void ApiServer::install_routes() {
  auto& http = *http_;

  http.Get("/scenario", guarded([this](const auto&, auto& res) {
    reply(res, 200, to_json(registry_.snapshot()));
  }));

  http.Get("/categories", guarded([this](const auto&, auto& res) {
    const auto scenario = registry_.snapshot();
    json out = json::array();
    for (const auto& c : scenario.matrix.categories()) out.push_back(to_json(c));
    reply(res, 200, out);
  }));

  http.Get("/services", guarded([this](const httplib::Request& req, auto& res) {
    const auto scenario = registry_.snapshot();
    json out = json::array();
    if (req.has_param("category")) {
      const auto id = req.get_param_value("category");
      if (!scenario.matrix.find_category(id)) throw NotFoundError("unknown category: " + id);
      for (const auto& o : scenario.matrix.column(id)) out.push_back(to_json(o));
    } else {
      for (const auto& o : scenario.matrix.all_offers()) out.push_back(to_json(o));
    }
    reply(res, 200, out);
  }));

  http.Post("/services", guarded([this](const httplib::Request& req, auto& res) {
    auto offer = parse_offer(body_of(req), "offer");
    const auto id = offer.id;
    registry_.register_offer(std::move(offer));
    reply(res, 200, to_json(*registry_.snapshot().matrix.find_offer(id)));
  }));

  auto window_edit = [this](bool open) {
    return guarded([this, open](const httplib::Request& req, auto& res) {
      const std::string id = req.matches[1];
      if (!registry_.snapshot().matrix.find_offer(id)) throw NotFoundError("unknown service: " + id);
      const auto window = parse_window(body_of(req), "window");
      if (open) {
        registry_.unblock(id, window);
      } else {
        registry_.block(id, window);
      }
      reply(res, 200, to_json(*registry_.snapshot().matrix.find_offer(id)));
    });
  };
  http.Post(R"(/services/([^/]+)/block)", window_edit(false));
  http.Post(R"(/services/([^/]+)/unblock)", window_edit(true));

  http.Post("/plans", guarded([this](const httplib::Request& req, auto& res) {
    reply(res, 201, to_json(sessions_.create(body_of(req))));
  }));

  http.Get(R"(/plans/([^/]+))", guarded([this](const httplib::Request& req, auto& res) {
    reply(res, 200, to_json(sessions_.get(req.matches[1])));
  }));

  http.Post(R"(/plans/([^/]+)/negotiation)", guarded([this](const httplib::Request& req, auto& res) {
    json body = body_of(req);
    body["kind"] = "negotiation";
    auto decisions = decisions_from_json(json::array({body}));
    reply(res, 200, to_json(sessions_.negotiate(req.matches[1], std::get<NegotiationDecision>(decisions[0]))));
  }));

  http.Post(R"(/plans/([^/]+)/choice)", guarded([this](const httplib::Request& req, auto& res) {
    json body = body_of(req);
    body["kind"] = "choice";
    auto decisions = decisions_from_json(json::array({body}));
    reply(res, 200, to_json(sessions_.choose(req.matches[1], std::get<TieChoice>(decisions[0]).index)));
  }));

  http.Post(R"(/plans/([^/]+)/compose)", guarded([this](const httplib::Request& req, auto& res) {
    const json body = body_of(req);
    std::set<std::string> failing;
    if (body.contains("fail")) {
      if (!body["fail"].is_array()) throw ValidationError("fail: expected an array of service ids");
      for (const auto& id : body["fail"]) {
        if (!id.is_string()) throw ValidationError("fail: expected an array of service ids");
        failing.insert(id.get<std::string>());
      }
    }
    const auto itinerary = sessions_.compose(req.matches[1], failing);
    reply(res, itinerary.success ? 200 : 502, to_json(itinerary));
  }));

  http.Get(R"(/plans/([^/]+)/curve)", guarded([this](const httplib::Request& req, auto& res) {
    const auto session = sessions_.get(req.matches[1]);
    const CandidatePlan* plan = session.outcome.selected();
    if (!plan) throw StateError("session " + session.id + " has no selected plan");
    reply(res, 200, completion_curve(*plan));
  }));
}

}  // namespace zeittafel
