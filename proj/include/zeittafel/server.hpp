#pragma once

#include <memory>
#include <string>

#include "zeittafel/scenario.hpp"
#include "zeittafel/session.hpp"

namespace httplib {
class Server;
}

namespace zeittafel {

// "host:port" or ":port". Throws ValidationError on malformed input.
std::pair<std::string, int> parse_listen_address(const std::string& address);

// HTTP + JSON front end over the registry and planning sessions.
//
//   GET  /scenario                 GET  /categories
//   GET  /services?category=ID     POST /services  (register an offer)
//   POST /services/{id}/block      POST /services/{id}/unblock
//   POST /plans                    GET  /plans/{id}
//   POST /plans/{id}/negotiation   POST /plans/{id}/choice
//   POST /plans/{id}/compose       GET  /plans/{id}/curve
//
// Errors come back as {"error": "..."} with 400 (validation), 404 (unknown
// id) or 409 (session not in the awaited state).
class ApiServer {
 public:
  explicit ApiServer(Scenario scenario);
  ~ApiServer();

  ApiServer(const ApiServer&) = delete;
  ApiServer& operator=(const ApiServer&) = delete;

  // Binds the socket. Port 0 picks a free port. Returns the bound port;
  // throws std::runtime_error when the address is unavailable.
  int bind(const std::string& host, int port);

  // Serves until stop() is called.
  void listen();
  void stop();

  RegistryStore& registry() { return registry_; }
  SessionManager& sessions() { return sessions_; }

 private:
  void install_routes();

  RegistryStore registry_;
  SessionManager sessions_;
  std::unique_ptr<httplib::Server> http_;
};

}  // namespace zeittafel
