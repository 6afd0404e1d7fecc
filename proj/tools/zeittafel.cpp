// Command-line front end: serve the HTTP API, plan a scenario, or run the
// backtracking benchmark.
//
// Exit codes: 0 success, 2 validation error, 3 no plan found.

#include <algorithm>
#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "zeittafel/bench.hpp"
#include "zeittafel/error.hpp"
#include "zeittafel/report.hpp"
#include "zeittafel/scenario.hpp"
#include "zeittafel/server.hpp"
#include "zeittafel/session.hpp"

namespace {

using namespace zeittafel;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNoPlan = 3;

ApiServer* g_server = nullptr;

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path);
  out << text;
}

std::vector<std::string> split_ids(const std::string& line) {
  std::vector<std::string> out;
  std::string token;
  std::istringstream in(line);
  while (std::getline(in, token, ',')) {
    std::istringstream words(token);
    std::string w;
    while (words >> w) out.push_back(w);
  }
  return out;
}

// Asks on stdin; end of input counts as refusing / taking the default.
Decision ask(const PlanOutcome& outcome) {
  if (const auto* prompt = outcome.negotiation()) {
    std::cerr << "No feasible composition (round " << prompt->round << ").\n";
    for (const auto& d : prompt->diagnostics) std::cerr << "  " << d << '\n';
    for (const auto& c : prompt->categories) {
      std::cerr << "  " << c.category_id << (c.fixed ? " (fixed)" : "") << ": " << c.reason << '\n';
    }
    std::cerr << "Categories to withdraw (blank to refuse): " << std::flush;
    std::string line;
    NegotiationDecision d;
    if (std::getline(std::cin, line)) d.withdrawn = split_ids(line);
    // Naming a fixed category at the prompt is the client's approval.
    for (const auto& c : prompt->categories) {
      if (c.fixed && std::find(d.withdrawn.begin(), d.withdrawn.end(), c.category_id) != d.withdrawn.end()) {
        d.approve_fixed = true;
      }
    }
    return d;
  }
  const auto* tie = outcome.tie();
  std::cerr << "Several compositions are equally good:\n";
  for (std::size_t i = 0; i < tie->candidates.size(); ++i) {
    std::cerr << "  [" << i << "]";
    for (const auto& s : tie->candidates[i].combination.service_tuple()) std::cerr << ' ' << s;
    std::cerr << '\n';
  }
  std::cerr << "Pick one [0]: " << std::flush;
  std::string line;
  std::size_t index = 0;
  if (std::getline(std::cin, line) && !line.empty()) index = std::stoul(line);
  return TieChoice{index};
}

struct PlanOptions {
  std::string scenario;
  std::optional<double> deadline;
  std::string mode;
  bool non_interactive = false;
  std::string decisions;
  std::string record;
  std::string report;
  bool compose = false;
  std::vector<std::string> fail;
};

int run_plan(const PlanOptions& opt) {
  Scenario scenario = load_scenario(opt.scenario);
  PlanRequest request = scenario.request;
  if (opt.deadline) request.deadline = *opt.deadline;
  if (!opt.mode.empty()) request.search_mode = search_mode_from_string(opt.mode);
  request.validate(scenario.matrix);

  std::vector<Decision> decisions;
  if (!opt.decisions.empty()) {
    std::ifstream in(opt.decisions);
    if (!in) throw ValidationError("cannot open decisions file: " + opt.decisions);
    try {
      decisions = decisions_from_json(json::parse(in));
    } catch (const json::parse_error& e) {
      throw ValidationError(std::string("decisions file is not valid JSON: ") + e.what());
    }
  }

  const bool interactive = !opt.non_interactive;
  PlanOutcome outcome = run_with_decisions(request, scenario.matrix, decisions, interactive);
  while (interactive && (outcome.negotiation() || outcome.tie())) {
    decisions.push_back(ask(outcome));
    outcome = run_with_decisions(request, scenario.matrix, decisions, interactive);
  }

  json report = plan_report(outcome, request);
  bool ok = outcome.succeeded();
  if (ok && opt.compose) {
    MockInvoker invoker({opt.fail.begin(), opt.fail.end()});
    const Itinerary itinerary = compose(*outcome.selected(), invoker);
    report["itinerary"] = to_json(itinerary);
    ok = itinerary.success;
  }

  if (!opt.record.empty()) write_text(opt.record, decisions_to_json(decisions).dump(2) + "\n");
  const std::string text = report.dump(2) + "\n";
  if (opt.report.empty()) {
    std::cout << text;
  } else {
    write_text(opt.report, text);
  }
  return ok ? kExitOk : kExitNoPlan;
}

struct BenchOptions {
  std::string scenario;
  std::size_t trials = 200;
  double block_prob = 0.2;
  std::string block_scope = "nc";
  std::string window = "identity_slot";
  double window_scale = 1.0;
  std::uint64_t seed = 1;
  std::vector<std::string> modes{"no_backtracking", "rotations_only", "all_permutations"};
  unsigned threads = 0;
  std::string csv;
};

int run_bench(const BenchOptions& opt) {
  ExperimentConfig config;
  config.scenario = load_scenario(opt.scenario);
  config.trials = opt.trials;
  config.seed = opt.seed;
  config.window_model = block_window_model_from_string(opt.window);
  config.window_scale = opt.window_scale;
  config.threads = opt.threads;
  config.modes.clear();
  for (const auto& m : opt.modes) {
    for (const auto& id : split_ids(m)) config.modes.push_back(search_mode_from_string(id));
  }
  if (opt.block_scope != "nc" && opt.block_scope != "all") throw ValidationError("--block-scope must be nc or all");
  for (const auto& c : config.scenario.matrix.categories()) {
    if (opt.block_scope == "all" || c.kind == CategoryKind::non_fixed) config.block_probability[c.id] = opt.block_prob;
  }

  const auto result = run_experiment(config);
  if (opt.csv.empty()) {
    std::cout << result.csv();
    std::cerr << result.summary_text();
  } else {
    write_text(opt.csv, result.csv());
    std::cout << result.summary_text();
  }
  return kExitOk;
}

int run_serve(const std::string& scenario_path, const std::string& listen) {
  const auto [host, port] = parse_listen_address(listen);
  ApiServer server(load_scenario(scenario_path));
  int bound = 0;
  try {
    bound = server.bind(host, port);
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  g_server = &server;
  std::signal(SIGINT, [](int) {
    if (g_server) g_server->stop();
  });
  std::signal(SIGTERM, [](int) {
    if (g_server) g_server->stop();
  });
  std::cerr << "listening on " << host << ':' << bound << std::endl;
  server.listen();
  g_server = nullptr;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deadline-aware service composition planner"};
  app.require_subcommand(1);

  std::string serve_scenario, listen = "127.0.0.1:8080";
  auto* serve = app.add_subcommand("serve", "Serve the HTTP API");
  serve->add_option("--scenario", serve_scenario, "Scenario JSON file")->required();
  serve->add_option("--listen", listen, "host:port to listen on");

  PlanOptions plan_opt;
  auto* plan_cmd = app.add_subcommand("plan", "Plan a scenario and print the plan report");
  plan_cmd->add_option("--scenario", plan_opt.scenario, "Scenario JSON file")->required();
  plan_cmd->add_option("--deadline", plan_opt.deadline, "Deadline in minutes (overrides the scenario)");
  plan_cmd->add_option("--mode", plan_opt.mode, "rotations | permutations | none");
  plan_cmd->add_flag("--non-interactive", plan_opt.non_interactive,
                     "Decline negotiation and break ties automatically");
  plan_cmd->add_option("--decisions", plan_opt.decisions, "Replay decisions from a JSON file");
  plan_cmd->add_option("--record", plan_opt.record, "Write the decisions made to a JSON file");
  plan_cmd->add_option("--report", plan_opt.report, "Write the report here instead of stdout");
  plan_cmd->add_flag("--compose", plan_opt.compose, "Book the selected plan through mock endpoints");
  plan_cmd->add_option("--fail", plan_opt.fail, "Service ids whose mock booking fails");

  BenchOptions bench_opt;
  auto* bench = app.add_subcommand("bench", "Compare success rates with and without backtracking");
  bench->add_option("--scenario", bench_opt.scenario, "Scenario JSON file")->required();
  bench->add_option("--trials", bench_opt.trials, "Number of trials");
  bench->add_option("--block-prob", bench_opt.block_prob, "Per-category blocking probability");
  bench->add_option("--block-scope", bench_opt.block_scope, "nc (non-fixed categories) or all");
  bench->add_option("--window", bench_opt.window, "identity_slot | full_horizon");
  bench->add_option("--window-scale", bench_opt.window_scale, "Block width relative to the identity span");
  bench->add_option("--seed", bench_opt.seed, "RNG seed");
  bench->add_option("--modes", bench_opt.modes, "Comma separated search modes");
  bench->add_option("--threads", bench_opt.threads, "Worker threads (0 = all cores)");
  bench->add_option("--csv", bench_opt.csv, "Write the CSV here; the summary goes to stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*serve) return run_serve(serve_scenario, listen);
    if (*plan_cmd) return run_plan(plan_opt);
    return run_bench(bench_opt);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
}
