#include "zeittafel/scenario.hpp"

#include <fstream>

#include "zeittafel/error.hpp"

namespace zeittafel {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ValidationError(path + ": " + what);
}

const json& require(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(path + "." + key, "missing");
  return *it;
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  return v.get<double>();
}

std::string text(const json& v, const std::string& path) {
  if (!v.is_string()) fail(path, "expected a string");
  return v.get<std::string>();
}

std::vector<std::string> text_list(const json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(text(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

const json& array_field(const json& doc, const char* key, const std::string& path) {
  static const json empty = json::array();
  auto it = doc.find(key);
  if (it == doc.end()) return empty;
  if (!it->is_array()) fail(path + key, "expected an array");
  return *it;
}

ThreePointEstimate parse_estimate(const json& v, const std::string& path) {
  ThreePointEstimate e;
  e.optimistic = number(require(v, "optimistic", path), path + ".optimistic");
  e.most_likely = number(require(v, "most_likely", path), path + ".most_likely");
  e.pessimistic = number(require(v, "pessimistic", path), path + ".pessimistic");
  try {
    e.validate();
  } catch (const ValidationError& err) {
    fail(path, err.what());
  }
  return e;
}

std::vector<SlotPrecedence> parse_template(const json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array");
  std::vector<SlotPrecedence> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    auto slot = [&](const char* key) {
      const auto& s = require(v[i], key, p);
      if (!s.is_number_unsigned()) fail(p + "." + key, "expected a non-negative integer");
      return s.get<std::size_t>();
    };
    out.push_back({slot("before"), slot("after")});
  }
  return out;
}

}  // namespace

AvailabilityWindow parse_window(const json& v, const std::string& path) {
  AvailabilityWindow w{number(require(v, "start", path), path + ".start"),
                       number(require(v, "end", path), path + ".end")};
  try {
    w.validate();
  } catch (const ValidationError& err) {
    fail(path, err.what());
  }
  return w;
}

ServiceOffer parse_offer(const json& v, const std::string& path) {
  ServiceOffer o;
  o.id = text(require(v, "id", path), path + ".id");
  o.category_id = text(require(v, "category_id", path), path + ".category_id");
  o.name = v.contains("name") ? text(v["name"], path + ".name") : o.id;
  o.estimate = parse_estimate(require(v, "estimate", path), path + ".estimate");
  if (v.contains("cost")) o.cost = number(v["cost"], path + ".cost");
  if (v.contains("capacity")) {
    const auto& c = v["capacity"];
    if (!c.is_number_integer()) fail(path + ".capacity", "expected an integer");
    o.capacity = c.get<int>();
  }
  const auto& windows = require(v, "windows", path);
  if (!windows.is_array()) fail(path + ".windows", "expected an array");
  for (std::size_t i = 0; i < windows.size(); ++i) {
    o.windows.push_back(parse_window(windows[i], path + ".windows[" + std::to_string(i) + "]"));
  }
  if (v.contains("attributes")) {
    const auto& attrs = v["attributes"];
    if (!attrs.is_object()) fail(path + ".attributes", "expected an object");
    for (auto it = attrs.begin(); it != attrs.end(); ++it) {
      o.attributes[it.key()] = text(it.value(), path + ".attributes." + it.key());
    }
  }
  return o;
}

ConstraintSet parse_constraints(const json& doc, const std::string& path) {
  ConstraintSet c;
  if (!doc.is_object()) fail(path, "expected an object");
  if (doc.contains("max_cost") && !doc["max_cost"].is_null()) c.max_cost = number(doc["max_cost"], path + ".max_cost");
  if (doc.contains("party_size")) {
    if (!doc["party_size"].is_number_integer()) fail(path + ".party_size", "expected an integer");
    c.party_size = doc["party_size"].get<int>();
  }
  if (doc.contains("plan_epoch")) c.plan_epoch = number(doc["plan_epoch"], path + ".plan_epoch");
  try {
    c.validate();
  } catch (const ValidationError& err) {
    fail(path, err.what());
  }
  return c;
}

PlanRequest parse_plan_request(const json& doc, const PlanRequest& base, const ServiceMatrix& matrix) {
  if (!doc.is_object()) fail("request", "expected an object");
  PlanRequest r = base;
  if (doc.contains("deadline")) r.deadline = number(doc["deadline"], "deadline");
  if (doc.contains("fc_order")) r.fc_order = text_list(doc["fc_order"], "fc_order");
  if (doc.contains("nc_set")) r.nc_set = text_list(doc["nc_set"], "nc_set");
  if (doc.contains("constraints")) r.constraints = parse_constraints(doc["constraints"], "constraints");
  if (doc.contains("precedence_template")) {
    if (doc["precedence_template"].is_null()) {
      r.precedence_template.reset();
    } else {
      r.precedence_template = parse_template(doc["precedence_template"], "precedence_template");
    }
  }
  if (doc.contains("search_mode")) {
    try {
      r.search_mode = search_mode_from_string(text(doc["search_mode"], "search_mode"));
    } catch (const ValidationError& err) {
      fail("search_mode", err.what());
    }
  }
  if (doc.contains("candidate_cap")) {
    if (!doc["candidate_cap"].is_number_unsigned()) fail("candidate_cap", "expected a positive integer");
    r.candidate_cap = doc["candidate_cap"].get<std::size_t>();
  }
  if (doc.contains("allow_fixed_withdrawal")) {
    if (!doc["allow_fixed_withdrawal"].is_boolean()) fail("allow_fixed_withdrawal", "expected a boolean");
    r.allow_fixed_withdrawal = doc["allow_fixed_withdrawal"].get<bool>();
  }
  r.validate(matrix);
  return r;
}

Scenario parse_scenario(const json& doc) {
  if (!doc.is_object()) fail("scenario", "expected an object");
  std::vector<Category> categories;
  const auto& cats = array_field(doc, "categories", "");
  for (std::size_t i = 0; i < cats.size(); ++i) {
    const std::string p = "categories[" + std::to_string(i) + "]";
    Category c;
    c.id = text(require(cats[i], "id", p), p + ".id");
    c.name = cats[i].contains("name") ? text(cats[i]["name"], p + ".name") : c.id;
    try {
      c.kind = category_kind_from_string(text(require(cats[i], "kind", p), p + ".kind"));
    } catch (const ValidationError& err) {
      fail(p + ".kind", err.what());
    }
    categories.push_back(std::move(c));
  }

  std::vector<ServiceOffer> offers;
  const auto& offs = array_field(doc, "offers", "");
  for (std::size_t i = 0; i < offs.size(); ++i) {
    offers.push_back(parse_offer(offs[i], "offers[" + std::to_string(i) + "]"));
  }

  Scenario s;
  try {
    s.matrix = ServiceMatrix::make(categories, std::move(offers));
  } catch (const ValidationError& err) {
    fail("offers", err.what());
  }
  for (std::size_t i = 0; i < s.matrix.category_count(); ++i) {
    if (s.matrix.column(i).empty()) fail("offers", "category " + categories[i].id + " has no offers");
  }

  // Without explicit lists, FC and NC follow the declared category order.
  PlanRequest defaults;
  for (const auto& c : categories) {
    (c.kind == CategoryKind::fixed ? defaults.fc_order : defaults.nc_set).push_back(c.id);
  }
  if (categories.empty()) {
    // Nothing to plan over; keep the request as parsed without matrix checks.
    if (doc.contains("deadline")) s.request.deadline = number(doc["deadline"], "deadline");
    return s;
  }
  if (!doc.contains("deadline")) fail("deadline", "missing");
  s.request = parse_plan_request(doc, defaults, s.matrix);
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open scenario file: " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("scenario is not valid JSON: " + std::string(e.what()));
  }
  return parse_scenario(doc);
}

json to_json(const Category& c) {
  return {{"id", c.id}, {"name", c.name}, {"kind", to_string(c.kind)}};
}

json to_json(const ServiceOffer& o) {
  json windows = json::array();
  for (const auto& w : o.windows) windows.push_back({{"start", w.start}, {"end", w.end}});
  json j = {{"id", o.id},
            {"category_id", o.category_id},
            {"name", o.name},
            {"estimate",
             {{"optimistic", o.estimate.optimistic},
              {"most_likely", o.estimate.most_likely},
              {"pessimistic", o.estimate.pessimistic}}},
            {"cost", o.cost},
            {"capacity", o.capacity},
            {"windows", windows}};
  if (!o.attributes.empty()) j["attributes"] = o.attributes;
  return j;
}

json to_json(const ConstraintSet& c) {
  return {{"max_cost", c.max_cost ? json(*c.max_cost) : json(nullptr)},
          {"party_size", c.party_size},
          {"plan_epoch", c.plan_epoch}};
}

json to_json(const Scenario& s) {
  json cats = json::array();
  for (const auto& c : s.matrix.categories()) cats.push_back(to_json(c));
  json offers = json::array();
  for (const auto& o : s.matrix.all_offers()) offers.push_back(to_json(o));
  json j = {{"categories", cats},
            {"offers", offers},
            {"constraints", to_json(s.request.constraints)},
            {"fc_order", s.request.fc_order},
            {"nc_set", s.request.nc_set},
            {"deadline", s.request.deadline},
            {"search_mode", to_string(s.request.search_mode)},
            {"candidate_cap", s.request.candidate_cap},
            {"allow_fixed_withdrawal", s.request.allow_fixed_withdrawal}};
  if (s.request.precedence_template) {
    json t = json::array();
    for (const auto& e : *s.request.precedence_template) t.push_back({{"before", e.before}, {"after", e.after}});
    j["precedence_template"] = t;
  }
  return j;
}

}  // namespace zeittafel
