#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "trapkit/runner.hpp"

namespace trapkit::runner {

namespace {

const std::set<std::string> kTopKeys{"schema", "name", "seed", "functions", "sets", "defaults", "tasks"};
const std::set<std::string> kFunctionKeys{"dim", "expr", "grad", "domain", "builtin"};
const std::set<std::string> kDefaultKeys{"xi", "eps", "gamma", "lambda", "rho", "eta", "grid", "probe", "scan", "region"};

// Fields the expression grammar cannot state.
ScalarField builtin(const std::string& name, int dim) {
  if (name == "x2_sin_inv_x" && dim == 1)
    return ScalarField::native(
        1, [](std::span<const double> x) { return x[0] == 0.0 ? 0.0 : x[0] * x[0] * std::sin(1.0 / x[0]); },
        "x2_sin_inv_x");
  throw ScenarioError("unknown builtin function '" + name + "' for dimension " + std::to_string(dim));
}

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [k, v] : obj.items())
    if (!allowed.count(k)) throw ScenarioError(where + ": unknown key '" + k + "'");
}

std::pair<int, int> line_col(const std::string& text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

Point point_field(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty() || v.size() > 3)
    throw ScenarioError(where + " must be a list of 1 to 3 numbers");
  std::vector<double> c;
  for (const auto& e : v) {
    if (!e.is_number()) throw ScenarioError(where + " must be a list of 1 to 3 numbers");
    c.push_back(e.get<double>());
  }
  return Point(c);
}

double number_field(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key) || !obj.at(key).is_number()) throw ScenarioError(where + ": '" + key + "' must be a number");
  return obj.at(key).get<double>();
}

}  // namespace

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ScalarField field_from_json(const json& def, const std::string& name) {
  const std::string where = "function '" + name + "'";
  if (!def.is_object()) throw ScenarioError(where + " must be an object");
  check_keys(def, kFunctionKeys, where);
  if (!def.contains("dim") || !def.at("dim").is_number_integer()) throw ScenarioError(where + ": 'dim' must be an integer");
  const int dim = def.at("dim").get<int>();
  if (dim < 1 || dim > kMaxDim) throw ScenarioError(where + ": 'dim' must be 1, 2 or 3");
  if (def.contains("builtin")) {
    if (def.contains("expr")) throw ScenarioError(where + ": give either 'expr' or 'builtin'");
    if (!def.at("builtin").is_string()) throw ScenarioError(where + ": 'builtin' must be a string");
    return builtin(def.at("builtin").get<std::string>(), dim);
  }
  if (!def.contains("expr") || !def.at("expr").is_string()) throw ScenarioError(where + ": 'expr' must be a string");
  std::string domain;
  if (def.contains("domain")) {
    if (!def.at("domain").is_string()) throw ScenarioError(where + ": 'domain' must be a string");
    domain = def.at("domain").get<std::string>();
  }
  std::vector<std::string> grad;
  if (def.contains("grad")) {
    if (!def.at("grad").is_array()) throw ScenarioError(where + ": 'grad' must be a list of expressions");
    for (const auto& g : def.at("grad")) {
      if (!g.is_string()) throw ScenarioError(where + ": 'grad' must be a list of expressions");
      grad.push_back(g.get<std::string>());
    }
  }
  try {
    return parse_field(def.at("expr").get<std::string>(), dim, domain, grad);
  } catch (const Error& e) {
    throw ScenarioError(where + ": " + e.what());
  }
}

RegionSet set_from_json(const json& def, const Context&) {
  if (!def.is_object() || !def.contains("kind") || !def.at("kind").is_string())
    throw ScenarioError("set definition needs a string 'kind'");
  const std::string kind = def.at("kind").get<std::string>();
  const std::string where = "set of kind '" + kind + "'";
  try {
    if (kind == "halfspace") {
      check_keys(def, {"kind", "normal", "offset"}, where);
      return RegionSet::halfspace(point_field(def.value("normal", json()), where + ": 'normal'"),
                                  number_field(def, "offset", where));
    }
    if (kind == "ball") {
      check_keys(def, {"kind", "center", "radius"}, where);
      return RegionSet::ball(point_field(def.value("center", json()), where + ": 'center'"),
                             number_field(def, "radius", where));
    }
    if (kind == "box") {
      check_keys(def, {"kind", "lo", "hi"}, where);
      return RegionSet::box(point_field(def.value("lo", json()), where + ": 'lo'"),
                            point_field(def.value("hi", json()), where + ": 'hi'"));
    }
    if (kind == "predicate") {
      check_keys(def, {"kind", "expr", "dim"}, where);
      if (!def.contains("expr") || !def.at("expr").is_string()) throw ScenarioError(where + ": 'expr' must be a string");
      if (!def.contains("dim") || !def.at("dim").is_number_integer())
        throw ScenarioError(where + ": 'dim' must be an integer");
      return RegionSet::predicate(def.at("expr").get<std::string>(), def.at("dim").get<int>());
    }
  } catch (const ScenarioError&) {
    throw;
  } catch (const Error& e) {
    throw ScenarioError(where + ": " + e.what());
  }
  throw ScenarioError("unknown set kind '" + kind + "' (halfspace, ball, box, predicate)");
}

Scenario parse_scenario(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_col(text, e.byte == 0 ? 0 : e.byte - 1);
    std::string msg = e.what();
    if (const auto p = msg.find("syntax error"); p != std::string::npos) msg = msg.substr(p);
    throw ScenarioError("scenario is not valid JSON: " + msg, line, col);
  }
  if (!doc.is_object()) throw ScenarioError("scenario must be a JSON object");
  check_keys(doc, kTopKeys, "scenario");
  if (doc.value("schema", json()) != kSchemaId)
    throw ScenarioError(std::string("scenario 'schema' must be \"") + kSchemaId + "\"");
  if (!doc.contains("name") || !doc.at("name").is_string()) throw ScenarioError("scenario 'name' must be a string");

  Scenario s;
  s.name = doc.at("name").get<std::string>();
  s.hash = fnv1a_hex(text);
  if (doc.contains("seed")) {
    if (!doc.at("seed").is_number_unsigned()) throw ScenarioError("scenario 'seed' must be a nonnegative integer");
    s.context.seed = doc.at("seed").get<std::uint64_t>();
  }
  if (doc.contains("functions")) {
    if (!doc.at("functions").is_object()) throw ScenarioError("scenario 'functions' must be an object");
    for (const auto& [name, def] : doc.at("functions").items())
      s.context.functions.emplace(name, field_from_json(def, name));
  }
  if (doc.contains("sets")) {
    if (!doc.at("sets").is_object()) throw ScenarioError("scenario 'sets' must be an object");
    for (const auto& [name, def] : doc.at("sets").items()) {
      try {
        s.context.sets.emplace(name, set_from_json(def, s.context));
      } catch (const ScenarioError& e) {
        throw ScenarioError("set '" + name + "': " + e.what());
      }
    }
  }
  if (doc.contains("defaults")) {
    if (!doc.at("defaults").is_object()) throw ScenarioError("scenario 'defaults' must be an object");
    check_keys(doc.at("defaults"), kDefaultKeys, "scenario defaults");
    s.context.defaults = doc.at("defaults");
  }
  if (!doc.contains("tasks") || !doc.at("tasks").is_array()) throw ScenarioError("scenario 'tasks' must be a list");

  std::set<std::string> ids;
  std::size_t index = 0;
  for (const auto& t : doc.at("tasks")) {
    ++index;
    const std::string where = "task " + std::to_string(index);
    if (!t.is_object()) throw ScenarioError(where + " must be an object");
    check_keys(t, {"id", "op", "args"}, where);
    Task task;
    if (t.contains("id")) {
      if (!t.at("id").is_string()) throw ScenarioError(where + ": 'id' must be a string");
      task.id = t.at("id").get<std::string>();
    } else {
      task.id = "t" + std::to_string(index);
    }
    if (!ids.insert(task.id).second) throw ScenarioError(where + ": duplicate task id '" + task.id + "'");
    if (!t.contains("op") || !t.at("op").is_string()) throw ScenarioError(where + ": 'op' must be a string");
    task.op = t.at("op").get<std::string>();
    task.args = t.value("args", json::object());
    try {
      validate_args(find_operation(task.op), task.args, s.context);
    } catch (const ScenarioError& e) {
      throw ScenarioError("task '" + task.id + "': " + e.what());
    }
    s.tasks.push_back(std::move(task));
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError("cannot read scenario file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

}  // namespace trapkit::runner
