#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "trapkit/runner.hpp"

namespace trapkit::runner {

namespace {

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void flatten(const json& v, const std::string& key, std::vector<std::pair<std::string, std::string>>& rows) {
  if (v.is_object()) {
    if (v.empty()) rows.emplace_back(key, "{}");
    for (const auto& [k, e] : v.items()) flatten(e, key.empty() ? k : key + "." + k, rows);
  } else if (v.is_array()) {
    if (v.empty()) rows.emplace_back(key, "[]");
    for (std::size_t i = 0; i < v.size(); ++i) flatten(v[i], key + "[" + std::to_string(i) + "]", rows);
  } else if (v.is_string()) {
    rows.emplace_back(key, v.get<std::string>());
  } else {
    rows.emplace_back(key, v.dump());
  }
}

}  // namespace

RunResult run(const Scenario& s) {
  RunResult r;
  json tasks = json::array();
  for (const auto& t : s.tasks) {
    json rec = {{"id", t.id}, {"op", t.op}, {"inputs", t.args}};
    const auto start = std::chrono::steady_clock::now();
    try {
      rec["result"] = dispatch(t.op, t.args, s.context);
      rec["status"] = "ok";
    } catch (const Error& e) {
      rec["result"] = nullptr;
      rec["status"] = "error";
      rec["error"] = e.what();
      r.all_executed = false;
    }
    const std::chrono::duration<double, std::milli> dt = std::chrono::steady_clock::now() - start;
    rec["wall_time_ms"] = dt.count();
    tasks.push_back(std::move(rec));
  }
  r.report = {{"toolkit", "trapkit"},   {"version", TRAPKIT_VERSION}, {"scenario", s.name},
              {"scenario_hash", s.hash}, {"seed", s.context.seed},    {"tasks", std::move(tasks)}};
  return r;
}

std::string report_json(const json& report) { return report.dump(2) + "\n"; }

std::string report_csv(const json& report) {
  std::ostringstream os;
  os << "task_id,op,key,value\n";
  for (const auto& t : report.at("tasks")) {
    std::vector<std::pair<std::string, std::string>> rows;
    rows.emplace_back("status", t.at("status").get<std::string>());
    if (t.contains("error")) rows.emplace_back("error", t.at("error").get<std::string>());
    flatten(t.at("result"), "result", rows);
    rows.emplace_back("wall_time_ms", t.at("wall_time_ms").dump());
    for (const auto& [k, v] : rows)
      os << csv_cell(t.at("id").get<std::string>()) << ',' << csv_cell(t.at("op").get<std::string>()) << ','
         << csv_cell(k) << ',' << csv_cell(v) << '\n';
  }
  return os.str();
}

int run_scenario(const std::string& path, const std::string& out, const std::string& format) {
  try {
    if (format != "json" && format != "csv") throw ScenarioError("unknown report format '" + format + "'");
    const Scenario s = load_scenario(path);
    const RunResult r = run(s);
    const std::string text = format == "csv" ? report_csv(r.report) : report_json(r.report);
    if (out.empty() || out == "-") {
      std::cout << text;
    } else {
      std::ofstream f(out, std::ios::binary);
      if (!f) throw ScenarioError("cannot write report to '" + out + "'");
      f << text;
    }
    for (const auto& t : r.report.at("tasks"))
      if (t.at("status") == "error")
        std::cerr << "task '" << t.at("id").get<std::string>() << "' failed: " << t.at("error").get<std::string>() << "\n";
    return r.all_executed ? 0 : 1;
  } catch (const ScenarioError& e) {
    std::cerr << "scenario error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace trapkit::runner
