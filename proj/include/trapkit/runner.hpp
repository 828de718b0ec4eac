#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "trapkit/errors.hpp"
#include "trapkit/geometry.hpp"
#include "trapkit/scalar_field.hpp"

namespace trapkit::runner {

using json = nlohmann::json;

inline constexpr const char* kSchemaId = "trapkit.scenario/1";

/// Malformed scenario: bad JSON, schema violation, unknown operation or a
/// binding of the wrong type. Line/column are 1-based, 0 when unknown.
class ScenarioError : public Error {
 public:
  explicit ScenarioError(const std::string& what, int line = 0, int column = 0)
      : Error(format(what, line, column)), line_(line), column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  static std::string format(const std::string& what, int line, int column) {
    if (line <= 0) return what;
    return what + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")";
  }
  int line_, column_;
};

/// Named functions and sets plus default parameters shared by all tasks.
struct Context {
  std::map<std::string, ScalarField> functions;
  std::map<std::string, RegionSet> sets;
  json defaults = json::object();
  std::uint64_t seed = 0;
};

struct ParamSpec {
  std::string name;
  std::string type;         // field, point, number, integer, bool, string, set, grid, probe, scan, ...
  bool required = false;
  std::string default_key;  // key in scenario defaults, if any
  json fallback;            // built-in default (null: none)
  std::string doc;
};

class Args;
using Handler = std::function<json(const Args&)>;

struct OpInfo {
  std::string name;
  std::string module;
  std::string summary;
  std::vector<ParamSpec> params;
  json smoke_args;  // arguments that run against smoke_context()
  Handler handler;
};

/// Typed view of a task's arguments with scenario defaults applied.
class Args {
 public:
  Args(const OpInfo& op, const json& raw, const Context& ctx) : op_(op), raw_(raw), ctx_(ctx) {}

  bool has(const std::string& name) const;
  json value(const std::string& name) const;  // raw, scenario default, built-in default or null

  const ScalarField& field(const std::string& name) const;
  Point point(const std::string& name) const;
  std::optional<Point> opt_point(const std::string& name) const;
  double number(const std::string& name) const;
  int integer(const std::string& name) const;
  bool flag(const std::string& name) const;
  std::string string(const std::string& name) const;
  std::vector<double> numbers(const std::string& name) const;
  RegionSet set(const std::string& name) const;
  Ball ball(const std::string& name, const Point& default_center) const;
  GridSpec grid(const std::string& name, const Point& center) const;
  ProbeSpec probe(const std::string& name) const;
  ScanRange scan(const std::string& name) const;
  CostModel cost(const std::string& name, int dim) const;
  std::vector<std::pair<Point, Point>> shifts(const std::string& name) const;

  const Context& context() const { return ctx_; }

 private:
  const ParamSpec& spec(const std::string& name) const;
  const OpInfo& op_;
  const json& raw_;
  const Context& ctx_;
};

/// Every dispatchable operation, in catalog order.
const std::vector<OpInfo>& operations();
const OpInfo& find_operation(const std::string& name);  // ScenarioError if unknown

/// Catalog as structured data and as text.
json catalog_json();
std::string catalog_text();

/// Context the smoke arguments of every operation refer to.
Context smoke_context();

/// Shape check of a task's arguments against the operation's parameter list.
void validate_args(const OpInfo& op, const json& args, const Context& ctx);

/// Runs one operation; throws whatever the operation throws.
json dispatch(const std::string& op, const json& args, const Context& ctx);

struct Task {
  std::string id;
  std::string op;
  json args;
};

struct Scenario {
  std::string name;
  std::string hash;  // FNV-1a 64 of the source text, hex
  Context context;
  std::vector<Task> tasks;
};

Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);

/// Builds a field from a scenario function definition object.
ScalarField field_from_json(const json& def, const std::string& name);
RegionSet set_from_json(const json& def, const Context& ctx);

struct RunResult {
  json report;
  bool all_executed = true;
};

RunResult run(const Scenario& s);

/// Canonical JSON text (sorted keys, two-space indent, trailing newline).
std::string report_json(const json& report);
/// task_id,op,key,value rows with flattened result paths.
std::string report_csv(const json& report);

/// JSON number, or "inf" / "-inf" / "nan" strings.
json num(double v);
json to_json(const Point& p);

std::string fnv1a_hex(const std::string& bytes);

/// CLI entry: 0 all tasks executed, 1 scenario or task error, 2 internal error.
int run_scenario(const std::string& path, const std::string& out, const std::string& format);

}  // namespace trapkit::runner
