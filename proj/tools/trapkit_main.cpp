#include <iostream>

#include <CLI11.hpp>

#include "trapkit/runner.hpp"

int main(int argc, char** argv) {
  namespace tr = trapkit::runner;
  CLI::App app{"trapkit: stationary traps, subgradients and variational principles"};
  app.set_version_flag("--version", std::string("trapkit ") + TRAPKIT_VERSION);
  app.require_subcommand(1);

  std::string path, out, format = "json";
  auto* run = app.add_subcommand("run", "Run a scenario file and write a report");
  run->add_option("scenario", path, "Scenario JSON file")->required();
  run->add_option("--out", out, "Report path (default: stdout)");
  run->add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "csv"}));

  bool as_json = false;
  auto* list = app.add_subcommand("list-ops", "List dispatchable operations");
  list->add_flag("--json", as_json, "Machine-readable catalog");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*run) return tr::run_scenario(path, out, format);
    if (as_json)
      std::cout << tr::catalog_json().dump(2) << "\n";
    else
      std::cout << tr::catalog_text();
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
}
