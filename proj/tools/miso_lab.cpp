// miso-lab: experiment runner for the operator-measure / semigroup library.
//
//   miso-lab run --config <path> [--out <path>] [--format json|csv]
//   miso-lab examples --name <dirichlet-shift|abs1mz-density|right-shift-lsds|atomic-neg1>
//
// Exit status: 0 when every record passes, 1 when any record fails, 2 on
// usage errors (bad arguments, unreadable or malformed config).  The env
// var MISO_LAB_TOL_SCALE multiplies all tolerances (default 1).

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "miso/report.hpp"
#include "miso/suites.hpp"

int main(int argc, char** argv) {
  CLI::App app{"operator measures, m-isometries and semigroup experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string format = "json";
  CLI::App* run_cmd = app.add_subcommand("run", "Run a config-driven suite");
  run_cmd->add_option("--config", config_path, "Path to a JSON experiment config")
      ->required();
  run_cmd->add_option("--out", out_path, "Write the report to this file");
  run_cmd->add_option("--format", format, "Report format")
      ->check(CLI::IsMember({"json", "csv"}));

  std::string name;
  CLI::App* ex_cmd =
      app.add_subcommand("examples", "Run one named worked-example group");
  ex_cmd->add_option("--name", name,
                     "dirichlet-shift|abs1mz-density|right-shift-lsds|atomic-neg1")
      ->required();
  ex_cmd->add_option("--out", out_path, "Write the report to this file");
  ex_cmd->add_option("--format", format, "Report format")
      ->check(CLI::IsMember({"json", "csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  miso::lab::Report report;
  try {
    if (run_cmd->parsed()) {
      std::ifstream in(config_path);
      if (!in) {
        std::cerr << "miso-lab: cannot open config file \"" << config_path
                  << "\"\n";
        return 2;
      }
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(in);
      } catch (const nlohmann::json::parse_error& e) {
        std::cerr << "miso-lab: config is not valid JSON: " << e.what() << "\n";
        return 2;
      }
      report = miso::lab::run(miso::lab::config_from_json(j));
    } else {
      report = miso::lab::example_records(name);
    }
  } catch (const std::exception& e) {
    std::cerr << "miso-lab: " << e.what() << "\n";
    return 2;
  }

  const std::string text =
      format == "csv" ? report.to_csv() : report.to_json_text();
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "miso-lab: cannot write \"" << out_path << "\"\n";
      return 2;
    }
    out << text;
  } else {
    std::cout << text;
  }
  return report.failed() == 0 ? 0 : 1;
}
