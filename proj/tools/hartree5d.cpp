// Command-line front end: hartree5d <command> <config.json> [--out DIR]

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hartree5d/cli/commands.hpp"

namespace fs = std::filesystem;
using namespace hartree5d::cli;

namespace {

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Radial 5D focusing Hartree equation laboratory"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_dir;

  const char* commands[][2] = {
      {"groundstate", "Solve for the ground state Q; writes Q.csv and groundstate.json"},
      {"evolve", "Run the time evolution; writes series.csv, series_aux.csv and outcome.json"},
      {"classify", "Evaluate the mass-energy threshold conditions; writes classification.json"},
      {"check-potential", "Check the pointwise potential hypotheses; writes hypotheses.json"},
      {"verify", "Run the oracle gates; writes verify.csv and verify.json"},
  };
  for (const auto& cmd : commands) {
    CLI::App* sub = app.add_subcommand(cmd[0], cmd[1]);
    sub->add_option("config", config_path, "JSON config file")->required();
    sub->add_option("-o,--out", out_dir, "Output directory (default: $HARTREE5D_OUTPUT_ROOT or .)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  if (out_dir.empty()) {
    const char* root = std::getenv("HARTREE5D_OUTPUT_ROOT");
    out_dir = root && *root ? root : ".";
  }

  nlohmann::json raw;
  try {
    raw = load_json_file(config_path);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }

  int code = kConfigError;
  try {
    code = run_command(command, raw, out_dir, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  }

  // Run metadata is kept out of the data files so those stay reproducible.
  if (fs::is_directory(out_dir)) {
    write_json(fs::path(out_dir) / "run.meta.json",
               nlohmann::json{{"command", command},
                              {"config", fs::absolute(config_path).string()},
                              {"finished_utc", utc_now()},
                              {"exit_code", code}});
  }
  return code;
}
