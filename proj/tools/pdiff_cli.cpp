// pdiff_cli: runs verification suites and computations from a JSON config.
// Exit status: 0 when every check passes, 1 on a check failure, 2 on bad input.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "pdiff/runner.hpp"

namespace {

using pdiff::runner::ConfigError;
using pdiff::runner::json;

std::vector<std::string> split_commas(const std::vector<std::string>& parts) {
  std::vector<std::string> out;
  for (const auto& p : parts) {
    std::stringstream ss(p);
    std::string item;
    while (std::getline(ss, item, ','))
      if (!item.empty()) out.push_back(item);
  }
  return out;
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config: " + path + " is not valid JSON (" + e.what() + ")");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polydifferential shuffle algebra: verification suites and KZ/WZW computations"};
  app.require_subcommand(1);

  std::string config_path, out_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::vector<std::string> suites;
  bool quiet = false;
  app.add_option("--config", config_path, "JSON config file (defaults to four sl(2) doublets)");
  app.add_option("--seed", seed, "random seed, overrides the config");
  app.add_option("--trials", trials, "random trials per identity, overrides the config")->check(CLI::PositiveNumber);
  app.add_option("--suite", suites, "suites to run, comma separated (verify only)")->delimiter(',');
  app.add_option("--out", out_path, "write the JSON report to this path");
  app.add_flag("--quiet", quiet, "print nothing");

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"verify", "run verification suites"},
      {"rep", "module and invariant dimension tables"},
      {"kz", "KZ connection matrices on invariants"},
      {"gm", "Gauss-Manin connection matrices on invariants"},
      {"compare", "Gauss-Manin against KZ with entry differences"},
      {"residues", "boundary residues, integrality classes, coprimitive check"},
      {"wzw", "level-l subspace, kernel basis and criterion tables"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  pdiff::runner::Report report;
  try {
    json cfg_json = config_path.empty() ? json::object() : load_json(config_path);
    auto cfg = pdiff::runner::parse_config(cfg_json);
    if (seed) cfg.seed = *seed;
    if (trials) cfg.trials = *trials;
    if (!suites.empty()) {
      if (command != "verify") throw ConfigError("--suite applies to verify only");
      cfg.suites = split_commas(suites);
    }
    pdiff::runner::select_suites(cfg.suites);
    report = pdiff::runner::run_command(command, cfg);
  } catch (const ConfigError& e) {
    if (!quiet) std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    if (!quiet) std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  const json out = report.to_json();
  if (!out_path.empty()) {
    std::ofstream f(out_path);
    if (!f) {
      if (!quiet) std::cerr << "cannot write " << out_path << "\n";
      return 2;
    }
    f << out.dump(2) << "\n";
  }
  if (!quiet) {
    for (const auto& r : out["records"]) {
      std::cout << "[" << r["status"].get<std::string>() << "] " << r["anchor"].get<std::string>() << " ("
                << r["cases"].get<long>() << " cases)";
      if (r.contains("witness")) std::cout << "  " << r["witness"].get<std::string>();
      std::cout << "\n";
    }
    const auto& s = out["summary"];
    std::cout << command << ": " << s["passed"].get<int>() << " passed, " << s["failed"].get<int>() << " failed, "
              << s["skipped"].get<int>() << " skipped\n";
  }
  return report.failed() ? 1 : 0;
}
