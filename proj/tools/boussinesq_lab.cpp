#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "boussinesq/error.hpp"
#include "boussinesq/experiments.hpp"

using namespace boussinesq;

namespace {

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LabError(ErrorKind::Io, "cannot read config " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw LabError(ErrorKind::ConfigInvalid, std::string("config is not valid JSON: ") + e.what());
  }
}

void print_summary(const ExperimentReport& report) {
  for (const auto& r : report.records) {
    std::string tag(to_string(r.verdict));
    if (r.verdict == Verdict::Advisory) tag += r.within_tolerance ? " (within)" : " (outside)";
    std::cout << tag << "  " << r.claim << "  measured=" << r.measured.dump();
    if (!r.note.empty()) std::cout << "  [" << r.note << "]";
    std::cout << '\n';
  }
  std::cout << (report.ok() ? "OK" : "FAILED") << " in " << report.wall_time << " s\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Boussinesq multiplier laboratory"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run one experiment from a JSON config");
  std::string config_path;
  std::string experiment;
  std::vector<std::string> overrides;
  bool quiet = false;
  auto* config_opt = run->add_option("--config", config_path, "config file")->check(CLI::ExistingFile);
  run->add_option("--experiment", experiment, "experiment id, used with defaults when no config is given")
      ->excludes(config_opt);
  run->add_option("--set", overrides, "override key=value (dotted keys)")->take_all();
  run->add_flag("--quiet", quiet, "print only the final status");

  auto* list = app.add_subcommand("list", "list experiment ids and anchors");
  bool list_json = false;
  list->add_flag("--json", list_json, "print the catalog as JSON");

  CLI11_PARSE(app, argc, argv);

  try {
    if (list->parsed()) {
      if (list_json) {
        std::cout << catalog_json().dump(2) << '\n';
      } else {
        for (const auto& e : list_experiments()) {
          std::cout << e.id << "  " << e.summary << '\n';
          for (const auto& a : e.anchors) std::cout << "    - " << a << '\n';
        }
      }
      return 0;
    }
    json config;
    if (!config_path.empty()) {
      config = load_config(config_path);
    } else if (!experiment.empty()) {
      config = {{"experiment", experiment}};
    } else {
      std::cerr << "run needs --config or --experiment\n";
      return 2;
    }
    for (const auto& o : overrides) apply_override(config, o);
    const ExperimentReport report = run_experiment(config);
    if (quiet) {
      std::cout << (report.ok() ? "OK" : "FAILED") << '\n';
    } else {
      print_summary(report);
    }
    return report.ok() ? 0 : 1;
  } catch (const LabError& e) {
    std::cerr << to_string(e.kind()) << ": " << e.what() << '\n';
    return 2;
  }
}
