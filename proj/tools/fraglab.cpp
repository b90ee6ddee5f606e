#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "fraglab/errors.hpp"
#include "fraglab/experiment.hpp"
#include "fraglab/verify.hpp"

namespace {

using fraglab::json;

fraglab::cli::Experiment load_with_overrides(const std::string& path, const std::vector<std::string>& sets) {
  std::ifstream in(path);
  if (!in) throw fraglab::ConfigError("<file>", "cannot open '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw fraglab::ConfigError("<file>", std::string("invalid JSON: ") + e.what());
  }
  for (const auto& s : sets) fraglab::cli::apply_override(j, s);
  return fraglab::cli::parse_experiment(j);
}

std::vector<json> parse_values(const std::string& text) {
  std::vector<json> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(json::parse(item));
    } catch (const json::parse_error&) {
      throw fraglab::ConfigError("--values", "'" + item + "' is not a number");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Benford analysis of fragmentation processes"};
  app.set_version_flag("--version", fraglab::cli::library_version());
  app.require_subcommand(1);

  std::string config;
  std::vector<std::string> sets;
  auto* run = app.add_subcommand("run", "Run one experiment and print its JSON report");
  run->add_option("config", config, "Experiment JSON file")->required();
  run->add_option("--set", sets, "Override a field, e.g. --set params.N=200");

  std::string axis, values, csv_path, reports_path;
  auto* sw = app.add_subcommand("sweep", "Run an experiment over several values of one field");
  sw->add_option("config", config, "Experiment JSON file")->required();
  sw->add_option("--axis", axis, "Numeric field under params")->required();
  sw->add_option("--values", values, "Comma-separated values")->required();
  sw->add_option("--set", sets, "Override a field before sweeping");
  sw->add_option("--csv", csv_path, "Write the CSV here instead of stdout");
  sw->add_option("--reports", reports_path, "Also write the JSON reports here");

  auto* verify = app.add_subcommand("verify", "Run the built-in identity and invariant checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      const auto e = load_with_overrides(config, sets);
      std::cout << fraglab::cli::run_experiment(e).dump(2) << '\n';
    } else if (sw->parsed()) {
      const auto e = load_with_overrides(config, sets);
      const auto reports = fraglab::cli::sweep(e, axis, parse_values(values));
      if (csv_path.empty()) {
        fraglab::cli::write_sweep_csv(std::cout, axis, reports);
      } else {
        std::ofstream out(csv_path);
        if (!out) throw fraglab::ConfigError("--csv", "cannot open '" + csv_path + "'");
        fraglab::cli::write_sweep_csv(out, axis, reports);
      }
      if (!reports_path.empty()) {
        std::ofstream out(reports_path);
        if (!out) throw fraglab::ConfigError("--reports", "cannot open '" + reports_path + "'");
        out << json(reports).dump(2) << '\n';
      }
    } else if (verify->parsed()) {
      return fraglab::cli::run_verify_suite(std::cout) ? 0 : 1;
    }
  } catch (const fraglab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const fraglab::CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << '\n';
    return 3;
  } catch (const fraglab::AccuracyError& e) {
    std::cerr << "accuracy error: " << e.what() << " (achieved " << e.achieved() << ")\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
