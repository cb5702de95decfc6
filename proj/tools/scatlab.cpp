// Command-line front end: run named experiments from JSON configs, with
// dotted-path overrides, or validate a config without running it.

#include <iostream>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "scatlab/errors.hpp"
#include "scatlab/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"scatlab: scattering-operator experiments for 1D semilinear "
               "dispersive equations"};
  app.require_subcommand(1);

  std::string experiment_name, config_path, output_dir;
  std::vector<std::string> overrides;

  CLI::App* run = app.add_subcommand("run", "run a named experiment");
  run->add_option("name", experiment_name, "experiment name (see 'list')")
      ->required();
  run->add_option("--config", config_path, "path to a JSON config")
      ->required();
  run->add_option("--set", overrides,
                  "override a config key, e.g. --set horizon.dt=5e-4");
  run->add_option("--output-dir", output_dir,
                  "override the config's output directory");

  CLI::App* validate = app.add_subcommand("validate", "validate a config");
  validate->add_option("--config", config_path, "path to a JSON config")
      ->required();
  validate->add_option("--set", overrides, "override a config key");

  CLI::App* list = app.add_subcommand("list", "list experiment recipes");

  CLI11_PARSE(app, argc, argv);

  if (list->parsed()) {
    for (const auto& [name, desc] : scatlab::experiment_recipes())
      std::cout << name << "\n    " << desc << "\n";
    return 0;
  }

  nlohmann::json raw;
  try {
    std::ifstream in(config_path);
    if (!in) throw scatlab::ConfigError("cannot open " + config_path);
    in >> raw;
    for (const std::string& kv : overrides) {
      const size_t eq = kv.find('=');
      if (eq == std::string::npos)
        throw scatlab::ConfigError("--set expects key=value, got '" + kv + "'");
      scatlab::apply_override(raw, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (!output_dir.empty()) raw["output_dir"] = output_dir;
  } catch (const scatlab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  scatlab::ExperimentConfig config;
  try {
    config = scatlab::ExperimentConfig::parse(raw);
  } catch (const scatlab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  if (validate->parsed()) {
    std::cout << "config ok\n";
    return 0;
  }

  try {
    const scatlab::ExperimentOutcome outcome =
        scatlab::run_experiment(experiment_name, config);
    std::cout << outcome.summary["status"].get<std::string>() << " (summary: "
              << (config.output_dir / "summary.json").string() << ")\n";
    return outcome.exit_code;
  } catch (const scatlab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
