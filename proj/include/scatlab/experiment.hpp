#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"
#include "scatlab/audit.hpp"
#include "scatlab/consequences.hpp"
#include "scatlab/profiles.hpp"
#include "scatlab/rng.hpp"

namespace scatlab {

inline constexpr const char* kVersion = "0.1.0";

// Fully assembled experiment inputs, parsed and validated from the JSON
// config. Unknown keys are rejected at every level.
struct ExperimentConfig {
  nlohmann::json raw;  // canonical validated config
  std::string equation;
  PropagatorSpec prop;
  NonlinearitySpec nl;
  IntegratorConfig integrator;
  StrichartzExponents exps;
  ScatterThresholds thresholds;
  double omega_defect_threshold = 1e-5;
  ComplexField data;
  ComplexField perturbation;
  uint64_t data_seed = 0;
  uint64_t probe_seed = 0;
  int probe_count = 32;
  int series_K = 0;
  std::vector<double> epsilon_list;
  double stencil_h = 1e-2;
  int born_substeps = 1;
  std::filesystem::path output_dir = "out";

  static ExperimentConfig parse(const nlohmann::json& j);
  static ExperimentConfig parse_file(const std::filesystem::path& path);
};

struct ExperimentCheck {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string comparison;  // "<=", ">=", "in" ...
};

struct ExperimentOutcome {
  int exit_code = 0;  // 0 ok, 1 failed checks, 2 config error, 3 taint
  nlohmann::json summary;
};

// Known experiment recipes with one-line descriptions.
const std::vector<std::pair<std::string, std::string>>& experiment_recipes();

// Runs one named recipe, writing summary.json, CSV tables (with
// '#'-prefixed metadata headers) and log.txt into config.output_dir.
ExperimentOutcome run_experiment(const std::string& name,
                                 const ExperimentConfig& config);

// Structured table I/O. Tables round-trip exactly: values are printed
// with max_digits10 significance and reparse to identical doubles.
struct Table {
  std::vector<std::string> metadata;  // '#'-prefixed lines (without '#')
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

void write_table(const std::filesystem::path& path, const Table& table);
Table read_table(const std::filesystem::path& path);

uint64_t fnv1a_hash(const std::string& text);

// Dotted-path override helper for --set key=value (value parsed as JSON
// when possible, else kept as string).
void apply_override(nlohmann::json& config, const std::string& key,
                    const std::string& value);

}  // namespace scatlab
