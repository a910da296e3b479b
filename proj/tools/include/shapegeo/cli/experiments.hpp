#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "shapegeo/cli/config.hpp"
#include "shapegeo/cli/output.hpp"

namespace shapegeo::cli {

struct ExperimentOutput {
  ResultTable table;
  PlotSpec plot;
  /// Scalar results, recorded as comments in the manifest.
  std::vector<std::pair<std::string, double>> summary;
};

struct Experiment {
  std::string name;
  std::string description;
  /// Every accepted key with its default value, as config text.
  std::vector<std::pair<std::string, std::string>> defaults;
  bool randomized = false;  // has a `seed` key that SHAPEGEO_SEED overrides
  std::function<ExperimentOutput(const Config&)> run;
};

const std::vector<Experiment>& experiments();
/// nullptr for an unknown name.
const Experiment* find_experiment(const std::string& name);

/// Defaults, then the config file, then the overrides in order, then the
/// seed from `env_seed` when non-empty. Rejects unknown keys and an
/// `experiment` entry naming another subcommand.
Config resolve_config(const Experiment& e, const Config& file, const std::vector<std::string>& sets,
                      const std::string& env_seed);

}  // namespace shapegeo::cli
