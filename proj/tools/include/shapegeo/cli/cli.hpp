#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "shapegeo/cli/experiments.hpp"

namespace shapegeo::cli {

enum ExitCode { kSuccess = 0, kConfigError = 2, kNumericalFailure = 3 };

/// Runs one experiment and writes table.csv, plot.svg and manifest.txt into
/// `out_dir` (created if needed).
ExperimentOutput run_experiment(const Experiment& e, const Config& config,
                                const std::filesystem::path& out_dir);

/// Manifest text: version comments, summary comments, then the resolved
/// config including `experiment = <name>`. Loadable with --config.
std::string format_manifest(const Experiment& e, const Config& config,
                            const ExperimentOutput& output);

/// One-line JSON error record.
std::string error_record(const std::string& experiment, int exit_code, const std::string& kind,
                         const std::string& message);

/// `shapegeo <subcommand> [--config FILE] [--set key=value]... [--out DIR]`.
/// Reads SHAPEGEO_SEED from the environment. Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace shapegeo::cli
