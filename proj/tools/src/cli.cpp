#include "shapegeo/cli/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <boost/version.hpp>
#include <Eigen/Core>

#include <cstdlib>
#include <ostream>

#include "shapegeo/errors.hpp"

#ifndef SHAPEGEO_VERSION
#define SHAPEGEO_VERSION "unknown"
#endif

namespace shapegeo::cli {

ExperimentOutput run_experiment(const Experiment& e, const Config& config,
                                const std::filesystem::path& out_dir) {
  auto output = e.run(config);
  std::filesystem::create_directories(out_dir);
  atomic_write(out_dir / "table.csv", format_csv(output.table));
  atomic_write(out_dir / "plot.svg", render_svg(output.table, output.plot));
  atomic_write(out_dir / "manifest.txt", format_manifest(e, config, output));
  return output;
}

std::string format_manifest(const Experiment& e, const Config& config,
                            const ExperimentOutput& output) {
  std::string s = "# shapegeo manifest; re-run with: shapegeo " + e.name +
                  " --config manifest.txt\n";
  s += "# version shapegeo " SHAPEGEO_VERSION "\n";
  s += "# version eigen " + std::to_string(EIGEN_WORLD_VERSION) + "." +
       std::to_string(EIGEN_MAJOR_VERSION) + "." + std::to_string(EIGEN_MINOR_VERSION) + "\n";
  s += "# version boost " + std::to_string(BOOST_VERSION / 100000) + "." +
       std::to_string(BOOST_VERSION / 100 % 1000) + "." + std::to_string(BOOST_VERSION % 100) +
       "\n";
  if (!output.table.note().empty()) s += "# note " + output.table.note() + "\n";
  for (const auto& [k, v] : output.summary) s += "# result " + k + " = " + format_number(v) + "\n";
  s += "experiment = " + e.name + "\n";
  s += config.to_text();
  return s;
}

std::string error_record(const std::string& experiment, int exit_code, const std::string& kind,
                         const std::string& message) {
  nlohmann::json j;
  j["status"] = "error";
  j["experiment"] = experiment;
  j["exit_code"] = exit_code;
  j["kind"] = kind;
  j["message"] = message;
  return j.dump();
}

namespace {

std::string subcommand_list() {
  std::string s;
  for (const auto& e : experiments()) s += (s.empty() ? "" : " | ") + e.name;
  return s;
}

int fail(std::ostream& err, const std::filesystem::path* out_dir, const std::string& experiment,
         int code, const std::string& kind, const std::string& message) {
  const std::string record = error_record(experiment, code, kind, message);
  err << record << "\n";
  if (out_dir) {
    try {
      std::filesystem::create_directories(*out_dir);
      atomic_write(*out_dir / "error.json", record + "\n");
    } catch (...) {
      // the record on stderr is enough
    }
  }
  return code;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"shapegeo: numerical experiments on spaces of shapes and diffeomorphisms"};
  app.require_subcommand(1);
  std::string config_file;
  std::vector<std::string> sets;
  std::string out_dir;

  for (const auto& e : experiments()) {
    auto* sub = app.add_subcommand(e.name, e.description);
    sub->add_option("--config", config_file, "flat key = value config file");
    sub->add_option("--set", sets, "override, key=value (repeatable, later wins)");
    sub->add_option("--out", out_dir, "output directory (default shapegeo-out/<subcommand>)");
    std::string keys;
    for (const auto& [k, v] : e.defaults) keys += "  " + k + " = " + v + "\n";
    sub->footer("Keys and defaults:\n" + keys);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      // help on a subcommand
      for (auto* sub : app.get_subcommands()) out << sub->help();
      return kSuccess;
    }
    return fail(err, nullptr, "", kConfigError, "ConfigError",
                std::string(e.what()) + " (subcommands: " + subcommand_list() + ")");
  }

  const auto* sub = app.get_subcommands().front();
  const Experiment* e = find_experiment(sub->get_name());
  const std::filesystem::path dir =
      out_dir.empty() ? std::filesystem::path("shapegeo-out") / e->name : std::filesystem::path(out_dir);

  Config config;
  try {
    const Config file = config_file.empty() ? Config() : Config::load(config_file);
    const char* env = std::getenv("SHAPEGEO_SEED");
    config = resolve_config(*e, file, sets, env ? env : "");
  } catch (const ConfigError& ex) {
    return fail(err, &dir, e->name, kConfigError, "ConfigError", ex.what());
  }

  try {
    const auto output = run_experiment(*e, config, dir);
    out << e->name << ": " << output.table.rows().size() << " rows written to " << dir.string()
        << "\n";
    for (const auto& [k, v] : output.summary) out << "  " << k << " = " << format_number(v) << "\n";
    return kSuccess;
  } catch (const ConfigError& ex) {
    return fail(err, &dir, e->name, kConfigError, "ConfigError", ex.what());
  } catch (const InvalidArgument& ex) {
    return fail(err, &dir, e->name, kConfigError, to_string(ex.kind()), ex.what());
  } catch (const Error& ex) {
    return fail(err, &dir, e->name, kNumericalFailure, to_string(ex.kind()), ex.what());
  } catch (const std::exception& ex) {
    return fail(err, &dir, e->name, kNumericalFailure, "InternalError", ex.what());
  }
}

}  // namespace shapegeo::cli
