#include <cstdlib>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "intertwine/errors.hpp"
#include "intertwine/experiment.hpp"
#include "intertwine/report.hpp"
#include "intertwine/suites.hpp"

namespace {

constexpr int kUsageError = 2;

std::filesystem::path output_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("INTERTWINE_OUTPUT_DIR"); env != nullptr && *env != '\0')
    return env;
  return "intertwine-report";
}

int run(const std::string& config_path, const std::string& out_flag, const std::string& suite) {
  intertwine::ExperimentConfig config;
  try {
    config = intertwine::load_config(config_path);
    if (!suite.empty()) config.suite = suite;
    if (config.suite != "all" && !intertwine::is_suite(config.suite))
      throw intertwine::InvalidInput("unknown suite '" + config.suite + "'");
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  }
  const auto results = intertwine::run_config(config);
  const std::filesystem::path dir = output_dir(out_flag);
  intertwine::write_report(dir, results, intertwine::to_json(config));
  bool all = true;
  for (const auto& r : results) {
    std::cout << (r.pass ? "PASS " : "FAIL ") << r.suite << "  verdicts=" << r.verdicts.size()
              << " |z|>2:" << r.above2 << " |z|>3:" << r.above3 << " |z|>4:" << r.above4 << '\n';
    all = all && r.pass;
  }
  std::cout << "report: " << dir.string() << '\n';
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo and exact checks for intertwined particle systems"};
  app.require_subcommand(1);

  std::string config_path, out_flag, suite_override;
  auto* run_cmd = app.add_subcommand("run", "Run the suites named in a config file");
  run_cmd->add_option("config", config_path, "JSON experiment config")->required();
  run_cmd->add_option("-o,--output", out_flag,
                      "Report directory (default: $INTERTWINE_OUTPUT_DIR or ./intertwine-report)");
  run_cmd->add_option("-s,--suite", suite_override, "Override the suite named in the config");

  auto* list_cmd = app.add_subcommand("list-suites", "List available suites");

  std::string explain_name;
  auto* explain_cmd = app.add_subcommand("explain", "Describe the identity a suite checks");
  explain_cmd->add_option("suite", explain_name, "Suite name")->required();

  auto* config_cmd = app.add_subcommand("default-config", "Print the default config as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (*run_cmd) return run(config_path, out_flag, suite_override);
    if (*list_cmd) {
      for (const auto& s : intertwine::suite_catalog()) std::cout << s.name << '\n';
      std::cout << "all\n";
      return 0;
    }
    if (*explain_cmd) {
      std::cout << intertwine::explain_suite(explain_name);
      return 0;
    }
    if (*config_cmd) {
      std::cout << intertwine::to_json(intertwine::ExperimentConfig{}).dump(2) << '\n';
      return 0;
    }
  } catch (const intertwine::InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kUsageError;
}
