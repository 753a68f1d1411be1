// Command-line driver: run, sweep, verify, mms.

#include <iostream>

#include <CLI11.hpp>

#include "thermoplast/cli_io.hpp"

using namespace thermoplast;

namespace {

ModelConfig resolve_config(const std::string& path, const std::string& scenario) {
  if (!path.empty()) return load_config(path);
  return parse_config(scenario.empty() ? std::string() : "scenario = " + scenario + "\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"thermo-elasto-plastic structured-grid simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string scenario;
  std::string out_dir = "out";
  unsigned seed = 12345;
  std::vector<double> lambdas;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", config_path, "config file (section.key = value lines)");
    sub->add_option("-s,--scenario", scenario, "built-in scenario when no config file is given")
        ->check(CLI::IsMember(scenario_names()));
    sub->add_option("-o,--out", out_dir, "output directory");
  };

  CLI::App* run = app.add_subcommand("run", "run one simulation");
  add_common(run);
  CLI::App* sweep = app.add_subcommand("sweep", "run a decreasing list of lambda values");
  add_common(sweep);
  sweep->add_option("-l,--lambdas", lambdas, "lambda values, decreasing")->required()->delimiter(',');
  CLI::App* verify = app.add_subcommand("verify", "sampling-based property suites");
  verify->add_option("--seed", seed, "random seed");
  CLI::App* mms = app.add_subcommand("mms", "manufactured-solution convergence studies");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and friends exit 0; usage errors count as configuration errors
    return app.exit(e) == 0 ? exit_ok : exit_config;
  }

  RunManifest m;
  m.output_dir = out_dir;
  m.seed = seed;
  try {
    if (run->parsed() || sweep->parsed()) {
      m.config_path = config_path;
      m.config = resolve_config(config_path, scenario);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_config;
  }

  try {
    if (run->parsed()) {
      m.command = "run";
      return cmd_run(m, std::cout);
    }
    if (sweep->parsed()) {
      m.command = "sweep";
      return cmd_sweep(m, lambdas, std::cout);
    }
    if (verify->parsed()) {
      m.command = "verify";
      return cmd_verify(m, std::cout);
    }
    if (mms->parsed()) {
      m.command = "mms";
      return cmd_mms(m, std::cout);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_config;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_solver;
  }
  return exit_ok;
}
