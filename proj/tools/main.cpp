#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"
#include "twotier/error.hpp"

using namespace twotier::cli;

int main(int argc, char** argv) {
  CLI::App app{"Two-tier macro/femtocell outage and capacity"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::size_t> trials;
  std::optional<std::size_t> configs;
  app.add_option("--config", config_path, "run configuration file (key = value)");
  app.add_option("--seed", seed, "master seed");
  app.add_option("--out", out, "output directory");
  app.add_option("--trials", trials, "Monte Carlo trials per check or sweep point");
  app.add_option("--configs", configs, "femtocell configurations per analytic point");

  // Global flags are accepted after the subcommand too.
  app.fallthrough();
  for (const char* name : {"fit-ratios", "outage-sweep", "capacity-sweep", "validate"}) {
    app.add_subcommand(name);
  }
  app.get_subcommand("fit-ratios")->description("fit log-normal surrogates; write fits and pdf tables");
  app.get_subcommand("outage-sweep")->description("analytic and simulated outage against distance");
  app.get_subcommand("capacity-sweep")->description("spatial throughput and transmission capacity");
  app.get_subcommand("validate")->description("run the oracle checks and write a report");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfigError;
  }

  RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = load_run_config(config_path);
    if (seed) cfg.seed = *seed;
    if (out) cfg.out = *out;
    if (trials) cfg.trials = *trials;
    if (configs) cfg.configs = *configs;
    cfg.validate();
  } catch (const twotier::InvalidConfiguration& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }
  return run_command(app.get_subcommands().front()->get_name(), cfg, std::cerr);
}
