// Batch front end: `balanced_cli run <config>` and `balanced_cli verify <config>`.

#include <iostream>

#include "CLI11.hpp"
#include "balanced/driver.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Balanced metrics on vector bundles over P1 and P2 by T-operator iteration"};
  app.require_subcommand(1);

  std::string run_config;
  auto* run = app.add_subcommand("run", "iterate T and write the trace CSV and result JSON");
  run->add_option("config", run_config, "run configuration file")->required();

  std::string verify_config;
  auto* verify = app.add_subcommand("verify", "run the invariant checks on the configured bundle");
  verify->add_option("config", verify_config, "run configuration file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : balanced::kExitInvalidInput;
  }

  if (*run) return balanced::run_command(run_config, std::cout, std::cerr);
  return balanced::verify_command(verify_config, std::cout, std::cerr);
}
