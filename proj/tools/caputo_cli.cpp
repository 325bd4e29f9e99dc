#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "caputo/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Caputo fractional derivatives via the diffusive representation"};
  std::string config_path;
  app.add_option("config", config_path, "Experiment config (key = value lines)")->required();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : caputo::kExitConfigError;
  }

  std::ifstream in(config_path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot read " << config_path << '\n';
    return caputo::kExitConfigError;
  }
  std::ostringstream text;
  text << in.rdbuf();
  return caputo::run_config_text(text.str(), std::cout, std::cerr);
}
