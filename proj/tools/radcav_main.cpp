#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "radcav/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"radcav: cavity-emitter dynamics with radiative loss"};
  app.set_version_flag("--version", RADCAV_VERSION);

  std::string scenario;
  std::string config;
  std::string out_dir = ".";
  bool no_timestamp = false;
  app.add_option("scenario", scenario, "coupling | pump | single-photon | ae-compare | spectrum | driven")
      ->required();
  app.add_option("--config", config, "configuration file")->required();
  app.add_option("--out", out_dir, "output directory");
  app.add_flag("--no-timestamp", no_timestamp, "omit the timestamp from CSV headers");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  return radcav::cli::run_file(scenario, config, out_dir, !no_timestamp, std::cout, std::cerr);
}
