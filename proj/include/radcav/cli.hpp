#pragma once

// Config-file driven scenario runner behind the `radcav` executable.

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace radcav::cli {

enum class ValueType { Real, Integer, Complex, Bool, Vec3, Text, RealList };

struct KeySpec {
  std::string name;
  ValueType type;
  std::string help;
};

/// Every key a config file may contain.
const std::vector<KeySpec>& schema();

/// `key = value` lines; `#` starts a comment. Unknown keys, malformed lines,
/// duplicates and values of the wrong type are errors.
struct ConfigFile {
  std::map<std::string, std::string> values;
  std::map<std::string, int> lines;
};

ConfigFile parse_config(std::string_view text);
ConfigFile load_config(const std::string& path);

enum class Scenario { Coupling, Pump, SinglePhoton, AeCompare, Spectrum, Driven };

std::optional<Scenario> parse_scenario(std::string_view name);
std::string scenario_name(Scenario s);
const std::vector<std::string>& scenario_names();

struct RunConfig {
  Scenario scenario = Scenario::Coupling;
  ConfigFile config;
  std::string config_dir = ".";  // base for relative pattern files
  std::string out_dir = ".";
  bool timestamp = true;
};

/// Runs one scenario and writes its artifacts into out_dir. Everything is
/// computed before the first file is written. Returns 0, 1 for configuration
/// errors or 2 for numerical failures; messages go to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Loads `config_path` and runs; a missing or unreadable file is exit 1.
int run_file(std::string_view scenario, const std::string& config_path, const std::string& out_dir,
             bool timestamp, std::ostream& out, std::ostream& err);

}  // namespace radcav::cli
