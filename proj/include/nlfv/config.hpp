#pragma once

#include "nlfv/harness.hpp"
#include "nlfv/solver1d.hpp"
#include "nlfv/solver2d.hpp"

#include <map>
#include <string>
#include <vector>

namespace nlfv {

/// `key = value` text grouped in `[section]` headers; `#` and `;` start comments.
struct IniValue {
  std::string value;
  int line = 0;
};

class IniFile {
 public:
  static IniFile parse(const std::string& text, const std::string& path);
  static IniFile load(const std::string& path);

  const std::string& path() const { return path_; }
  bool has(const std::string& section, const std::string& key) const;
  const IniValue* find(const std::string& section, const std::string& key) const;
  /// Every (section, key) in file order.
  const std::vector<std::pair<std::string, std::string>>& keys() const { return order_; }
  int line_of(const std::string& section, const std::string& key) const;

 private:
  std::string path_;
  std::map<std::string, std::map<std::string, IniValue>> data_;
  std::vector<std::pair<std::string, std::string>> order_;
};

struct OutputConfig {
  std::string dir = "out";
  std::string prefix;  ///< defaults to the config file stem
  bool svg = true;
  bool pgm = true;
};

struct StudyConfig {
  int levels = 4;
  std::optional<double> dx0;
  std::vector<double> etas{0.0625, 0.03125, 0.015625};
};

/// Fully resolved contents of a config file.
struct Config {
  int dimension = 1;
  RunConfig1D run1d;
  RunConfig2D run2d;
  std::vector<double> snapshots;
  OutputConfig output;
  StudyConfig study;
  std::string source;
  std::string initial_name;
  std::string kernel_name;

  /// Rebuilds the grid so that dx = dx0 on the current extent.
  void set_dx(double dx);
};

/// Parses and resolves a config. Errors are ConfigError with "path:line: ...".
Config parse_config(const std::string& path);
Config parse_config_text(const std::string& text, const std::string& path = "<string>",
                         const std::string& base_dir = ".");

/// Comma separated list of reals.
std::vector<double> parse_real_list(const std::string& s, const std::string& where);

/// Resolved config as a JSON object (used for the echo and the manifest).
std::string config_json(const Config& c);

}  // namespace nlfv
