#pragma once

// Flat "key = value" configuration files. Blank lines and lines starting with
// '#' are ignored. Times carry an explicit unit suffix ("0.5s"); dt may be
// "auto" for the default 1/(4N²).
//
//   name = stationarity
//   N = 16
//   F = 0,0,1
//   T = 0.5s
//   dt = auto
//   seed = 7

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wasb/simulator.hpp"

namespace wasb {

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  std::vector<std::string> problems_;
};

/// Ordered key/value pairs; throws ConfigError on malformed lines or
/// duplicate keys.
std::vector<std::pair<std::string, std::string>> parse_key_values(std::string_view text);

/// "0.5s" → 0.5. Throws ConfigError without the suffix.
double parse_time(std::string_view key, std::string_view value);
bool parse_bool(std::string_view key, std::string_view value);

/// Builds and finalizes a SimConfig. Accepts either a config file or a
/// manifest (whose config echo is used). Every unknown key and every
/// missing required key (N, F, T) is reported in a single ConfigError.
SimConfig parse_sim_config(std::string_view text);
SimConfig load_sim_config(const std::string& path);

/// Keys understood by parse_sim_config.
const std::vector<std::string>& sim_config_keys();

}  // namespace wasb
