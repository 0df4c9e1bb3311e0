#include "wasb/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "wasb/manifest.hpp"

namespace wasb {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += "; ";
    out += items[i];
  }
  return out;
}

double parse_number(std::string_view key, std::string_view value) {
  double v = 0.0;
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError({"key '" + std::string(key) + "': expected a number, got '" +
                       std::string(value) + "'"});
  }
  return v;
}

template <class Int>
Int parse_integer(std::string_view key, std::string_view value) {
  Int v{};
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError({"key '" + std::string(key) + "': expected an integer, got '" +
                       std::string(value) + "'"});
  }
  return v;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error("config error: " + join(problems)), problems_(std::move(problems)) {}

std::vector<std::pair<std::string, std::string>> parse_key_values(std::string_view text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::set<std::string> seen;
  std::vector<std::string> problems;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const std::string_view raw = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      problems.push_back("line " + std::to_string(line_no) + ": expected 'key = value'");
      continue;
    }
    std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) {
      problems.push_back("line " + std::to_string(line_no) + ": empty key");
      continue;
    }
    if (!seen.insert(key).second) {
      problems.push_back("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
      continue;
    }
    out.emplace_back(std::move(key), std::move(value));
  }
  if (!problems.empty()) throw ConfigError(std::move(problems));
  return out;
}

double parse_time(std::string_view key, std::string_view value) {
  if (value.empty() || value.back() != 's') {
    throw ConfigError({"key '" + std::string(key) + "': time values need a unit suffix, e.g. '" +
                       std::string(value) + "s'"});
  }
  return parse_number(key, trim(value.substr(0, value.size() - 1)));
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw ConfigError({"key '" + std::string(key) + "': expected true or false, got '" +
                     std::string(value) + "'"});
}

const std::vector<std::string>& sim_config_keys() {
  static const std::vector<std::string> keys = {
      "name",          "N",           "F",           "T",
      "dt",            "oversample",  "seed",        "ensemble",
      "record_drift",  "record_noise", "blowup_threshold", "subtract_c1",
      "noise_variance_scale", "allow_large_dt", "scheme"};
  return keys;
}

SimConfig parse_sim_config(std::string_view text) {
  std::string config_text;
  if (is_manifest_text(text)) {
    config_text = Manifest::parse(text).config_text();
    text = config_text;
  }
  const auto pairs = parse_key_values(text);
  const auto& known = sim_config_keys();

  std::vector<std::string> problems;
  for (const auto& [k, v] : pairs) {
    if (std::find(known.begin(), known.end(), k) == known.end()) {
      problems.push_back("unknown key '" + k + "'");
    }
  }
  for (const char* required : {"N", "F", "T"}) {
    const bool present = std::any_of(pairs.begin(), pairs.end(),
                                     [&](const auto& kv) { return kv.first == required; });
    if (!present) problems.push_back(std::string("missing required key '") + required + "'");
  }
  if (!problems.empty()) throw ConfigError(std::move(problems));

  SimConfig cfg;
  for (const auto& [k, v] : pairs) {
    try {
      if (k == "name") {
        cfg.name = v;
      } else if (k == "N") {
        cfg.N = parse_integer<int>(k, v);
      } else if (k == "F") {
        cfg.F = Polynomial::parse(v);
      } else if (k == "T") {
        cfg.T = parse_time(k, v);
      } else if (k == "dt") {
        cfg.dt = v == "auto" ? 0.0 : parse_time(k, v);
      } else if (k == "oversample") {
        cfg.oversample = parse_integer<int>(k, v);
      } else if (k == "seed") {
        cfg.seed = parse_integer<std::uint64_t>(k, v);
      } else if (k == "ensemble") {
        cfg.ensemble = parse_integer<int>(k, v);
      } else if (k == "record_drift") {
        cfg.record_drift = parse_bool(k, v);
      } else if (k == "record_noise") {
        cfg.record_noise = parse_bool(k, v);
      } else if (k == "blowup_threshold") {
        cfg.blowup_threshold = parse_number(k, v);
      } else if (k == "subtract_c1") {
        cfg.subtract_c1 = parse_bool(k, v);
      } else if (k == "noise_variance_scale") {
        cfg.noise_variance_scale = parse_number(k, v);
      } else if (k == "allow_large_dt") {
        cfg.allow_large_dt = parse_bool(k, v);
      } else if (k == "scheme") {
        if (v != "exponential-euler") {
          throw ConfigError({"key 'scheme': only 'exponential-euler' is supported"});
        }
      }
    } catch (const ConfigError& e) {
      problems.insert(problems.end(), e.problems().begin(), e.problems().end());
    } catch (const std::invalid_argument& e) {
      problems.push_back("key '" + k + "': " + e.what());
    }
  }
  if (!problems.empty()) throw ConfigError(std::move(problems));
  try {
    cfg.finalize();
  } catch (const std::invalid_argument& e) {
    throw ConfigError({e.what()});
  }
  return cfg;
}

SimConfig load_sim_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot open config file '" + path + "'"});
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_sim_config(buf.str());
}

}  // namespace wasb
