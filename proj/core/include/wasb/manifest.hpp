#pragma once

// Run manifests: a flat "key = value" record of what produced a set of
// outputs, with SHA-256 content hashes so re-runs can be compared byte for
// byte.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace wasb {

std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);

/// Library version string baked in at build time.
std::string_view code_version() noexcept;

struct Manifest {
  using Entry = std::pair<std::string, std::string>;

  std::string name;
  std::string command;
  std::string version;
  std::uint64_t seed = 0;
  /// Echo of the effective configuration, written as config.<key> lines.
  std::vector<Entry> config;
  /// File name and SHA-256 of every input and output.
  std::vector<Entry> inputs;
  std::vector<Entry> outputs;

  std::string to_text() const;
  static Manifest parse(std::string_view text);
  /// Re-assembles the config echo as a plain config file.
  std::string config_text() const;
};

/// True if the text looks like a manifest rather than a plain config.
bool is_manifest_text(std::string_view text);

}  // namespace wasb
