#include "wasb/manifest.hpp"

#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "wasb/config.hpp"

#ifndef WASB_VERSION
#define WASB_VERSION "unknown"
#endif

namespace wasb {

namespace {

struct DigestDeleter {
  void operator()(EVP_MD_CTX* ctx) const noexcept { EVP_MD_CTX_free(ctx); }
};

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new()) {
    if (!ctx_ || EVP_DigestInit_ex(ctx_.get(), EVP_sha256(), nullptr) != 1) {
      throw std::runtime_error("SHA-256 initialisation failed");
    }
  }
  void update(const void* data, std::size_t size) {
    if (EVP_DigestUpdate(ctx_.get(), data, size) != 1) throw std::runtime_error("SHA-256 update failed");
  }
  std::string hex() {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(ctx_.get(), digest.data(), &len) != 1) {
      throw std::runtime_error("SHA-256 finalisation failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
      out.push_back(kHex[digest[i] >> 4]);
      out.push_back(kHex[digest[i] & 0xF]);
    }
    return out;
  }

 private:
  std::unique_ptr<EVP_MD_CTX, DigestDeleter> ctx_;
};

}  // namespace

std::string sha256_hex(std::string_view data) {
  Sha256 h;
  h.update(data.data(), data.size());
  return h.hex();
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string() + " for hashing");
  Sha256 h;
  std::array<char, 1 << 16> buffer{};
  while (in) {
    in.read(buffer.data(), buffer.size());
    h.update(buffer.data(), static_cast<std::size_t>(in.gcount()));
  }
  return h.hex();
}

std::string_view code_version() noexcept { return WASB_VERSION; }

std::string Manifest::to_text() const {
  std::ostringstream out;
  out << "manifest.format = 1\n"
      << "name = " << name << '\n'
      << "command = " << command << '\n'
      << "version = " << version << '\n'
      << "seed = " << seed << '\n';
  for (const auto& [k, v] : config) out << "config." << k << " = " << v << '\n';
  for (const auto& [k, v] : inputs) out << "input." << k << " = " << v << '\n';
  for (const auto& [k, v] : outputs) out << "output." << k << " = " << v << '\n';
  return out.str();
}

Manifest Manifest::parse(std::string_view text) {
  Manifest m;
  for (const auto& [key, value] : parse_key_values(text)) {
    auto strip = [&key](std::string_view prefix) { return key.substr(prefix.size()); };
    if (key == "manifest.format") {
      if (value != "1") throw std::runtime_error("unsupported manifest format " + value);
    } else if (key == "name") {
      m.name = value;
    } else if (key == "command") {
      m.command = value;
    } else if (key == "version") {
      m.version = value;
    } else if (key == "seed") {
      m.seed = std::stoull(value);
    } else if (key.starts_with("config.")) {
      m.config.emplace_back(strip("config."), value);
    } else if (key.starts_with("input.")) {
      m.inputs.emplace_back(strip("input."), value);
    } else if (key.starts_with("output.")) {
      m.outputs.emplace_back(strip("output."), value);
    } else {
      throw std::runtime_error("unknown manifest key '" + key + "'");
    }
  }
  return m;
}

std::string Manifest::config_text() const {
  std::string out;
  for (const auto& [k, v] : config) out += k + " = " + v + "\n";
  return out;
}

bool is_manifest_text(std::string_view text) {
  return text.find("manifest.format") != std::string_view::npos;
}

}  // namespace wasb
