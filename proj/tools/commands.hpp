#pragma once

// Subcommands of the wasb tool. Each returns the process exit code.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace wasb::cli {

enum ExitCode : int {
  kOk = 0,
  kGateFailed = 1,
  kUsage = 2,
  kBlowup = 3,
  kIoError = 4,
};

struct CommonOptions {
  std::string config;
  /// Output directory; the working directory when unset.
  std::optional<std::filesystem::path> out;
  std::optional<std::uint64_t> seed;
  int threads = 0;
  std::optional<std::string> grid;
};

struct VerifyOptions {
  std::string suite;
  std::optional<double> noise_variance_scale;
  std::optional<double> c2;
};

int cmd_simulate(const CommonOptions& common, std::ostream& out, std::ostream& err);
int cmd_hermite(const CommonOptions& common, const std::string& coefficients, int nmax,
                std::ostream& out, std::ostream& err);
int cmd_verify(const CommonOptions& common, const VerifyOptions& verify, std::ostream& out,
               std::ostream& err);
int cmd_qv(const CommonOptions& common, std::ostream& out, std::ostream& err);
int cmd_bg_scaling(const CommonOptions& common, const VerifyOptions& verify, std::ostream& out,
                   std::ostream& err);
int cmd_report(const std::vector<std::string>& files, std::ostream& out, std::ostream& err);

}  // namespace wasb::cli
