#pragma once

// Named verification suites behind `wasb verify <suite>`. Each suite returns
// gated reports; a suite passes iff every report passes.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "wasb/analysis.hpp"
#include "wasb/stats.hpp"

namespace wasb {

enum class GridSize { small, full };

GridSize parse_grid(const std::string& text);
std::string to_string(GridSize grid);

struct SuiteOptions {
  GridSize grid = GridSize::small;
  std::uint64_t seed = 1;
  int threads = 0;
  /// Overrides N, F, T, dt and seed of the suite's main simulation where the
  /// suite has one (stationarity, qv).
  std::optional<SimConfig> config;
  /// Negative controls: scales the noise variance of the stationarity
  /// simulations, or replaces c_2 in the variant B residual.
  double noise_variance_scale = 1.0;
  std::optional<double> c2_override;
};

struct SuiteResult {
  std::string suite;
  std::vector<StatReport> reports;
  /// Wall-clock budget gates, kept apart from `reports` so that report CSVs
  /// are reproducible byte for byte.
  std::vector<StatReport> timings;
  /// Filled by bg-scaling.
  std::vector<BgPoint> bg_points;
  /// Filled by qv: martingale and antisymmetric QV by mesh level.
  std::optional<QvStudyResult> qv;
  double seconds = 0.0;

  bool passed() const;
};

const std::vector<std::string>& suite_names();

/// Throws std::invalid_argument for an unknown suite name.
SuiteResult run_suite(const std::string& name, const SuiteOptions& options);

/// The individual suites.
SuiteResult poisson_suite(const SuiteOptions& options);
SuiteResult antisym_suite(const SuiteOptions& options);
SuiteResult stationarity_suite(const SuiteOptions& options);
SuiteResult qv_suite(const SuiteOptions& options);
SuiteResult bg_scaling_suite(const SuiteOptions& options);
SuiteResult kernel_suite(const SuiteOptions& options);

/// Study parameters used for a grid size; exposed so callers can inspect or
/// adjust them.
BgStudyOptions bg_study_options(GridSize grid, std::uint64_t seed, int threads);

void write_bg_points(std::ostream& out, const std::vector<BgPoint>& points);
void write_qv_levels(std::ostream& out, const QvStudyResult& qv);

}  // namespace wasb
