#pragma once

#include <cmath>
#include <cstddef>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace wasb {

inline constexpr double kNoTarget = std::numeric_limits<double>::quiet_NaN();

/// One gated Monte Carlo or exact check.
struct StatReport {
  std::string name;
  double estimate = 0.0;
  double std_error = 0.0;
  /// NaN when the check has no target value (e.g. a bound).
  double target = kNoTarget;
  /// (estimate - target) / std_error when a target exists, else NaN.
  double z = kNoTarget;
  /// |z| limit, or the bound / tolerance for non-statistical gates.
  double threshold = 0.0;
  bool pass = false;

  int N = 0;
  int M = 0;
  int ell = 0;
  double separation = kNoTarget;
  std::size_t ensemble = 0;
  std::string detail;
};

/// |estimate - target| ≤ threshold · std_error.
StatReport z_gate(std::string name, double estimate, double std_error, double target,
                  double threshold);
/// |estimate - target| ≤ tolerance, no statistics involved.
StatReport tolerance_gate(std::string name, double estimate, double target, double tolerance);
/// estimate ≤ bound.
StatReport upper_gate(std::string name, double estimate, double bound);
/// lower ≤ estimate ≤ upper.
StatReport range_gate(std::string name, double estimate, double lower, double upper);

/// Column order of write_reports.
const std::vector<std::string>& report_columns();
void write_reports(std::ostream& out, const std::vector<StatReport>& reports);
std::size_t count_passed(const std::vector<StatReport>& reports);

/// Two-sided |z| threshold for m simultaneous tests at a family-wise error
/// rate equal to that of a single 4σ test (Bonferroni).
double bonferroni_threshold(std::size_t tests, double sigma = 4.0);

/// Welford accumulator; merge() combines partial results in a fixed order.
class RunningStats {
 public:
  void add(double x) noexcept;
  void merge(const RunningStats& other) noexcept;

  std::size_t count() const noexcept { return n_; }
  double mean() const noexcept { return mean_; }
  double variance() const noexcept { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
  double std_error() const noexcept {
    return n_ > 1 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
  }

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// y ≈ constant · x^exponent by least squares in log-log coordinates.
struct ScalingFit {
  std::vector<double> x;
  std::vector<double> y;
  double exponent = 0.0;
  double constant = 0.0;
  /// Root-mean-square residual of log y.
  double residual = 0.0;
};

/// Requires at least four points with positive coordinates.
ScalingFit fit_power_law(std::vector<double> x, std::vector<double> y);

}  // namespace wasb
