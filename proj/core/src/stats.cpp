#include "wasb/stats.hpp"

#include <boost/math/distributions/normal.hpp>

#include <ostream>
#include <stdexcept>

#include "wasb/csv.hpp"

namespace wasb {

StatReport z_gate(std::string name, double estimate, double std_error, double target,
                  double threshold) {
  StatReport r;
  r.name = std::move(name);
  r.estimate = estimate;
  r.std_error = std_error;
  r.target = target;
  r.threshold = threshold;
  const double diff = estimate - target;
  if (std_error > 0.0) {
    r.z = diff / std_error;
    r.pass = std::abs(r.z) <= threshold;
  } else {
    r.z = diff == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
    r.pass = diff == 0.0;
  }
  return r;
}

StatReport tolerance_gate(std::string name, double estimate, double target, double tolerance) {
  StatReport r;
  r.name = std::move(name);
  r.estimate = estimate;
  r.target = target;
  r.threshold = tolerance;
  r.pass = std::abs(estimate - target) <= tolerance;
  return r;
}

StatReport upper_gate(std::string name, double estimate, double bound) {
  StatReport r;
  r.name = std::move(name);
  r.estimate = estimate;
  r.threshold = bound;
  r.pass = estimate <= bound;
  return r;
}

StatReport range_gate(std::string name, double estimate, double lower, double upper) {
  StatReport r;
  r.name = std::move(name);
  r.estimate = estimate;
  r.threshold = upper;
  r.pass = estimate >= lower && estimate <= upper;
  r.detail = "range [" + format_double(lower) + ", " + format_double(upper) + "]";
  return r;
}

const std::vector<std::string>& report_columns() {
  static const std::vector<std::string> cols = {
      "name", "estimate", "std_error", "target", "z",        "threshold", "pass",
      "N",    "M",        "ell",       "separation", "ensemble", "detail"};
  return cols;
}

void write_reports(std::ostream& out, const std::vector<StatReport>& reports) {
  CsvWriter csv(out, report_columns());
  for (const auto& r : reports) {
    csv.cell(r.name)
        .cell(r.estimate)
        .cell(r.std_error)
        .cell(r.target)
        .cell(r.z)
        .cell(r.threshold)
        .cell(r.pass)
        .cell(r.N)
        .cell(r.M)
        .cell(r.ell)
        .cell(r.separation)
        .cell(r.ensemble)
        .cell(r.detail);
    csv.end_row();
  }
}

std::size_t count_passed(const std::vector<StatReport>& reports) {
  std::size_t n = 0;
  for (const auto& r : reports) n += r.pass ? 1 : 0;
  return n;
}

double bonferroni_threshold(std::size_t tests, double sigma) {
  if (tests == 0) throw std::invalid_argument("Bonferroni correction needs at least one test");
  const boost::math::normal_distribution<double> normal;
  const double family_alpha = 2.0 * boost::math::cdf(boost::math::complement(normal, sigma));
  const double per_test = family_alpha / static_cast<double>(tests);
  return boost::math::quantile(boost::math::complement(normal, 0.5 * per_test));
}

void RunningStats::add(double x) noexcept {
  ++n_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += delta * (x - mean_);
}

void RunningStats::merge(const RunningStats& other) noexcept {
  if (other.n_ == 0) return;
  if (n_ == 0) {
    *this = other;
    return;
  }
  const double total = static_cast<double>(n_ + other.n_);
  const double delta = other.mean_ - mean_;
  mean_ += delta * static_cast<double>(other.n_) / total;
  m2_ += other.m2_ + delta * delta * static_cast<double>(n_) * static_cast<double>(other.n_) / total;
  n_ += other.n_;
}

ScalingFit fit_power_law(std::vector<double> x, std::vector<double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("fit_power_law: size mismatch");
  if (x.size() < 4) throw std::invalid_argument("fit_power_law needs at least 4 points");
  const std::size_t n = x.size();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
      throw std::invalid_argument("fit_power_law needs positive data");
    }
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double dn = static_cast<double>(n);
  const double denom = dn * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("fit_power_law needs distinct abscissae");
  ScalingFit fit;
  fit.exponent = (dn * sxy - sx * sy) / denom;
  const double intercept = (sy - fit.exponent * sx) / dn;
  fit.constant = std::exp(intercept);
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = std::log(y[i]) - intercept - fit.exponent * std::log(x[i]);
    rss += r * r;
  }
  fit.residual = std::sqrt(rss / dn);
  fit.x = std::move(x);
  fit.y = std::move(y);
  return fit;
}

}  // namespace wasb
