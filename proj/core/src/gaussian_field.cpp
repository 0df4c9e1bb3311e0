#include "wasb/gaussian_field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wasb {

namespace {
constexpr double kPi = std::numbers::pi;
}

double coupling_epsilon(int cutoff) {
  if (cutoff < 1) throw std::invalid_argument("cutoff must be >= 1");
  return kPi / cutoff;
}

FourierField sample_mu_eps(int cutoff, CounterRng& rng) {
  if (cutoff < 1) throw std::invalid_argument("cutoff must be >= 1");
  FourierField eta(cutoff);
  const double s = std::sqrt(0.5);
  for (int k = 1; k <= cutoff; ++k) {
    const double re = rng.normal();
    const double im = rng.normal();
    eta.at(k) = cplx(s * re, s * im);
  }
  return eta;
}

FourierField sample_mu_eps(int cutoff, NoiseSeed seed) {
  CounterRng rng(seed);
  return sample_mu_eps(cutoff, rng);
}

double covariance_kernel_direct(int modes, double x) {
  double sum = 0.0;
  for (int k = 1; k <= modes; ++k) sum += std::cos(k * x);
  return 2.0 * sum;
}

double covariance_kernel(int modes, double x) {
  if (modes < 1) throw std::invalid_argument("kernel needs M >= 1");
  // Half-angle forms of the numerator and of 1 - cos x avoid the cancellation
  // of the plain differences near x = 0.
  const double half = std::sin(0.5 * x);
  const double denom = 2.0 * half * half;
  if (std::abs(denom) < 1e-6) return covariance_kernel_direct(modes, x);
  const double numer = 2.0 * std::sin((modes + 0.5) * x) * half;
  return numer / denom - 1.0;
}

KernelBoundReport kernel_bound_check(int modes, int grid_points) {
  if (modes < 1) throw std::invalid_argument("kernel needs M >= 1");
  // kernel² has degree 2M; 4M + 8 uniform points integrate it exactly, and a
  // finer grid resolves the pointwise supremum.
  if (grid_points <= 0) grid_points = std::max(64 * modes, 4096);
  grid_points = std::max(grid_points, 4 * modes + 8);

  KernelBoundReport r;
  r.modes = modes;
  double sum_sq = 0.0;
  double sup_ratio = 0.0;
  double sup_abs = 0.0;
  const double h = 2.0 * kPi / grid_points;
  for (int j = 0; j < grid_points; ++j) {
    const double x = j * h;
    const double value = covariance_kernel(modes, x);
    sum_sq += value * value;
    const double dist = std::min(x, 2.0 * kPi - x);
    const double envelope =
        dist > 0.0 ? std::min(static_cast<double>(modes), 1.0 / dist) : modes;
    sup_ratio = std::max(sup_ratio, std::abs(value) / envelope);
    sup_abs = std::max(sup_abs, std::abs(value));
  }
  // ∬ f(x - x') dx dx' = 2π ∫ f(y) dy by translation invariance.
  r.double_integral = 2.0 * kPi * sum_sq * h;
  r.exact_double_integral = 4.0 * kPi * kPi * 2.0 * modes;
  r.integral_over_m = r.double_integral / modes;
  r.fitted_constant = sup_ratio;
  r.max_over_2m = sup_abs / (2.0 * modes);
  r.pointwise_ok = r.max_over_2m <= 1.0 + 1e-12;
  return r;
}

}  // namespace wasb
