#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "wasb/gaussian_field.hpp"
#include "wasb/stats.hpp"

namespace {

constexpr double kPi = std::numbers::pi;

TEST(GaussianField, CouplingGivesUnitPointwiseVariance) {
  for (int n : {4, 16, 64}) {
    const double eps = wasb::coupling_epsilon(n);
    // Var(u(x)) = Σ_{0<|k|≤N} E|η_k|² / (2π) = 2N / (2π).
    EXPECT_NEAR(eps * 2.0 * n / (2.0 * kPi), 1.0, 1e-15);
  }
  EXPECT_THROW(wasb::coupling_epsilon(0), std::invalid_argument);
}

TEST(GaussianField, SampleMomentsMatchWhiteNoise) {
  const int n = 8;
  wasb::RunningStats abs2, re2, sq_re, point;
  for (std::uint64_t s = 0; s < 20000; ++s) {
    const auto eta = wasb::sample_mu_eps(n, wasb::NoiseSeed{9, s});
    abs2.add(std::norm(eta(3)));
    re2.add(eta(3).real() * eta(3).real());
    sq_re.add((eta(2) * eta(2)).real());
    const double x = std::sqrt(wasb::coupling_epsilon(n)) * oracle::eval_field(eta, 0.4);
    point.add(x * x);
  }
  EXPECT_LT(std::abs(abs2.mean() - 1.0) / abs2.std_error(), 5.0);
  EXPECT_LT(std::abs(re2.mean() - 0.5) / re2.std_error(), 5.0);
  EXPECT_LT(std::abs(sq_re.mean()) / sq_re.std_error(), 5.0);
  EXPECT_LT(std::abs(point.mean() - 1.0) / point.std_error(), 5.0);
}

TEST(GaussianField, SampleIsReproducible) {
  EXPECT_EQ(wasb::sample_mu_eps(16, wasb::NoiseSeed{1, 2}),
            wasb::sample_mu_eps(16, wasb::NoiseSeed{1, 2}));
  EXPECT_NE(wasb::sample_mu_eps(16, wasb::NoiseSeed{1, 2}),
            wasb::sample_mu_eps(16, wasb::NoiseSeed{1, 3}));
}

TEST(GaussianField, KernelClosedFormMatchesDirectSum) {
  for (int m : {1, 2, 16, 100, 512}) {
    for (int j = 0; j < 500; ++j) {
      const double x = -7.0 + 14.0 * j / 499.0;
      const double direct = wasb::covariance_kernel_direct(m, x);
      EXPECT_NEAR(wasb::covariance_kernel(m, x), direct, 1e-9 * std::max(1.0, std::abs(direct)))
          << "M=" << m << " x=" << x;
    }
    EXPECT_NEAR(wasb::covariance_kernel(m, 0.0), 2.0 * m, 1e-12);
    EXPECT_NEAR(wasb::covariance_kernel(m, 2.0 * kPi), 2.0 * m, 1e-9);
  }
}

TEST(GaussianField, KernelIsCovarianceOfProjectedNoise) {
  // E[u(x) u(y)] = kernel(M, x - y) / (2π) for u = Π_0^M η.
  const int m = 6;
  const double x = 0.3, y = 1.9;
  wasb::RunningStats rs;
  for (std::uint64_t s = 0; s < 40000; ++s) {
    const auto eta = wasb::sample_mu_eps(m, wasb::NoiseSeed{21, s});
    rs.add(oracle::eval_field(eta, x) * oracle::eval_field(eta, y));
  }
  const double target = wasb::covariance_kernel(m, x - y) / (2.0 * kPi);
  EXPECT_LT(std::abs(rs.mean() - target) / rs.std_error(), 5.0);
}

TEST(GaussianField, KernelBoundReport) {
  for (int m : {16, 64, 512}) {
    const auto r = wasb::kernel_bound_check(m);
    EXPECT_TRUE(r.pointwise_ok);
    EXPECT_LE(r.max_over_2m, 1.0 + 1e-12);
    EXPECT_NEAR(r.double_integral / r.exact_double_integral, 1.0, 1e-8);
    EXPECT_NEAR(r.exact_double_integral, 4.0 * kPi * kPi * 2.0 * m, 1e-9);
    // |kernel| ≤ min{2M, 1 + π/|x|} on |x| ≤ π, so the ratio to min{M, 1/|x|} is at most 2π.
    EXPECT_LE(r.fitted_constant, 2.0 * kPi);
  }
}

}  // namespace
