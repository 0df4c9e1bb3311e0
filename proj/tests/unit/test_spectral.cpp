#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "wasb/gaussian_field.hpp"
#include "wasb/rng.hpp"
#include "wasb/spectral.hpp"

namespace {

using wasb::cplx;
using wasb::FourierField;

FourierField random_field(int n, std::uint64_t stream) {
  wasb::CounterRng rng(11, stream);
  FourierField u(n);
  for (int k = 1; k <= n; ++k) u.at(k) = cplx(rng.normal(), rng.normal());
  return u;
}

TEST(Spectral, NegativeModesAreConjugates) {
  const FourierField u = random_field(6, 0);
  for (int k = 1; k <= 6; ++k) EXPECT_EQ(u(-k), std::conj(u(k)));
  EXPECT_EQ(u(0), cplx{});
  EXPECT_EQ(u(7), cplx{});
  EXPECT_EQ(u(-7), cplx{});
}

TEST(Spectral, ToGridMatchesNaiveSum) {
  for (int n : {1, 3, 8, 17}) {
    const FourierField u = random_field(n, static_cast<std::uint64_t>(n));
    const int g = wasb::default_grid_size(n);
    const wasb::GridField grid = wasb::to_grid(u, g);
    ASSERT_EQ(grid.size(), g);
    for (int j = 0; j < g; ++j) {
      EXPECT_NEAR(grid.samples[static_cast<std::size_t>(j)],
                  oracle::eval_field(u, wasb::GridField::node(j, g)), 1e-12)
          << "n=" << n << " j=" << j;
    }
  }
}

TEST(Spectral, FromGridMatchesNaiveCoefficients) {
  const int g = 64;
  std::vector<double> samples(g);
  wasb::CounterRng rng(5, 0);
  for (double& s : samples) s = rng.normal();
  const FourierField hat = wasb::from_grid(wasb::GridField{samples}, 20);
  for (int k = 1; k <= 20; ++k) {
    EXPECT_LT(std::abs(hat(k) - oracle::coefficient(samples, k)), 1e-12) << k;
  }
}

TEST(Spectral, GridRoundTrip) {
  for (int n : {2, 7, 32, 100}) {
    const FourierField u = random_field(n, 40 + static_cast<std::uint64_t>(n));
    const FourierField back = wasb::from_grid(wasb::to_grid(u, wasb::default_grid_size(n)), n);
    for (int k = 1; k <= n; ++k) EXPECT_LT(std::abs(back(k) - u(k)), 1e-12);
  }
}

TEST(Spectral, ToGridRejectsBadSizes) {
  const FourierField u = random_field(8, 1);
  EXPECT_THROW(wasb::to_grid(u, 16), std::invalid_argument);  // below 2N + 2
  EXPECT_THROW(wasb::to_grid(u, 24), std::invalid_argument);  // not a power of two
}

TEST(Spectral, ProjectionIsIdempotent) {
  const FourierField u = random_field(16, 2);
  const FourierField p = wasb::project(u, 9);
  EXPECT_EQ(p.cutoff(), 9);
  EXPECT_EQ(wasb::project(p, 9), p);
  for (int k = 1; k <= 9; ++k) EXPECT_EQ(p(k), u(k));
  EXPECT_EQ(p(10), cplx{});
}

TEST(Spectral, ParsevalAndInnerProduct) {
  const FourierField u = random_field(12, 3);
  const FourierField v = random_field(12, 4);
  const int g = wasb::default_grid_size(12);
  const auto gu = wasb::to_grid(u, g);
  const auto gv = wasb::to_grid(v, g);
  double quad_uv = 0.0, quad_uu = 0.0;
  for (int j = 0; j < g; ++j) {
    quad_uv += gu.samples[j] * gv.samples[j];
    quad_uu += gu.samples[j] * gu.samples[j];
  }
  quad_uv *= 2.0 * std::numbers::pi / g;
  quad_uu *= 2.0 * std::numbers::pi / g;
  const cplx ip = wasb::inner_product(u, v);
  EXPECT_NEAR(ip.real(), quad_uv, 1e-10);
  EXPECT_NEAR(ip.imag(), 0.0, 1e-12);
  EXPECT_NEAR(wasb::l2_norm_squared(u), quad_uu, 1e-10);
}

TEST(Spectral, DerivativeMatchesFiniteDifference) {
  const FourierField u = random_field(5, 6);
  const FourierField du = wasb::derivative(u);
  const double h = 1e-5;
  for (double x : {0.1, 1.3, 4.0}) {
    const double fd = (oracle::eval_field(u, x + h) - oracle::eval_field(u, x - h)) / (2 * h);
    EXPECT_NEAR(oracle::eval_field(du, x), fd, 1e-6);
  }
}

TEST(Spectral, PhaseShiftTranslates) {
  const FourierField u = random_field(6, 7);
  const double a = 0.7;
  const FourierField v = wasb::phase_shift(u, a);
  for (double x : {0.0, 2.0, 5.5}) {
    EXPECT_NEAR(oracle::eval_field(v, x), oracle::eval_field(u, x - a), 1e-12);
  }
}

TEST(Spectral, LittlewoodPaleyBlocksPartitionModes) {
  for (int k = 1; k <= 300; ++k) {
    int hits = 0;
    for (int q = -1; q <= 10; ++q) hits += wasb::in_lp_block(k, q) ? 1 : 0;
    EXPECT_EQ(hits, 1) << k;
  }
  const FourierField u = random_field(40, 8);
  FourierField sum(40);
  for (int q = -1; q <= 6; ++q) sum += wasb::project(wasb::lp_block(u, q), 40);
  for (int k = 1; k <= 40; ++k) EXPECT_EQ(sum(k), u(k));
}

TEST(Spectral, SobolevNormOfSingleMode) {
  const FourierField u = FourierField::mode(10, 3, cplx(2.0, 0.0));
  // Both signs contribute |3|^{2s}·4.
  EXPECT_NEAR(wasb::sobolev_norm(u, 1.0), std::sqrt(2 * 9.0 * 4.0), 1e-12);
  EXPECT_NEAR(std::pow(wasb::sobolev_norm(u, 0.0), 2), wasb::l2_norm_squared(u), 1e-12);
  EXPECT_NEAR(wasb::l2_norm_squared(u), 8.0, 1e-12);
}

TEST(Spectral, AliasFreeGridSizes) {
  EXPECT_EQ(wasb::next_pow2(1), 1);
  EXPECT_EQ(wasb::next_pow2(17), 32);
  for (int n : {4, 16, 33}) {
    for (int d : {1, 2, 3, 4}) {
      const int g = wasb::alias_free_grid_size(n, d);
      EXPECT_GT(g, (d + 1) * n);
      EXPECT_GE(g, wasb::default_grid_size(n));
      EXPECT_EQ(g & (g - 1), 0);
    }
  }
}

}  // namespace
