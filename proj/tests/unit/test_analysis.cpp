#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "wasb/analysis.hpp"
#include "wasb/gaussian_field.hpp"
#include "wasb/generator.hpp"
#include "wasb/parallel.hpp"
#include "wasb/stats.hpp"

namespace {

using wasb::cplx;
using wasb::Polynomial;

constexpr double kPi = std::numbers::pi;

wasb::SimConfig config(int n, Polynomial f, double t, std::uint64_t seed) {
  wasb::SimConfig cfg;
  cfg.N = n;
  cfg.F = std::move(f);
  cfg.T = t;
  cfg.seed = seed;
  cfg.finalize();
  return cfg;
}

// Ordered pairs (a, b) with a + b = ℓ and 0 < |a|, |b| ≤ M.
int pair_count(int M, int ell) {
  int count = 0;
  for (int a = -M; a <= M; ++a) {
    const int b = ell - a;
    if (a != 0 && b != 0 && std::abs(b) <= M) ++count;
  }
  return count;
}

TEST(Burgers, MatchesPairSumOracle) {
  const auto u = wasb::sample_mu_eps(16, wasb::NoiseSeed{70, 0});
  for (int M : {1, 4, 16}) {
    for (int ell : {1, 2, 5}) {
      EXPECT_LT(std::abs(wasb::burgers_mode(u, M, ell) - oracle::burgers(u, M, ell)), 1e-12);
    }
  }
  const auto field = wasb::burgers_field(u, 6);
  for (int ell = 1; ell <= field.cutoff(); ++ell) {
    EXPECT_LT(std::abs(field(ell) - wasb::burgers_mode(u, 6, ell)), 1e-12);
  }
}

TEST(Burgers, VanishesBeyondTwiceTheBand) {
  const auto u = wasb::sample_mu_eps(32, wasb::NoiseSeed{71, 0});
  for (int M : {2, 5, 8}) {
    for (int ell = 2 * M + 1; ell <= 32; ++ell) EXPECT_EQ(wasb::burgers_mode(u, M, ell), cplx{});
  }
}

TEST(Burgers, StationarySecondMoment) {
  // E|∂_x Π(Π_M η)²(ℓ)|² = ℓ² · 2P(M, ℓ) / (2π) under μ^ε.
  const int M = 5, ell = 3;
  wasb::RunningStats rs;
  for (std::uint64_t s = 0; s < 20000; ++s) {
    rs.add(std::norm(wasb::burgers_mode(wasb::sample_mu_eps(8, wasb::NoiseSeed{72, s}), M, ell)));
  }
  const double target = ell * ell * 2.0 * pair_count(M, ell) / (2.0 * kPi);
  EXPECT_LT(std::abs(rs.mean() - target) / rs.std_error(), 5.0);
}

struct IncrementMoments {
  std::vector<double> by_m;       // E|∫_0^τ burgers_M|²
  std::vector<double> cauchy;     // E|∫_0^τ (burgers_{2M} - burgers_M)|²
};

IncrementMoments increment_moments(const std::vector<int>& ms, int ell) {
  const auto cfg = config(32, Polynomial({0, 0, 1}), 1.0 / 16, 73);
  const auto per = wasb::parallel_map(300, 0, [&](std::size_t i) {
    auto c = cfg;
    c.record_noise = false;
    const auto traj = wasb::simulate(c, i);
    std::vector<double> out;
    for (int M : ms) {
      const cplx a = wasb::burgers_integral(traj, M, ell).back();
      const cplx b = wasb::burgers_integral(traj, 2 * M, ell).back();
      out.push_back(std::norm(a));
      out.push_back(std::norm(b - a));
    }
    return out;
  });
  IncrementMoments res;
  for (std::size_t m = 0; m < ms.size(); ++m) {
    wasb::RunningStats a, b;
    for (const auto& row : per) {
      a.add(row[2 * m]);
      b.add(row[2 * m + 1]);
    }
    res.by_m.push_back(a.mean());
    res.cauchy.push_back(b.mean());
  }
  return res;
}

TEST(Burgers, IncrementsBoundedUniformlyInM) {
  const std::vector<int> ms = {2, 4, 8, 16};
  const int ell = 1;
  const double tau = 1.0 / 16;
  const auto r = increment_moments(ms, ell);
  // Cauchy–Schwarz and stationarity give E|∫_0^τ b_M|² ≤ τ² ℓ² 2P(M,ℓ)/(2π) ≤ τ² ℓ² 2M/π.
  for (std::size_t m = 0; m < ms.size(); ++m) {
    const double scaled = r.by_m[m] / (ell * ell * tau * tau * ms[m]);
    EXPECT_LE(scaled, 1.1 * 2.0 / kPi) << "M=" << ms[m];
    EXPECT_GT(scaled, 0.0);
  }
  // Time integration smooths the high band: once τM² ≥ 1 the M-differences shrink.
  for (std::size_t m = 2; m < ms.size(); ++m) {
    EXPECT_LT(r.cauchy[m], r.cauchy[m - 1]) << "M=" << ms[m];
  }
}

TEST(Burgers, IntegralRejectsBandAboveCutoff) {
  auto cfg = config(4, Polynomial({0, 0, 1}), 1.0 / 64, 1);
  const auto traj = wasb::simulate(cfg, 0);
  EXPECT_THROW(wasb::burgers_integral(traj, 5, 1), std::invalid_argument);
}

TEST(BgResidual, LinearNonlinearityHasNoResidual) {
  const int n = 8;
  const Polynomial f({0, 3});
  const auto u = wasb::sample_mu_eps(n, wasb::NoiseSeed{74, 0});
  for (double c1 : {0.0, 3.0}) {
    const auto b = wasb::drift(u, f, c1);
    for (auto variant : {wasb::BgVariant::A, wasb::BgVariant::B}) {
      wasb::BgResidual r(f, n, c1, 1, 4, variant);
      EXPECT_LT(std::abs(r(u, b)), 1e-10);
    }
  }
}

TEST(BgResidual, QuadraticAtFullBandVanishes) {
  const int n = 8;
  const Polynomial f({0, 0, 1});
  const auto u = wasb::sample_mu_eps(n, wasb::NoiseSeed{75, 0});
  const auto b = wasb::drift(u, f, 0.0);
  wasb::BgResidual r(f, n, 0.0, 2, n, wasb::BgVariant::B);
  EXPECT_DOUBLE_EQ(r.c2(), 1.0);
  EXPECT_LT(std::abs(r(u, b)), 1e-12);
  wasb::BgResidual a(f, n, 0.0, 2, n, wasb::BgVariant::A);
  EXPECT_LT(std::abs(a(u, b) - b(2)), 1e-14);
  wasb::BgResidual zero(f, n, 0.0, 2, n, wasb::BgVariant::B, 0.0);
  EXPECT_LT(std::abs(zero(u, b) - b(2)), 1e-14);
}

TEST(BgResidual, CoMovingFrameDoesNotChangeTheResidual) {
  const int n = 8;
  const Polynomial f({0, 2, 1, 0.5});
  const double c1 = wasb::hermite_coeffs(f, 2)[1];
  const auto u = wasb::sample_mu_eps(n, wasb::NoiseSeed{76, 0});
  wasb::BgResidual comoving(f, n, c1, 1, 4, wasb::BgVariant::B);
  wasb::BgResidual lab(f, n, 0.0, 1, 4, wasb::BgVariant::B);
  EXPECT_LT(std::abs(comoving(u, wasb::drift(u, f, c1)) - lab(u, wasb::drift(u, f, 0.0))), 1e-9);
}

TEST(BgBounds, ClosedForms) {
  const Polynomial f({0, 0, 1});  // E[F'(U)²] = 4, c_2 = 1, higher c_n = 0
  EXPECT_NEAR(wasb::bg_bound_a(f, 1, 0.25), std::pow(0.25, 1.5) * 4.0, 1e-15);
  EXPECT_NEAR(wasb::bg_bound_a(f, 2, 0.25), std::pow(0.25, 1.5) * 16.0, 1e-14);
  const double eps = wasb::coupling_epsilon(32);
  const double ln = std::log(32.0);
  EXPECT_NEAR(wasb::bg_bound_b(f, 32, 4, 1, 0.5), 0.5 * (0.25 + eps * ln * ln) * 4.0, 1e-14);
  EXPECT_NEAR(wasb::bg_bound_b_resolved(f, 32, 4, 1, 0.5), 0.5 * 0.25, 1e-14);
}

TEST(BgResidual, VarianceReportOnEnsemble) {
  auto cfg = config(8, Polynomial({0, 0, 1}), 1.0 / 16, 77);
  cfg.record_noise = false;
  std::vector<wasb::Trajectory> ens;
  for (std::uint64_t s = 0; s < 40; ++s) ens.push_back(wasb::simulate(cfg, s));
  const auto r = wasb::bg_residual_variance(ens, 1, 0.0, 1.0 / 16, 4, wasb::BgVariant::A);
  EXPECT_GT(r.estimate, 0.0);
  EXPECT_GT(r.std_error, 0.0);
  EXPECT_EQ(r.ensemble, 40u);
  const auto full = wasb::bg_residual_variance(ens, 1, 0.0, 1.0 / 16, 8, wasb::BgVariant::B);
  EXPECT_LT(full.estimate, 1e-20);
}

TEST(TimeAverage, ConstantIsExact) {
  const auto cfg = config(8, Polynomial({0, 0, 1}), 1.0 / 16, 78);
  const auto r = wasb::time_average(Polynomial({1}), cfg, 4, 1);
  EXPECT_LT(r.sup_deviation.estimate, 1e-13);
}

TEST(TimeAverage, SquareDeviationShrinksWithN) {
  std::vector<double> sup;
  for (int n : {8, 32}) {
    const auto cfg = config(n, Polynomial({0, 0, 1}), 0.25, 79);
    sup.push_back(wasb::time_average(Polynomial({0, 0, 1}), cfg, 24, 0).sup_deviation.estimate);
  }
  EXPECT_LT(sup[1], sup[0]);
}

TEST(QuadraticVariation, BrownianAndSmoothPaths) {
  const double dt = 1e-4;
  const std::size_t steps = 10000;
  wasb::CounterRng rng(80, 0);
  std::vector<cplx> bm(steps + 1), smooth(steps + 1);
  for (std::size_t j = 1; j <= steps; ++j) {
    // complex increments with E|dW|² = 2 dt
    bm[j] = bm[j - 1] + std::sqrt(dt) * cplx(rng.normal(), rng.normal());
    const double t = static_cast<double>(j) * dt;
    smooth[j] = cplx(std::sin(3 * t), t * t);
  }
  const auto qbm = wasb::quadratic_variation(bm, dt, 5);
  EXPECT_NEAR(qbm.y.front(), 2.0, 0.1);
  EXPECT_NEAR(qbm.exponent, 0.0, 0.2);
  const auto qs = wasb::quadratic_variation(smooth, dt, 5);
  for (std::size_t j = 1; j < qs.y.size(); ++j) EXPECT_GT(qs.y[j], qs.y[j - 1]);
  EXPECT_NEAR(qs.exponent, 1.0, 0.05);
  EXPECT_THROW(wasb::quadratic_variation(bm, dt, 3), std::invalid_argument);
  EXPECT_THROW(wasb::quadratic_variation(std::vector<cplx>(10), dt, 5), std::invalid_argument);
}

TEST(Stationarity, OrnsteinUhlenbeckPasses) {
  auto cfg = config(6, Polynomial(), 0.25, 81);
  const auto snaps = wasb::collect_snapshots(cfg, 200, cfg.steps() / 8, 0);
  ASSERT_EQ(snaps.samples.size(), 200u);
  ASSERT_EQ(snaps.times.size(), 9u);
  const auto reports = wasb::stationarity_report(snaps);
  EXPECT_EQ(wasb::count_passed(reports), reports.size());
  const auto m2 = wasb::second_moment_reports(snaps);
  EXPECT_EQ(wasb::count_passed(m2), m2.size());
}

TEST(Stationarity, HalvedNoiseIsDetected) {
  auto cfg = config(6, Polynomial(), 0.5, 82);
  cfg.noise_variance_scale = 0.5;
  const auto snaps = wasb::collect_snapshots(cfg, 200, cfg.steps() / 4, 0);
  const auto m2 = wasb::second_moment_reports(snaps);
  EXPECT_LT(wasb::count_passed(m2), m2.size());
}

TEST(Stationarity, NeedsEnoughTrajectories) {
  auto cfg = config(4, Polynomial(), 1.0 / 16, 83);
  const auto snaps = wasb::collect_snapshots(cfg, 20, cfg.steps() / 2, 1);
  EXPECT_THROW(wasb::stationarity_report(snaps), std::invalid_argument);
}

TEST(AntisymmetryMc, GeneratorPairingVanishes) {
  wasb::CounterRng rng(84, 0);
  const auto phi = wasb::random_functional(6, 2, 3, rng, true);
  const auto psi = wasb::random_functional(6, 2, 3, rng, true);
  const auto r = wasb::antisymmetry_mc(Polynomial({0, 0, 1}), 6, phi, psi, 4000, 85);
  EXPECT_TRUE(r.pass) << r.estimate << " +- " << r.std_error;
}

TEST(ItoTrick, ConstantIsFinite) {
  const auto r = wasb::ito_trick_check(wasb::Polynomial({-1, 0, 1}), 8, 1, 0.25, 60, 86, 0);
  EXPECT_GT(r.energy, 0.0);
  EXPECT_GT(r.sup_moment, 0.0);
  EXPECT_TRUE(std::isfinite(r.constant));
  EXPECT_LT(r.constant, 16.0);
}

TEST(LpBlocks, VarianceSumsToNonzeroModes) {
  // G = x²: E‖G(ε^{1/2}u) - c0‖² = 2π Var(U²) = 4π, of which the zero mode
  // (ε‖u‖² - 2π)/√(2π) carries 2π/N.
  const int n = 16;
  const Polynomial g({0, 0, 1});
  double total = 0.0;
  for (int q = -1; q <= 6; ++q) total += wasb::lp_block_variance(g, n, q);
  EXPECT_NEAR(total, 4.0 * kPi - 2.0 * kPi / n, 1e-10);
}

TEST(Stats, RunningStatsAgreesWithTwoPass) {
  wasb::CounterRng rng(87, 0);
  std::vector<double> xs(1000);
  for (double& x : xs) x = 3.0 + 2.0 * rng.normal();
  wasb::RunningStats all, left, right;
  double mean = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    all.add(xs[i]);
    (i < 400 ? left : right).add(xs[i]);
    mean += xs[i];
  }
  mean /= static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  var /= static_cast<double>(xs.size() - 1);
  EXPECT_NEAR(all.mean(), mean, 1e-12);
  EXPECT_NEAR(all.variance(), var, 1e-10);
  left.merge(right);
  EXPECT_EQ(left.count(), all.count());
  EXPECT_NEAR(left.mean(), all.mean(), 1e-12);
  EXPECT_NEAR(left.variance(), all.variance(), 1e-10);
}

TEST(Stats, PowerLawFitRecoversExponent) {
  std::vector<double> x = {1, 2, 4, 8, 16}, y;
  for (double v : x) y.push_back(0.7 * std::pow(v, -1.3));
  const auto fit = wasb::fit_power_law(x, y);
  EXPECT_NEAR(fit.exponent, -1.3, 1e-12);
  EXPECT_NEAR(fit.constant, 0.7, 1e-12);
  EXPECT_NEAR(fit.residual, 0.0, 1e-12);
  EXPECT_THROW(wasb::fit_power_law({1, 2, 3}, {1, 2, 3}), std::invalid_argument);
  EXPECT_THROW(wasb::fit_power_law({1, 2, 3, 4}, {1, 0, 3, 4}), std::invalid_argument);
}

TEST(Stats, GatesAndThresholds) {
  EXPECT_NEAR(wasb::bonferroni_threshold(1), 4.0, 1e-9);
  EXPECT_GT(wasb::bonferroni_threshold(100), wasb::bonferroni_threshold(10));
  EXPECT_TRUE(wasb::z_gate("z", 1.1, 0.1, 1.0, 4.0).pass);
  EXPECT_FALSE(wasb::z_gate("z", 1.5, 0.1, 1.0, 4.0).pass);
  EXPECT_NEAR(wasb::z_gate("z", 1.2, 0.1, 1.0, 4.0).z, 2.0, 1e-12);
  EXPECT_TRUE(wasb::upper_gate("u", 1.0, 1.0).pass);
  EXPECT_FALSE(wasb::upper_gate("u", std::nan(""), 1.0).pass);
  EXPECT_TRUE(wasb::range_gate("r", -1.0, -1.4, -0.6).pass);
  EXPECT_FALSE(wasb::range_gate("r", -0.5, -1.4, -0.6).pass);
  EXPECT_TRUE(wasb::tolerance_gate("t", 1.0 + 1e-10, 1.0, 1e-9).pass);
}

}  // namespace
