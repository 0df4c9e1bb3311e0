#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "wasb/chaos.hpp"
#include "wasb/gaussian_field.hpp"
#include "wasb/hermite.hpp"
#include "wasb/stats.hpp"

namespace {

using wasb::cplx;
using wasb::MultiIndex;

TEST(MultiIndex, CanonicalForm) {
  const auto a = MultiIndex::from_modes({3, -2, 3, 1});
  const auto b = MultiIndex::from_modes({1, 3, 3, -2});
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.order(), 4);
  EXPECT_EQ(a.mode_sum(), 5);
  EXPECT_EQ(a.mode_square_sum(), 9 + 4 + 9 + 1);
  EXPECT_EQ(a.power_of(3), 2);
  EXPECT_EQ(a.max_abs_mode(), 3);
  EXPECT_DOUBLE_EQ(a.factorial_weight(), 2.0);
  EXPECT_EQ(a.negated(), MultiIndex::from_modes({-3, 2, -3, -1}));
  EXPECT_EQ(a.lowered(3), MultiIndex::from_modes({3, -2, 1}));
  EXPECT_THROW(MultiIndex::from_modes({1, 0}), std::invalid_argument);
}

TEST(Chaos, EvaluationMatchesWickRecursion) {
  wasb::CounterRng rng(31, 0);
  for (int t = 0; t < 30; ++t) {
    const int n = 2 + t % 5;
    const auto phi = wasb::random_functional(n, 5, 8, rng, t % 2 == 0, true);
    const auto eta = wasb::sample_mu_eps(n, wasb::NoiseSeed{32, static_cast<std::uint64_t>(t)});
    const cplx got = wasb::evaluate_complex(phi, eta);
    const cplx ref = oracle::evaluate_functional(phi, eta);
    EXPECT_LT(std::abs(got - ref), 1e-10 * std::max(1.0, std::abs(ref))) << t;
    if (t % 2 == 0) {
      EXPECT_NEAR(ref.imag(), 0.0, 1e-10 * std::max(1.0, std::abs(ref)));
      EXPECT_TRUE(phi.is_real());
    }
  }
}

TEST(Chaos, LowOrderWickProducts) {
  const auto eta = wasb::sample_mu_eps(4, wasb::NoiseSeed{1, 1});
  wasb::ChaosFunctional phi(4);
  phi.add(MultiIndex::from_modes({2, -2}), 1.0);
  EXPECT_LT(std::abs(wasb::evaluate_complex(phi, eta) - (std::norm(eta(2)) - 1.0)), 1e-13);
  wasb::ChaosFunctional psi(4);
  psi.add(MultiIndex::from_modes({1, 3}), 1.0);
  EXPECT_LT(std::abs(wasb::evaluate_complex(psi, eta) - eta(1) * eta(3)), 1e-13);
  wasb::ChaosFunctional chi(4);
  chi.add(MultiIndex::from_modes({1, 1, -1}), 1.0);
  const cplx ref = eta(1) * eta(1) * eta(-1) - 2.0 * eta(1);
  EXPECT_LT(std::abs(wasb::evaluate_complex(chi, eta) - ref), 1e-13);
}

TEST(Chaos, EvaluateRejectsModesAboveCutoff) {
  wasb::ChaosFunctional phi(8);
  phi.add(MultiIndex::from_modes({7}), 1.0);
  EXPECT_THROW(wasb::evaluate(phi, wasb::sample_mu_eps(4, wasb::NoiseSeed{})), std::out_of_range);
}

TEST(Chaos, SecondMomentByMonteCarlo) {
  wasb::CounterRng rng(8, 0);
  const auto phi = wasb::random_functional(3, 3, 5, rng, true, false);
  wasb::RunningStats rs, mean;
  for (std::uint64_t s = 0; s < 40000; ++s) {
    const double v = wasb::evaluate(phi, wasb::sample_mu_eps(3, wasb::NoiseSeed{88, s}));
    rs.add(v * v);
    mean.add(v);
  }
  EXPECT_LT(std::abs(rs.mean() - wasb::second_moment(phi)) / rs.std_error(), 5.0);
  EXPECT_LT(std::abs(mean.mean()) / mean.std_error(), 5.0);
}

TEST(Chaos, ExpansionTermsCarryTheTestMode) {
  for (int ell : {1, 3}) {
    const auto phi =
        wasb::chaos_expand(wasb::Polynomial({0, 0, 0, 1}), 6, wasb::TestFunction::monomial(-ell));
    EXPECT_FALSE(phi.has_order_zero());
    EXPECT_EQ(phi.max_order(), 3);
    for (const auto& [alpha, c] : phi.terms()) EXPECT_EQ(alpha.mode_sum(), ell);
  }
}

TEST(Chaos, MasterConsistencyAgainstGridQuadrature) {
  const std::vector<wasb::Polynomial> gs = {wasb::Polynomial({0, 0, 1}),
                                            wasb::Polynomial({0, 0, 0, 1}),
                                            wasb::Polynomial({3, 0, -6, 0, 1})};
  for (const auto& g : gs) {
    const double c0 = oracle::hermite_coefficient(g, 0);
    for (int n : {4, 8, 16}) {
      for (int ell : {1, 2}) {
        const auto phi = wasb::chaos_expand(g, n, wasb::TestFunction::monomial(-ell));
        for (std::uint64_t s = 0; s < 10; ++s) {
          const auto eta = wasb::sample_mu_eps(n, wasb::NoiseSeed{51, s});
          const cplx got = wasb::evaluate_complex(phi, eta);
          const cplx ref = oracle::projected_functional(g, c0, eta, ell);
          EXPECT_LT(std::abs(got - ref), 1e-8)
              << g.to_string() << " N=" << n << " ell=" << ell << " s=" << s;
        }
      }
    }
  }
}

TEST(Chaos, GeneralTestFunction) {
  // φ = e_{-1} + 0.5 e_{2}: the expansion is linear in φ.
  wasb::TestFunction phi;
  phi.set(-1, 1.0);
  phi.set(2, 0.5);
  const wasb::Polynomial g({0, 0, 1});
  const auto full = wasb::chaos_expand(g, 5, phi);
  const auto a = wasb::chaos_expand(g, 5, wasb::TestFunction::monomial(-1));
  const auto b = wasb::chaos_expand(g, 5, wasb::TestFunction::monomial(2));
  const auto eta = wasb::sample_mu_eps(5, wasb::NoiseSeed{3, 3});
  const cplx lhs = wasb::evaluate_complex(full, eta);
  const cplx rhs = wasb::evaluate_complex(a, eta) + 0.5 * wasb::evaluate_complex(b, eta);
  EXPECT_LT(std::abs(lhs - rhs), 1e-12);
}

TEST(Chaos, TermBudgetIsEnforced) {
  wasb::ExpandOptions options;
  options.term_budget = 10;
  EXPECT_THROW(wasb::chaos_expand(wasb::Polynomial({0, 0, 0, 1}), 16,
                                  wasb::TestFunction::monomial(-1), -1, options),
               std::length_error);
}

TEST(Chaos, ArithmeticAndRealness) {
  wasb::CounterRng rng(2, 2);
  const auto a = wasb::random_functional(4, 3, 6, rng, true);
  const auto b = wasb::random_functional(4, 3, 6, rng, true);
  const auto eta = wasb::sample_mu_eps(4, wasb::NoiseSeed{4, 4});
  const double sum = wasb::evaluate(a + b, eta);
  EXPECT_NEAR(sum, wasb::evaluate(a, eta) + wasb::evaluate(b, eta), 1e-12);
  EXPECT_NEAR(wasb::evaluate(a - a, eta), 0.0, 1e-15);
  EXPECT_EQ((a - a).size(), 0u);
  EXPECT_NEAR(wasb::evaluate(cplx(2.0) * a, eta), 2.0 * wasb::evaluate(a, eta), 1e-12);
  wasb::ChaosFunctional c(4);
  c.add(MultiIndex::from_modes({1}), cplx(1.0, 1.0));
  EXPECT_FALSE(c.is_real());
}

}  // namespace
