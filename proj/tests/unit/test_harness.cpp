#include <gtest/gtest.h>

#include "pslab/harness.hpp"

using namespace pslab;

namespace {

experiment_config config(std::uint64_t X) {
  experiment_config cfg;
  cfg.X = X;
  return cfg;
}

double to_d(const precise_real& v) { return v.to_double(); }

}  // namespace

TEST(HeadlineCount, OracleCountsAtHundredThousand) {
  const auto r = headline_count(config(100000), 1);
  EXPECT_EQ(r.count_B_primes, 4459u);
  EXPECT_EQ(r.count_A_primes, 499u);
  EXPECT_EQ(r.count_theorem, 2414u);
  EXPECT_TRUE(r.theorem_satisfied);
}

TEST(HeadlineCount, OracleCountsAtMillion) {
  const auto r = headline_count(config(1000000), 2);
  EXPECT_EQ(r.count_B_primes, 36960u);
  EXPECT_EQ(r.count_A_primes, 3638u);
  EXPECT_EQ(r.count_theorem, 18268u);
  EXPECT_EQ(r.count_B_primes, count_primes(500000, 1000000));
  EXPECT_LE(r.count_A_primes, r.count_B_primes);
  EXPECT_LE(r.count_theorem, r.count_ps_primes);
  // (lambda / 10) * 36960 = 365.5
  EXPECT_NEAR(to_d(r.harman_threshold), 0.0988909175667197787815539 / 10 * 36960, 1e-9);
  EXPECT_TRUE(r.harman_satisfied);
  EXPECT_TRUE(!r.harman_satisfied || r.theorem_satisfied);
}

TEST(HeadlineCount, TheoremThresholdDominatesSetThreshold) {
  // p^-theta >= X^-theta for p < X, so PS primes passing Delta also pass p^-theta
  const auto cfg = config(4000);
  const auto s = compute_scales(cfg);
  const membership_kernel k(cfg.alpha, cfg.beta, s);
  std::uint64_t with_delta = 0;
  for (std::uint64_t p : primes_in_range(2000, 4000))
    if (k.is_ps(p) && k.diophantine_A(p)) ++with_delta;
  const auto r = headline_count(k, 1);
  EXPECT_GE(r.count_theorem, with_delta);
  for (const auto& f : r.implication_failures) {
    EXPECT_TRUE(fractional_condition(f.p, s)) << f.p;
    EXPECT_FALSE(is_ps_prime(f.p, cfg.c)) << f.p;
  }
}

TEST(HeadlineCount, ImplicationHoldsAtMillion) {
  const auto r = headline_count(config(1000000), 1);
  EXPECT_TRUE(r.implication_failures.empty());
}

TEST(HeadlineCount, CollapsedSetCountsAllPrimes) {
  // theta = 0 gives Delta = 1; delta = 1 makes the fractional condition vacuous
  auto wide = compute_scales(real_constant::parse("1.05"), real_constant::parse("0"), real_constant::parse("0.01"), 5000);
  wide.delta = precise_real(1, wide.digits);
  const auto r = headline_count(membership_kernel(real_constant::parse("sqrt2"), real_constant::parse("0"), wide), 1);
  EXPECT_EQ(r.count_A_primes, r.count_B_primes);
  EXPECT_EQ(r.count_B_primes, count_primes(2500, 5000));
  // every non-PS prime of B now breaks the implication
  EXPECT_EQ(r.implication_failures.size(), r.count_B_primes - r.count_ps_primes);
}

TEST(HeadlineCount, ThreadCountDoesNotChangeReport) {
  const auto one = headline_count(config(300000), 1);
  const auto three = headline_count(config(300000), 3);
  EXPECT_EQ(one.count_A_primes, three.count_A_primes);
  EXPECT_EQ(one.count_theorem, three.count_theorem);
  EXPECT_EQ(one.implication_failures.size(), three.implication_failures.size());
}

TEST(HarmanCompare, TypeOneOracleValues) {
  struct row {
    std::uint64_t X;
    std::uint64_t W;
    double lhs, rhs, relative;
  };
  for (const row& r : {row{10000, 533, 4314, 34282, 0.18825525015112116059},
                       row{100000, 2565, 47509, 421362, 0.089363469271099302011}}) {
    const auto c = harman_compare(comparison_kind::type_I, config(r.X), 1);
    EXPECT_EQ(c.m_window.hi, r.W);
    EXPECT_EQ(to_d(c.lhs_A), r.lhs);
    EXPECT_EQ(to_d(c.rhs_B), r.rhs);
    EXPECT_NEAR(to_d(c.relative), r.relative, 1e-15);
  }
}

TEST(HarmanCompare, HandEnumerationAtSixteen) {
  // m <= 16^(15/22) = 6.62, mn in [8, 16)
  const auto cfg = config(16);
  const auto s = compute_scales(cfg);
  const auto sets = build_sets(membership_kernel(cfg.alpha, cfg.beta, s), 1);
  double lhs = 0, rhs = 0;
  for (std::uint64_t m = 1; m <= 6; ++m)
    for (std::uint64_t n = 1; n < 16; ++n) {
      if (m * n < 8 || m * n >= 16) continue;
      rhs += 1;
      lhs += std::count(sets.A.begin(), sets.A.end(), m * n);
    }
  const auto c = harman_compare(comparison_kind::type_I, cfg, 1);
  EXPECT_EQ(c.m_window.hi, 6u);
  EXPECT_EQ(to_d(c.rhs_B), rhs);
  EXPECT_EQ(rhs, 8 + 4 + 3 + 2 + 2 + 1);  // n-counts for m = 1..6
  EXPECT_EQ(to_d(c.lhs_A), lhs);
}

TEST(HarmanCompare, CollapseToFullInterval) {
  // A = B: the raw sums agree and relative = |1 - lambda| / lambda
  const std::uint64_t X = 3000;
  std::vector<std::uint64_t> all;
  for (std::uint64_t v = (X + 1) / 2; v < X; ++v) all.push_back(v);
  const auto lambda = precise_real::from_decimal("0.125", 40);
  const auto a = make_arithmetic_sequence(coefficient_kind::divisor_capped_random, 400, 0, 5, 1);
  const auto b = make_arithmetic_sequence(coefficient_kind::divisor_capped_random, X, 0, 5, 2);
  for (auto kind : {comparison_kind::type_I, comparison_kind::type_II}) {
    const auto c = harman_compare(kind, X, all, lambda, a, b, 1);
    EXPECT_EQ(to_d(c.lhs_A), to_d(c.rhs_B));
    EXPECT_NEAR(to_d(c.relative), 7.0, 1e-14);
  }
}

TEST(HarmanCompare, ZeroCoefficientsAnnihilate) {
  coefficient_sequence zero;
  zero.kind = coefficient_kind::all_ones;
  zero.values.assign(1001, 0.0);
  const auto b = make_arithmetic_sequence(coefficient_kind::all_ones, 3000, 0, 0, 2);
  const auto c = harman_compare(comparison_kind::type_II, 3000, {1600, 2000}, precise_real::from_decimal("0.1", 40),
                                zero, b, 1);
  EXPECT_TRUE(c.lhs_A.is_zero());
  EXPECT_TRUE(c.rhs_B_scaled.is_zero());
  EXPECT_TRUE(c.deviation.is_zero());
  EXPECT_TRUE(c.relative.is_zero());
}

TEST(HarmanCompare, TypeTwoIsNonNegativeAndThreadIndependent) {
  auto cfg = config(200000);
  cfg.coeff_a = "divisor-capped-random";
  cfg.coeff_b = "divisor-capped-random";
  cfg.seed = 17;
  const auto one = harman_compare(comparison_kind::type_II, cfg, 1);
  const auto four = harman_compare(comparison_kind::type_II, cfg, 4);
  EXPECT_GE(to_d(one.lhs_A), 0.0);
  EXPECT_GT(to_d(one.rhs_B), 0.0);
  EXPECT_EQ(one.lhs_A.to_decimal(), four.lhs_A.to_decimal());
  EXPECT_EQ(one.rhs_B.to_decimal(), four.rhs_B.to_decimal());
  EXPECT_EQ(one.m_window.lo, 49u);
  EXPECT_EQ(one.b_kind, "divisor-capped-random");
}

TEST(HarmanCompare, BudgetIsEnforced) {
  const auto a = make_arithmetic_sequence(coefficient_kind::all_ones, 600, 0, 0, 1);
  EXPECT_THROW(harman_compare(comparison_kind::type_I, 10000, {}, precise_real::from_decimal("0.1", 40), a, a, 1, 10),
               budget_exceeded);
}

TEST(ComparisonKind, Parse) {
  EXPECT_EQ(parse_comparison_kind("I"), comparison_kind::type_I);
  EXPECT_EQ(parse_comparison_kind("typeII"), comparison_kind::type_II);
  EXPECT_THROW(parse_comparison_kind("III"), parameter_range);
}
