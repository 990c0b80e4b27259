#include <gtest/gtest.h>

#include <cmath>

#include "pslab/coefficients.hpp"

using namespace pslab;

TEST(DivisorCounts, SmallValues) {
  const auto tau = divisor_counts(12);
  const std::vector<std::uint32_t> expect{0, 1, 2, 2, 3, 2, 4, 2, 4, 3, 4, 2, 6};
  EXPECT_EQ(tau, expect);
}

TEST(DivisorCounts, MatchesTrialDivision) {
  const auto tau = divisor_counts(5000);
  for (std::uint64_t n = 1; n <= 5000; ++n) {
    std::uint32_t count = 0;
    for (std::uint64_t d = 1; d <= n; ++d) count += n % d == 0;
    ASSERT_EQ(tau[n], count) << n;
  }
}

TEST(Coefficients, AllOnes) {
  const auto s = make_arithmetic_sequence(coefficient_kind::all_ones, 100, 0.001, 0, 1);
  EXPECT_EQ(s.size(), 100u);
  for (std::uint64_t m = 1; m <= 100; ++m) {
    EXPECT_EQ(s.value(m), 1.0);
    EXPECT_DOUBLE_EQ(s.star(m), std::pow(static_cast<double>(m), -0.001));
  }
}

TEST(Coefficients, PrimeIndicator) {
  const auto s = make_arithmetic_sequence(coefficient_kind::prime_indicator, 10, 0.0, 0, 1);
  const std::vector<double> expect{0, 1, 1, 0, 1, 0, 1, 0, 0, 0};
  for (std::uint64_t m = 1; m <= 10; ++m) EXPECT_EQ(s.value(m), expect[m - 1]) << m;
}

TEST(Coefficients, DivisorCappedRandomRespectsCaps) {
  const auto s = make_arithmetic_sequence(coefficient_kind::divisor_capped_random, 20000, 0.001, 42, 1);
  const auto tau = divisor_counts(20000);
  for (std::uint64_t m = 1; m <= 20000; ++m) {
    ASSERT_GE(s.value(m), 0.0);
    ASSERT_LE(s.value(m), tau[m]);
    ASSERT_LE(s.star(m), 1.0);
  }
}

TEST(Coefficients, SeedDeterminesRandomValues) {
  const auto a = make_arithmetic_sequence(coefficient_kind::divisor_capped_random, 500, 0.001, 42, 1);
  const auto b = make_arithmetic_sequence(coefficient_kind::divisor_capped_random, 500, 0.001, 42, 1);
  const auto c = make_arithmetic_sequence(coefficient_kind::divisor_capped_random, 500, 0.001, 43, 1);
  const auto d = make_arithmetic_sequence(coefficient_kind::divisor_capped_random, 500, 0.001, 42, 2);
  EXPECT_EQ(a.values, b.values);
  EXPECT_NE(a.values, c.values);
  EXPECT_NE(a.values, d.values);
}

TEST(Coefficients, ScaledDetectorOnlyForFrequencies) {
  EXPECT_THROW(make_arithmetic_sequence(coefficient_kind::scaled_detector, 10, 0.0, 0, 1), parameter_range);
  const auto poly = build_approximant(precise_real::from_decimal("0.05", 40), 23, approximant_side::majorant);
  const auto s = make_frequency_sequence(coefficient_kind::scaled_detector, poly, 0, 4);
  EXPECT_EQ(s.size(), 23u);
  EXPECT_DOUBLE_EQ(s.starred_cap, (0.1 + 1.0 / 24) / 0.05);
  for (std::uint64_t k = 1; k <= 23; ++k) {
    EXPECT_LE(std::fabs(s.value(k)), s.caps[k] * (1 + 1e-14));
    EXPECT_LE(std::fabs(s.star(k)), s.starred_cap * (1 + 1e-14));
    EXPECT_DOUBLE_EQ(s.star(k), poly.coefficient(static_cast<std::int64_t>(k)).real() / 0.05);
  }
}

TEST(Coefficients, KindNamesRoundTrip) {
  for (auto k : {coefficient_kind::all_ones, coefficient_kind::divisor_capped_random,
                 coefficient_kind::prime_indicator, coefficient_kind::scaled_detector})
    EXPECT_EQ(parse_coefficient_kind(coefficient_kind_name(k)), k);
  EXPECT_EQ(parse_coefficient_kind("scaled-detector-coeffs"), coefficient_kind::scaled_detector);
  EXPECT_THROW(parse_coefficient_kind("ones"), parameter_range);
}
