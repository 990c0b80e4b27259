#include <gtest/gtest.h>

#include "pslab/diophantine.hpp"

using namespace pslab;

namespace {
const real_constant sqrt2 = real_constant::named(real_constant::named_id::sqrt2);
const real_constant golden = real_constant::named(real_constant::named_id::golden_ratio);
const real_constant pi_c = real_constant::named(real_constant::named_id::pi);

std::vector<std::pair<std::int64_t, std::int64_t>> pairs(const std::vector<rational_approx>& v) {
  std::vector<std::pair<std::int64_t, std::int64_t>> out;
  for (const auto& r : v) out.emplace_back(r.a, r.q);
  return out;
}
}  // namespace

TEST(Convergents, RootTwo) {
  using P = std::pair<std::int64_t, std::int64_t>;
  EXPECT_EQ(pairs(convergents(sqrt2, 12)), (std::vector<P>{{1, 1}, {3, 2}, {7, 5}, {17, 12}}));
}

TEST(Convergents, GoldenRatio) {
  using P = std::pair<std::int64_t, std::int64_t>;
  EXPECT_EQ(pairs(convergents(golden, 7)), (std::vector<P>{{2, 1}, {3, 2}, {5, 3}, {8, 5}}));
  // q <= max_q is inclusive, as for 17/12 above
  EXPECT_EQ(pairs(convergents(golden, 8)).back(), (P{13, 8}));
}

TEST(Convergents, PiStartsWithClassics) {
  const auto c = pairs(convergents(pi_c, 40000));
  ASSERT_GE(c.size(), 4u);
  EXPECT_EQ(c[0], std::make_pair(std::int64_t{3}, std::int64_t{1}));
  EXPECT_EQ(c[1], std::make_pair(std::int64_t{22}, std::int64_t{7}));
  EXPECT_EQ(c[2], std::make_pair(std::int64_t{333}, std::int64_t{106}));
  EXPECT_EQ(c[3], std::make_pair(std::int64_t{355}, std::int64_t{113}));
}

TEST(Convergents, EmptyForNonPositiveBound) {
  EXPECT_TRUE(convergents(sqrt2, 0).empty());
  EXPECT_TRUE(convergents(sqrt2, -5).empty());
}

TEST(Convergents, EveryConvergentPassesDirichletAndIncreases) {
  for (const auto& alpha : {sqrt2, golden, pi_c, real_constant::named(real_constant::named_id::e)}) {
    const auto c = convergents(alpha, std::int64_t{1} << 40);
    ASSERT_GE(c.size(), 10u);
    for (std::size_t i = 0; i < c.size(); ++i) {
      EXPECT_TRUE(verify_dirichlet(alpha, c[i].a, c[i].q)) << alpha.text() << " " << c[i].a << "/" << c[i].q;
      if (i > 0) {
        EXPECT_GT(c[i].q, c[i - 1].q);
      }
      EXPECT_LT(c[i].error.to_double() * c[i].q * c[i].q, 1.0);
    }
  }
}

TEST(Convergents, DecimalInputCertifiesOnlyWhatItDetermines) {
  const auto d = real_constant::parse("1.4142135623730950488016887242096980");
  const auto few = pairs(convergents(d, 1000));
  EXPECT_EQ(few, pairs(convergents(sqrt2, 1000)));
  EXPECT_THROW(convergents(d, std::int64_t{1} << 62), rational_input);
  EXPECT_THROW(convergents(real_constant::parse("1.5"), 10), rational_input);
}

TEST(VerifyDirichlet, Examples) {
  EXPECT_TRUE(verify_dirichlet(sqrt2, 3, 2));
  EXPECT_FALSE(verify_dirichlet(sqrt2, 4, 2));
  EXPECT_FALSE(verify_dirichlet(sqrt2, 14, 10));
  EXPECT_TRUE(verify_dirichlet(sqrt2, 2, 1));  // |sqrt2 - 2| = 0.58 < 1
  EXPECT_FALSE(verify_dirichlet(sqrt2, 11, 8));  // |sqrt2 - 11/8| = 0.039 > 1/64
  EXPECT_THROW(verify_dirichlet(sqrt2, 1, 0), parameter_range);
}

TEST(VerifyDirichlet, ExactForDecimals) {
  // |0.75 - 1/1| = 1/4 < 1 and |0.75 - 3/4| = 0 < 1/16
  EXPECT_TRUE(verify_dirichlet(real_constant::parse("0.75"), 1, 1));
  EXPECT_TRUE(verify_dirichlet(real_constant::parse("0.75"), 3, 4));
  // boundary: |0.5 - 0/1| = 1/2 < 1 but |0.25 - 1/2| = 1/4 is not < 1/4
  EXPECT_FALSE(verify_dirichlet(real_constant::parse("0.25"), 1, 2));
  EXPECT_FALSE(verify_dirichlet(real_constant::parse("0.75"), 1, 2));
}

TEST(XWindow, SeventyAtDefaultScales) {
  const auto w = make_x_window(70, real_constant::parse("0.05"), real_constant::parse("0.01"));
  ASSERT_TRUE(w);
  EXPECT_EQ(w->lo, 149u);
  EXPECT_EQ(w->hi, 1680700000u);
  EXPECT_FALSE(w->hi_saturated);
}

TEST(XWindow, UnitDenominator) {
  const auto w = make_x_window(1, real_constant::parse("0.05"), real_constant::parse("0.01"));
  ASSERT_TRUE(w);
  EXPECT_EQ(w->lo, 1u);
  EXPECT_EQ(w->hi, 1u);
}

TEST(XWindow, SmallThetaAndEta) {
  const auto w = make_x_window(2, real_constant::parse("0.09"), real_constant::parse("0.001"));
  ASSERT_TRUE(w);
  EXPECT_EQ(w->lo, 3u);
  EXPECT_EQ(w->hi, 38u);
}

TEST(XWindow, EndpointsSatisfyDefiningInequalities) {
  const auto theta = real_constant::parse("0.05"), eta = real_constant::parse("0.01");
  for (std::uint64_t q : {2u, 3u, 17u, 70u, 169u, 985u}) {
    const auto w = make_x_window(q, theta, eta);
    ASSERT_TRUE(w);
    for (std::uint64_t X : {w->lo, w->hi}) {
      const double x = static_cast<double>(X);
      EXPECT_LE(std::pow(x, 0.2), q * (1 + 1e-12));
      EXPECT_GE(std::pow(x, 0.85), q * (1 - 1e-12));
    }
    // one outside each end fails
    EXPECT_LT(std::pow(static_cast<double>(w->lo - 1), 0.85), static_cast<double>(q));
    EXPECT_GT(std::pow(static_cast<double>(w->hi + 1), 0.2), static_cast<double>(q));
  }
}

TEST(XWindow, HiMonotoneInQ) {
  const auto theta = real_constant::parse("0.03"), eta = real_constant::parse("0.005");
  std::uint64_t prev = 0;
  for (std::uint64_t q = 1; q <= 60; ++q) {
    const auto w = make_x_window(q, theta, eta);
    ASSERT_TRUE(w);
    if (w->hi_saturated) break;
    EXPECT_GE(w->hi, prev);
    prev = w->hi;
  }
}

TEST(XWindow, RejectsBadParameters) {
  EXPECT_THROW(make_x_window(5, real_constant::parse("0.1"), real_constant::parse("0.01")), parameter_range);
  EXPECT_THROW(make_x_window(5, real_constant::parse("0"), real_constant::parse("0.01")), parameter_range);
  EXPECT_THROW(make_x_window(5, real_constant::parse("0.05"), real_constant::parse("0")), parameter_range);
  EXPECT_THROW(make_x_window(5, real_constant::parse("0.05"), real_constant::parse("0.05")), parameter_range);
}

TEST(AdmissibleDenominators, MillionAtDefaultScales) {
  const auto qs = admissible_denominators(sqrt2, 1000000, real_constant::parse("0.05"), real_constant::parse("0.01"));
  ASSERT_FALSE(qs.empty());
  for (const auto& r : qs) {
    EXPECT_GE(static_cast<double>(r.q), std::pow(1e6, 0.2) * (1 - 1e-12));
    EXPECT_LE(static_cast<double>(r.q), std::pow(1e6, 0.85) * (1 + 1e-12));
  }
}
