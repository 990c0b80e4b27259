#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "pslab/powers.hpp"
#include "pslab/precise_real.hpp"
#include "pslab/real_constant.hpp"

using namespace pslab;

namespace {

precise_real dec(const char* s, unsigned d = default_digits) { return precise_real::from_decimal(s, d); }

bool within_error_contract(const precise_real& x) {
  return x.error_bound() >= 0 && x.error_bound() <= 1e-25 * std::max(1.0, std::fabs(x.to_double()));
}

// floor(n^(p/q)) bracketed with directed rounding at 320 bits; an
// independent route from precise_real's error tracking.
std::optional<std::uint64_t> interval_floor(std::uint64_t n, long p, long q) {
  mpfr_t c_lo, c_hi, lo, hi, base;
  for (auto* v : {&c_lo, &c_hi, &lo, &hi, &base}) mpfr_init2(*v, 320);
  mpfr_set_ui(base, n, MPFR_RNDN);
  mpfr_set_si(c_lo, p, MPFR_RNDN);
  mpfr_div_si(c_lo, c_lo, q, MPFR_RNDD);
  mpfr_set_si(c_hi, p, MPFR_RNDN);
  mpfr_div_si(c_hi, c_hi, q, MPFR_RNDU);
  mpfr_pow(lo, base, c_lo, MPFR_RNDD);
  mpfr_pow(hi, base, c_hi, MPFR_RNDU);
  mpfr_floor(lo, lo);
  mpfr_floor(hi, hi);
  std::optional<std::uint64_t> out;
  if (mpfr_equal_p(lo, hi)) out = mpfr_get_uj(lo, MPFR_RNDN);
  for (auto* v : {&c_lo, &c_hi, &lo, &hi, &base}) mpfr_clear(*v);
  return out;
}

// largest m with m^q <= n^p, by bisection on exact integers
std::uint64_t integer_root_floor(std::uint64_t n, unsigned p, unsigned q) {
  const big_int target = boost::multiprecision::pow(big_int(n), p);
  std::uint64_t lo = 1, hi = 1;
  while (boost::multiprecision::pow(big_int(hi), q) <= target) hi *= 2;
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    (boost::multiprecision::pow(big_int(mid), q) <= target ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace

TEST(NearestIntDistance, Midpoint) { EXPECT_EQ(nearest_int_distance(dec("0.5")).to_decimal(), "0.5"); }

TEST(NearestIntDistance, Symmetric) { EXPECT_EQ(nearest_int_distance(dec("-1.25")).to_decimal(), "0.25"); }

TEST(NearestIntDistance, SevenRootTwo) {
  const precise_real x = real_constant::named(real_constant::named_id::sqrt2).value() * 7;
  const precise_real d = nearest_int_distance(x);
  EXPECT_EQ(d.to_decimal(18), "0.100505063388334658");
  EXPECT_TRUE(within_error_contract(d));
}

TEST(NearestIntDistance, IntegerShiftInvariance) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(-50.0, 50.0);
  std::uniform_int_distribution<std::int64_t> shift(-1000000, 1000000);
  for (int i = 0; i < 2000; ++i) {
    precise_real x(default_digits);
    mpfr_set_d(x.raw(), unit(rng), MPFR_RNDN);
    const std::int64_t k = shift(rng);
    const precise_real a = nearest_int_distance(x);
    const precise_real b = nearest_int_distance(x + k);
    EXPECT_TRUE(mpfr_equal_p(a.get(), b.get())) << x.to_decimal() << " + " << k;
    EXPECT_LE(a.to_double(), 0.5);
  }
}

TEST(PreciseReal, ErrorBoundAfterOperations) {
  const precise_real a = real_constant::parse("pi").value();
  const precise_real b = real_constant::parse("e").value();
  for (const precise_real& r : {a + b, a - b, a * b, a / b, sqrt(a), exp(b), log(a), pow(a, b), pow(b, 7)})
    EXPECT_TRUE(within_error_contract(r)) << r.to_decimal() << " err " << r.error_bound();
}

TEST(PreciseReal, DecimalRoundTrip) {
  const precise_real x = real_constant::parse("golden").value();
  const precise_real back = dec(x.to_decimal().c_str());
  EXPECT_LT(std::fabs((x - back).to_double()), 1e-28);
}

TEST(PreciseReal, DecimalFormatHasNoExponent) {
  EXPECT_EQ(dec("-0.000000000000000000000001").to_decimal(), "-0.000000000000000000000001");
  EXPECT_EQ(precise_real(123456789012345, 40).to_decimal(), "123456789012345.0");
}

TEST(PreciseReal, CertifiedComparisons) {
  EXPECT_EQ(compare(dec("0.1"), dec("0.2")), ordering::less);
  EXPECT_EQ(compare(precise_real(3, 40), precise_real(3, 40)), ordering::equal);
  precise_real fuzzy = dec("1");
  fuzzy.assign_error(1e-3);
  EXPECT_EQ(compare(fuzzy, dec("1.0001")), ordering::ambiguous);
  EXPECT_FALSE(certified_floor(fuzzy).has_value());
  EXPECT_EQ(certified_floor(dec("2.5")), 2);
  EXPECT_EQ(certified_ceil(dec("2.5")), 3);
  EXPECT_EQ(certified_floor(dec("-2.5")), -3);
}

TEST(UnitCircleExp, SpecialPoints) {
  auto z0 = unit_circle_exp(dec("0"));
  EXPECT_EQ(z0.cos.to_double(), 1.0);
  EXPECT_EQ(z0.sin.to_double(), 0.0);
  auto z1 = unit_circle_exp(dec("0.5"));
  EXPECT_NEAR(z1.cos.to_double(), -1.0, 1e-30);
  EXPECT_NEAR(z1.sin.to_double(), 0.0, 1e-30);
  auto z2 = unit_circle_exp(dec("0.25"));
  EXPECT_NEAR(z2.cos.to_double(), 0.0, 1e-30);
  EXPECT_NEAR(z2.sin.to_double(), 1.0, 1e-30);
}

TEST(UnitCircleExp, PeriodicAndOnCircle) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(-3.0, 3.0);
  for (int i = 0; i < 500; ++i) {
    precise_real x(default_digits);
    mpfr_set_d(x.raw(), unit(rng), MPFR_RNDN);
    const auto a = unit_circle_exp(x);
    const auto b = unit_circle_exp(x + 1);
    EXPECT_TRUE(mpfr_equal_p(a.cos.get(), b.cos.get()));
    EXPECT_TRUE(mpfr_equal_p(a.sin.get(), b.sin.get()));
    const precise_real norm = a.cos * a.cos + a.sin * a.sin - 1;
    EXPECT_LT(std::fabs(norm.to_double()), 1e-25);
  }
}

TEST(PowerFloor, Examples) {
  EXPECT_EQ(power_floor(1, real_constant::parse("1.1")), 1u);
  EXPECT_EQ(power_floor(1, real_constant::parse("pi")), 1u);
  EXPECT_EQ(power_floor(5, real_constant::parse("2")), 25u);
  EXPECT_EQ(power_floor(10, real_constant::parse("1.1")), 12u);
}

TEST(PowerFloor, ExactIntegerPowerNeedsRationalFallback) {
  // 1024^1.1 = 2^11 exactly; no finite precision separates it from 2048.
  EXPECT_EQ(power_floor(1024, real_constant::parse("1.1")), 2048u);
  EXPECT_EQ(power_floor(1048576, real_constant::parse("1.05")), 2097152u);
}

TEST(PowerFloor, IrrationalExponentCannotFallBack) {
  EXPECT_EQ(power_floor(3, real_constant::parse("e")), 19u);  // 3^e = 19.81...
}

TEST(PowerFloor, MatchesIntervalOracle) {
  struct exponent {
    const char* text;
    long p, q;
  };
  for (const exponent& c : {exponent{"1.05", 21, 20}, exponent{"1.1", 11, 10}, exponent{"1.124999", 1124999, 1000000}}) {
    const real_constant rc = real_constant::parse(c.text);
    for (std::uint64_t n = 1; n <= 10000; ++n) {
      const auto expect = interval_floor(n, c.p, c.q);
      const std::uint64_t got = power_floor(n, rc);
      if (expect) {
        ASSERT_EQ(got, *expect) << "n=" << n << " c=" << c.text;
      } else {
        // directed rounding cannot separate exact integer powers
        ASSERT_EQ(got, integer_root_floor(n, static_cast<unsigned>(c.p), static_cast<unsigned>(c.q)))
            << "n=" << n << " c=" << c.text;
      }
    }
  }
}

TEST(PowerFloor, MatchesIntegerRootsForSmallExponents) {
  for (std::uint64_t n = 1; n <= 3000; n += 7) {
    EXPECT_EQ(power_floor(n, real_constant::parse("1.05")), integer_root_floor(n, 21, 20)) << n;
    EXPECT_EQ(power_floor(n, real_constant::parse("1.1")), integer_root_floor(n, 11, 10)) << n;
  }
}

TEST(RealConstant, DecimalMetadata) {
  const auto c = real_constant::parse("-0.00120");
  ASSERT_TRUE(c.exact());
  EXPECT_EQ(*c.exact(), big_rational(-12, 10000));
  EXPECT_EQ(c.fractional_digits(), 5u);
  EXPECT_EQ(c.significant_digits(), 3u);
  EXPECT_THROW(real_constant::parse("1e5"), parameter_range);
  EXPECT_THROW(real_constant::parse("sqrt3"), parameter_range);
}
