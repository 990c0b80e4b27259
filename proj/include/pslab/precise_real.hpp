#pragma once

// Extended-precision reals with a carried absolute error bound.
//
// A precise_real owns one MPFR value at a fixed working precision together
// with an upper bound on its accumulated absolute error. Every operation
// propagates the bound to first order (inflated upward) and adds the
// rounding error of the operation itself, so callers can certify strict
// comparisons, floors and fractional-part decisions.

#include <cstdint>
#include <cstdio>

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

#include "pslab/errors.hpp"

namespace pslab {

using big_int = boost::multiprecision::cpp_int;
using big_rational = boost::multiprecision::cpp_rational;

inline constexpr unsigned default_digits = 40;
inline constexpr unsigned minimum_digits = 30;
inline constexpr unsigned maximum_digits = 4000;

inline mpfr_prec_t bits_for_digits(unsigned digits) {
  return static_cast<mpfr_prec_t>(std::ceil(digits * 3.3219280948873623)) + 8;
}

namespace detail {

inline double inflate(double e) {
  if (e == 0.0) return 0.0;
  return e * (1.0 + 0x1p-40) + std::numeric_limits<double>::denorm_min();
}

inline double half_ulp(mpfr_srcptr x) {
  if (!mpfr_number_p(x) || mpfr_zero_p(x)) return 0.0;
  return std::ldexp(1.0, static_cast<int>(mpfr_get_exp(x) - mpfr_get_prec(x) - 1));
}

inline double rounding(int ternary, mpfr_srcptr x) { return ternary == 0 ? 0.0 : half_ulp(x); }

inline double abs_up(mpfr_srcptr x) { return std::fabs(mpfr_get_d(x, MPFR_RNDA)); }
inline double abs_down(mpfr_srcptr x) { return std::fabs(mpfr_get_d(x, MPFR_RNDZ)); }

inline big_int mpz_to_big(const mpz_t z) {
  char* text = mpz_get_str(nullptr, 10, z);
  big_int out(text);
  void (*free_fn)(void*, size_t) = nullptr;
  mp_get_memory_functions(nullptr, nullptr, &free_fn);
  free_fn(text, std::char_traits<char>::length(text) + 1);
  return out;
}

inline bool is_decimal_literal(std::string_view s) {
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
  std::size_t int_digits = 0, frac_digits = 0;
  while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i, ++int_digits;
  if (i < s.size() && s[i] == '.') {
    ++i;
    while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i, ++frac_digits;
  }
  return i == s.size() && int_digits + frac_digits > 0;
}

}  // namespace detail

class precise_real {
 public:
  explicit precise_real(unsigned digits = default_digits) : digits_(digits) {
    mpfr_init2(v_, bits_for_digits(digits));
    mpfr_set_zero(v_, 1);
  }

  precise_real(std::int64_t value, unsigned digits) : precise_real(digits) {
    const int t = mpfr_set_sj(v_, value, MPFR_RNDN);
    err_ = detail::rounding(t, v_);
  }

  precise_real(const precise_real& other) : digits_(other.digits_), err_(other.err_) {
    mpfr_init2(v_, mpfr_get_prec(other.v_));
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }

  precise_real(precise_real&& other) noexcept : digits_(other.digits_), err_(other.err_) {
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, other.v_);
  }

  precise_real& operator=(const precise_real& other) {
    if (this != &other) {
      mpfr_set_prec(v_, mpfr_get_prec(other.v_));
      mpfr_set(v_, other.v_, MPFR_RNDN);
      digits_ = other.digits_;
      err_ = other.err_;
    }
    return *this;
  }

  precise_real& operator=(precise_real&& other) noexcept {
    mpfr_swap(v_, other.v_);
    std::swap(digits_, other.digits_);
    std::swap(err_, other.err_);
    return *this;
  }

  ~precise_real() { mpfr_clear(v_); }

  /// Parses a plain decimal literal ([sign] digits [. digits], no exponent).
  static precise_real from_decimal(std::string_view text, unsigned digits = default_digits) {
    if (!detail::is_decimal_literal(text))
      throw parameter_range("not a decimal literal: '" + std::string(text) + "'");
    precise_real r(digits);
    const std::string owned(text);
    const int t = mpfr_set_str(r.v_, owned.c_str(), 10, MPFR_RNDN);
    r.err_ = detail::rounding(t, r.v_);
    return r;
  }

  /// The exact binary value held, as a rational.
  big_rational to_rational() const {
    if (mpfr_zero_p(v_)) return big_rational(0);
    mpz_t z;
    mpz_init(z);
    const mpfr_exp_t e = mpfr_get_z_2exp(z, v_);
    big_int mant = detail::mpz_to_big(z);
    mpz_clear(z);
    if (e >= 0) return big_rational(mant << static_cast<unsigned>(e));
    return big_rational(mant, big_int(1) << static_cast<unsigned>(-e));
  }

  mpfr_srcptr get() const noexcept { return v_; }
  mpfr_ptr raw() noexcept { return v_; }
  unsigned digits() const noexcept { return digits_; }
  double error_bound() const noexcept { return err_; }
  void assign_error(double e) noexcept { err_ = e; }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long double to_long_double() const { return mpfr_get_ld(v_, MPFR_RNDN); }
  int sign() const { return mpfr_sgn(v_); }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }

  /// Fixed-point rendering: optional '-', integer part, '.', at most
  /// `fractional_digits` fractional digits (trailing zeros trimmed, at least
  /// one kept). Never uses exponent notation.
  std::string to_decimal(int fractional_digits = 40) const {
    char* buf = nullptr;
    mpfr_asprintf(&buf, "%.*RNf", fractional_digits, v_);
    std::string s(buf);
    mpfr_free_str(buf);
    if (s.find('.') == std::string::npos) s += ".0";
    while (s.size() >= 2 && s.back() == '0' && s[s.size() - 2] != '.') s.pop_back();
    if (s == "-0.0") s = "0.0";
    return s;
  }

 private:
  mpfr_t v_;
  unsigned digits_;
  double err_ = 0.0;
};

// ---------------------------------------------------------------------------
// Arithmetic with first-order error propagation.

inline precise_real operator-(const precise_real& a) {
  precise_real r(a.digits());
  mpfr_neg(r.raw(), a.get(), MPFR_RNDN);
  r.assign_error(a.error_bound());
  return r;
}

inline precise_real abs(const precise_real& a) {
  precise_real r(a.digits());
  mpfr_abs(r.raw(), a.get(), MPFR_RNDN);
  r.assign_error(a.error_bound());
  return r;
}

inline precise_real operator+(const precise_real& a, const precise_real& b) {
  precise_real r(std::max(a.digits(), b.digits()));
  const int t = mpfr_add(r.raw(), a.get(), b.get(), MPFR_RNDN);
  r.assign_error(detail::inflate(a.error_bound() + b.error_bound() + detail::rounding(t, r.get())));
  return r;
}

inline precise_real operator-(const precise_real& a, const precise_real& b) {
  precise_real r(std::max(a.digits(), b.digits()));
  const int t = mpfr_sub(r.raw(), a.get(), b.get(), MPFR_RNDN);
  r.assign_error(detail::inflate(a.error_bound() + b.error_bound() + detail::rounding(t, r.get())));
  return r;
}

inline precise_real operator*(const precise_real& a, const precise_real& b) {
  precise_real r(std::max(a.digits(), b.digits()));
  const int t = mpfr_mul(r.raw(), a.get(), b.get(), MPFR_RNDN);
  const double ea = a.error_bound(), eb = b.error_bound();
  r.assign_error(detail::inflate(detail::abs_up(a.get()) * eb + detail::abs_up(b.get()) * ea +
                                 ea * eb + detail::rounding(t, r.get())));
  return r;
}

inline precise_real operator/(const precise_real& a, const precise_real& b) {
  if (b.is_zero()) throw parameter_range("division by zero");
  precise_real r(std::max(a.digits(), b.digits()));
  const int t = mpfr_div(r.raw(), a.get(), b.get(), MPFR_RNDN);
  const double denom = detail::abs_down(b.get()) - b.error_bound();
  const double prop = denom > 0.0
                          ? (a.error_bound() + detail::abs_up(r.get()) * b.error_bound()) / denom
                          : std::numeric_limits<double>::infinity();
  r.assign_error(detail::inflate(prop + detail::rounding(t, r.get())));
  return r;
}

inline precise_real operator+(const precise_real& a, std::int64_t b) { return a + precise_real(b, a.digits()); }
inline precise_real operator-(const precise_real& a, std::int64_t b) { return a - precise_real(b, a.digits()); }
inline precise_real operator*(const precise_real& a, std::int64_t b) { return a * precise_real(b, a.digits()); }
inline precise_real operator/(const precise_real& a, std::int64_t b) { return a / precise_real(b, a.digits()); }
inline precise_real operator*(std::int64_t a, const precise_real& b) { return precise_real(a, b.digits()) * b; }
inline precise_real operator/(std::int64_t a, const precise_real& b) { return precise_real(a, b.digits()) / b; }

inline precise_real sqrt(const precise_real& a) {
  if (a.sign() < 0) throw parameter_range("sqrt of a negative value");
  precise_real r(a.digits());
  const int t = mpfr_sqrt(r.raw(), a.get(), MPFR_RNDN);
  const double ea = a.error_bound();
  const double lower = detail::abs_down(a.get()) - ea;
  const double prop = ea == 0.0 ? 0.0 : (lower > 0.0 ? ea / std::sqrt(lower) : std::sqrt(2.0 * ea));
  r.assign_error(detail::inflate(prop + detail::rounding(t, r.get())));
  return r;
}

inline precise_real exp(const precise_real& a) {
  precise_real r(a.digits());
  const int t = mpfr_exp(r.raw(), a.get(), MPFR_RNDN);
  const double ea = a.error_bound();
  r.assign_error(detail::inflate(detail::abs_up(r.get()) * std::expm1(ea) * 1.001 +
                                 detail::rounding(t, r.get())));
  return r;
}

inline precise_real log(const precise_real& a) {
  if (a.sign() <= 0) throw parameter_range("log of a non-positive value");
  precise_real r(a.digits());
  const int t = mpfr_log(r.raw(), a.get(), MPFR_RNDN);
  const double lower = detail::abs_down(a.get()) - a.error_bound();
  const double prop = a.error_bound() == 0.0
                          ? 0.0
                          : (lower > 0.0 ? a.error_bound() / lower : std::numeric_limits<double>::infinity());
  r.assign_error(detail::inflate(prop * 1.001 + detail::rounding(t, r.get())));
  return r;
}

/// x^y for x > 0 (x = 0 with y > 0 gives 0).
inline precise_real pow(const precise_real& x, const precise_real& y) {
  precise_real r(std::max(x.digits(), y.digits()));
  if (x.is_zero() && x.error_bound() == 0.0 && y.sign() > 0) return r;
  if (x.sign() <= 0) throw parameter_range("pow requires a positive base");
  const int t = mpfr_pow(r.raw(), x.get(), y.get(), MPFR_RNDN);
  const double ex = x.error_bound(), ey = y.error_bound();
  double rel = 0.0;
  if (ex != 0.0 || ey != 0.0) {
    const double xd = detail::abs_down(x.get());
    const double lnx = std::fabs(std::log(xd)) + 1e-300;
    rel = (xd - ex > 0.0) ? detail::abs_up(y.get()) * ex / (xd - ex) + lnx * ey
                          : std::numeric_limits<double>::infinity();
  }
  r.assign_error(detail::inflate(detail::abs_up(r.get()) * rel * 1.001 + detail::rounding(t, r.get())));
  return r;
}

inline precise_real pow(const precise_real& x, std::int64_t n) {
  precise_real r(x.digits());
  const int t = mpfr_pow_si(r.raw(), x.get(), static_cast<long>(n), MPFR_RNDN);
  const double ex = x.error_bound();
  double rel = 0.0;
  if (ex != 0.0) {
    const double xd = detail::abs_down(x.get());
    rel = (xd - ex > 0.0) ? std::fabs(static_cast<double>(n)) * ex / (xd - ex)
                          : std::numeric_limits<double>::infinity();
  }
  r.assign_error(detail::inflate(detail::abs_up(r.get()) * rel * 1.001 + detail::rounding(t, r.get())));
  return r;
}

/// The integer nearest to x (ties away from zero); it carries x's error.
inline precise_real nearest_integer(const precise_real& x) {
  precise_real r(x.digits());
  mpfr_round(r.raw(), x.get());
  return r;
}

// ---------------------------------------------------------------------------
// Certified decisions.

enum class ordering { less, equal, greater, ambiguous };

/// Sign of (a - b) when the error bounds allow a decision.
inline ordering compare(const precise_real& a, const precise_real& b) {
  const precise_real d = a - b;
  if (d.is_zero() && d.error_bound() == 0.0) return ordering::equal;
  mpfr_t bound;
  mpfr_init2(bound, mpfr_get_prec(d.get()));
  ordering out = ordering::ambiguous;
  mpfr_sub_d(bound, d.get(), d.error_bound(), MPFR_RNDD);
  if (mpfr_sgn(bound) > 0) out = ordering::greater;
  mpfr_add_d(bound, d.get(), d.error_bound(), MPFR_RNDU);
  if (mpfr_sgn(bound) < 0) out = ordering::less;
  mpfr_clear(bound);
  return out;
}

/// Certified strict inequality a < b; nullopt if undecidable at this precision.
inline std::optional<bool> certified_less(const precise_real& a, const precise_real& b) {
  switch (compare(a, b)) {
    case ordering::less: return true;
    case ordering::equal:
    case ordering::greater: return false;
    case ordering::ambiguous: break;
  }
  return std::nullopt;
}

namespace detail {
inline std::optional<std::int64_t> certified_rounding(const precise_real& x, bool ceiling) {
  mpfr_t lo, hi;
  mpfr_init2(lo, mpfr_get_prec(x.get()) + 64);
  mpfr_init2(hi, mpfr_get_prec(x.get()) + 64);
  mpfr_sub_d(lo, x.get(), x.error_bound(), MPFR_RNDD);
  mpfr_add_d(hi, x.get(), x.error_bound(), MPFR_RNDU);
  if (ceiling) {
    mpfr_ceil(lo, lo);
    mpfr_ceil(hi, hi);
  } else {
    mpfr_floor(lo, lo);
    mpfr_floor(hi, hi);
  }
  std::optional<std::int64_t> out;
  if (mpfr_equal_p(lo, hi) && mpfr_fits_intmax_p(lo, MPFR_RNDN)) out = mpfr_get_sj(lo, MPFR_RNDN);
  const bool too_big = mpfr_equal_p(lo, hi) && !mpfr_fits_intmax_p(lo, MPFR_RNDN);
  mpfr_clear(lo);
  mpfr_clear(hi);
  if (too_big) throw parameter_range("floor exceeds the 64-bit integer range");
  return out;
}
}  // namespace detail

/// floor(x) if every value within the error bound has the same floor.
inline std::optional<std::int64_t> certified_floor(const precise_real& x) {
  return detail::certified_rounding(x, false);
}

inline std::optional<std::int64_t> certified_ceil(const precise_real& x) {
  return detail::certified_rounding(x, true);
}

/// ||x||, the distance from x to the nearest integer, in [0, 1/2].
inline precise_real nearest_int_distance(const precise_real& x) {
  precise_real nearest = nearest_integer(x);
  precise_real r(x.digits());
  // x - round(x) is exactly representable, so only x's own error remains.
  const int t = mpfr_sub(r.raw(), x.get(), nearest.get(), MPFR_RNDN);
  mpfr_abs(r.raw(), r.get(), MPFR_RNDN);
  r.assign_error(x.error_bound() + detail::rounding(t, r.get()));
  return r;
}

inline precise_real pi(unsigned digits = default_digits) {
  precise_real r(digits);
  const int t = mpfr_const_pi(r.raw(), MPFR_RNDN);
  r.assign_error(detail::rounding(t, r.get()));
  return r;
}

struct circle_point {
  precise_real cos;
  precise_real sin;
};

/// e(x) = exp(2 pi i x) as (cos 2 pi x, sin 2 pi x). The argument is reduced
/// by subtracting its nearest integer first, so x and x + k agree whenever
/// both are held exactly.
inline circle_point unit_circle_exp(const precise_real& x) {
  precise_real frac(x.digits());
  precise_real nearest = nearest_integer(x);
  const int t0 = mpfr_sub(frac.raw(), x.get(), nearest.get(), MPFR_RNDN);
  frac.assign_error(x.error_bound() + detail::rounding(t0, frac.get()));
  const precise_real angle = frac * (pi(x.digits()) * 2);
  circle_point out{precise_real(x.digits()), precise_real(x.digits())};
  mpfr_sin_cos(out.sin.raw(), out.cos.raw(), angle.get(), MPFR_RNDN);
  // |d/dt sin t|, |d/dt cos t| <= 1; one half-ulp for each result.
  out.cos.assign_error(detail::inflate(angle.error_bound() + detail::half_ulp(out.cos.get()) +
                                       std::ldexp(1.0, -static_cast<int>(mpfr_get_prec(out.cos.get())))));
  out.sin.assign_error(detail::inflate(angle.error_bound() + detail::half_ulp(out.sin.get()) +
                                       std::ldexp(1.0, -static_cast<int>(mpfr_get_prec(out.sin.get())))));
  return out;
}

}  // namespace pslab
