#pragma once

// Phases mod 1 as unsigned 128-bit fixed-point fractions: u represents
// u / 2^128. Multiplying by an integer wraps mod 2^128, which is exactly
// reduction mod 1, so alpha*a + beta mod 1 costs two multiplies and no
// cancellation. Errors are tracked in units of 2^-128.

#include <cmath>
#include <cstdint>

#include "pslab/precise_real.hpp"

namespace pslab {

using u128 = unsigned __int128;

struct fixed_fraction {
  u128 value = 0;
  /// |value / 2^128 - frac(x)| <= error / 2^128, with error at least 1.
  u128 error = 1;
};

/// frac(x) as a 128-bit fraction. x must carry well over 128 bits of
/// fractional precision for the result to be useful (40 digits suffices for
/// |x| < 2^5).
inline fixed_fraction to_fixed_fraction(const precise_real& x) {
  const mpfr_prec_t prec = mpfr_get_prec(x.get()) + 160;
  mpfr_t f, hi;
  mpfr_init2(f, prec);
  mpfr_init2(hi, prec);
  mpfr_frac(f, x.get(), MPFR_RNDN);  // exact at the widened precision
  if (mpfr_sgn(f) < 0) mpfr_add_ui(f, f, 1, MPFR_RNDN);
  mpfr_mul_2ui(f, f, 128, MPFR_RNDN);
  mpfr_rint(f, f, MPFR_RNDN);
  if (mpfr_cmp_ui_2exp(f, 1, 128) >= 0) mpfr_set_zero(f, 1);
  // split into two 64-bit limbs
  mpfr_div_2ui(hi, f, 64, MPFR_RNDN);
  mpfr_floor(hi, hi);
  const std::uint64_t top = mpfr_get_uj(hi, MPFR_RNDN);
  mpfr_mul_2ui(hi, hi, 64, MPFR_RNDN);
  mpfr_sub(f, f, hi, MPFR_RNDN);
  const std::uint64_t bottom = mpfr_get_uj(f, MPFR_RNDN);
  mpfr_clear(f);
  mpfr_clear(hi);

  fixed_fraction out;
  out.value = (static_cast<u128>(top) << 64) | bottom;
  const double scaled = std::ldexp(x.error_bound(), 128);
  out.error = 2 + (scaled >= 0x1p127 ? (static_cast<u128>(1) << 127) : static_cast<u128>(std::ceil(scaled)));
  return out;
}

/// Wrapped distance to 0 of a fraction, in the same units.
inline u128 fixed_distance(u128 v) { return v > (static_cast<u128>(1) << 127) ? -v : v; }

inline long double fixed_to_long_double(u128 v) { return std::ldexp(static_cast<long double>(v), -128); }

inline double fixed_to_double(u128 v) { return std::ldexp(static_cast<double>(v), -128); }

/// Saturating multiply of an error count, so bounds never wrap.
inline u128 saturating_mul(u128 a, std::uint64_t b) {
  if (b != 0 && a > (~static_cast<u128>(0)) / b) return ~static_cast<u128>(0);
  return a * b;
}

inline u128 saturating_add(u128 a, u128 b) { return a > ~b ? ~static_cast<u128>(0) : a + b; }

}  // namespace pslab
