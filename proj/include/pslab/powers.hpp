#pragma once

// Certified floors of real powers, with an exact integer fallback for
// rational exponents (decimal literals are always rational).

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>

#include "pslab/precise_real.hpp"
#include "pslab/real_constant.hpp"

namespace pslab {

/// Largest operand size, in bits, for which exact integer powering is tried.
inline constexpr std::size_t exact_power_bit_limit = 1u << 16;

namespace detail {

inline std::size_t bit_length(const big_int& v) {
  return v == 0 ? 0 : boost::multiprecision::msb(boost::multiprecision::abs(v)) + 1;
}

inline std::optional<unsigned long> small_unsigned(const big_int& v, unsigned long limit) {
  if (v < 0 || v > limit) return std::nullopt;
  return static_cast<unsigned long>(v);
}

}  // namespace detail

/// Sign of a^p - b^q for non-negative a, b; nullopt if the powers would be
/// larger than `exact_power_bit_limit` bits.
inline std::optional<int> compare_integer_powers(const big_int& a, unsigned long p, const big_int& b,
                                                 unsigned long q) {
  if (detail::bit_length(a) * p > exact_power_bit_limit || detail::bit_length(b) * q > exact_power_bit_limit)
    return std::nullopt;
  const big_int lhs = boost::multiprecision::pow(a, static_cast<unsigned>(p));
  const big_int rhs = boost::multiprecision::pow(b, static_cast<unsigned>(q));
  return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
}

/// Sign of base^exponent - target for a positive rational exponent, decided
/// exactly; nullopt if the exponent's numerator/denominator are too large.
inline std::optional<int> compare_rational_power(std::uint64_t base, const big_rational& exponent,
                                                 std::uint64_t target) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  if (exponent <= 0) return std::nullopt;
  const auto p = detail::small_unsigned(numerator(exponent), exact_power_bit_limit);
  const auto q = detail::small_unsigned(denominator(exponent), exact_power_bit_limit);
  if (!p || !q) return std::nullopt;
  // base^(p/q) vs target  <=>  base^p vs target^q
  return compare_integer_powers(big_int(base), *p, big_int(target), *q);
}

/// floor(n^c) by exact integer arithmetic for rational c > 0, adjusting a
/// starting estimate; nullopt when the operands are too large.
inline std::optional<std::uint64_t> exact_floor_power(std::uint64_t n, const big_rational& c,
                                                      std::uint64_t estimate) {
  auto above = [&](std::uint64_t m) { return compare_rational_power(n, c, m); };  // sign n^c - m
  std::uint64_t m = estimate;
  for (int guard = 0; guard < 64; ++guard) {
    const auto s = above(m);
    if (!s) return std::nullopt;
    if (*s < 0) {
      if (m == 0) return std::nullopt;
      --m;
      continue;
    }
    const auto s_next = above(m + 1);
    if (!s_next) return std::nullopt;
    if (*s_next >= 0) {
      ++m;
      continue;
    }
    return m;
  }
  return std::nullopt;
}

/// Tries `evaluate(digits)` and then `evaluate(2 * digits)`; returns the
/// first certified floor.
template <class Evaluate>
std::optional<std::int64_t> floor_with_escalation(Evaluate&& evaluate, unsigned digits) {
  for (unsigned d : {digits, 2 * digits}) {
    if (auto f = certified_floor(evaluate(d))) return f;
  }
  return std::nullopt;
}

/// [n^c], the integral part of n^c. The floor is certified against the
/// carried error bound; an ambiguous floor is retried at doubled precision
/// and then decided exactly when c is a manageable rational.
inline std::uint64_t power_floor(std::uint64_t n, const real_constant& c, unsigned digits = default_digits) {
  if (n == 0) throw parameter_range("power_floor requires n >= 1");
  if (n == 1) return 1;
  std::optional<std::int64_t> estimate;
  for (unsigned d : {digits, 2 * digits}) {
    const precise_real v = pow(precise_real(static_cast<std::int64_t>(n), d), c.value(d));
    if (auto f = certified_floor(v)) {
      if (*f < 0) throw parameter_range("negative power");
      return static_cast<std::uint64_t>(*f);
    }
    estimate = static_cast<std::int64_t>(std::floor(v.to_double()));
  }
  if (c.exact() && *c.exact() > 0) {
    const auto start = static_cast<std::uint64_t>(std::max<std::int64_t>(*estimate, 0));
    if (auto m = exact_floor_power(n, *c.exact(), start)) return *m;
  }
  throw precision_exhausted("floor of " + std::to_string(n) + "^" + c.text() +
                                " is ambiguous at " + std::to_string(2 * digits) + " digits",
                            n);
}

}  // namespace pslab
