#pragma once

// Continued-fraction convergents of alpha and the X-window in which a
// denominator q satisfies X^(2 theta + 10 eta) <= q <= X^(1 - theta - 10 eta).

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include <boost/integer/common_factor_rt.hpp>

#include "pslab/powers.hpp"
#include "pslab/precise_real.hpp"
#include "pslab/real_constant.hpp"

namespace pslab {

struct rational_approx {
  std::int64_t a = 0;
  std::int64_t q = 1;
  precise_real error;  ///< |alpha - a/q|
};

struct x_window {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  std::uint64_t q = 0;
  real_constant theta;
  real_constant eta;
  /// hi exceeded 2^62 and was clamped there without certification.
  bool hi_saturated = false;
};

namespace detail {

inline big_rational exact_rational(double v) {
  int exp = 0;
  const double mant = std::frexp(v, &exp);
  const auto scaled = static_cast<std::int64_t>(std::ldexp(mant, 53));
  exp -= 53;
  big_int num(scaled);
  if (exp >= 0) return big_rational(num << exp);
  return big_rational(num, big_int(1) << -exp);
}

inline big_int floor_rational(const big_rational& x) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  big_int n = numerator(x), d = denominator(x);
  big_int q = n / d;
  if (n % d != 0 && n < 0) --q;
  return q;
}

inline bool fits_int64(const big_int& v) {
  return v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max();
}

struct cf_outcome {
  std::vector<std::pair<big_int, big_int>> convergents;  // (p, q)
  bool complete = false;  // reached a denominator beyond max_q
};

// Runs the continued-fraction recursion on both ends of [lo, hi] in lockstep.
// Every convergent emitted is shared by all reals in the interval.
inline cf_outcome joint_expansion(big_rational lo, big_rational hi, const big_int& max_q) {
  cf_outcome out;
  big_int p_prev = 1, p_prev2 = 0, q_prev = 0, q_prev2 = 1;
  for (int step = 0; step < 10000; ++step) {
    const big_int a_lo = floor_rational(lo);
    const big_int a_hi = floor_rational(hi);
    if (a_lo != a_hi) return out;
    const big_int p = a_lo * p_prev + p_prev2;
    const big_int q = a_lo * q_prev + q_prev2;
    if (q > max_q) {
      out.complete = true;
      return out;
    }
    out.convergents.emplace_back(p, q);
    p_prev2 = p_prev;
    p_prev = p;
    q_prev2 = q_prev;
    q_prev = q;
    const big_rational f_lo = lo - big_rational(a_lo);
    const big_rational f_hi = hi - big_rational(a_hi);
    if (f_lo == 0 || f_hi == 0) return out;
    lo = 1 / f_lo;
    hi = 1 / f_hi;
  }
  return out;
}

}  // namespace detail

/// |alpha - a/q| < q^-2 with gcd(a, q) = 1, decided exactly for decimal
/// alpha and with certified precision (escalating once) for named constants.
inline bool verify_dirichlet(const real_constant& alpha, std::int64_t a, std::int64_t q,
                             unsigned digits = default_digits) {
  if (q < 1) throw parameter_range("verify_dirichlet requires q >= 1");
  if (boost::integer::gcd(a, q) != 1) return false;
  if (alpha.exact()) {
    big_rational diff = *alpha.exact() - big_rational(a, q);
    if (diff < 0) diff = -diff;
    return diff * big_rational(q) * big_rational(q) < 1;
  }
  for (unsigned d : {digits, 2 * digits}) {
    const precise_real diff = abs(alpha.value(d) - precise_real(a, d) / q);
    const precise_real bound = precise_real(1, d) / (precise_real(q, d) * q);
    if (auto r = certified_less(diff, bound)) return *r;
  }
  throw precision_exhausted("|alpha - a/q| is indistinguishable from q^-2");
}

/// All continued-fraction convergents a/q of alpha with q <= max_q, in
/// strictly increasing q. A decimal alpha with k fractional digits stands
/// for every real within 10^-k of it; convergents that are not shared by
/// that whole interval cannot be certified and raise rational_input.
inline std::vector<rational_approx> convergents(const real_constant& alpha, std::int64_t max_q,
                                                unsigned digits = default_digits) {
  std::vector<rational_approx> out;
  if (max_q < 1) return out;
  const big_int limit(max_q);
  for (unsigned d = digits; d <= maximum_digits; d *= 2) {
    big_rational lo, hi;
    if (alpha.exact()) {
      const big_rational radius(1, boost::multiprecision::pow(big_int(10),
                                                              static_cast<unsigned>(alpha.fractional_digits())));
      lo = *alpha.exact() - radius;
      hi = *alpha.exact() + radius;
    } else {
      const precise_real v = alpha.value(d);
      const big_rational radius = detail::exact_rational(v.error_bound()) +
                                  detail::exact_rational(detail::half_ulp(v.get()));
      lo = v.to_rational() - radius;
      hi = v.to_rational() + radius;
    }
    detail::cf_outcome cf = detail::joint_expansion(lo, hi, limit);
    if (!cf.complete) {
      if (alpha.exact())
        throw rational_input("decimal alpha '" + alpha.text() + "' cannot certify convergents up to q=" +
                             std::to_string(max_q));
      continue;
    }
    // a_1 = 1 repeats the denominator 1; keep the later (better) convergent.
    if (cf.convergents.size() >= 2 && cf.convergents[0].second == cf.convergents[1].second)
      cf.convergents.erase(cf.convergents.begin());
    const precise_real value = alpha.value(d);
    for (const auto& [p, q] : cf.convergents) {
      if (!detail::fits_int64(p)) throw parameter_range("convergent numerator exceeds 64 bits");
      rational_approx r;
      r.a = static_cast<std::int64_t>(p);
      r.q = static_cast<std::int64_t>(q);
      r.error = abs(value - precise_real(r.a, d) / r.q);
      out.push_back(std::move(r));
    }
    return out;
  }
  throw precision_exhausted("convergents of " + alpha.text() + " need more than " +
                            std::to_string(maximum_digits) + " digits");
}

namespace detail {

// exponent as exact rational when both inputs are decimals
inline std::optional<big_rational> exact_combination(const real_constant& theta, const real_constant& eta,
                                                     int c0, int c_theta, int c_eta) {
  if (!theta.exact() || !eta.exact()) return std::nullopt;
  return big_rational(c0) + big_rational(c_theta) * *theta.exact() + big_rational(c_eta) * *eta.exact();
}

// Sign of X^e - q with e = c0 + c_theta*theta + c_eta*eta.
inline int sign_power_minus(std::uint64_t X, std::uint64_t q, const real_constant& theta, const real_constant& eta,
                            int c0, int c_theta, int c_eta, unsigned digits) {
  if (auto e = exact_combination(theta, eta, c0, c_theta, c_eta)) {
    if (auto s = compare_rational_power(X, *e, q)) return *s;
  }
  for (unsigned d : {digits, 2 * digits}) {
    const precise_real e = precise_real(c0, d) + theta.value(d) * c_theta + eta.value(d) * c_eta;
    const precise_real lhs = X == 1 ? precise_real(1, d) : pow(precise_real(static_cast<std::int64_t>(X), d), e);
    switch (compare(lhs, precise_real(static_cast<std::int64_t>(q), d))) {
      case ordering::less: return -1;
      case ordering::equal: return 0;
      case ordering::greater: return 1;
      case ordering::ambiguous: break;
    }
  }
  throw precision_exhausted("X-window endpoint comparison is ambiguous", X);
}

}  // namespace detail

/// The integers X with X^(2 theta + 10 eta) <= q <= X^(1 - theta - 10 eta);
/// nullopt when that set is empty. Both endpoints are re-certified against
/// the defining inequalities.
inline std::optional<x_window> make_x_window(std::uint64_t q, const real_constant& theta, const real_constant& eta,
                                             unsigned digits = default_digits) {
  if (q < 1) throw parameter_range("x_window requires q >= 1");
  const precise_real th = theta.value(digits), et = eta.value(digits);
  const precise_real upper_exp = precise_real(1, digits) - th - et * 10;
  const precise_real lower_exp = th * 2 + et * 10;
  auto positive = [](const precise_real& v) { return compare(v, precise_real(0, v.digits())) == ordering::greater; };
  if (!positive(th) || compare(th, precise_real(1, digits) / 10) != ordering::less)
    throw parameter_range("x_window requires 0 < theta < 1/10");
  if (!positive(et)) throw parameter_range("x_window requires eta > 0");
  if (compare(lower_exp, upper_exp) != ordering::less)
    throw parameter_range("x_window requires 2 theta + 10 eta < 1 - theta - 10 eta");

  x_window w;
  w.q = q;
  w.theta = theta;
  w.eta = eta;
  // q <= X^(1 - theta - 10 eta)
  auto upper_ok = [&](std::uint64_t X) {
    return detail::sign_power_minus(X, q, theta, eta, 1, -1, -10, digits) >= 0;
  };
  // X^(2 theta + 10 eta) <= q
  auto lower_ok = [&](std::uint64_t X) {
    return detail::sign_power_minus(X, q, theta, eta, 0, 2, 10, digits) <= 0;
  };
  const double qd = static_cast<double>(q);
  constexpr std::uint64_t cap = 1ull << 62;

  const double lo_est = std::ceil(std::pow(qd, 1.0 / upper_exp.to_double()));
  std::uint64_t lo = lo_est < 1.0 ? 1 : (lo_est > static_cast<double>(cap) ? cap : static_cast<std::uint64_t>(lo_est));
  while (lo > 1 && upper_ok(lo - 1)) --lo;
  while (lo < cap && !upper_ok(lo)) ++lo;

  const double hi_est = std::floor(std::pow(qd, 1.0 / lower_exp.to_double()));
  if (hi_est >= static_cast<double>(cap)) {
    w.hi = cap;
    w.hi_saturated = true;
  } else {
    std::uint64_t hi = hi_est < 1.0 ? 1 : static_cast<std::uint64_t>(hi_est);
    while (lower_ok(hi + 1)) ++hi;
    while (hi >= 1 && !lower_ok(hi)) --hi;
    w.hi = hi;
  }
  w.lo = lo;
  if (w.hi == 0 || w.lo > w.hi) return std::nullopt;
  return w;
}

/// Convergent denominators q of alpha whose X-window contains X.
inline std::vector<rational_approx> admissible_denominators(const real_constant& alpha, std::uint64_t X,
                                                            const real_constant& theta, const real_constant& eta,
                                                            unsigned digits = default_digits) {
  std::vector<rational_approx> out;
  const auto all = convergents(alpha, static_cast<std::int64_t>(std::min<std::uint64_t>(X, 1ull << 62)), digits);
  for (const auto& r : all) {
    const auto q = static_cast<std::uint64_t>(r.q);
    const bool lower = detail::sign_power_minus(X, q, theta, eta, 0, 2, 10, digits) <= 0;
    const bool upper = detail::sign_power_minus(X, q, theta, eta, 1, -1, -10, digits) >= 0;
    if (lower && upper) out.push_back(r);
  }
  return out;
}

}  // namespace pslab
