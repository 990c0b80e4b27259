#pragma once

// Experiment parameters and the scales derived from them:
//   gamma = 1/c, Delta = X^-theta, delta = gamma X^(gamma-1) / 10,
//   L = [X^(theta+eta)], H = [10 X^(1-gamma+eta) / gamma], lambda = 4 Delta delta.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "pslab/powers.hpp"
#include "pslab/precise_real.hpp"
#include "pslab/real_constant.hpp"

namespace pslab {

struct experiment_config {
  real_constant alpha = real_constant::named(real_constant::named_id::sqrt2);
  real_constant beta = real_constant::decimal("0");
  real_constant c = real_constant::decimal("1.05");
  real_constant theta = real_constant::decimal("0.05");
  real_constant eta = real_constant::decimal("0.01");
  real_constant epsilon = real_constant::decimal("0.001");
  std::uint64_t X = 0;
  std::uint64_t seed = 0;
  std::string coeff_a = "all-ones";
  std::string coeff_b = "all-ones";
  std::string output_dir = ".";
  unsigned precision_digits = default_digits;
};

namespace detail {

// Sign of a - b for reals given by source, exact when both are decimals.
inline int certified_sign(const real_constant& a, const big_rational& b, unsigned digits) {
  if (a.exact()) return *a.exact() < b ? -1 : (*a.exact() > b ? 1 : 0);
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  for (unsigned d : {digits, 2 * digits}) {
    const precise_real bd = precise_real::from_decimal(numerator(b).str(), d) /
                            precise_real::from_decimal(denominator(b).str(), d);
    switch (compare(a.value(d), bd)) {
      case ordering::less: return -1;
      case ordering::equal: return 0;
      case ordering::greater: return 1;
      case ordering::ambiguous: break;
    }
  }
  throw precision_exhausted("cannot decide the sign of " + a.text() + " - " + b.str());
}

}  // namespace detail

/// Checks the ranges 1 < c < 9/8, 0 < theta < (9/c - 8)/10, eta > 0,
/// epsilon > 0, X >= 4 and a usable alpha. Throws validation_error naming
/// the first violated constraint.
inline void validate(const experiment_config& cfg) {
  const unsigned d = cfg.precision_digits;
  if (d < minimum_digits || d > maximum_digits)
    throw validation_error(fmt::format("precision_digits={} outside [{}, {}]", d, minimum_digits, maximum_digits));
  if (detail::certified_sign(cfg.c, big_rational(1), d) <= 0)
    throw validation_error("c=" + cfg.c.text() + " must exceed 1");
  if (detail::certified_sign(cfg.c, big_rational(9, 8), d) >= 0)
    throw validation_error("c=" + cfg.c.text() + " must be below 9/8 = 1.125");
  if (detail::certified_sign(cfg.theta, big_rational(0), d) <= 0)
    throw validation_error("theta=" + cfg.theta.text() + " must be positive");

  // theta < (9/c - 8)/10  <=>  10 theta c < 9 - 8c
  bool theta_ok = false;
  if (cfg.c.exact() && cfg.theta.exact()) {
    const big_rational& c = *cfg.c.exact();
    theta_ok = 10 * *cfg.theta.exact() * c < 9 - 8 * c;
  } else {
    const precise_real c = cfg.c.value(d);
    const precise_real lhs = cfg.theta.value(d) * c * 10;
    const precise_real rhs = precise_real(9, d) - c * 8;
    const auto r = certified_less(lhs, rhs);
    if (!r) throw precision_exhausted("theta bound is ambiguous");
    theta_ok = *r;
  }
  if (!theta_ok) {
    const precise_real bound = (precise_real(9, d) / cfg.c.value(d) - 8) / 10;
    throw validation_error(fmt::format("theta={} exceeds (9/c-8)/10 = {} for c={}", cfg.theta.text(),
                                       bound.to_decimal(15), cfg.c.text()));
  }
  if (detail::certified_sign(cfg.eta, big_rational(0), d) <= 0)
    throw validation_error("eta=" + cfg.eta.text() + " must be positive");
  if (detail::certified_sign(cfg.epsilon, big_rational(0), d) <= 0)
    throw validation_error("epsilon=" + cfg.epsilon.text() + " must be positive");
  if (cfg.X < 4) throw validation_error(fmt::format("X={} must be at least 4", cfg.X));
  if (cfg.X > (1ull << 40)) throw validation_error(fmt::format("X={} exceeds 2^40", cfg.X));
  if (!cfg.alpha.is_named() && cfg.alpha.significant_digits() < 35)
    throw validation_error("alpha='" + cfg.alpha.text() +
                           "' needs at least 35 significant digits or a named constant");
}

struct derived_scales {
  std::uint64_t X = 0;
  real_constant c, theta, eta;
  unsigned digits = default_digits;

  precise_real gamma, Delta, delta, lambda;
  std::uint64_t L = 0, H = 0;
  /// Violations of 0 < delta < Delta < 1 or L, H >= 1, reported rather than fatal.
  std::vector<std::string> warnings;
};

namespace detail {

// floor(evaluate(d)); when that stays ambiguous and the quantity is a pure
// power X^e with rational e, decide it exactly.
template <class Evaluate>
std::uint64_t floor_power_scale(std::uint64_t X, const char* name, unsigned digits, Evaluate&& evaluate,
                                const std::optional<big_rational>& pure_exponent) {
  if (auto f = floor_with_escalation(evaluate, digits)) {
    if (*f < 0) throw parameter_range(std::string(name) + " is negative");
    return static_cast<std::uint64_t>(*f);
  }
  if (pure_exponent && *pure_exponent > 0) {
    const auto est = static_cast<std::uint64_t>(std::floor(evaluate(digits).to_double()));
    if (auto m = exact_floor_power(X, *pure_exponent, est)) return *m;
  }
  throw precision_exhausted(std::string(name) + " floor is ambiguous", X);
}

}  // namespace detail

/// The raw scale formulas. No range validation: theta = 0 or c outside
/// (1, 9/8) are evaluated as written, which tests use to reach the
/// degenerate regimes.
inline derived_scales compute_scales(const real_constant& c, const real_constant& theta, const real_constant& eta,
                                     std::uint64_t X, unsigned digits = default_digits) {
  if (X < 1) throw parameter_range("X must be positive");
  derived_scales s;
  s.X = X;
  s.c = c;
  s.theta = theta;
  s.eta = eta;
  s.digits = digits;
  const precise_real x(static_cast<std::int64_t>(X), digits);
  s.gamma = precise_real(1, digits) / c.value(digits);
  s.Delta = pow(x, -theta.value(digits));
  s.delta = s.gamma * pow(x, s.gamma - 1) / 10;
  s.lambda = s.Delta * s.delta * 4;

  std::optional<big_rational> l_exp;
  if (theta.exact() && eta.exact()) l_exp = *theta.exact() + *eta.exact();
  s.L = detail::floor_power_scale(
      X, "L", digits,
      [&](unsigned d) {
        return pow(precise_real(static_cast<std::int64_t>(X), d), theta.value(d) + eta.value(d));
      },
      l_exp);
  s.H = detail::floor_power_scale(
      X, "H", digits,
      [&](unsigned d) {
        const precise_real g = precise_real(1, d) / c.value(d);
        const precise_real e = precise_real(1, d) - g + eta.value(d);
        return pow(precise_real(static_cast<std::int64_t>(X), d), e) * 10 / g;
      },
      std::nullopt);

  const precise_real zero(0, digits), one(1, digits);
  if (compare(zero, s.delta) != ordering::less || compare(s.delta, s.Delta) != ordering::less ||
      compare(s.Delta, one) != ordering::less)
    s.warnings.push_back(fmt::format("0 < delta < Delta < 1 fails: delta={}, Delta={}", s.delta.to_decimal(12),
                                     s.Delta.to_decimal(12)));
  if (s.L < 1) s.warnings.push_back("L < 1");
  if (s.H < 1) s.warnings.push_back("H < 1");
  return s;
}

inline derived_scales compute_scales(const experiment_config& cfg) {
  validate(cfg);
  return compute_scales(cfg.c, cfg.theta, cfg.eta, cfg.X, cfg.precision_digits);
}

/// The same scales re-evaluated at another precision.
inline derived_scales at_precision(const derived_scales& s, unsigned digits) {
  return compute_scales(s.c, s.theta, s.eta, s.X, digits);
}

}  // namespace pslab
