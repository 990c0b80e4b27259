#pragma once

// Exponent ranges, in exact rationals, on which the individual estimates
// for the S2/S3 and T2/T3 families apply. An exponent e stands for the
// block size M = X^e; every range is an open interval.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pslab/powers.hpp"
#include "pslab/precise_real.hpp"
#include "pslab/real_constant.hpp"

namespace pslab {

struct open_interval {
  big_rational lo, hi;
  bool contains(const big_rational& e) const { return lo < e && e < hi; }
  bool empty() const { return !(lo < hi); }
};

struct named_range {
  std::string lemma;
  open_interval range;
};

struct range_params {
  big_rational gamma;
  big_rational theta;
  big_rational epsilon = 0;
  big_rational eta = 0;
};

inline range_params make_range_params(const real_constant& c, const real_constant& theta,
                                      const real_constant& epsilon, const real_constant& eta) {
  if (!c.exact() || !theta.exact() || !epsilon.exact() || !eta.exact())
    throw parameter_range("range algebra needs decimal c, theta, epsilon and eta");
  if (*c.exact() <= 0) throw parameter_range("c must be positive");
  return {1 / *c.exact(), *theta.exact(), *epsilon.exact(), *eta.exact()};
}

inline big_rational min_rational(const big_rational& a, const big_rational& b) { return a < b ? a : b; }

/// The three S2 ranges: large M (transferred from T2 with b = 1), medium M
/// and small M (van der Corput).
inline std::vector<named_range> s2_ranges(const range_params& p) {
  const auto& g = p.gamma;
  const auto& e = p.epsilon;
  const auto& n = p.eta;
  return {
      {"S2/type-II-transfer", {5 - 5 * g + 6 * e + 18 * n, g - 2 * e - 6 * n}},
      {"S2/medium-M",
       {2 - 2 * g + 2 * e + 6 * n, min_rational(big_rational(2, 3), 4 * g - 3 - 4 * e - 12 * n)}},
      {"S2/van-der-Corput", {big_rational(0), g - big_rational(1, 2) - 4 * n}},
  };
}

inline std::vector<named_range> s3_ranges(const range_params& p) {
  const auto& g = p.gamma;
  const auto& t = p.theta;
  const auto& e = p.epsilon;
  const auto& n = p.eta;
  return {
      {"S3/type-II-transfer", {5 - 5 * g + 6 * t + 8 * e + 20 * n, g - 2 * t - 2 * e - 7 * n}},
      {"S3/medium-M", {7 - 8 * g + 8 * t + 8 * e + 40 * n, 4 * g - 3 - 4 * t - 4 * e - 20 * n}},
      {"S3/van-der-Corput", {big_rational(0), g - big_rational(1, 2) - t - 5 * n}},
  };
}

/// T2: the estimate holds on M_1 directly and on M_2 after swapping m and n.
inline std::vector<named_range> t2_ranges(const range_params& p) {
  const auto& g = p.gamma;
  const auto& e = p.epsilon;
  const auto& n = p.eta;
  return {
      {"T2/M-range", {5 - 5 * g + 6 * e + 18 * n, g - 2 * e - 6 * n}},
      {"T2/N-range", {1 - g + 2 * e + 6 * n, 5 * g - 4 - 6 * e - 18 * n}},
  };
}

inline std::vector<named_range> t3_ranges(const range_params& p) {
  const auto& g = p.gamma;
  const auto& t = p.theta;
  const auto& e = p.epsilon;
  const auto& n = p.eta;
  return {
      {"T3/M-range", {5 - 5 * g + 6 * t + 8 * e + 20 * n, g - 2 * t - 2 * e - 7 * n}},
      {"T3/N-range", {1 - g + 2 * t + 2 * e + 7 * n, 5 * g - 4 - 6 * t - 8 * e - 20 * n}},
  };
}

/// Whether the union of open intervals covers the half-open (lo, hi].
inline bool covers(std::vector<open_interval> parts, const big_rational& lo, const big_rational& hi) {
  std::sort(parts.begin(), parts.end(), [](const open_interval& a, const open_interval& b) { return a.lo < b.lo; });
  // every point of (lo, reach) is covered; reach itself may not be
  big_rational reach = lo;
  bool started = false;
  for (const auto& iv : parts) {
    if (iv.empty()) continue;
    if (!started) {
      if (iv.lo > lo) return false;
      started = true;
      reach = std::max(reach, iv.hi);
      continue;
    }
    if (iv.lo < reach) reach = std::max(reach, iv.hi);
    else if (reach <= hi) return false;
  }
  return started && reach > hi;
}

inline std::vector<open_interval> intervals_of(const std::vector<named_range>& r) {
  std::vector<open_interval> out;
  for (const auto& n : r) out.push_back(n.range);
  return out;
}

inline const big_rational& s_family_limit() {
  static const big_rational v(15, 22);
  return v;
}

/// The S2 ranges cover every exponent in (0, 15/22].
inline bool s2_covering(const range_params& p) { return covers(intervals_of(s2_ranges(p)), 0, s_family_limit()); }

inline bool s3_covering(const range_params& p) { return covers(intervals_of(s3_ranges(p)), 0, s_family_limit()); }

/// The swapped range for T2/T3 contains the whole T window [7/22, 8/22].
inline bool t2_window_covered(const range_params& p) {
  const auto& r = t2_ranges(p)[1].range;
  return r.lo < big_rational(7, 22) && big_rational(8, 22) < r.hi;
}

inline bool t3_window_covered(const range_params& p) {
  const auto& r = t3_ranges(p)[1].range;
  return r.lo < big_rational(7, 22) && big_rational(8, 22) < r.hi;
}

/// Sign of X^e - M for integers X >= 2, M >= 1 and rational e, exactly
/// when the powers are small enough and otherwise by certified logarithms.
inline int sign_power_vs(std::uint64_t X, const big_rational& e, std::uint64_t M) {
  if (e <= 0) {
    if (e == 0) return M == 1 ? 0 : (M > 1 ? -1 : 1);
    return M >= 1 ? -1 : 1;  // X^e < 1 <= M
  }
  if (auto s = compare_rational_power(X, e, M)) return *s;
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  for (unsigned d : {60u, 200u}) {
    const precise_real er = precise_real::from_decimal(numerator(e).str(), d) /
                            precise_real::from_decimal(denominator(e).str(), d);
    const precise_real lhs = er * log(precise_real(static_cast<std::int64_t>(X), d));
    const precise_real rhs = log(precise_real(static_cast<std::int64_t>(M), d));
    switch (compare(lhs, rhs)) {
      case ordering::less: return -1;
      case ordering::greater: return 1;
      case ordering::equal: return 0;
      case ordering::ambiguous: break;
    }
  }
  throw precision_exhausted("cannot compare X^e with a block size", M);
}

/// X^lo < M < X^hi
inline bool block_in_range(std::uint64_t X, std::uint64_t M, const open_interval& r) {
  return sign_power_vs(X, r.lo, M) < 0 && sign_power_vs(X, r.hi, M) > 0;
}

}  // namespace pslab
