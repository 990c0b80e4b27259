#pragma once

// Direct evaluation of the tailored type I/II exponential sums
//   S1* = sum a*_m c*_l e(alpha l mn)            T1* = ... a*_m b*_n c*_l ...
//   S2* = sum a*_m d*_h e(h (mn)^gamma)          T2* = ... a*_m b*_n d*_h ...
//   S3* = sum a*_m c*_l d*_h e(alpha l mn + h (mn)^gamma), T3* likewise,
// over dyadic blocks m ~ M, n ~ N, mn ~ X, |l| ~ U, |h| ~ V, where x ~ Y
// means Y/2 <= x < Y. S sums take m <= X^(15/22), T sums
// X^(7/22) <= m <= X^(8/22), and always 1 <= |l| <= L, 1 <= |h| <= H.
//
// Alongside the sums live the closed-form estimates they are compared to.

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "pslab/coefficients.hpp"
#include "pslab/detector.hpp"
#include "pslab/diophantine.hpp"
#include "pslab/experiment.hpp"
#include "pslab/fixed_phase.hpp"
#include "pslab/parallel.hpp"
#include "pslab/range_algebra.hpp"

namespace pslab {

enum class sum_kind { S1, S2, S3, T1, T2, T3 };
enum class sum_family { S, T };

inline constexpr sum_kind all_sum_kinds[] = {sum_kind::S1, sum_kind::S2, sum_kind::S3,
                                             sum_kind::T1, sum_kind::T2, sum_kind::T3};

inline const char* sum_kind_name(sum_kind k) {
  constexpr const char* names[] = {"S1", "S2", "S3", "T1", "T2", "T3"};
  return names[static_cast<int>(k)];
}

inline sum_kind parse_sum_kind(std::string_view s) {
  for (sum_kind k : all_sum_kinds)
    if (s == sum_kind_name(k)) return k;
  throw parameter_range("unknown sum kind '" + std::string(s) + "' (expected S1..S3 or T1..T3)");
}

inline sum_family family_of(sum_kind k) {
  return k == sum_kind::S1 || k == sum_kind::S2 || k == sum_kind::S3 ? sum_family::S : sum_family::T;
}
inline bool uses_l(sum_kind k) { return k != sum_kind::S2 && k != sum_kind::T2; }
inline bool uses_h(sum_kind k) { return k != sum_kind::S1 && k != sum_kind::T1; }

/// Dyadic sizes; U = 0 (V = 0) marks a sum without an l (h) variable.
struct dyadic_block {
  std::uint64_t M = 0, N = 0, U = 0, V = 0;
  friend bool operator==(const dyadic_block&, const dyadic_block&) = default;
};

struct index_range {
  std::uint64_t lo = 1, hi = 0;  // inclusive; empty when lo > hi
  bool empty() const { return lo > hi; }
};

/// [Y/2, Y) intersected with [lo, hi].
inline index_range dyadic_part(std::uint64_t Y, index_range within) {
  index_range r{std::max<std::uint64_t>((Y + 1) / 2, within.lo), std::min<std::uint64_t>(Y - 1, within.hi)};
  if (Y == 0) r = {1, 0};
  return r;
}

/// Integer m-window of a family: [1, floor(X^(15/22))] or
/// [ceil(X^(7/22)), floor(X^(8/22))], decided exactly.
inline index_range family_window(std::uint64_t X, sum_family f) {
  auto floor_root = [X](unsigned num) {
    const big_rational e(num, 22);
    std::uint64_t m = static_cast<std::uint64_t>(std::pow(static_cast<double>(X), num / 22.0));
    while (m > 0 && *compare_rational_power(X, e, m) < 0) --m;
    while (*compare_rational_power(X, e, m + 1) >= 0) ++m;
    return m;
  };
  if (f == sum_family::S) return {1, floor_root(15)};
  std::uint64_t lo = floor_root(7);
  if (*compare_rational_power(X, big_rational(7, 22), lo) != 0) ++lo;  // ceil
  return {lo, floor_root(8)};
}

/// Everything the evaluators need, precomputed from a configuration.
struct sum_context {
  std::uint64_t X = 0;
  std::uint64_t L = 0, H = 0;
  long double gamma = 0;
  fixed_fraction alpha;
  double theta = 0, eta = 0, epsilon = 0;
  index_range window_S, window_T;
  coefficient_sequence a, b, c, d;
  /// Convergent denominators q admissible for X (X^(2 theta + 10 eta) <= q <= X^(1 - theta - 10 eta)).
  std::vector<std::uint64_t> admissible_q;
  std::optional<range_params> ranges;

  const index_range& window(sum_family f) const { return f == sum_family::S ? window_S : window_T; }
};

struct coefficient_kinds {
  coefficient_kind a = coefficient_kind::all_ones;
  coefficient_kind b = coefficient_kind::all_ones;
  coefficient_kind c = coefficient_kind::all_ones;
  coefficient_kind d = coefficient_kind::all_ones;
};

inline sum_context make_sum_context(const experiment_config& cfg, const coefficient_kinds& kinds) {
  const derived_scales s = compute_scales(cfg);
  if (cfg.X > (1ull << 32))
    throw budget_exceeded(fmt::format("exponential sums at X={} exceed the coefficient-table budget", cfg.X),
                          static_cast<double>(cfg.X));
  sum_context ctx;
  ctx.X = cfg.X;
  ctx.L = std::max<std::uint64_t>(s.L, 1);
  ctx.H = std::max<std::uint64_t>(s.H, 1);
  ctx.gamma = s.gamma.to_long_double();
  ctx.alpha = to_fixed_fraction(cfg.alpha.value(std::max(cfg.precision_digits, 60u)));
  ctx.theta = cfg.theta.value().to_double();
  ctx.eta = cfg.eta.value().to_double();
  ctx.epsilon = cfg.epsilon.value().to_double();
  ctx.window_S = family_window(cfg.X, sum_family::S);
  ctx.window_T = family_window(cfg.X, sum_family::T);
  const double eps = ctx.epsilon;
  ctx.a = make_arithmetic_sequence(kinds.a, std::max<std::uint64_t>(ctx.window_S.hi, ctx.window_T.hi), eps, cfg.seed, 1);
  ctx.b = make_arithmetic_sequence(kinds.b, cfg.X, eps, cfg.seed, 2);
  const auto big = cached_approximant(s.Delta, static_cast<std::uint32_t>(ctx.L), approximant_side::majorant);
  const auto small = cached_approximant(s.delta, static_cast<std::uint32_t>(ctx.H), approximant_side::majorant);
  ctx.c = make_frequency_sequence(kinds.c, *big, cfg.seed, 3);
  ctx.d = make_frequency_sequence(kinds.d, *small, cfg.seed, 4);
  for (const auto& r : admissible_denominators(cfg.alpha, cfg.X, cfg.theta, cfg.eta, cfg.precision_digits))
    ctx.admissible_q.push_back(static_cast<std::uint64_t>(r.q));
  ctx.ranges = make_range_params(cfg.c, cfg.theta, cfg.epsilon, cfg.eta);
  return ctx;
}

inline coefficient_kinds kinds_from_config(const experiment_config& cfg) {
  coefficient_kinds k;
  k.a = parse_coefficient_kind(cfg.coeff_a);
  k.b = parse_coefficient_kind(cfg.coeff_b);
  return k;
}

// ---------------------------------------------------------------------------
// Summation.

/// Neumaier-compensated complex accumulator.
struct compensated_sum {
  double re = 0, im = 0, re_c = 0, im_c = 0;

  static void add(double& s, double& c, double x) {
    const double t = s + x;
    if (std::fabs(s) >= std::fabs(x)) c += (s - t) + x;
    else c += (x - t) + s;
    s = t;
  }
  void add(std::complex<double> z) {
    add(re, re_c, z.real());
    add(im, im_c, z.imag());
  }
  void add(const compensated_sum& o) {
    add(o.value());
  }
  std::complex<double> value() const { return {re + re_c, im + im_c}; }
};

inline std::complex<double> unit_exp(double phase) {
  constexpr double two_pi = 2 * std::numbers::pi;
  return {std::cos(two_pi * phase), std::sin(two_pi * phase)};
}

/// alpha * j mod 1, in [0, 1).
inline double linear_phase(const sum_context& ctx, std::uint64_t j) {
  return fixed_to_double(ctx.alpha.value * j);
}

/// h * k^gamma mod 1, reduced before the multiplication by h.
inline double power_phase(const sum_context& ctx, std::uint64_t k, std::uint64_t h) {
  const long double t = powl(static_cast<long double>(k), ctx.gamma);
  const long double f = t - floorl(t);
  const long double p = f * static_cast<long double>(h);
  return static_cast<double>(p - floorl(p));
}

inline index_range n_range_for(std::uint64_t X, std::uint64_t m, index_range n_block) {
  // X/2 <= mn < X
  const std::uint64_t lo = (X + 2 * m - 1) / (2 * m);
  const std::uint64_t hi = (X - 1) / m;
  return {std::max(lo, n_block.lo), std::min(hi, n_block.hi)};
}

struct block_ranges {
  index_range m, n, l, h;  // l, h empty => variable absent
};

inline block_ranges ranges_of(const sum_context& ctx, sum_kind kind, const dyadic_block& b) {
  block_ranges r;
  r.m = dyadic_part(b.M, ctx.window(family_of(kind)));
  r.n = dyadic_part(b.N, {1, ctx.X - 1});
  r.l = uses_l(kind) ? dyadic_part(b.U, {1, ctx.L}) : index_range{1, 0};
  r.h = uses_h(kind) ? dyadic_part(b.V, {1, ctx.H}) : index_range{1, 0};
  return r;
}

inline std::uint64_t count_pairs(std::uint64_t X, index_range m, index_range n) {
  std::uint64_t total = 0;
  for (std::uint64_t mm = m.lo; mm <= m.hi && !m.empty(); ++mm) {
    const auto nr = n_range_for(X, mm, n);
    if (!nr.empty()) total += nr.hi - nr.lo + 1;
  }
  return total;
}

inline std::uint64_t count_terms(const sum_context& ctx, sum_kind kind, const dyadic_block& b) {
  const block_ranges r = ranges_of(ctx, kind, b);
  const std::uint64_t pairs = count_pairs(ctx.X, r.m, r.n);
  const std::uint64_t nl = uses_l(kind) ? (r.l.empty() ? 0 : 2 * (r.l.hi - r.l.lo + 1)) : 1;
  const std::uint64_t nh = uses_h(kind) ? (r.h.empty() ? 0 : 2 * (r.h.hi - r.h.lo + 1)) : 1;
  return pairs * nl * nh;
}

/// All dyadic blocks of a family. M, N, U, V run over powers of two with
/// non-empty parts, ordered by (M, N, U, V); mn ~ X must be attainable.
inline std::vector<dyadic_block> dyadic_blocks(const sum_context& ctx, sum_kind kind) {
  std::vector<dyadic_block> out;
  const index_range mw = ctx.window(family_of(kind));
  if (mw.empty()) return out;
  auto powers_covering = [](index_range r) {
    std::vector<std::uint64_t> p;
    for (std::uint64_t Y = 2; (Y + 1) / 2 <= r.hi; Y *= 2)
      if (!dyadic_part(Y, r).empty()) p.push_back(Y);
    return p;
  };
  const auto Ms = powers_covering(mw);
  const auto Ns = powers_covering({1, ctx.X - 1});
  const auto Us = uses_l(kind) ? powers_covering({1, ctx.L}) : std::vector<std::uint64_t>{0};
  const auto Vs = uses_h(kind) ? powers_covering({1, ctx.H}) : std::vector<std::uint64_t>{0};
  for (std::uint64_t M : Ms)
    for (std::uint64_t N : Ns) {
      if (count_pairs(ctx.X, dyadic_part(M, mw), dyadic_part(N, {1, ctx.X - 1})) == 0) continue;
      for (std::uint64_t U : Us)
        for (std::uint64_t V : Vs) out.push_back({M, N, U, V});
    }
  return out;
}

inline constexpr double default_term_budget = 1e10;
inline constexpr std::uint64_t m_chunk = 16;

namespace detail {

// sum over +-l in r.l of c*_l e(alpha l k), or 1 when l is absent
inline std::complex<double> l_factor(const sum_context& ctx, sum_kind kind, const index_range& l, std::uint64_t k) {
  if (!uses_l(kind)) return 1.0;
  compensated_sum s;
  for (std::uint64_t j = l.lo; j <= l.hi && !l.empty(); ++j) {
    const double c = ctx.c.star(j);
    const std::complex<double> z = unit_exp(linear_phase(ctx, j * k));
    s.add(c * z);
    s.add(c * std::conj(z));
  }
  return s.value();
}

inline std::complex<double> h_factor(const sum_context& ctx, sum_kind kind, const index_range& h, std::uint64_t k) {
  if (!uses_h(kind)) return 1.0;
  compensated_sum s;
  for (std::uint64_t j = h.lo; j <= h.hi && !h.empty(); ++j) {
    const double d = ctx.d.star(j);
    const std::complex<double> z = unit_exp(power_phase(ctx, k, j));
    s.add(d * z);
    s.add(d * std::conj(z));
  }
  return s.value();
}

inline double n_weight(const sum_context& ctx, sum_kind kind, std::uint64_t n) {
  return family_of(kind) == sum_family::T ? ctx.b.star(n) : 1.0;
}

}  // namespace detail

/// The exact value of one block sum. Work is split into fixed chunks of 16
/// consecutive m and merged in chunk order, so the result does not depend
/// on the number of threads.
inline std::complex<double> block_sum(const sum_context& ctx, sum_kind kind, const dyadic_block& b,
                                      unsigned threads = 1) {
  const block_ranges r = ranges_of(ctx, kind, b);
  if (r.m.empty() || r.n.empty()) return 0.0;
  if ((uses_l(kind) && r.l.empty()) || (uses_h(kind) && r.h.empty())) return 0.0;
  const std::uint64_t span = r.m.hi - r.m.lo + 1;
  const std::size_t chunks = static_cast<std::size_t>((span + m_chunk - 1) / m_chunk);
  const auto parts = ordered_parallel_map(chunks, threads, [&](std::size_t i) {
    compensated_sum s;
    const std::uint64_t m0 = r.m.lo + i * m_chunk;
    const std::uint64_t m1 = std::min(r.m.hi, m0 + m_chunk - 1);
    for (std::uint64_t m = m0; m <= m1; ++m) {
      const double am = ctx.a.star(m);
      if (am == 0) continue;
      const index_range nr = n_range_for(ctx.X, m, r.n);
      for (std::uint64_t n = nr.lo; n <= nr.hi && !nr.empty(); ++n) {
        const double w = am * detail::n_weight(ctx, kind, n);
        if (w == 0) continue;
        const std::uint64_t k = m * n;
        s.add(w * detail::l_factor(ctx, kind, r.l, k) * detail::h_factor(ctx, kind, r.h, k));
      }
    }
    return s;
  });
  compensated_sum total;
  for (const auto& p : parts) total.add(p);
  return total.value();
}

/// The same family sum over the full ranges, term by term and without any
/// dyadic splitting or factorisation; the reference for decomposition checks.
inline std::complex<double> monolithic_sum(const sum_context& ctx, sum_kind kind) {
  const index_range mw = ctx.window(family_of(kind));
  compensated_sum s;
  const std::int64_t L = uses_l(kind) ? static_cast<std::int64_t>(ctx.L) : 0;
  const std::int64_t H = uses_h(kind) ? static_cast<std::int64_t>(ctx.H) : 0;
  for (std::uint64_t m = mw.lo; m <= mw.hi && !mw.empty(); ++m) {
    const index_range nr = n_range_for(ctx.X, m, {1, ctx.X - 1});
    for (std::uint64_t n = nr.lo; n <= nr.hi && !nr.empty(); ++n) {
      const std::uint64_t k = m * n;
      const double w = ctx.a.star(m) * detail::n_weight(ctx, kind, n);
      for (std::int64_t l = -L; l <= L; ++l) {
        if (uses_l(kind) && l == 0) continue;
        const std::uint64_t al = static_cast<std::uint64_t>(l < 0 ? -l : l);
        const double cl = uses_l(kind) ? ctx.c.star(al) : 1.0;
        const double pl = uses_l(kind) ? linear_phase(ctx, al * k) : 0.0;
        for (std::int64_t h = -H; h <= H; ++h) {
          if (uses_h(kind) && h == 0) continue;
          const std::uint64_t ah = static_cast<std::uint64_t>(h < 0 ? -h : h);
          const double dh = uses_h(kind) ? ctx.d.star(ah) : 1.0;
          const double ph = uses_h(kind) ? power_phase(ctx, k, ah) : 0.0;
          const double phase = (l < 0 ? -pl : pl) + (h < 0 ? -ph : ph);
          s.add(w * cl * dh * unit_exp(phase));
        }
      }
    }
  }
  return s.value();
}

// ---------------------------------------------------------------------------
// Closed-form estimates.

/// (KN/q + K + q) log(2KNq); q must give a Dirichlet approximation of alpha.
inline precise_real linear_sum_bound(const real_constant& alpha, std::uint64_t K, std::uint64_t N, std::uint64_t q,
                                     unsigned digits = default_digits) {
  if (K < 1 || N < 1 || q < 1) throw parameter_range("linear_sum_bound needs K, N, q >= 1");
  const precise_real nearest = nearest_integer(alpha.value(digits) * static_cast<std::int64_t>(q));
  const auto a = certified_floor(nearest);
  if (!a || !verify_dirichlet(alpha, *a, static_cast<std::int64_t>(q), digits))
    throw parameter_range(fmt::format("q={} gives no Dirichlet approximation |alpha - a/q| < q^-2", q));
  const precise_real k(static_cast<std::int64_t>(K), digits), n(static_cast<std::int64_t>(N), digits),
      qq(static_cast<std::int64_t>(q), digits);
  return (k * n / qq + k + qq) * log(k * n * qq * 2);
}

/// min{N, 1/||alpha k||}
inline precise_real single_linear_bound(const real_constant& alpha, std::uint64_t k, std::uint64_t N,
                                        unsigned digits = default_digits) {
  for (unsigned d : {digits, 2 * digits}) {
    const precise_real dist = nearest_int_distance(alpha.value(d + 20) * static_cast<std::int64_t>(k));
    if (compare(dist, precise_real(0, d)) != ordering::greater) continue;
    const precise_real inv = precise_real(1, d) / dist;
    const precise_real n(static_cast<std::int64_t>(N), d);
    switch (compare(n, inv)) {
      case ordering::less:
      case ordering::equal: return n;
      case ordering::greater: return inv;
      case ordering::ambiguous: return n;  // both branches agree to within the error bound
    }
  }
  throw precision_exhausted("||alpha k|| is indistinguishable from 0", k);
}

/// (sum |alpha_k|^2 sum |beta_n|^2)^(1/2) (KN/q + K + N + q)^(1/2) (log 2KNq)^(1/2)
inline precise_real bilinear_bound(double norm_a, double norm_b, std::uint64_t K, std::uint64_t N, std::uint64_t q,
                                   unsigned digits = default_digits) {
  if (norm_a < 0 || norm_b < 0) throw parameter_range("norms must be non-negative");
  if (K < 1 || N < 1 || q < 1) throw parameter_range("bilinear_bound needs K, N, q >= 1");
  precise_real na(digits), nb(digits);
  mpfr_set_d(na.raw(), norm_a, MPFR_RNDN);
  mpfr_set_d(nb.raw(), norm_b, MPFR_RNDN);
  const precise_real k(static_cast<std::int64_t>(K), digits), n(static_cast<std::int64_t>(N), digits),
      qq(static_cast<std::int64_t>(q), digits);
  return sqrt(na * nb) * sqrt(k * n / qq + k + n + qq) * sqrt(log(k * n * qq * 2));
}

/// (b - a) Lambda^(1/2) + Lambda^(-1/2)
inline precise_real vdc_bound(double range_len, double Lambda, unsigned digits = default_digits) {
  if (!(Lambda > 0)) throw parameter_range("van der Corput bound needs Lambda > 0");
  precise_real len(digits), lam(digits);
  mpfr_set_d(len.raw(), range_len, MPFR_RNDN);
  mpfr_set_d(lam.raw(), Lambda, MPFR_RNDN);
  const precise_real root = sqrt(lam);
  return len * root + precise_real(1, digits) / root;
}

/// sum_{n_lo < n <= n_hi} e(h (mn)^gamma)
inline std::complex<double> eval_smooth_sum(double h, std::uint64_t m, long double gamma, std::uint64_t n_lo,
                                            std::uint64_t n_hi) {
  compensated_sum s;
  for (std::uint64_t n = n_lo + 1; n <= n_hi; ++n) {
    const long double t = powl(static_cast<long double>(m) * static_cast<long double>(n), gamma) * h;
    s.add(unit_exp(static_cast<double>(t - floorl(t))));
  }
  return s.value();
}

/// Lambda for f(t) = h (mt)^gamma on [n_lo, n_hi]: the geometric mean of
/// |f''| at the two ends (|f''| is monotone there, so f'' lies within a
/// bounded factor of this value).
inline double smooth_sum_lambda(double h, std::uint64_t m, double gamma, std::uint64_t n_lo, std::uint64_t n_hi) {
  auto f2 = [&](double t) {
    return std::fabs(h * gamma * (gamma - 1)) * std::pow(static_cast<double>(m), gamma) * std::pow(t, gamma - 2);
  };
  return std::sqrt(f2(static_cast<double>(std::max<std::uint64_t>(n_lo, 1))) * f2(static_cast<double>(n_hi)));
}

/// sum_{n_lo <= n < n_hi} e(alpha k n), with alpha k n reduced in fixed point
inline std::complex<double> linear_exp_sum(const fixed_fraction& alpha, std::uint64_t k, std::uint64_t n_lo,
                                           std::uint64_t n_hi) {
  compensated_sum s;
  const u128 step = alpha.value * k;
  u128 phase = step * n_lo;
  for (std::uint64_t n = n_lo; n < n_hi; ++n, phase += step) s.add(unit_exp(fixed_to_double(phase)));
  return s.value();
}

struct lemma_bound {
  double value = 0;
  std::string lemma;
};

namespace detail {

inline double xp(double X, double e) { return std::pow(X, e); }

inline void keep_smaller(std::optional<lemma_bound>& best, double v, const std::string& lemma) {
  if (!best || v < best->value) best = lemma_bound{v, lemma};
}

}  // namespace detail

/// The displayed estimate for a block, taken from every lemma whose
/// M-range admits the block; the smallest applicable bound is returned.
/// Implied constants are 1.
inline lemma_bound theoretical_target(sum_kind kind, const dyadic_block& b, const sum_context& ctx) {
  using detail::xp;
  const double X = static_cast<double>(ctx.X);
  const double g = static_cast<double>(ctx.gamma);
  const double t = ctx.theta, e = ctx.epsilon, n = ctx.eta;
  const double M = static_cast<double>(b.M), U = static_cast<double>(b.U);
  std::optional<lemma_bound> best;
  if (!ctx.ranges) throw parameter_range("sum context lacks exact exponents");
  const range_params& rp = *ctx.ranges;
  auto in = [&](const named_range& r, std::uint64_t size) { return block_in_range(ctx.X, size, r.range); };
  const std::uint64_t swapped = std::max<std::uint64_t>(ctx.X / std::max<std::uint64_t>(b.M, 1), 1);

  auto t2_display = [&](double m) {
    return xp(X, 2.5 - g) + xp(X, 3 - 2 * g) + xp(X, 2 - g) * m + xp(X, (11 - 5 * g) / 3) * std::pow(m, -1.0 / 3) +
           xp(X, (10 - 4 * g) / 3) * std::pow(m, -2.0 / 3) + xp(X, (14 - 8 * g) / 3) * std::pow(m, -4.0 / 3);
  };
  auto t3_display = [&](double m) {
    return xp(X, 1 - 2 * n) + (xp(X, 2.25 + 1.5 * t - 1.25 * g) * std::pow(m, -0.25) +
                               xp(X, 1.5 - g / 2) * std::pow(m, -0.5) +
                               xp(X, 1.75 + t / 2 - 0.75 * g) * std::pow(m, -0.25)) *
                                  xp(X, 2 * e + 3 * n);
  };

  switch (kind) {
    case sum_kind::S1:
      for (std::uint64_t q : ctx.admissible_q)
        detail::keep_smaller(best, (U * X / q + M * U + q) * xp(X, e), fmt::format("S1/linear(q={})", q));
      break;
    case sum_kind::T1:
      for (std::uint64_t q : ctx.admissible_q)
        detail::keep_smaller(best, std::sqrt(U * X) * std::sqrt(U * X / q + M * U + X / M + q) * xp(X, e),
                             fmt::format("T1/bilinear(q={})", q));
      break;
    case sum_kind::S2: {
      const auto r = s2_ranges(rp);
      if (in(r[0], b.M)) detail::keep_smaller(best, std::sqrt(t2_display(M)) * xp(X, e + n), r[0].lemma);
      if (in(r[1], b.M))
        detail::keep_smaller(best,
                             (xp(X, 1.75 - g) * std::pow(M, 0.25) + xp(X, 2 - g) * std::pow(M, -0.5) +
                              xp(X, 15.0 / 8 - g) * std::pow(M, -0.125)) *
                                 xp(X, e + n),
                             r[1].lemma);
      if (in(r[2], b.M)) detail::keep_smaller(best, xp(X, 1.5 - g + 2 * n) * M, r[2].lemma);
      break;
    }
    case sum_kind::T2: {
      const auto r = t2_ranges(rp);
      if (in(r[0], b.M)) detail::keep_smaller(best, std::sqrt(t2_display(M)) * xp(X, e + n), r[0].lemma);
      if (in(r[1], b.M))
        detail::keep_smaller(best, std::sqrt(t2_display(static_cast<double>(swapped))) * xp(X, e + n), r[1].lemma);
      break;
    }
    case sum_kind::S3: {
      const auto r = s3_ranges(rp);
      if (in(r[0], b.M)) detail::keep_smaller(best, t3_display(M), r[0].lemma);
      if (in(r[1], b.M))
        detail::keep_smaller(
            best, (xp(X, 1.75 + t - g) * std::pow(M, 0.25) + xp(X, 15.0 / 8 + t - g) * std::pow(M, -0.125)) *
                      xp(X, e + 3 * n),
            r[1].lemma);
      if (in(r[2], b.M)) detail::keep_smaller(best, xp(X, 1.5 - g + t + 3 * n) * M, r[2].lemma);
      break;
    }
    case sum_kind::T3: {
      const auto r = t3_ranges(rp);
      if (in(r[0], b.M)) detail::keep_smaller(best, t3_display(M), r[0].lemma);
      if (in(r[1], b.M)) detail::keep_smaller(best, t3_display(static_cast<double>(swapped)), r[1].lemma);
      break;
    }
  }
  if (!best)
    throw out_of_lemma_range(fmt::format("no estimate for {} covers M={} at X={}", sum_kind_name(kind), b.M, ctx.X));
  return *best;
}

struct sum_report {
  sum_kind kind = sum_kind::S1;
  dyadic_block block;
  std::complex<double> exact_value;
  double abs_value = 0;
  double target = 0;  ///< X^(1 - 2 eta)
  std::optional<lemma_bound> bound;
  double ratio_to_target = 0;
  /// abs_value / bound: the empirical implied constant of the estimate
  std::optional<double> ratio_to_bound;
  std::uint64_t term_count = 0;
};

inline sum_report direct_sum(sum_kind kind, const dyadic_block& b, const sum_context& ctx, unsigned threads = 1,
                             double term_budget = default_term_budget) {
  sum_report r;
  r.kind = kind;
  r.block = b;
  r.term_count = count_terms(ctx, kind, b);
  if (static_cast<double>(r.term_count) > term_budget)
    throw budget_exceeded(fmt::format("block M={} N={} U={} V={} needs {} terms (budget {:.0f})", b.M, b.N, b.U, b.V,
                                      r.term_count, term_budget),
                          static_cast<double>(r.term_count));
  r.exact_value = block_sum(ctx, kind, b, threads);
  r.abs_value = std::abs(r.exact_value);
  r.target = std::pow(static_cast<double>(ctx.X), 1 - 2 * ctx.eta);
  r.ratio_to_target = r.abs_value / r.target;
  try {
    r.bound = theoretical_target(kind, b, ctx);
    r.ratio_to_bound = r.abs_value / r.bound->value;
  } catch (const out_of_lemma_range&) {
    r.bound.reset();
  }
  return r;
}

}  // namespace pslab
