#pragma once

// The comparison layer between the thin set A and the interval
// B = [X/2, X): prime counts for both, and the type I/II identities
//   sum_{mn in A, m in W} a_m b_n  =  lambda sum_{mn in B, m in W} a_m b_n + error
// with W = [1, X^(15/22)] (type I, b = 1) or [X^(7/22), X^(8/22)] (type II).

#include <cstdint>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "pslab/coefficients.hpp"
#include "pslab/experiment.hpp"
#include "pslab/expsum.hpp"
#include "pslab/parallel.hpp"
#include "pslab/ps_sieve.hpp"
#include "pslab/sieve.hpp"

namespace pslab {

/// Primes p with [p^gamma + 2 delta] condition true that are nevertheless
/// not Piatetski-Shapiro primes: the "X large enough" step failing.
struct implication_failure {
  std::uint64_t p = 0;
  std::uint64_t X = 0;
};

struct count_report {
  std::uint64_t X = 0;
  std::uint64_t count_B_primes = 0;
  std::uint64_t count_A_primes = 0;  ///< |A n P|, threshold Delta = X^-theta
  std::uint64_t count_theorem = 0;   ///< PS primes in B with ||alpha p + beta|| < p^-theta
  std::uint64_t count_ps_primes = 0; ///< PS primes in B
  precise_real lambda;
  precise_real harman_threshold;     ///< (lambda / 10) count_B_primes
  bool theorem_satisfied = false;    ///< count_A_primes > 0
  bool harman_satisfied = false;     ///< count_A_primes > harman_threshold
  std::vector<implication_failure> implication_failures;
  std::vector<std::uint64_t> admissible_q;
};

namespace detail {

struct segment_counts {
  std::uint64_t B = 0, A = 0, theorem = 0, ps = 0;
  std::vector<std::uint64_t> failures;
};

}  // namespace detail

inline count_report headline_count(const membership_kernel& kernel, unsigned threads = 0) {
  const derived_scales& s = kernel.scales();
  const std::uint64_t lo = (s.X + 1) / 2, hi = s.X;
  const auto parts = map_prime_segments(lo, hi, threads, [&](std::uint64_t, std::uint64_t,
                                                             const std::vector<std::uint64_t>& primes) {
    detail::segment_counts c;
    c.B = primes.size();
    for (std::uint64_t p : primes) {
      const bool frac = kernel.fractional(p);
      if (frac && kernel.diophantine_A(p)) ++c.A;
      const bool ps = kernel.is_ps(p);
      if (ps) {
        ++c.ps;
        if (kernel.theorem_diophantine(p)) ++c.theorem;
      }
      if (frac && !ps) c.failures.push_back(p);
    }
    return c;
  });
  count_report r;
  r.X = s.X;
  for (const auto& c : parts) {
    r.count_B_primes += c.B;
    r.count_A_primes += c.A;
    r.count_theorem += c.theorem;
    r.count_ps_primes += c.ps;
    for (auto p : c.failures) r.implication_failures.push_back({p, s.X});
  }
  r.lambda = s.lambda;
  r.harman_threshold = s.lambda / 10 * static_cast<std::int64_t>(r.count_B_primes);
  r.theorem_satisfied = r.count_A_primes > 0;
  const precise_real a(static_cast<std::int64_t>(r.count_A_primes), s.digits);
  r.harman_satisfied = compare(a, r.harman_threshold) == ordering::greater;
  if (compare(a, r.harman_threshold) == ordering::ambiguous)
    throw precision_exhausted("count_A_primes is indistinguishable from the Harman threshold", r.count_A_primes);
  return r;
}

inline count_report headline_count(const experiment_config& cfg, unsigned threads = 0) {
  const derived_scales s = compute_scales(cfg);
  count_report r = headline_count(membership_kernel(cfg.alpha, cfg.beta, s), threads);
  for (const auto& q : admissible_denominators(cfg.alpha, cfg.X, cfg.theta, cfg.eta, cfg.precision_digits))
    r.admissible_q.push_back(static_cast<std::uint64_t>(q.q));
  return r;
}

enum class comparison_kind { type_I, type_II };

inline const char* comparison_kind_name(comparison_kind k) { return k == comparison_kind::type_I ? "typeI" : "typeII"; }

inline comparison_kind parse_comparison_kind(std::string_view s) {
  if (s == "I" || s == "typeI" || s == "1") return comparison_kind::type_I;
  if (s == "II" || s == "typeII" || s == "2") return comparison_kind::type_II;
  throw parameter_range("unknown comparison kind '" + std::string(s) + "' (expected I or II)");
}

struct comparison_report {
  comparison_kind kind = comparison_kind::type_I;
  std::uint64_t X = 0;
  std::string a_kind, b_kind;
  index_range m_window;
  std::uint64_t pair_count = 0;  ///< (m, n) pairs with mn in B
  precise_real lhs_A;            ///< sum over mn in A
  precise_real rhs_B;            ///< sum over mn in B
  precise_real lambda;
  precise_real rhs_B_scaled;     ///< lambda rhs_B
  precise_real deviation;        ///< |lhs_A - rhs_B_scaled|
  precise_real relative;         ///< deviation / rhs_B_scaled (0 when both sides vanish)
};

namespace detail {

inline precise_real from_double(double v, unsigned digits) {
  precise_real r(digits);
  mpfr_set_d(r.raw(), v, MPFR_RNDN);
  return r;
}

struct comparison_partial {
  compensated_sum lhs, rhs;
  std::uint64_t pairs = 0;
};

}  // namespace detail

inline constexpr std::uint64_t comparison_m_chunk = 256;

/// Both sides of the comparison for an explicit A (sorted, inside B).
/// Integer-valued weights give exact sums as long as they stay below 2^53.
inline comparison_report harman_compare(comparison_kind kind, std::uint64_t X, const std::vector<std::uint64_t>& A,
                                        const precise_real& lambda, const coefficient_sequence& a,
                                        const coefficient_sequence& b, unsigned threads = 0,
                                        double term_budget = default_term_budget) {
  comparison_report r;
  r.kind = kind;
  r.X = X;
  r.a_kind = coefficient_kind_name(a.kind);
  r.b_kind = kind == comparison_kind::type_I ? "none" : coefficient_kind_name(b.kind);
  r.m_window = family_window(X, kind == comparison_kind::type_I ? sum_family::S : sum_family::T);
  const index_range w = r.m_window;
  const std::uint64_t b_lo = (X + 1) / 2;
  if (!w.empty() && a.size() < w.hi) throw parameter_range("a_m sequence is shorter than the m-window");
  if (kind == comparison_kind::type_II && b.size() < X / std::max<std::uint64_t>(w.lo, 1))
    throw parameter_range("b_n sequence is shorter than the n-range");

  const double estimate = w.empty() ? 0.0 : static_cast<double>(X) / 2 * (std::log(static_cast<double>(w.hi)) + 1);
  if (estimate > term_budget)
    throw budget_exceeded(fmt::format("comparison at X={} needs about {:.0f} pairs", X, estimate), estimate);

  std::vector<std::uint8_t> in_A(X - b_lo, 0);
  for (std::uint64_t v : A) {
    if (v < b_lo || v >= X) throw parameter_range(fmt::format("{} lies outside [X/2, X)", v));
    in_A[v - b_lo] = 1;
  }

  const std::size_t chunks =
      w.empty() ? 0 : static_cast<std::size_t>((w.hi - w.lo + comparison_m_chunk) / comparison_m_chunk);
  const auto parts = ordered_parallel_map(chunks, threads, [&](std::size_t i) {
    detail::comparison_partial part;
    const std::uint64_t m0 = w.lo + i * comparison_m_chunk;
    const std::uint64_t m1 = std::min(w.hi, m0 + comparison_m_chunk - 1);
    for (std::uint64_t m = m0; m <= m1; ++m) {
      const double am = a.value(m);
      const index_range nr = n_range_for(X, m, {1, X - 1});
      if (nr.empty()) continue;
      part.pairs += nr.hi - nr.lo + 1;
      if (am == 0) continue;
      double lhs = 0, rhs = 0;
      compensated_sum lhs_c, rhs_c;
      for (std::uint64_t n = nr.lo; n <= nr.hi; ++n) {
        const double bn = kind == comparison_kind::type_I ? 1.0 : b.value(n);
        if (kind == comparison_kind::type_I) {
          rhs += 1;
          if (in_A[m * n - b_lo]) lhs += 1;
        } else {
          rhs_c.add(bn);
          if (in_A[m * n - b_lo]) lhs_c.add(bn);
        }
      }
      if (kind == comparison_kind::type_I) {
        part.lhs.add(am * lhs);
        part.rhs.add(am * rhs);
      } else {
        part.lhs.add(am * lhs_c.value().real());
        part.rhs.add(am * rhs_c.value().real());
      }
    }
    return part;
  });
  compensated_sum lhs, rhs;
  for (const auto& p : parts) {
    lhs.add(p.lhs);
    rhs.add(p.rhs);
    r.pair_count += p.pairs;
  }
  const unsigned d = lambda.digits();
  r.lhs_A = detail::from_double(lhs.value().real(), d);
  r.rhs_B = detail::from_double(rhs.value().real(), d);
  r.lambda = lambda;
  r.rhs_B_scaled = lambda * r.rhs_B;
  r.deviation = abs(r.lhs_A - r.rhs_B_scaled);
  r.relative = r.rhs_B_scaled.is_zero() ? precise_real(0, d) : r.deviation / r.rhs_B_scaled;
  return r;
}

inline comparison_report harman_compare(comparison_kind kind, const experiment_config& cfg, unsigned threads = 0) {
  const derived_scales s = compute_scales(cfg);
  const set_construction sets = build_sets(membership_kernel(cfg.alpha, cfg.beta, s), threads);
  const coefficient_kind ak = parse_coefficient_kind(cfg.coeff_a);
  const coefficient_kind bk = parse_coefficient_kind(cfg.coeff_b);
  const double eps = 0;  // raw a_m, b_n enter the identities
  const index_range w = family_window(cfg.X, kind == comparison_kind::type_I ? sum_family::S : sum_family::T);
  const auto a = make_arithmetic_sequence(ak, std::max<std::uint64_t>(w.hi, 1), eps, cfg.seed, 1);
  const auto b = kind == comparison_kind::type_II
                     ? make_arithmetic_sequence(bk, cfg.X, eps, cfg.seed, 2)
                     : make_arithmetic_sequence(coefficient_kind::all_ones, 1, eps, cfg.seed, 2);
  return harman_compare(kind, cfg.X, sets.A, s.lambda, a, b, threads);
}

}  // namespace pslab
