#pragma once

// Piatetski-Shapiro membership and the sets
//   A = { X/2 <= a < X : ||alpha a + beta|| < Delta, ||a^gamma + 2 delta|| < delta },
//   B = [X/2, X).
//
// Bulk loops go through membership_kernel, which decides each condition
// in 128-bit fixed point or long double with an explicit error margin and
// falls back to the certified MPFR path only inside that margin.

#include <cfloat>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "pslab/experiment.hpp"
#include "pslab/fixed_phase.hpp"
#include "pslab/parallel.hpp"
#include "pslab/powers.hpp"
#include "pslab/precise_real.hpp"
#include "pslab/real_constant.hpp"

namespace pslab {

/// p = [n^c] for some n, i.e. [p^gamma, (p+1)^gamma) holds an integer.
/// n = ceil(p^gamma) is the only candidate; p^gamma is never an integer
/// for prime p, so the ceiling is always certifiable.
inline bool is_ps_prime(std::uint64_t p, const real_constant& c, unsigned digits = default_digits) {
  if (p < 2) return false;
  std::optional<std::int64_t> n;
  for (unsigned d : {digits, 2 * digits}) {
    const precise_real g = precise_real(1, d) / c.value(d);
    if ((n = certified_ceil(pow(precise_real(static_cast<std::int64_t>(p), d), g)))) break;
  }
  if (!n) throw precision_exhausted("ceil(p^gamma) is ambiguous", p);
  return power_floor(static_cast<std::uint64_t>(*n), c, digits) == p;
}

/// ||a^gamma + 2 delta|| < delta, certified; retried once with the scales
/// recomputed at doubled precision.
inline bool fractional_condition(std::uint64_t a, const derived_scales& s) {
  if (a < 1) throw parameter_range("fractional_condition requires a >= 1");
  for (int attempt = 0; attempt < 2; ++attempt) {
    const derived_scales& sc = attempt == 0 ? s : at_precision(s, 2 * s.digits);
    const precise_real y = pow(precise_real(static_cast<std::int64_t>(a), sc.digits), sc.gamma) + sc.delta * 2;
    if (auto r = certified_less(nearest_int_distance(y), sc.delta)) return *r;
  }
  throw precision_exhausted("||a^gamma + 2 delta|| is indistinguishable from delta", a);
}

/// ||alpha a + beta|| < threshold(d), with threshold given by its evaluator
/// so the comparison can escalate.
inline bool diophantine_condition(std::uint64_t a, const real_constant& alpha, const real_constant& beta,
                                  const std::function<precise_real(unsigned)>& threshold,
                                  unsigned digits = default_digits) {
  for (unsigned d : {digits, 2 * digits}) {
    // alpha * a needs about log10(a) extra digits to keep the fraction sharp
    const unsigned wd = d + 20;
    const precise_real x = alpha.value(wd) * static_cast<std::int64_t>(a) + beta.value(wd);
    if (auto r = certified_less(nearest_int_distance(x), threshold(d))) return *r;
  }
  throw precision_exhausted("||alpha a + beta|| is indistinguishable from its threshold", a);
}

/// Fast certified membership tests for one experiment.
class membership_kernel {
 public:
  membership_kernel(const real_constant& alpha, const real_constant& beta, const derived_scales& scales)
      : alpha_(alpha), beta_(beta), scales_(scales) {
    const unsigned wide = std::max(scales.digits, 60u);
    alpha_fx_ = to_fixed_fraction(alpha.value(wide));
    beta_fx_ = to_fixed_fraction(beta.value(wide));
    gamma_ = scales.gamma.to_long_double();
    delta_ = scales.delta.to_long_double();
    Delta_ = scales.Delta.to_long_double();
    theta_ = scales.theta.value(scales.digits).to_long_double();
  }

  const derived_scales& scales() const noexcept { return scales_; }

  /// ||alpha a + beta|| as a long double (approximate, for reporting).
  long double dist_alpha(std::uint64_t a) const { return fixed_to_long_double(fixed_distance(phase(a))); }

  /// ||a^gamma + 2 delta|| as a long double (approximate, for reporting).
  long double dist_gamma(std::uint64_t a) const {
    const long double y = powl(static_cast<long double>(a), gamma_) + 2 * delta_;
    return fabsl(y - nearbyintl(y));
  }

  bool diophantine_A(std::uint64_t a) const {
    const int fast = compare_phase(a, Delta_);
    if (fast != 0) return fast < 0;
    return diophantine_condition(a, alpha_, beta_, [&](unsigned d) { return scales_at(d).Delta; },
                                 scales_.digits);
  }

  /// ||alpha p + beta|| < p^-theta.
  bool theorem_diophantine(std::uint64_t p) const {
    const long double thr = powl(static_cast<long double>(p), -theta_);
    const long double slack = thr * 0x1p-56L * (1 + logl(static_cast<long double>(p)));
    const int fast = compare_phase(p, thr, slack);
    if (fast != 0) return fast < 0;
    const real_constant theta = scales_.theta;
    return diophantine_condition(
        p, alpha_, beta_,
        [&](unsigned d) { return pow(precise_real(static_cast<std::int64_t>(p), d), -theta.value(d)); },
        scales_.digits);
  }

  bool fractional(std::uint64_t a) const {
    const long double la = static_cast<long double>(a);
    const long double y = powl(la, gamma_) + 2 * delta_;
    const long double r = fabsl(y - nearbyintl(y));
    const long double slack = 0x1p-56L * (y * (1 + logl(la)) + 1);
    if (r + slack < delta_) return true;
    if (r - slack > delta_) return false;
    return fractional_condition(a, scales_);
  }

  bool in_A(std::uint64_t a) const { return diophantine_A(a) && fractional(a); }

  bool is_ps(std::uint64_t p) const {
    const long double lp = static_cast<long double>(p);
    const long double t = powl(lp, gamma_);
    const long double slack_t = 0x1p-56L * t * (1 + logl(lp));
    const long double n = floorl(t) + 1;
    if (n - t > slack_t && t - (n - 1) > slack_t) {
      const long double u = powl(lp + 1, gamma_);
      const long double slack_u = 0x1p-56L * u * (1 + logl(lp + 1));
      if (u - n > slack_u) return true;
      if (n - u > slack_u) return false;
    }
    return is_ps_prime(p, scales_.c, scales_.digits);
  }

 private:
  u128 phase(std::uint64_t a) const { return alpha_fx_.value * a + beta_fx_.value; }

  // -1: ||alpha a + beta|| < thr certainly, +1: certainly not, 0: undecided
  int compare_phase(std::uint64_t a, long double thr, long double thr_slack = -1) const {
    const u128 v = phase(a);
    const long double d = fixed_to_long_double(fixed_distance(v));
    const u128 err_units = saturating_add(saturating_mul(alpha_fx_.error, a), beta_fx_.error + 2);
    if (thr_slack < 0) thr_slack = (thr + scales_.Delta.error_bound()) * 0x1p-60L + scales_.Delta.error_bound();
    const long double slack = fixed_to_long_double(err_units) + d * 0x1p-60L + thr_slack;
    if (d + slack < thr) return -1;
    if (d - slack > thr) return 1;
    return 0;
  }

  derived_scales scales_at(unsigned d) const {
    return d == scales_.digits ? scales_ : at_precision(scales_, d);
  }

  real_constant alpha_, beta_;
  derived_scales scales_;
  fixed_fraction alpha_fx_, beta_fx_;
  long double gamma_, delta_, Delta_, theta_;
};

struct set_construction {
  std::uint64_t b_lo = 0;  ///< ceil(X/2)
  std::uint64_t b_hi = 0;  ///< X (exclusive)
  std::vector<std::uint64_t> A;
  std::uint64_t b_size() const noexcept { return b_hi > b_lo ? b_hi - b_lo : 0; }
};

inline constexpr std::uint64_t set_chunk_size = 1ull << 16;

inline set_construction build_sets(const membership_kernel& kernel, unsigned threads = 0) {
  set_construction out;
  const std::uint64_t X = kernel.scales().X;
  out.b_lo = (X + 1) / 2;
  out.b_hi = X;
  const std::uint64_t span = out.b_size();
  const std::size_t chunks = static_cast<std::size_t>((span + set_chunk_size - 1) / set_chunk_size);
  auto parts = ordered_parallel_map(chunks, threads, [&](std::size_t i) {
    std::vector<std::uint64_t> found;
    const std::uint64_t lo = out.b_lo + i * set_chunk_size;
    const std::uint64_t hi = std::min(out.b_hi, lo + set_chunk_size);
    for (std::uint64_t a = lo; a < hi; ++a)
      if (kernel.in_A(a)) found.push_back(a);
    return found;
  });
  for (auto& p : parts) out.A.insert(out.A.end(), p.begin(), p.end());
  return out;
}

inline set_construction build_sets(const experiment_config& cfg, unsigned threads = 0) {
  const derived_scales s = compute_scales(cfg);
  return build_sets(membership_kernel(cfg.alpha, cfg.beta, s), threads);
}

}  // namespace pslab
