#pragma once

// One-sided trigonometric approximants to chi_xi(x) = [||x|| < xi]:
//   chi^+(x) = 2 xi + 1/(K+1) + sum_{0<|k|<=K} c^+_k e(kx)
//   chi^-(x) = 2 xi - 1/(K+1) - sum_{0<|k|<=K} c^-_k e(kx)
// built from Selberg's majorant/minorant of the interval [-xi, xi]. With
// N = K+1, Vaaler's weight g(u) = pi u (1-u) cot(pi u) + u and the Fejer
// weight F_k = (1 - k/N)/N,
//   c^+_k =  g(k/N) sin(2 pi k xi)/(pi k) + F_k cos(2 pi k xi)
//   c^-_k = -g(k/N) sin(2 pi k xi)/(pi k) + F_k cos(2 pi k xi).
// Both are real and even in k.
//
// For xi > 1/2 the indicator is identically 1. The majorant formula stays
// valid (it majorizes the wrapped interval count, which is >= 1); the
// minorant becomes 1 - s * Fejer_N(x) with s = 1 - 2 xi + 1/N, which keeps
// the constant term 2 xi - 1/N and needs s >= 0.

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include <fmt/format.h>

#include "pslab/errors.hpp"
#include "pslab/precise_real.hpp"

namespace pslab {

enum class approximant_side { minorant, majorant };

inline const char* side_name(approximant_side s) { return s == approximant_side::minorant ? "minorant" : "majorant"; }

struct approximant_polynomial {
  precise_real xi;
  double xi_value = 0;
  std::uint32_t K = 0;
  approximant_side side = approximant_side::majorant;
  /// 2 xi + 1/(K+1) for the majorant, 2 xi - 1/(K+1) for the minorant.
  double constant_term = 0;
  /// c_k for k = 1..K at index k-1; c_{-k} = conj(c_k).
  std::vector<std::complex<double>> coefficients;

  std::complex<double> coefficient(std::int64_t k) const {
    if (k == 0 || static_cast<std::uint64_t>(std::llabs(k)) > K) return 0.0;
    const auto c = coefficients[static_cast<std::size_t>(std::llabs(k) - 1)];
    return k > 0 ? c : std::conj(c);
  }

  /// min{2 xi + 1/(K+1), 3/(2|k|)}
  double coefficient_bound(std::int64_t k) const {
    return std::min(2 * xi_value + 1.0 / (K + 1.0), 1.5 / static_cast<double>(std::llabs(k)));
  }

  double sign() const { return side == approximant_side::majorant ? 1.0 : -1.0; }

  /// Double-precision evaluation. e(kx) runs as a rotation recurrence that
  /// is reseeded from an fma-exact reduction of kx every 64 steps.
  double eval(double x) const {
    constexpr double two_pi = 2 * std::numbers::pi;
    const double r = x - std::nearbyint(x);
    const std::complex<double> step(std::cos(two_pi * r), std::sin(two_pi * r));
    std::complex<double> z = step;
    double sum = 0, comp = 0;
    for (std::uint32_t k = 1; k <= K; ++k) {
      if (k % 64 == 0) {
        const double p = k * r;
        const double frac = (p - std::nearbyint(p)) + std::fma(static_cast<double>(k), r, -p);
        z = {std::cos(two_pi * frac), std::sin(two_pi * frac)};
      }
      const std::complex<double> c = coefficients[k - 1];
      const double term = 2 * (c.real() * z.real() - c.imag() * z.imag());
      const double y = term - comp;
      const double t = sum + y;
      comp = (t - sum) - y;
      sum = t;
      z *= step;
    }
    return constant_term + sign() * sum;
  }

  /// The same polynomial (its double coefficients taken exactly) evaluated
  /// at x's precision with a carried error bound.
  precise_real eval(const precise_real& x) const {
    const unsigned d = x.digits();
    precise_real sum(0, d);
    for (std::uint32_t k = 1; k <= K; ++k) {
      const circle_point z = unit_circle_exp(x * static_cast<std::int64_t>(k));
      precise_real re(d), im(d);
      mpfr_set_d(re.raw(), coefficients[k - 1].real(), MPFR_RNDN);
      mpfr_set_d(im.raw(), coefficients[k - 1].imag(), MPFR_RNDN);
      // c e(kx) + conj(c) e(-kx) = 2 Re(c e(kx)); the imaginary parts cancel exactly
      sum = sum + (re * z.cos - im * z.sin) * 2;
    }
    precise_real c0(d);
    mpfr_set_d(c0.raw(), constant_term, MPFR_RNDN);
    return side == approximant_side::majorant ? c0 + sum : c0 - sum;
  }
};

/// [||x|| < xi], certified.
inline int indicator(const precise_real& xi, const precise_real& x) {
  if (auto r = certified_less(nearest_int_distance(x), xi)) return *r ? 1 : 0;
  throw precision_exhausted("||x|| is indistinguishable from xi");
}

/// [||x|| < xi] in doubles; x - round(x) is exact in binary floating point.
inline int indicator(double xi, double x) { return std::fabs(x - std::nearbyint(x)) < xi ? 1 : 0; }

inline approximant_polynomial build_approximant(const precise_real& xi, std::uint32_t K, approximant_side side) {
  if (K < 1) throw parameter_range("approximant needs K >= 1");
  const double xv = xi.to_double();
  if (!(xv > 0.0 && xv < 1.0)) throw parameter_range(fmt::format("approximant needs 0 < xi < 1, got {}", xv));
  approximant_polynomial p;
  p.xi = xi;
  p.xi_value = xv;
  p.K = K;
  p.side = side;
  const double N = K + 1.0;
  p.constant_term = side == approximant_side::majorant ? 2 * xv + 1 / N : 2 * xv - 1 / N;
  p.coefficients.resize(K);
  constexpr double pi = std::numbers::pi;
  const bool wrapped_minorant = side == approximant_side::minorant && xv > 0.5;
  const double s = 1 - 2 * xv + 1 / N;
  if (wrapped_minorant && s < 0)
    throw parameter_range(fmt::format("no minorant for xi={} at K={}: 2 xi exceeds 1 + 1/(K+1)", xv, K));
  for (std::uint32_t k = 1; k <= K; ++k) {
    const double u = k / N;
    const double F = (1 - u) / N;
    double c;
    if (wrapped_minorant) {
      c = s * (1 - u);
    } else {
      const double g = pi * u * (1 - u) / std::tan(pi * u) + u;
      const double vaaler = g * std::sin(2 * pi * k * xv) / (pi * k);
      const double fejer = F * std::cos(2 * pi * k * xv);
      c = side == approximant_side::majorant ? vaaler + fejer : -vaaler + fejer;
    }
    p.coefficients[k - 1] = c;
    if (std::abs(p.coefficients[k - 1]) > p.coefficient_bound(k) * (1 + 1e-14))
      throw parameter_range(fmt::format("coefficient bound violated at k={} (|c_k|={}, bound {})", k,
                                        std::abs(p.coefficients[k - 1]), p.coefficient_bound(k)));
  }
  return p;
}

/// Shared immutable polynomials keyed by (xi, K, side).
inline std::shared_ptr<const approximant_polynomial> cached_approximant(const precise_real& xi, std::uint32_t K,
                                                                        approximant_side side) {
  using key = std::tuple<std::string, std::uint32_t, int>;
  static std::mutex lock;
  static std::map<key, std::shared_ptr<const approximant_polynomial>> cache;
  const key k{xi.to_decimal(40), K, static_cast<int>(side)};
  {
    std::lock_guard g(lock);
    if (auto it = cache.find(k); it != cache.end()) return it->second;
  }
  auto built = std::make_shared<const approximant_polynomial>(build_approximant(xi, K, side));
  std::lock_guard g(lock);
  return cache.emplace(k, std::move(built)).first->second;
}

struct approximant_pair {
  std::shared_ptr<const approximant_polynomial> minorant, majorant;
};

inline approximant_pair make_approximant_pair(const precise_real& xi, std::uint32_t K) {
  return {cached_approximant(xi, K, approximant_side::minorant), cached_approximant(xi, K, approximant_side::majorant)};
}

struct product_bound {
  double lower = 0;
  double upper = 0;
};

/// Xi^- = a^- b^+ + a^+ b^- - a^+ b^+,  Xi^+ = a^+ b^+
inline product_bound combine_bounds(double a_minus, double a_plus, double b_minus, double b_plus) {
  return {a_minus * b_plus + a_plus * b_minus - a_plus * b_plus, a_plus * b_plus};
}

/// Bounds on chi_Delta(x) chi_delta(y) from the Delta pair (K = L) and the
/// delta pair (K = H).
inline product_bound product_bounds(double x, double y, const approximant_pair& big, const approximant_pair& small) {
  return combine_bounds(big.minorant->eval(x), big.majorant->eval(x), small.minorant->eval(y),
                        small.majorant->eval(y));
}

/// Sandwich and coefficient diagnostics for one polynomial over `grid`
/// equispaced points of [-1/2, 1/2) and `random` seeded uniform points.
struct sandwich_stats {
  approximant_side side = approximant_side::majorant;
  std::uint64_t points = 0;
  /// largest amount by which the polynomial crosses the indicator
  double max_violation = 0;
  std::uint64_t violations = 0;  ///< points crossing by more than the tolerance
  /// max |c_k| / bound_k, and min (bound_k - |c_k|), over 1 <= k <= K
  double max_coefficient_ratio = 0;
  double min_coefficient_slack = 0;
  std::uint64_t coefficient_violations = 0;
};

inline sandwich_stats sandwich_check(const approximant_polynomial& p, std::uint64_t grid, std::uint64_t random,
                                     std::uint64_t seed, double tolerance = 1e-12) {
  sandwich_stats st;
  st.side = p.side;
  auto visit = [&](double x) {
    const double v = p.eval(x);
    const int chi = indicator(p.xi_value, x);
    const double crossing = p.side == approximant_side::majorant ? chi - v : v - chi;
    st.max_violation = std::max(st.max_violation, crossing);
    if (crossing > tolerance) ++st.violations;
    ++st.points;
  };
  for (std::uint64_t j = 0; j < grid; ++j) visit(-0.5 + static_cast<double>(j) / static_cast<double>(grid));
  std::mt19937_64 rng(seed);
  for (std::uint64_t j = 0; j < random; ++j) visit(static_cast<double>(rng() >> 11) * 0x1p-53 - 0.5);
  st.min_coefficient_slack = std::numeric_limits<double>::infinity();
  for (std::uint32_t k = 1; k <= p.K; ++k) {
    const double c = std::abs(p.coefficient(k)), b = p.coefficient_bound(k);
    st.max_coefficient_ratio = std::max(st.max_coefficient_ratio, c / b);
    st.min_coefficient_slack = std::min(st.min_coefficient_slack, b - c);
    if (c > b) ++st.coefficient_violations;
  }
  return st;
}

}  // namespace pslab
