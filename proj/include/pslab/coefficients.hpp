#pragma once

// Coefficient sequences for the type I/II sums. Raw values honour
// a_m <= tau(m); the starred values used inside exponential sums are
// normalised to |value| <= 1 where the kind allows it:
//   all-ones, prime-indicator:  a*_m = a_m / m^epsilon
//   divisor-capped-random:      a*_m = a_m / tau(m)
//   scaled-detector:            c*_l = c_l / xi   (xi = Delta or delta)

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "pslab/detector.hpp"
#include "pslab/errors.hpp"

namespace pslab {

enum class coefficient_kind { all_ones, divisor_capped_random, prime_indicator, scaled_detector };

inline coefficient_kind parse_coefficient_kind(std::string_view s) {
  if (s == "all-ones") return coefficient_kind::all_ones;
  if (s == "divisor-capped-random") return coefficient_kind::divisor_capped_random;
  if (s == "prime-indicator") return coefficient_kind::prime_indicator;
  if (s == "scaled-detector" || s == "scaled-detector-coeffs") return coefficient_kind::scaled_detector;
  throw parameter_range("unknown coefficient kind '" + std::string(s) + "'");
}

inline const char* coefficient_kind_name(coefficient_kind k) {
  switch (k) {
    case coefficient_kind::all_ones: return "all-ones";
    case coefficient_kind::divisor_capped_random: return "divisor-capped-random";
    case coefficient_kind::prime_indicator: return "prime-indicator";
    case coefficient_kind::scaled_detector: return "scaled-detector";
  }
  return "?";
}

/// tau(0..n) by a linear sieve; tau(0) is set to 0.
inline std::vector<std::uint32_t> divisor_counts(std::uint64_t n) {
  std::vector<std::uint32_t> tau(n + 1, 0), exponent(n + 1, 0);
  std::vector<std::uint64_t> primes;
  if (n >= 1) tau[1] = 1;
  for (std::uint64_t i = 2; i <= n; ++i) {
    if (tau[i] == 0) {
      primes.push_back(i);
      tau[i] = 2;
      exponent[i] = 1;
    }
    for (std::uint64_t p : primes) {
      if (p * i > n) break;
      if (i % p == 0) {
        // p divides i: bump the exponent of p
        exponent[p * i] = exponent[i] + 1;
        tau[p * i] = tau[i] / (exponent[i] + 1) * (exponent[i] + 2);
        break;
      }
      exponent[p * i] = 1;
      tau[p * i] = tau[i] * 2;
    }
  }
  return tau;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Values on the index range [1, size]; index 0 is unused.
struct coefficient_sequence {
  coefficient_kind kind = coefficient_kind::all_ones;
  std::vector<double> values;   ///< raw a_m
  std::vector<double> caps;     ///< upper bound on |raw value|
  std::vector<double> starred;  ///< normalised a*_m
  double starred_cap = 1;       ///< upper bound on |starred value|

  std::uint64_t size() const noexcept { return values.empty() ? 0 : values.size() - 1; }
  double value(std::uint64_t i) const { return values.at(i); }
  double star(std::uint64_t i) const { return starred.at(i); }
};

/// Sequences for the m or n variable (a_m, b_n). `stream` separates the
/// random streams of different variables under one seed.
inline coefficient_sequence make_arithmetic_sequence(coefficient_kind kind, std::uint64_t size, double epsilon,
                                                     std::uint64_t seed, std::uint64_t stream) {
  if (size < 1) throw parameter_range("coefficient range must be non-empty");
  if (kind == coefficient_kind::scaled_detector)
    throw parameter_range("scaled-detector coefficients only exist for the l and h variables");
  coefficient_sequence s;
  s.kind = kind;
  s.values.assign(size + 1, 0.0);
  s.caps.assign(size + 1, 0.0);
  s.starred.assign(size + 1, 0.0);
  const auto tau = divisor_counts(size);
  std::mt19937_64 rng(splitmix64(seed ^ splitmix64(stream)));
  for (std::uint64_t m = 1; m <= size; ++m) {
    s.caps[m] = tau[m];
    double v = 1.0;
    switch (kind) {
      case coefficient_kind::all_ones: break;
      case coefficient_kind::prime_indicator: v = tau[m] == 2 ? 1.0 : 0.0; break;
      case coefficient_kind::divisor_capped_random: {
        const double u = static_cast<double>(rng() >> 11) * 0x1p-53;  // uniform on [0, 1)
        v = u * tau[m];
        break;
      }
      case coefficient_kind::scaled_detector: break;
    }
    s.values[m] = v;
    s.starred[m] = kind == coefficient_kind::divisor_capped_random
                       ? v / tau[m]
                       : v / std::pow(static_cast<double>(m), epsilon);
  }
  return s;
}

/// Sequences for l (paired with the Delta polynomial) or h (delta
/// polynomial). Non-detector kinds are taken unweighted (no 1/l^epsilon).
/// For scaled-detector the raw values are the majorant's
/// coefficients c_k and the cap is the coefficient bound, so the starred
/// cap is (2 xi + 1/(K+1)) / xi rather than 1.
inline coefficient_sequence make_frequency_sequence(coefficient_kind kind, const approximant_polynomial& poly,
                                                    std::uint64_t seed, std::uint64_t stream) {
  if (kind != coefficient_kind::scaled_detector) return make_arithmetic_sequence(kind, poly.K, 0.0, seed, stream);
  coefficient_sequence s;
  s.kind = kind;
  s.values.assign(poly.K + 1, 0.0);
  s.caps.assign(poly.K + 1, 0.0);
  s.starred.assign(poly.K + 1, 0.0);
  s.starred_cap = (2 * poly.xi_value + 1.0 / (poly.K + 1.0)) / poly.xi_value;
  for (std::uint32_t k = 1; k <= poly.K; ++k) {
    s.values[k] = poly.coefficients[k - 1].real();
    s.caps[k] = poly.coefficient_bound(k);
    s.starred[k] = s.values[k] / poly.xi_value;
  }
  return s;
}

}  // namespace pslab
