#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "pslab/precise_real.hpp"

namespace pslab {

/// A real number described by its source rather than by a rounded value:
/// either a named irrational constant or a decimal literal. Values can be
/// produced at any working precision, which is what lets certified
/// computations escalate. Decimal literals are rationals and expose their
/// exact value.
class real_constant {
 public:
  enum class named_id { sqrt2, golden_ratio, pi, e };

  real_constant() : real_constant(decimal("0")) {}

  static real_constant named(named_id id) {
    real_constant c;
    c.named_ = id;
    c.exact_.reset();
    switch (id) {
      case named_id::sqrt2: c.text_ = "sqrt2"; break;
      case named_id::golden_ratio: c.text_ = "golden"; break;
      case named_id::pi: c.text_ = "pi"; break;
      case named_id::e: c.text_ = "e"; break;
    }
    return c;
  }

  static real_constant decimal(std::string_view text) {
    if (!detail::is_decimal_literal(text))
      throw parameter_range("not a decimal literal: '" + std::string(text) + "'");
    real_constant c(0);
    c.text_ = std::string(text);
    std::string digits;
    bool negative = false;
    std::size_t frac = 0;
    bool after_point = false;
    for (char ch : text) {
      if (ch == '-') negative = true;
      else if (ch == '.') after_point = true;
      else if (ch >= '0' && ch <= '9') {
        digits += ch;
        if (after_point) ++frac;
      }
    }
    // strip leading zeros: cpp_int reads a leading 0 as an octal prefix
    const auto nz = digits.find_first_not_of('0');
    big_int num(nz == std::string::npos ? std::string("0") : digits.substr(nz));
    if (negative) num = -num;
    c.exact_ = big_rational(num, boost::multiprecision::pow(big_int(10), static_cast<unsigned>(frac)));
    c.fractional_digits_ = frac;
    const auto first = digits.find_first_not_of('0');
    c.significant_digits_ = first == std::string::npos ? 0 : digits.size() - first;
    return c;
  }

  /// Accepts "sqrt2", "golden" (also "golden_ratio", "phi"), "pi", "e", or a
  /// decimal literal.
  static real_constant parse(std::string_view text) {
    if (text == "sqrt2") return named(named_id::sqrt2);
    if (text == "golden" || text == "golden_ratio" || text == "phi") return named(named_id::golden_ratio);
    if (text == "pi") return named(named_id::pi);
    if (text == "e") return named(named_id::e);
    return decimal(text);
  }

  precise_real value(unsigned digits = default_digits) const {
    if (!named_) return precise_real::from_decimal(text_, digits);
    precise_real r(digits);
    int t = 0;
    switch (*named_) {
      case named_id::sqrt2:
        t = mpfr_sqrt_ui(r.raw(), 2, MPFR_RNDN);
        r.assign_error(detail::rounding(t, r.get()));
        return r;
      case named_id::golden_ratio: {
        precise_real five(digits);
        t = mpfr_sqrt_ui(five.raw(), 5, MPFR_RNDN);
        five.assign_error(detail::rounding(t, five.get()));
        return (five + 1) / 2;
      }
      case named_id::pi: return pslab::pi(digits);
      case named_id::e:
        t = mpfr_set_ui(r.raw(), 1, MPFR_RNDN);
        t = mpfr_exp(r.raw(), r.get(), MPFR_RNDN);
        r.assign_error(detail::rounding(t, r.get()));
        return r;
    }
    return r;
  }

  bool is_named() const noexcept { return named_.has_value(); }
  const std::optional<big_rational>& exact() const noexcept { return exact_; }
  const std::string& text() const noexcept { return text_; }
  std::size_t fractional_digits() const noexcept { return fractional_digits_; }
  std::size_t significant_digits() const noexcept { return significant_digits_; }

 private:
  explicit real_constant(int) {}

  std::string text_;
  std::optional<named_id> named_;
  std::optional<big_rational> exact_;
  std::size_t fractional_digits_ = 0;
  std::size_t significant_digits_ = 0;
};

}  // namespace pslab
