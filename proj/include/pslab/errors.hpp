#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pslab {

/// Base class of every error raised by the library. `kind()` is the stable
/// machine-readable name used in JSON error objects.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual std::string_view kind() const noexcept = 0;
};

/// A floor, comparison or boundary decision stayed ambiguous at the highest
/// precision available. `argument()` carries the offending integer when one
/// exists (for example the element of [X/2, X) being classified).
class precision_exhausted : public error {
 public:
  explicit precision_exhausted(const std::string& what,
                               std::optional<std::uint64_t> argument = std::nullopt)
      : error(what), argument_(argument) {}
  std::string_view kind() const noexcept override { return "PrecisionExhausted"; }
  std::optional<std::uint64_t> argument() const noexcept { return argument_; }

 private:
  std::optional<std::uint64_t> argument_;
};

class rational_input : public error {
 public:
  using error::error;
  std::string_view kind() const noexcept override { return "RationalInput"; }
};

class parameter_range : public error {
 public:
  using error::error;
  std::string_view kind() const noexcept override { return "ParameterRange"; }
};

class range_too_large : public error {
 public:
  using error::error;
  std::string_view kind() const noexcept override { return "RangeTooLarge"; }
};

class budget_exceeded : public error {
 public:
  budget_exceeded(const std::string& what, double estimated_terms)
      : error(what), estimated_terms_(estimated_terms) {}
  std::string_view kind() const noexcept override { return "BudgetExceeded"; }
  double estimated_terms() const noexcept { return estimated_terms_; }

 private:
  double estimated_terms_;
};

class out_of_lemma_range : public error {
 public:
  using error::error;
  std::string_view kind() const noexcept override { return "OutOfLemmaRange"; }
};

class parse_error : public error {
 public:
  parse_error(const std::string& what, std::size_t line)
      : error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::string_view kind() const noexcept override { return "ParseError"; }
  /// 1-based line number, 0 when the problem is not tied to a line.
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class validation_error : public error {
 public:
  using error::error;
  std::string_view kind() const noexcept override { return "ValidationError"; }
};

}  // namespace pslab
