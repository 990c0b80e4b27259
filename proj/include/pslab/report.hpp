#pragma once

// Serialization of reports. JSON objects keep insertion order and carry
// schema_version; certified quantities are written as decimal strings so no
// digits are lost, plain floating-point diagnostics as JSON numbers. CSV
// output always has a header row and uses the shortest round-trip form of
// doubles, which is locale independent.

#include <complex>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <json.hpp>

#include "pslab/diophantine.hpp"
#include "pslab/errors.hpp"
#include "pslab/expsum.hpp"
#include "pslab/harness.hpp"

namespace pslab {

using json = nlohmann::ordered_json;

inline constexpr int schema_version = 1;

inline constexpr int decimal_digits = 40;

inline std::string decimal(const precise_real& v) { return v.to_decimal(decimal_digits); }

inline std::string csv_double(double v) { return fmt::format("{}", v); }

inline json to_json(const count_report& r) {
  json j;
  j["schema_version"] = schema_version;
  j["report"] = "CountReport";
  j["X"] = r.X;
  j["count_B_primes"] = r.count_B_primes;
  j["count_A_primes"] = r.count_A_primes;
  j["count_theorem"] = r.count_theorem;
  j["count_ps_primes"] = r.count_ps_primes;
  j["lambda"] = decimal(r.lambda);
  j["harman_threshold"] = decimal(r.harman_threshold);
  j["theorem_satisfied"] = r.theorem_satisfied;
  j["harman_satisfied"] = r.harman_satisfied;
  j["admissible_q"] = r.admissible_q;
  json failures = json::array();
  for (const auto& f : r.implication_failures) failures.push_back({{"p", f.p}, {"X", f.X}});
  j["implication_failures"] = std::move(failures);
  return j;
}

inline json to_json(const comparison_report& r) {
  json j;
  j["schema_version"] = schema_version;
  j["report"] = "ComparisonReport";
  j["kind"] = comparison_kind_name(r.kind);
  j["X"] = r.X;
  j["coeff_kinds"] = {{"a", r.a_kind}, {"b", r.b_kind}};
  j["m_window"] = {r.m_window.lo, r.m_window.hi};
  j["pair_count"] = r.pair_count;
  j["lhs_A"] = decimal(r.lhs_A);
  j["rhs_B"] = decimal(r.rhs_B);
  j["lambda"] = decimal(r.lambda);
  j["rhs_B_scaled"] = decimal(r.rhs_B_scaled);
  j["deviation"] = decimal(r.deviation);
  j["relative"] = decimal(r.relative);
  return j;
}

inline json error_json(std::string_view kind, std::string_view message) {
  json j;
  j["schema_version"] = schema_version;
  j["error"] = kind;
  j["message"] = message;
  return j;
}

inline json error_json(const error& e) {
  json j = error_json(e.kind(), e.what());
  if (const auto* p = dynamic_cast<const parse_error*>(&e); p && p->line() > 0) j["line"] = p->line();
  if (const auto* p = dynamic_cast<const precision_exhausted*>(&e); p && p->argument()) j["argument"] = *p->argument();
  if (const auto* b = dynamic_cast<const budget_exceeded*>(&e)) j["estimated_terms"] = b->estimated_terms();
  return j;
}

inline void write_convergents_csv(std::ostream& out, const std::vector<rational_approx>& rows) {
  out << "a,q,error\n";
  for (const auto& r : rows) out << r.a << ',' << r.q << ',' << r.error.to_decimal(decimal_digits) << '\n';
}

inline void write_expsum_header(std::ostream& out) {
  out << "kind,M,N,U,V,abs_value,target,lemma_bound,ratio_to_target,term_count,lemma,ratio_to_bound,re,im\n";
}

inline void write_expsum_row(std::ostream& out, const sum_report& r) {
  out << sum_kind_name(r.kind) << ',' << r.block.M << ',' << r.block.N << ',' << r.block.U << ',' << r.block.V << ','
      << csv_double(r.abs_value) << ',' << csv_double(r.target) << ','
      << (r.bound ? csv_double(r.bound->value) : "") << ',' << csv_double(r.ratio_to_target) << ',' << r.term_count
      << ',' << (r.bound ? r.bound->lemma : "") << ',' << (r.ratio_to_bound ? csv_double(*r.ratio_to_bound) : "")
      << ',' << csv_double(r.exact_value.real()) << ',' << csv_double(r.exact_value.imag()) << '\n';
}

}  // namespace pslab
