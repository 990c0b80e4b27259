#pragma once

// Config files and the subcommand runners behind the pslab binary. Every
// runner writes its report to a stream, so the binary is a thin argument
// parser over this header.
//
// Config format: one `key = value` per line, `#` starts a comment. Keys:
//   alpha, beta, c, theta, eta, epsilon, X, seed, coeff_a, coeff_b,
//   output_dir, precision_digits
// alpha, c, theta, eta and X are required. PSLAB_PRECISION, when set,
// overrides precision_digits.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "pslab/coefficients.hpp"
#include "pslab/detector.hpp"
#include "pslab/diophantine.hpp"
#include "pslab/experiment.hpp"
#include "pslab/expsum.hpp"
#include "pslab/harness.hpp"
#include "pslab/ps_sieve.hpp"
#include "pslab/report.hpp"
#include "pslab/sieve.hpp"

namespace pslab {

enum exit_code : int { exit_ok = 0, exit_invalid = 1, exit_budget = 2 };

/// Budget and precision failures exit with 2, everything else with 1.
inline int exit_code_for(const error& e) {
  if (dynamic_cast<const budget_exceeded*>(&e) || dynamic_cast<const precision_exhausted*>(&e)) return exit_budget;
  return exit_invalid;
}

struct loaded_config {
  experiment_config config;
  /// output_dir appeared in the file: reports are also saved there.
  bool save_reports = false;
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// non-negative integer literal, also B^E
inline std::optional<std::uint64_t> parse_uint(std::string_view s) {
  auto digits = [](std::string_view t) -> std::optional<std::uint64_t> {
    if (t.empty() || t.size() > 20) return std::nullopt;
    unsigned __int128 v = 0;
    for (char ch : t) {
      if (ch < '0' || ch > '9') return std::nullopt;
      v = v * 10 + static_cast<unsigned>(ch - '0');
    }
    if (v > std::numeric_limits<std::uint64_t>::max()) return std::nullopt;
    return static_cast<std::uint64_t>(v);
  };
  if (const auto caret = s.find('^'); caret != std::string_view::npos) {
    const auto base = digits(s.substr(0, caret));
    const auto exp = digits(s.substr(caret + 1));
    if (!base || !exp) return std::nullopt;
    unsigned __int128 v = 1;
    for (std::uint64_t i = 0; i < *exp; ++i) {
      v *= *base;
      if (v > std::numeric_limits<std::uint64_t>::max()) return std::nullopt;
    }
    return static_cast<std::uint64_t>(v);
  }
  return digits(s);
}

inline unsigned parse_digits(std::string_view s, std::size_t line, const char* source) {
  const auto v = parse_uint(s);
  if (!v || *v > 100000) throw parse_error(fmt::format("{} '{}' is not a digit count", source, s), line);
  return static_cast<unsigned>(*v);
}

}  // namespace detail

inline const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{"alpha",   "beta",    "c",       "theta",      "eta",
                                             "epsilon", "X",       "seed",    "coeff_a",    "coeff_b",
                                             "output_dir", "precision_digits"};
  return keys;
}

/// Parses and validates a config document. `precision_override` plays the
/// role of PSLAB_PRECISION.
inline loaded_config parse_config_text(std::string_view text, const char* precision_override = nullptr) {
  static const std::set<std::string> required{"alpha", "c", "theta", "eta", "X"};
  loaded_config out;
  experiment_config& cfg = out.config;
  std::set<std::string> seen;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string content = detail::trim(raw);
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) throw parse_error("expected 'key = value', got '" + content + "'", line);
    const std::string key = detail::trim(std::string_view(content).substr(0, eq));
    const std::string value = detail::trim(std::string_view(content).substr(eq + 1));
    if (std::find(config_keys().begin(), config_keys().end(), key) == config_keys().end())
      throw parse_error("unknown key '" + key + "'", line);
    if (!seen.insert(key).second) throw parse_error("duplicate key '" + key + "'", line);
    if (value.empty()) throw parse_error("empty value for '" + key + "'", line);
    auto constant = [&](const char* what) {
      try {
        return real_constant::parse(value);
      } catch (const parameter_range&) {
        throw parse_error(fmt::format("{} '{}' is neither a named constant nor a decimal", what, value), line);
      }
    };
    auto decimal_only = [&](const char* what) {
      if (!detail::is_decimal_literal(value))
        throw parse_error(fmt::format("{} '{}' must be a decimal literal", what, value), line);
      return real_constant::decimal(value);
    };
    if (key == "alpha") cfg.alpha = constant("alpha");
    else if (key == "beta") cfg.beta = constant("beta");
    else if (key == "c") cfg.c = decimal_only("c");
    else if (key == "theta") cfg.theta = decimal_only("theta");
    else if (key == "eta") cfg.eta = decimal_only("eta");
    else if (key == "epsilon") cfg.epsilon = decimal_only("epsilon");
    else if (key == "X" || key == "seed") {
      const auto v = detail::parse_uint(value);
      if (!v) throw parse_error(fmt::format("{} '{}' is not a non-negative integer", key, value), line);
      (key == "X" ? cfg.X : cfg.seed) = *v;
    } else if (key == "coeff_a" || key == "coeff_b") {
      try {
        parse_coefficient_kind(value);
      } catch (const parameter_range& e) {
        throw parse_error(e.what(), line);
      }
      (key == "coeff_a" ? cfg.coeff_a : cfg.coeff_b) = value;
    } else if (key == "output_dir") {
      cfg.output_dir = value;
      out.save_reports = true;
    } else if (key == "precision_digits") {
      cfg.precision_digits = detail::parse_digits(value, line, "precision_digits");
    }
  }
  for (const auto& k : required)
    if (!seen.count(k)) throw parse_error("missing required key '" + k + "'", 0);
  if (precision_override && *precision_override)
    cfg.precision_digits = detail::parse_digits(precision_override, 0, "PSLAB_PRECISION");
  validate(cfg);
  return out;
}

inline loaded_config parse_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw parse_error("cannot read config file '" + path.string() + "'", 0);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str(), std::getenv("PSLAB_PRECISION"));
}

// ---------------------------------------------------------------------------
// Subcommands. Each writes its report to `out`; run_* functions that take a
// loaded_config also save the report under output_dir when requested.

namespace detail {

inline void save_report(const loaded_config& lc, const std::string& name, const std::string& body) {
  if (!lc.save_reports) return;
  const std::filesystem::path dir(lc.config.output_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  std::ofstream f(dir / name, std::ios::binary);
  if (!f) throw validation_error("cannot write report to '" + (dir / name).string() + "'");
  f << body;
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace detail

inline void run_convergents(std::ostream& out, const real_constant& alpha, std::int64_t max_q, unsigned digits) {
  write_convergents_csv(out, convergents(alpha, max_q, digits));
}

/// Piatetski-Shapiro primes in [lo, hi), one per line.
inline void run_ps_list(std::ostream& out, const real_constant& c, std::uint64_t lo, std::uint64_t hi,
                        unsigned threads, unsigned digits) {
  if (detail::certified_sign(c, big_rational(1), digits) <= 0) throw parameter_range("ps-list needs c > 1");
  const auto parts = map_prime_segments(lo, hi, threads, [&](std::uint64_t, std::uint64_t,
                                                             const std::vector<std::uint64_t>& primes) {
    std::string chunk;
    for (std::uint64_t p : primes)
      if (is_ps_prime(p, c, digits)) chunk += fmt::format("{}\n", p);
    return chunk;
  });
  for (const auto& chunk : parts) out << chunk;
}

inline void run_build_a(std::ostream& out, const loaded_config& lc, unsigned threads) {
  const experiment_config& cfg = lc.config;
  const derived_scales s = compute_scales(cfg);
  const membership_kernel kernel(cfg.alpha, cfg.beta, s);
  const set_construction sets = build_sets(kernel, threads);
  const unsigned d = cfg.precision_digits + 10;
  const precise_real alpha = cfg.alpha.value(d), beta = cfg.beta.value(d), gamma = at_precision(s, d).gamma,
                     two_delta = at_precision(s, d).delta * 2;
  std::ostringstream body;
  body << "a,dist_alpha,dist_gamma\n";
  for (std::uint64_t a : sets.A) {
    const precise_real x(static_cast<std::int64_t>(a), d);
    body << a << ',' << nearest_int_distance(alpha * x + beta).to_decimal(30) << ','
         << nearest_int_distance(pow(x, gamma) + two_delta).to_decimal(30) << '\n';
  }
  out << body.str();
  detail::save_report(lc, "set_A.csv", body.str());
}

inline void run_detector_check(std::ostream& out, const real_constant& xi, std::uint32_t K, std::uint64_t grid,
                               std::uint64_t random, std::uint64_t seed) {
  const precise_real x = xi.value(default_digits);
  out << "xi,K,side,points,max_violation,violations,max_coefficient_ratio,min_coefficient_slack,"
         "coefficient_violations\n";
  for (auto side : {approximant_side::minorant, approximant_side::majorant}) {
    const auto st = sandwich_check(build_approximant(x, K, side), grid, random, seed);
    out << xi.text() << ',' << K << ',' << side_name(side) << ',' << st.points << ','
        << csv_double(st.max_violation) << ',' << st.violations << ',' << csv_double(st.max_coefficient_ratio) << ','
        << csv_double(st.min_coefficient_slack) << ',' << st.coefficient_violations << '\n';
  }
}

struct expsum_options {
  sum_kind kind = sum_kind::S1;
  std::optional<std::uint64_t> X;  ///< overrides the config X
  std::optional<dyadic_block> block;
  coefficient_kind coeff_c = coefficient_kind::all_ones;
  coefficient_kind coeff_d = coefficient_kind::all_ones;
  double budget = default_term_budget;
};

inline dyadic_block parse_block(std::string_view text) {
  std::vector<std::uint64_t> parts;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto piece = text.substr(start, comma == std::string_view::npos ? text.npos : comma - start);
    const auto v = detail::parse_uint(detail::trim(piece));
    if (!v) throw parameter_range("block must be M,N,U,V with non-negative integers, got '" + std::string(text) + "'");
    parts.push_back(*v);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (parts.size() != 4) throw parameter_range("block must have four entries M,N,U,V");
  return {parts[0], parts[1], parts[2], parts[3]};
}

inline void run_expsum(std::ostream& out, loaded_config lc, const expsum_options& opt, unsigned threads) {
  if (opt.X) {
    lc.config.X = *opt.X;
    validate(lc.config);
  }
  coefficient_kinds kinds = kinds_from_config(lc.config);
  kinds.c = opt.coeff_c;
  kinds.d = opt.coeff_d;
  const sum_context ctx = make_sum_context(lc.config, kinds);
  std::vector<dyadic_block> blocks = dyadic_blocks(ctx, opt.kind);
  if (opt.block) {
    if (std::find(blocks.begin(), blocks.end(), *opt.block) == blocks.end())
      throw parameter_range(fmt::format("{},{},{},{} is not a dyadic block of {} at X={}", opt.block->M,
                                        opt.block->N, opt.block->U, opt.block->V, sum_kind_name(opt.kind), ctx.X));
    blocks = {*opt.block};
  }
  double total = 0;
  for (const auto& b : blocks) total += static_cast<double>(count_terms(ctx, opt.kind, b));
  if (total > opt.budget)
    throw budget_exceeded(fmt::format("{} blocks need {:.0f} terms (budget {:.0f})", blocks.size(), total, opt.budget),
                          total);
  std::ostringstream body;
  write_expsum_header(body);
  for (const auto& b : blocks) write_expsum_row(body, direct_sum(opt.kind, b, ctx, threads, opt.budget));
  out << body.str();
  detail::save_report(lc, fmt::format("expsum_{}.csv", sum_kind_name(opt.kind)), body.str());
}

inline void run_harman_compare(std::ostream& out, const loaded_config& lc, comparison_kind kind, unsigned threads) {
  const std::string body = detail::dump(to_json(harman_compare(kind, lc.config, threads)));
  out << body;
  detail::save_report(lc, fmt::format("comparison_{}.json", comparison_kind_name(kind)), body);
}

inline void run_verify_theorem(std::ostream& out, const loaded_config& lc, unsigned threads) {
  const std::string body = detail::dump(to_json(headline_count(lc.config, threads)));
  out << body;
  detail::save_report(lc, "count_report.json", body);
}

}  // namespace pslab
