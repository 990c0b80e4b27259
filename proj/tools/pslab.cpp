// pslab: command-line front end. Reports go to stdout; errors go to stderr
// as one JSON object. Exit codes: 0 success, 1 usage/parse/validation,
// 2 budget or precision exhausted.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "pslab/cli.hpp"

namespace {

void print_error(const pslab::json& j) { std::cerr << j.dump() << '\n'; }

unsigned digits_or_env(std::optional<unsigned> flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("PSLAB_PRECISION"); env && *env)
    return pslab::detail::parse_digits(env, 0, "PSLAB_PRECISION");
  return pslab::default_digits;
}

void check_digits(unsigned d) {
  if (d < pslab::minimum_digits || d > pslab::maximum_digits)
    throw pslab::validation_error(fmt::format("precision digits {} outside [{}, {}]", d, pslab::minimum_digits,
                                              pslab::maximum_digits));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Piatetski-Shapiro primes near alpha p + beta: experiments and checks", "pslab"};
  app.require_subcommand(1);
  unsigned threads = 0;
  app.add_option("--threads", threads, "Worker threads (0 = all cores)");

  auto* conv = app.add_subcommand("convergents", "Continued-fraction convergents a/q of alpha as CSV a,q,error");
  std::string conv_alpha;
  std::int64_t max_q = 0;
  std::optional<unsigned> conv_digits;
  conv->add_option("--alpha", conv_alpha, "sqrt2, golden, pi, e or a decimal")->required();
  conv->add_option("--max-q", max_q, "Largest denominator")->required();
  conv->add_option("--digits", conv_digits, "Working precision in decimal digits");

  auto* ps = app.add_subcommand("ps-list", "Piatetski-Shapiro primes [n^c] in [lo, hi), one per line");
  std::string ps_c;
  std::uint64_t lo = 0, hi = 0;
  std::optional<unsigned> ps_digits;
  ps->add_option("--c", ps_c, "Exponent c > 1 (decimal)")->required();
  ps->add_option("--lo", lo, "Lower end (inclusive)")->required();
  ps->add_option("--hi", hi, "Upper end (exclusive), at most 2^40")->required();
  ps->add_option("--digits", ps_digits, "Working precision in decimal digits");

  std::string config_path;
  auto* build = app.add_subcommand("build-a", "The thin set A as CSV a,dist_alpha,dist_gamma");
  build->add_option("--config", config_path, "Experiment config file")->required();

  auto* det = app.add_subcommand("detector-check", "Sandwich and coefficient checks of the approximants");
  std::string xi;
  std::uint32_t K = 0;
  std::uint64_t grid = 100000, random = 10000, det_seed = 0;
  det->add_option("--xi", xi, "Half-width xi (decimal)")->required();
  det->add_option("--K", K, "Degree")->required();
  det->add_option("--points", grid, "Equispaced points")->capture_default_str();
  det->add_option("--random", random, "Random points")->capture_default_str();
  det->add_option("--seed", det_seed, "Seed of the random points")->capture_default_str();

  auto* es = app.add_subcommand("expsum", "Direct evaluation of S1..T3 over dyadic blocks, one CSV row per block");
  std::string es_kind, es_block, coeff_c = "all-ones", coeff_d = "all-ones";
  std::optional<std::uint64_t> es_X;
  double budget = pslab::default_term_budget;
  es->add_option("--kind", es_kind, "S1, S2, S3, T1, T2 or T3")->required();
  es->add_option("--config", config_path, "Experiment config file")->required();
  es->add_option("--X", es_X, "Overrides X from the config");
  es->add_option("--block", es_block, "Single block M,N,U,V (0 for an absent variable)");
  es->add_option("--coeff-c", coeff_c, "Coefficients of l: all-ones or scaled-detector")->capture_default_str();
  es->add_option("--coeff-d", coeff_d, "Coefficients of h: all-ones or scaled-detector")->capture_default_str();
  es->add_option("--budget", budget, "Term budget")->capture_default_str();

  auto* hc = app.add_subcommand("harman-compare", "Type I/II comparison between A and B as JSON");
  std::string hc_kind;
  hc->add_option("--kind", hc_kind, "I or II")->required();
  hc->add_option("--config", config_path, "Experiment config file")->required();

  auto* vt = app.add_subcommand("verify-theorem", "Prime counts in A and B as a JSON CountReport");
  vt->add_option("--config", config_path, "Experiment config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    const CLI::App* scope = &app;
    for (const auto* sub : app.get_subcommands()) scope = sub;
    pslab::json j = pslab::error_json("UsageError", e.what());
    j["usage"] = scope->help();
    print_error(j);
    return pslab::exit_invalid;
  }

  std::ios::sync_with_stdio(false);
  try {
    if (conv->parsed()) {
      const unsigned d = digits_or_env(conv_digits);
      check_digits(d);
      pslab::run_convergents(std::cout, pslab::real_constant::parse(conv_alpha), max_q, d);
    } else if (ps->parsed()) {
      const unsigned d = digits_or_env(ps_digits);
      check_digits(d);
      pslab::run_ps_list(std::cout, pslab::real_constant::parse(ps_c), lo, hi, threads, d);
    } else if (build->parsed()) {
      pslab::run_build_a(std::cout, pslab::parse_config(config_path), threads);
    } else if (det->parsed()) {
      pslab::run_detector_check(std::cout, pslab::real_constant::parse(xi), K, grid, random, det_seed);
    } else if (es->parsed()) {
      pslab::expsum_options opt;
      opt.kind = pslab::parse_sum_kind(es_kind);
      opt.X = es_X;
      if (!es_block.empty()) opt.block = pslab::parse_block(es_block);
      opt.coeff_c = pslab::parse_coefficient_kind(coeff_c);
      opt.coeff_d = pslab::parse_coefficient_kind(coeff_d);
      opt.budget = budget;
      pslab::run_expsum(std::cout, pslab::parse_config(config_path), opt, threads);
    } else if (hc->parsed()) {
      const auto kind = pslab::parse_comparison_kind(hc_kind);
      pslab::run_harman_compare(std::cout, pslab::parse_config(config_path), kind, threads);
    } else if (vt->parsed()) {
      pslab::run_verify_theorem(std::cout, pslab::parse_config(config_path), threads);
    }
  } catch (const pslab::error& e) {
    std::cout.flush();
    print_error(pslab::error_json(e));
    return pslab::exit_code_for(e);
  } catch (const std::exception& e) {
    std::cout.flush();
    print_error(pslab::error_json("InternalError", e.what()));
    return pslab::exit_invalid;
  }
  std::cout.flush();
  return pslab::exit_ok;
}
