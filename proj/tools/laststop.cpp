// laststop: threshold stopping rules for the m-th last success in a
// sequence of independent Bernoulli trials.

#include <unistd.h>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "laststop/asymptotics.hpp"
#include "laststop/goldens.hpp"
#include "laststop/report_io.hpp"
#include "laststop/rules.hpp"
#include "laststop/simulate.hpp"

namespace {

using namespace laststop;
using nlohmann::ordered_json;

enum class Format { Table, Csv, Json };

struct CommonOptions {
  std::string karamata;  // "theta,n"
  std::string profile_path;
  int m = 1;
  std::string format;  // empty = auto
};

struct KaramataParams {
  double theta = 0.0;
  int n = 0;
};

void add_profile_options(CLI::App* cmd, CommonOptions& opt, bool karamata_only = false) {
  auto* k = cmd->add_option("--karamata", opt.karamata,
                            "Karamata-Stirling profile as \"theta,n\"");
  if (!karamata_only) {
    auto* f = cmd->add_option("--profile", opt.profile_path,
                              "profile file (CSV, one probability per line; .json for JSON)");
    k->excludes(f);
    f->excludes(k);
  }
}

void add_format_option(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("--format", opt.format, "output format: table, csv or json")
      ->check(CLI::IsMember({"table", "csv", "json"}));
}

Format resolve_format(const CommonOptions& opt) {
  if (opt.format == "table") return Format::Table;
  if (opt.format == "csv") return Format::Csv;
  if (opt.format == "json") return Format::Json;
  return isatty(STDOUT_FILENO) ? Format::Table : Format::Json;
}

KaramataParams parse_karamata(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos)
    throw ValidationError("--karamata expects \"theta,n\", got \"" + text + "\"");
  KaramataParams params;
  try {
    params.theta = std::stod(text.substr(0, comma));
    params.n = std::stoi(text.substr(comma + 1));
  } catch (const std::exception&) {
    throw ValidationError("--karamata expects \"theta,n\", got \"" + text + "\"");
  }
  return params;
}

SuccessProfile resolve_profile(const CommonOptions& opt,
                               std::optional<KaramataParams>* params_out = nullptr) {
  if (!opt.karamata.empty()) {
    const KaramataParams params = parse_karamata(opt.karamata);
    if (params_out) *params_out = params;
    return SuccessProfile::karamata_stirling(params.theta, params.n);
  }
  if (!opt.profile_path.empty()) {
    if (params_out) *params_out = std::nullopt;
    return load_profile_file(opt.profile_path);
  }
  throw ValidationError("exactly one profile source is required (--karamata or --profile)");
}

void emit_json(const ordered_json& j) { std::cout << j.dump(2) << '\n'; }

// ---------------------------------------------------------------- threshold

int run_threshold(const CommonOptions& opt, const std::string& rule_arg) {
  std::optional<KaramataParams> karamata;
  const SuccessProfile profile = resolve_profile(opt, &karamata);

  std::vector<ThresholdResult> results;
  auto want = [&](const char* name) { return rule_arg == name || rule_arg == "all"; };
  if (want("odds")) results.push_back(odds_threshold(profile, opt.m));
  if (want("mean")) results.push_back(mean_threshold(profile, opt.m));
  if (want("poisson")) {
    if (karamata.has_value()) {
      results.push_back(poisson_threshold(karamata->theta, karamata->n, opt.m));
    } else if (rule_arg == "poisson") {
      throw ValidationError("the poisson rule needs Karamata parameters (--karamata)");
    }
  }

  switch (resolve_format(opt)) {
    case Format::Json: {
      ordered_json arr = ordered_json::array();
      for (const auto& r : results) arr.push_back(to_json(r));
      emit_json(arr);
      break;
    }
    case Format::Csv:
      std::printf("rule,m,threshold,win_probability,lambda_at_threshold\n");
      for (const auto& r : results)
        std::printf("%s,%d,%d,%.17g,%.17g\n", rule_name(r.rule), r.m, r.threshold,
                    r.win_probability, r.lambda_at_threshold);
      break;
    case Format::Table:
      std::printf("%-8s %-4s %-10s %-16s %s\n", "rule", "m", "threshold", "win_probability",
                  "lambda");
      for (const auto& r : results)
        std::printf("%-8s %-4d %-10d %-16s %s\n", rule_name(r.rule), r.m, r.threshold,
                    format_fixed6(r.win_probability).c_str(),
                    format_fixed6(r.lambda_at_threshold).c_str());
      break;
  }
  return 0;
}

// ------------------------------------------------------------------ winprob

int run_winprob(const CommonOptions& opt, int k) {
  const SuccessProfile profile = resolve_profile(opt);
  const double value = win_probability_of_threshold(profile, opt.m, k);
  switch (resolve_format(opt)) {
    case Format::Json:
      emit_json(ordered_json{{"m", opt.m}, {"threshold", k}, {"win_probability", value}});
      break;
    case Format::Csv:
      std::printf("m,threshold,win_probability\n%d,%d,%.17g\n", opt.m, k, value);
      break;
    case Format::Table:
      std::printf("win probability of stopping at the first success at or after %d: %s\n", k,
                  format_fixed6(value).c_str());
      break;
  }
  return 0;
}

// ------------------------------------------------------------------ compare

struct CompareRow {
  int m;
  double theta;
  int n;
  EpsilonGap gap;
};

int run_compare(const CommonOptions& opt, bool golden, bool m_given) {
  if (golden) {
    if (m_given)
      throw ValidationError("--golden verifies the full embedded grid; drop --m");
    const auto outcomes = run_golden_comparison();
    const bool pass = all_golden_pass(outcomes);
    if (resolve_format(opt) == Format::Json) {
      ordered_json arr = ordered_json::array();
      for (const auto& out : outcomes) arr.push_back(to_json(out));
      emit_json(ordered_json{{"pass", pass}, {"cells", arr}});
    } else {
      for (const auto& out : outcomes) {
        const bool ok = out.thresholds_match && out.values_match;
        std::printf("[%s] m=%d theta=%-3g n=%-6d odds=%-6d mean=%-6d s*=%s eps=%s%s%s\n",
                    ok ? "ok" : "MISMATCH", out.cell->m, out.cell->theta, out.cell->n,
                    out.odds_threshold, out.mean_threshold,
                    format_fixed6(out.win_probability).c_str(),
                    format_fixed6(out.epsilon).c_str(), out.detail.empty() ? "" : " | ",
                    out.detail.c_str());
      }
      std::printf("%s: %zu cells checked\n", pass ? "PASS" : "FAIL", outcomes.size());
    }
    return pass ? 0 : 1;
  }

  std::vector<int> ms = m_given ? std::vector<int>{opt.m} : std::vector<int>{1, 2};
  const double thetas[] = {0.5, 1.0, 1.5, 2.0};
  const int ns[] = {10, 100, 1000, 10000, 100000};
  std::vector<CompareRow> rows;
  for (int m : ms)
    for (double theta : thetas)
      for (int n : ns) {
        const SuccessProfile profile = SuccessProfile::karamata_stirling(theta, n);
        rows.push_back({m, theta, n, epsilon_gap(profile, m)});
      }

  switch (resolve_format(opt)) {
    case Format::Json: {
      ordered_json arr = ordered_json::array();
      for (const auto& row : rows) {
        ordered_json j{{"m", row.m}, {"theta", row.theta}, {"n", row.n}};
        j.update(to_json(row.gap));
        arr.push_back(j);
      }
      emit_json(arr);
      break;
    }
    case Format::Csv:
      std::printf("m,theta,n,odds_threshold,mean_threshold,win_probability,epsilon\n");
      for (const auto& row : rows)
        std::printf("%d,%g,%d,%d,%d,%.17g,%.17g\n", row.m, row.theta, row.n,
                    row.gap.odds.threshold, row.gap.mean.threshold,
                    row.gap.odds.win_probability, row.gap.epsilon);
      break;
    case Format::Table:
      std::printf("%-4s %-6s %-8s %-8s %-8s %-12s %s\n", "m", "theta", "n", "odds", "mean",
                  "s*_m(n)", "epsilon");
      for (const auto& row : rows)
        std::printf("%-4d %-6g %-8d %-8d %-8d %-12s %s\n", row.m, row.theta, row.n,
                    row.gap.odds.threshold, row.gap.mean.threshold,
                    format_fixed6(row.gap.odds.win_probability).c_str(),
                    format_fixed6(row.gap.epsilon).c_str());
      break;
  }
  return 0;
}

// ----------------------------------------------------------------- simulate

int run_simulate(const CommonOptions& opt, const std::string& rule_arg, int k_override,
                 std::uint64_t reps, std::uint64_t seed, int workers) {
  if (reps < 1) throw ValidationError("--reps must be at least 1");
  std::optional<KaramataParams> karamata;
  const SuccessProfile profile = resolve_profile(opt, &karamata);

  if (rule_arg == "compare") {
    if (k_override > 0)
      throw ValidationError("--k conflicts with --rule compare (thresholds come from the rules)");
    const PairedSimulation paired = simulate_compare(profile, opt.m, reps, seed, workers);
    const double exact_eps = epsilon_gap(profile, opt.m).epsilon;
    if (resolve_format(opt) == Format::Json) {
      ordered_json j = to_json(paired);
      j["exact_epsilon"] = exact_eps;
      emit_json(j);
    } else {
      std::printf("odds rule: threshold %d rate %.6f +- %.6f\n", paired.odds.threshold,
                  paired.odds.empirical_rate, paired.odds.std_error);
      std::printf("mean rule: threshold %d rate %.6f +- %.6f\n", paired.mean.threshold,
                  paired.mean.empirical_rate, paired.mean.std_error);
      std::printf("paired difference %.8f +- %.8f (exact epsilon %.8f)\n", paired.difference(),
                  paired.paired_std_error(), exact_eps);
    }
    return 0;
  }

  int threshold = k_override;
  Rule label = Rule::Odds;
  if (threshold <= 0) {
    if (rule_arg == "odds") {
      threshold = odds_threshold(profile, opt.m).threshold;
    } else if (rule_arg == "mean") {
      threshold = mean_threshold(profile, opt.m).threshold;
      label = Rule::Mean;
    } else if (rule_arg == "poisson") {
      if (!karamata.has_value())
        throw ValidationError("the poisson rule needs Karamata parameters (--karamata)");
      threshold = poisson_threshold(karamata->theta, karamata->n, opt.m).threshold;
      label = Rule::Poisson;
    } else {
      throw ValidationError("unknown rule for simulate: " + rule_arg);
    }
  }

  const SimulationReport report =
      simulate_rule(profile, opt.m, threshold, reps, seed, label, workers);
  const double exact = win_probability_of_threshold(profile, opt.m, threshold);
  if (resolve_format(opt) == Format::Json) {
    ordered_json j = to_json(report);
    j["exact_win_probability"] = exact;
    emit_json(j);
  } else {
    std::printf("threshold %d: empirical %.6f +- %.6f over %llu replications (seed %llu)\n",
                report.threshold, report.empirical_rate, report.std_error,
                static_cast<unsigned long long>(report.replications),
                static_cast<unsigned long long>(report.seed));
    std::printf("exact win probability %.6f, deviation %.2f standard errors\n", exact,
                report.std_error > 0 ? (report.empirical_rate - exact) / report.std_error
                                     : 0.0);
  }
  return 0;
}

// -------------------------------------------------------------- asymptotics

int run_asymptotics(const CommonOptions& opt, const std::string& rule_arg) {
  if (opt.karamata.empty())
    throw ValidationError("asymptotics needs Karamata parameters (--karamata)");
  const KaramataParams params = parse_karamata(opt.karamata);
  const SuccessProfile profile = SuccessProfile::karamata_stirling(params.theta, params.n);

  ThresholdResult rule;
  if (rule_arg == "odds") {
    rule = odds_threshold(profile, opt.m);
  } else if (rule_arg == "mean") {
    rule = mean_threshold(profile, opt.m);
  } else if (rule_arg == "poisson") {
    rule = poisson_threshold(params.theta, params.n, opt.m);
  } else {
    throw ValidationError("unknown rule for asymptotics: " + rule_arg);
  }

  const double kappa_m = kappa(params.theta, opt.m);
  const double value_m = asymptotic_value(opt.m);
  const SuffixSums sums = suffix_sums(profile, rule.threshold);
  const auto [lambda_lo, lambda_hi] = lambda_bounds(params.theta, rule.threshold, params.n);
  const SuffixDistribution dist = complete_suffix_distribution(profile, rule.threshold);
  const TvReport tv = tv_distance(dist, PoissonLaw(sums.lambda), sums);

  if (resolve_format(opt) == Format::Json) {
    ordered_json j{{"theta", params.theta},
                   {"n", params.n},
                   {"m", opt.m},
                   {"kappa", kappa_m},
                   {"asymptotic_value", value_m},
                   {"rule", rule_name(rule.rule)},
                   {"threshold", rule.threshold},
                   {"win_probability", rule.win_probability},
                   {"lambda_at_threshold", sums.lambda},
                   {"lambda_lower_bound", lambda_lo},
                   {"lambda_upper_bound", lambda_hi}};
    j.update(to_json(tv));
    emit_json(j);
  } else {
    std::printf("kappa_m = %.6f (limit skip proportion), V_m = %.6f (limit win probability)\n",
                kappa_m, value_m);
    std::printf("%s rule at n=%d: threshold %d, win probability %.6f\n", rule_name(rule.rule),
                params.n, rule.threshold, rule.win_probability);
    std::printf("lambda at threshold %.6f, log-sandwich (%.6f, %.6f)\n", sums.lambda, lambda_lo,
                lambda_hi);
    std::printf("tv to Poisson(lambda) %.3e; Le Cam upper %.3e; Barbour-Hall [%.3e, %.3e]\n",
                tv.tv, tv.lecam_upper, tv.bh_lower, tv.bh_upper);
  }
  return 0;
}

// ------------------------------------------------------------------ certify

int run_certify(const CommonOptions& opt, int k_star) {
  const SuccessProfile profile = resolve_profile(opt);
  const ModeCertificate cert = certify_mode(profile, k_star, opt.m);
  if (resolve_format(opt) == Format::Json) {
    emit_json(to_json(cert));
  } else {
    auto flag = [](bool b) { return b ? "yes" : "no"; };
    std::printf("candidate k* = %d, m = %d\n", cert.candidate, cert.m);
    std::printf("  p_{k*+1} largest among remaining : %s\n",
                flag(cert.next_is_largest_remaining));
    std::printf("  p_{k*+1} - p_{k*} < min remaining: %s\n", flag(cert.step_up_below_min));
    std::printf("  strict sum window                : %s\n", flag(cert.exact_window));
    std::printf("  bracket sum window               : %s\n", flag(cert.bracket_window));
    std::printf("verdict: %s\n", verdict_name(cert.verdict));
    std::printf("sweep argmax of s_m(., n): [%d, %d]; consistent: %s\n", cert.sweep_mode_lo,
                cert.sweep_mode_hi, flag(cert.consistent));
  }
  return cert.consistent ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"threshold stopping rules for the m-th last success in Bernoulli trials"};
  app.require_subcommand(1);

  CommonOptions opt;
  std::string rule_arg = "all";
  int k_arg = 0;
  int k_star = 0;
  std::uint64_t reps = 100000;
  std::uint64_t seed = 42;
  int workers = 0;
  bool golden = false;

  auto* threshold_cmd = app.add_subcommand("threshold", "compute stopping thresholds");
  add_profile_options(threshold_cmd, opt);
  threshold_cmd->add_option("--m", opt.m, "target rank (m-th last success)");
  threshold_cmd->add_option("--rule", rule_arg, "odds, mean, poisson or all")
      ->check(CLI::IsMember({"odds", "mean", "poisson", "all"}));
  add_format_option(threshold_cmd, opt);

  auto* winprob_cmd = app.add_subcommand("winprob", "win probability of an explicit threshold");
  add_profile_options(winprob_cmd, opt);
  winprob_cmd->add_option("--m", opt.m, "target rank");
  winprob_cmd->add_option("--k", k_arg, "threshold index")->required();
  add_format_option(winprob_cmd, opt);

  auto* compare_cmd =
      app.add_subcommand("compare", "odds vs mean rule across the reference grid");
  auto* compare_m = compare_cmd->add_option("--m", opt.m, "restrict to one rank");
  compare_cmd->add_flag("--golden", golden, "verify against the embedded reference values");
  add_format_option(compare_cmd, opt);

  auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo check of a rule");
  add_profile_options(simulate_cmd, opt);
  simulate_cmd->add_option("--m", opt.m, "target rank");
  simulate_cmd->add_option("--rule", rule_arg, "odds, mean, poisson or compare (paired)")
      ->check(CLI::IsMember({"odds", "mean", "poisson", "compare"}));
  simulate_cmd->add_option("--k", k_arg, "explicit threshold (overrides --rule)");
  simulate_cmd->add_option("--reps", reps, "number of replications");
  simulate_cmd->add_option("--seed", seed, "64-bit stream seed");
  simulate_cmd->add_option("--workers", workers, "worker threads (0 = hardware)");
  add_format_option(simulate_cmd, opt);

  auto* asym_cmd = app.add_subcommand("asymptotics", "limit values and Poisson diagnostics");
  add_profile_options(asym_cmd, opt, /*karamata_only=*/true);
  asym_cmd->add_option("--m", opt.m, "target rank");
  asym_cmd->add_option("--rule", rule_arg, "threshold to analyse: odds, mean or poisson")
      ->check(CLI::IsMember({"odds", "mean", "poisson"}));
  add_format_option(asym_cmd, opt);

  auto* certify_cmd = app.add_subcommand("certify", "mode certificate for a candidate index");
  add_profile_options(certify_cmd, opt);
  certify_cmd->add_option("--m", opt.m, "target rank");
  certify_cmd->add_option("--kstar", k_star, "candidate index")->required();
  add_format_option(certify_cmd, opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (threshold_cmd->parsed()) return run_threshold(opt, rule_arg);
    if (winprob_cmd->parsed()) return run_winprob(opt, k_arg);
    if (compare_cmd->parsed()) return run_compare(opt, golden, compare_m->count() > 0);
    if (simulate_cmd->parsed())
      return run_simulate(opt, rule_arg == "all" ? "odds" : rule_arg, k_arg, reps, seed,
                          workers);
    if (asym_cmd->parsed()) return run_asymptotics(opt, rule_arg == "all" ? "odds" : rule_arg);
    if (certify_cmd->parsed()) return run_certify(opt, k_star);
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
