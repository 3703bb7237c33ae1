#include "laststop/report_io.hpp"

#include <cstdio>

namespace laststop {

using nlohmann::ordered_json;

nlohmann::ordered_json to_json(const ThresholdResult& r) {
  return ordered_json{{"rule", rule_name(r.rule)},
                      {"m", r.m},
                      {"threshold", r.threshold},
                      {"win_probability", r.win_probability},
                      {"lambda_at_threshold", r.lambda_at_threshold},
                      {"s_m_at_threshold", r.s_m_at_threshold},
                      {"s_prev_at_threshold", r.s_prev_at_threshold},
                      {"degenerate", r.degenerate},
                      {"mean_hypotheses_hold", r.mean_hypotheses_hold},
                      {"mean_hypotheses_strict", r.mean_hypotheses_strict}};
}

nlohmann::ordered_json to_json(const EpsilonGap& g) {
  return ordered_json{{"epsilon", g.epsilon},
                      {"bound", g.bound},
                      {"threshold_lag", g.threshold_lag},
                      {"hypotheses_hold", g.hypotheses_hold},
                      {"odds", to_json(g.odds)},
                      {"mean", to_json(g.mean)}};
}

nlohmann::ordered_json to_json(const SimulationReport& r) {
  return ordered_json{{"rule", rule_name(r.rule)},
                      {"m", r.m},
                      {"threshold", r.threshold},
                      {"replications", r.replications},
                      {"wins", r.wins},
                      {"empirical_rate", r.empirical_rate},
                      {"std_error", r.std_error},
                      {"seed", r.seed}};
}

nlohmann::ordered_json to_json(const PairedSimulation& p) {
  return ordered_json{{"odds", to_json(p.odds)},
                      {"mean", to_json(p.mean)},
                      {"both_win", p.both_win},
                      {"odds_only", p.odds_only},
                      {"mean_only", p.mean_only},
                      {"difference", p.difference()},
                      {"paired_std_error", p.paired_std_error()}};
}

nlohmann::ordered_json to_json(const ModeCertificate& c) {
  return ordered_json{{"candidate", c.candidate},
                      {"m", c.m},
                      {"next_is_largest_remaining", c.next_is_largest_remaining},
                      {"step_up_below_min", c.step_up_below_min},
                      {"exact_window", c.exact_window},
                      {"bracket_window", c.bracket_window},
                      {"verdict", verdict_name(c.verdict)},
                      {"sweep_mode_lo", c.sweep_mode_lo},
                      {"sweep_mode_hi", c.sweep_mode_hi},
                      {"consistent", c.consistent}};
}

nlohmann::ordered_json to_json(const TvReport& t) {
  return ordered_json{{"tv", t.tv},
                      {"lecam_upper", t.lecam_upper},
                      {"bh_lower", t.bh_lower},
                      {"bh_upper", t.bh_upper}};
}

nlohmann::ordered_json to_json(const GoldenOutcome& o) {
  ordered_json j{{"m", o.cell->m},
                 {"theta", o.cell->theta},
                 {"n", o.cell->n},
                 {"odds_threshold", o.odds_threshold},
                 {"mean_threshold", o.mean_threshold},
                 {"win_probability", o.win_probability},
                 {"epsilon", o.epsilon},
                 {"thresholds_match", o.thresholds_match},
                 {"values_match", o.values_match}};
  if (!o.detail.empty()) j["detail"] = o.detail;
  return j;
}

ThresholdResult threshold_from_json(const nlohmann::json& j) {
  ThresholdResult r;
  r.rule = rule_from_name(j.at("rule").get<std::string>());
  r.m = j.at("m").get<int>();
  r.threshold = j.at("threshold").get<int>();
  r.win_probability = j.at("win_probability").get<double>();
  r.lambda_at_threshold = j.at("lambda_at_threshold").get<double>();
  r.s_m_at_threshold = j.at("s_m_at_threshold").get<double>();
  r.s_prev_at_threshold = j.at("s_prev_at_threshold").get<double>();
  r.degenerate = j.at("degenerate").get<bool>();
  r.mean_hypotheses_hold = j.at("mean_hypotheses_hold").get<bool>();
  r.mean_hypotheses_strict = j.at("mean_hypotheses_strict").get<bool>();
  return r;
}

SimulationReport simulation_from_json(const nlohmann::json& j) {
  SimulationReport r;
  r.rule = rule_from_name(j.at("rule").get<std::string>());
  r.m = j.at("m").get<int>();
  r.threshold = j.at("threshold").get<int>();
  r.replications = j.at("replications").get<std::uint64_t>();
  r.wins = j.at("wins").get<std::uint64_t>();
  r.empirical_rate = j.at("empirical_rate").get<double>();
  r.std_error = j.at("std_error").get<double>();
  r.seed = j.at("seed").get<std::uint64_t>();
  return r;
}

Rule rule_from_name(const std::string& name) {
  if (name == "odds") return Rule::Odds;
  if (name == "mean") return Rule::Mean;
  if (name == "poisson") return Rule::Poisson;
  throw ValidationError("unknown rule: " + name);
}

const char* verdict_name(ModeVerdict v) {
  switch (v) {
    case ModeVerdict::ModeAtCandidate: return "mode_at_candidate";
    case ModeVerdict::ModeAtCandidateOrNext: return "mode_at_candidate_or_next";
    case ModeVerdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string format_fixed6(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", value);
  return buf;
}

}  // namespace laststop
