#include <doctest.h>

#include "laststop/report_io.hpp"
#include "laststop/rules.hpp"
#include "laststop/simulate.hpp"

using namespace laststop;

TEST_SUITE("report_io") {

TEST_CASE("threshold records round-trip through JSON exactly") {
  const auto profile = SuccessProfile::karamata_stirling(1.0, 100);
  for (const auto& result : {odds_threshold(profile, 1), mean_threshold(profile, 1),
                             poisson_threshold(1.0, 100, 1)}) {
    const auto dumped = to_json(result).dump();
    const auto back = threshold_from_json(nlohmann::json::parse(dumped));
    CHECK(back.rule == result.rule);
    CHECK(back.m == result.m);
    CHECK(back.threshold == result.threshold);
    CHECK(back.win_probability == result.win_probability);
    CHECK(back.lambda_at_threshold == result.lambda_at_threshold);
    CHECK(back.s_m_at_threshold == result.s_m_at_threshold);
    CHECK(back.s_prev_at_threshold == result.s_prev_at_threshold);
    CHECK(back.degenerate == result.degenerate);
  }
}

TEST_CASE("simulation reports round-trip through JSON exactly") {
  const auto report =
      simulate_rule(SuccessProfile::from_probabilities({0.5, 0.5}), 1, 2, 1000, 42);
  const auto back = simulation_from_json(nlohmann::json::parse(to_json(report).dump()));
  CHECK(back.wins == report.wins);
  CHECK(back.empirical_rate == report.empirical_rate);
  CHECK(back.std_error == report.std_error);
  CHECK(back.seed == report.seed);
}

TEST_CASE("json keys keep insertion order") {
  const auto j = to_json(odds_threshold(SuccessProfile::from_probabilities({0.5, 0.5}), 1));
  auto it = j.begin();
  CHECK(it.key() == "rule");
  ++it;
  CHECK(it.key() == "m");
  ++it;
  CHECK(it.key() == "threshold");
}

TEST_CASE("csv escaping follows RFC 4180") {
  CHECK(csv_escape("plain") == "plain");
  CHECK(csv_escape("with,comma") == "\"with,comma\"");
  CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_escape("line\nbreak") == "\"line\nbreak\"");
}

TEST_CASE("fixed-6 rendering matches the tables") {
  CHECK(format_fixed6(0.371043123) == "0.371043");
  CHECK(format_fixed6(0.0) == "0.000000");
  CHECK(format_fixed6(2.81832084e-05) == "0.000028");
}

TEST_CASE("rule names round-trip") {
  for (Rule r : {Rule::Odds, Rule::Mean, Rule::Poisson}) CHECK(rule_from_name(rule_name(r)) == r);
  CHECK_THROWS_AS(rule_from_name("bogus"), ValidationError);
}

}  // TEST_SUITE
