#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "laststop/rules.hpp"
#include "oracle.hpp"

using namespace laststop;
using laststop::testing::ProfileGen;
using laststop::testing::enumerate_s_m;

TEST_SUITE("rules") {

TEST_CASE("odds_threshold reproduces the reference thresholds") {
  const auto r100 = odds_threshold(SuccessProfile::karamata_stirling(1.0, 100), 1);
  CHECK(r100.threshold == 38);
  CHECK(std::fabs(r100.win_probability - 0.371043) <= 1e-6);
  CHECK_FALSE(r100.degenerate);

  CHECK(odds_threshold(SuccessProfile::karamata_stirling(2.0, 10), 1).threshold == 7);

  const auto tie = odds_threshold(SuccessProfile::from_probabilities({0.5, 0.5}), 1);
  CHECK(tie.threshold == 2);
  CHECK(tie.win_probability == doctest::Approx(0.5).epsilon(1e-15));

  CHECK_THROWS_AS(odds_threshold(SuccessProfile::from_probabilities({0.5, 0.5}), 0),
                  ValidationError);
  CHECK_THROWS_AS(odds_threshold(SuccessProfile::from_probabilities({0.5, 0.5}), 2),
                  ValidationError);
}

TEST_CASE("mean_threshold scans the suffix sums") {
  CHECK(mean_threshold(SuccessProfile::karamata_stirling(1.0, 100), 1).threshold == 37);
  CHECK(mean_threshold(SuccessProfile::karamata_stirling(2.0, 10), 2).threshold == 3);

  // Total sum below m: empty set, clamped to 1.
  const auto short_rule =
      mean_threshold(SuccessProfile::from_probabilities({0.3, 0.3, 0.3}), 2);
  CHECK(short_rule.threshold == 1);
  CHECK(short_rule.degenerate);

  // Tie at the boundary is included (>= in the definition).
  const auto tie = mean_threshold(SuccessProfile::from_probabilities({0.4, 0.5, 0.5}), 1);
  CHECK(tie.threshold == 2);
}

TEST_CASE("poisson_threshold is the ceiling of n exp(-m/theta)") {
  CHECK(poisson_threshold(1.0, 100, 1).threshold == 37);
  CHECK(poisson_threshold(2.0, 100, 2).threshold == 37);
  CHECK(poisson_threshold(1.0, 10, 1).threshold == 4);
  CHECK_THROWS_AS(poisson_threshold(1.0, 10, 0), ValidationError);
  CHECK_THROWS_AS(poisson_threshold(0.0, 10, 1), ValidationError);

  // |k/n - exp(-m/theta)| <= 1/n by construction.
  for (double theta : {0.5, 1.0, 1.5, 2.0})
    for (int n : {10, 100, 1000, 10000})
      for (int m : {1, 2}) {
        const int k = poisson_threshold(theta, n, m).threshold;
        CHECK(std::fabs(static_cast<double>(k) / n - std::exp(-m / theta)) <= 1.0 / n);
      }
}

TEST_CASE("win_probability_of_threshold equals s_m") {
  const auto fair = SuccessProfile::from_probabilities({0.5, 0.5});
  CHECK(win_probability_of_threshold(fair, 1, 1) == doctest::Approx(0.5).epsilon(1e-15));

  const auto big = SuccessProfile::karamata_stirling(1.0, 100);
  CHECK(std::fabs(win_probability_of_threshold(big, 1, 38) - 0.371043) <= 1e-6);

  const auto huge = SuccessProfile::karamata_stirling(1.0, 1000);
  CHECK(std::fabs(win_probability_of_threshold(huge, 2, 136) - 0.271104) <= 1e-6);

  CHECK_THROWS_AS(win_probability_of_threshold(fair, 1, 0), ValidationError);
  CHECK_THROWS_AS(win_probability_of_threshold(fair, 1, 3), ValidationError);
}

TEST_CASE("win probabilities are recomputable from the distribution module") {
  ProfileGen gen(59);
  for (int trial = 0; trial < 40; ++trial) {
    const auto profile = gen.random(2, 40);
    std::uniform_int_distribution<int> pick_m(1, std::min(4, profile.size() - 1));
    const int m = pick_m(gen.rng());
    for (const auto& rule : {odds_threshold(profile, m), mean_threshold(profile, m)}) {
      CHECK(rule.win_probability ==
            doctest::Approx(s_m(profile, rule.threshold, m)).epsilon(1e-12));
      CHECK(rule.threshold >= 1);
      CHECK(rule.threshold <= profile.size());
    }
  }
}

TEST_CASE("epsilon_gap matches the reference gaps") {
  CHECK(std::fabs(epsilon_gap(SuccessProfile::karamata_stirling(1.0, 100), 1).epsilon -
                  0.000028) <= 1e-6);
  CHECK(std::fabs(epsilon_gap(SuccessProfile::karamata_stirling(1.5, 10), 1).epsilon -
                  0.011817) <= 1e-6);
  CHECK(epsilon_gap(SuccessProfile::karamata_stirling(0.5, 10), 1).epsilon == 0.0);
}

TEST_CASE("odds threshold maximizes the win probability (oracle argmax)") {
  ProfileGen gen(61);
  for (int trial = 0; trial < 80; ++trial) {
    const auto profile = gen.random(2, 14);
    const int n = profile.size();
    std::uniform_int_distribution<int> pick_m(1, n - 1);
    const int m = pick_m(gen.rng());
    const auto rule = odds_threshold(profile, m);

    double best = -1.0;
    int best_k = 1;
    for (int k = 1; k <= n; ++k) {
      const double v = enumerate_s_m(profile, k, m);
      if (v > best + 1e-15) {
        best = v;
        best_k = k;
      }
    }
    CHECK(rule.win_probability == doctest::Approx(best).epsilon(1e-10));
    CHECK(std::abs(rule.threshold - best_k) <= 1);  // width-1 plateau tie allowed
  }
}

TEST_CASE("s-space rule agrees with the odds-polynomial rule when finite") {
  ProfileGen gen(67);
  for (int trial = 0; trial < 60; ++trial) {
    const auto profile = gen.random(2, 50);
    const int n = profile.size();
    std::uniform_int_distribution<int> pick_m(1, std::min(4, n - 1));
    const int m = pick_m(gen.rng());
    const auto odds_seq = odds(profile);

    int via_R = 1;
    for (int i = 1; i <= n - m + 1; ++i)
      if (elementary_symmetric_R(odds_seq, i, n, m) >=
          elementary_symmetric_R(odds_seq, i, n, m - 1))
        via_R = i;
    CHECK(odds_threshold(profile, m).threshold == via_R);
  }
}

TEST_CASE("threshold lag and epsilon bound for decreasing profiles") {
  ProfileGen gen(71);
  int exercised = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const auto profile = gen.random(3, 50, /*decreasing=*/true);
    const int n = profile.size();
    std::uniform_int_distribution<int> pick_m(1, std::min(5, n - 1));
    const auto gap = epsilon_gap(profile, pick_m(gen.rng()));
    CHECK(gap.epsilon >= 0.0);
    if (gap.hypotheses_hold) {
      ++exercised;
      CHECK(gap.threshold_lag >= 0);
      CHECK(gap.threshold_lag <= 1);
      CHECK(gap.epsilon <= gap.bound + 1e-12);
    }
  }
  CHECK(exercised > 100);
}

TEST_CASE("epsilon times n^2 stays bounded along the Karamata family") {
  // Monitored per theta, not asserted with a universal constant.
  for (double theta : {0.5, 1.0, 1.5, 2.0}) {
    double scale = 0.0;
    for (int n : {100, 1000, 10000}) {
      const auto gap = epsilon_gap(SuccessProfile::karamata_stirling(theta, n), 1);
      scale = std::max(scale, gap.epsilon * n * static_cast<double>(n));
    }
    MESSAGE("theta=", theta, " max epsilon*n^2=", scale);
    CHECK(scale < 10.0);
  }
}

TEST_CASE("samuels implications are never violated") {
  ProfileGen gen(73);
  for (int trial = 0; trial < 150; ++trial) {
    const auto profile = gen.random(2, 30);
    const int n = profile.size();
    for (int k = 1; k <= n - 1; ++k)
      for (int m = 1; m <= std::min(n, 6); ++m) {
        const auto checks = samuels_implications(profile, k, m);
        CHECK(checks.rise.status != ImplicationStatus::Violated);
        CHECK(checks.fall.status != ImplicationStatus::Violated);
        CHECK(checks.window.status != ImplicationStatus::Violated);
      }
  }
}

TEST_CASE("samuels window fires on a mid-sum instance") {
  // Sum 1.2 lies in [1, 2]: the window antecedent holds at k = 1 for m = 1.
  const auto profile = SuccessProfile::from_probabilities({0.6, 0.6});
  const auto checks = samuels_implications(profile, 1, 1);
  CHECK(checks.window.antecedent);
  CHECK(checks.window.status == ImplicationStatus::Confirmed);
  CHECK(checks.rise.antecedent);
  CHECK(checks.rise.status == ImplicationStatus::Confirmed);
}

TEST_CASE("certify_mode on the classical profile") {
  // k* = 37 satisfies the bracket conditions but not the strict window; the
  // sweep argmax sits at 38, inside {k*, k*+1}.
  const auto cert = certify_mode(SuccessProfile::karamata_stirling(1.0, 100), 37, 1);
  CHECK(cert.next_is_largest_remaining);
  CHECK(cert.step_up_below_min);
  CHECK_FALSE(cert.exact_window);
  CHECK(cert.bracket_window);
  CHECK(cert.verdict == ModeVerdict::ModeAtCandidateOrNext);
  CHECK(cert.sweep_mode_lo == 38);
  CHECK(cert.consistent);
}

TEST_CASE("certify_mode handles flat and hopeless candidates") {
  // All-equal profile: conditions evaluated, verdict reported, and whatever
  // the verdict is it must agree with the sweep.
  const auto flat = SuccessProfile::from_probabilities(std::vector<double>(10, 0.5));
  const auto cert = certify_mode(flat, 1, 5);
  CHECK(cert.consistent);

  // Increasing profile: the largest-remaining condition fails at once.
  const auto rising = SuccessProfile::from_probabilities({0.1, 0.2, 0.3, 0.4, 0.5});
  const auto cert2 = certify_mode(rising, 2, 1);
  CHECK(cert2.verdict == ModeVerdict::Inconclusive);

  CHECK_THROWS_AS(certify_mode(flat, 0, 1), ValidationError);
  CHECK_THROWS_AS(certify_mode(flat, 10, 1), ValidationError);
}

TEST_CASE("certificates stay consistent with the sweep argmax") {
  ProfileGen gen(79);
  int decisive = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const auto profile = gen.random(3, 40, /*decreasing=*/true);
    const int n = profile.size();
    std::uniform_int_distribution<int> pick_m(1, std::min(4, n - 1));
    const int m = pick_m(gen.rng());
    std::uniform_int_distribution<int> pick_k(1, n - m);
    const auto cert = certify_mode(profile, pick_k(gen.rng()), m);
    CHECK(cert.consistent);
    if (cert.verdict != ModeVerdict::Inconclusive) ++decisive;
  }
  MESSAGE("decisive certificates: ", decisive);
  CHECK(decisive > 0);
}

}  // TEST_SUITE
