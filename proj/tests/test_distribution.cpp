#include <doctest.h>

#include <cmath>
#include <vector>

#include "laststop/distribution.hpp"
#include "oracle.hpp"

using namespace laststop;
using laststop::testing::ProfileGen;
using laststop::testing::enumerate_s_m;
using laststop::testing::enumerate_suffix_masses;

namespace {

// Unimodality up to floating noise: never rises again after falling.
void check_unimodal(const std::vector<double>& a) {
  const double slack = 1e-9;
  bool falling = false;
  for (std::size_t j = 1; j < a.size(); ++j) {
    if (falling) {
      CHECK(a[j] <= a[j - 1] * (1 + slack) + 1e-300);
    } else if (a[j] < a[j - 1] * (1 - slack)) {
      falling = true;
    }
  }
}

}  // namespace

TEST_SUITE("distribution") {

TEST_CASE("s0 multiplies failure probabilities") {
  const auto fair = SuccessProfile::from_probabilities({0.5, 0.5, 0.5});
  CHECK(s0(fair, 1) == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(s0(fair, 4) == 1.0);  // empty suffix

  const auto record = SuccessProfile::karamata_stirling(1.0, 10);
  double direct = 1.0;
  for (int j = 4; j <= 10; ++j) direct *= 1.0 - 1.0 / j;
  CHECK(s0(record, 4) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(s0(record, 4) == doctest::Approx(direct).epsilon(1e-14));

  CHECK_THROWS_AS(s0(fair, 0), ValidationError);
  CHECK_THROWS_AS(s0(fair, 5), ValidationError);
}

TEST_CASE("s_m matches hand values and conventions") {
  const auto fair = SuccessProfile::from_probabilities({0.5, 0.5});
  CHECK(s_m(fair, 1, 1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(s_m(fair, 1, 2) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(s_m(fair, 3, 0) == 1.0);   // empty suffix, zero successes
  CHECK(s_m(fair, 3, 1) == 0.0);   // empty suffix, m >= 1
  CHECK(s_m(fair, 2, 2) == 0.0);   // m beyond the suffix length

  // s_1(4, 10) = s_0(4, 10) * sum_{j=4..10} 1/(j-1) for the record model,
  // cross-checked by enumeration below as well.
  const auto record = SuccessProfile::karamata_stirling(1.0, 10);
  double r1 = 0.0;
  for (int j = 4; j <= 10; ++j) r1 += 1.0 / (j - 1);
  CHECK(s_m(record, 4, 1) == doctest::Approx(s0(record, 4) * r1).epsilon(1e-12));
  CHECK(s_m(record, 4, 1) == doctest::Approx(enumerate_s_m(record, 4, 1)).epsilon(1e-12));
}

TEST_CASE("suffix_distribution convolves and tracks overflow") {
  const auto fair = SuccessProfile::from_probabilities({0.5, 0.5, 0.5});
  const auto full = suffix_distribution(fair, 1, 3);
  REQUIRE(full.mass.size() == 4);
  CHECK(full.mass[0] == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(full.mass[1] == doctest::Approx(0.375).epsilon(1e-15));
  CHECK(full.mass[2] == doctest::Approx(0.375).epsilon(1e-15));
  CHECK(full.mass[3] == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(full.overflow == 0.0);
  CHECK(full.complete());

  const auto skew = suffix_distribution(SuccessProfile::from_probabilities({0.9, 0.1}), 1, 2);
  CHECK(skew.mass[0] == doctest::Approx(0.09).epsilon(1e-14));
  CHECK(skew.mass[1] == doctest::Approx(0.82).epsilon(1e-14));
  CHECK(skew.mass[2] == doctest::Approx(0.09).epsilon(1e-14));

  const auto empty = suffix_distribution(fair, 4, 0);
  CHECK(empty.mass[0] == 1.0);
  CHECK(empty.overflow == 0.0);

  const auto truncated = suffix_distribution(fair, 1, 1);
  CHECK(truncated.overflow == doctest::Approx(0.5).epsilon(1e-14));
  const double total = truncated.mass[0] + truncated.mass[1] + truncated.overflow;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("all_suffix_masses rows equal per-suffix distributions bit for bit") {
  const auto fair = SuccessProfile::from_probabilities({0.5, 0.5});
  const auto table = all_suffix_masses(fair, 1);
  CHECK(table.s(3, 0) == 1.0);
  CHECK(table.s(3, 1) == 0.0);
  CHECK(table.s(2, 0) == 0.5);
  CHECK(table.s(2, 1) == 0.5);
  CHECK(table.s(1, 0) == 0.25);
  CHECK(table.s(1, 1) == 0.5);

  ProfileGen gen(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto profile = gen.random(1, 20);
    const int m_max = 3;
    const auto t = all_suffix_masses(profile, m_max);
    for (int k = 1; k <= profile.size() + 1; ++k) {
      const auto dist = suffix_distribution(profile, k, m_max);
      for (int j = 0; j <= m_max; ++j)
        CHECK(t.s(k, j) == dist.mass[static_cast<std::size_t>(j)]);
      CHECK(t.overflow(k) == dist.overflow);
      const auto row = t.row(k);
      CHECK(row.start == k);
      CHECK(row.mass == dist.mass);
    }
  }
}

TEST_CASE("table row at the classical threshold reproduces the reference value") {
  const auto table = all_suffix_masses(SuccessProfile::karamata_stirling(1.0, 100), 1);
  CHECK(std::fabs(table.s(38, 1) - 0.371043) <= 1e-6);
}

TEST_CASE("sweep equals the enumeration oracle") {
  ProfileGen gen(23);
  for (int trial = 0; trial < 120; ++trial) {
    const auto profile = gen.random(1, 16);
    for (int k = 1; k <= profile.size() + 1; ++k) {
      const auto expected = enumerate_suffix_masses(profile, k);
      const auto dist = suffix_distribution(profile, k, std::max(0, profile.size() - k + 1));
      for (std::size_t j = 0; j < expected.size(); ++j) {
        const double got = dist.mass[j];
        CHECK(std::fabs(got - expected[j]) <= 1e-12 * std::max(1.0, std::fabs(expected[j])));
      }
    }
  }
}

TEST_CASE("backward and forward recursions hold exhaustively") {
  ProfileGen gen(31);
  for (int trial = 0; trial < 60; ++trial) {
    const auto profile = gen.random(2, 14);
    const int n = profile.size();
    // Backward: prepend trial k.
    for (int k = 1; k <= n; ++k)
      for (int m = 0; m <= n - k + 1; ++m) {
        const double lhs = s_m(profile, k, m);
        const double rhs = profile.p(k) * (m >= 1 ? s_m(profile, k + 1, m - 1) : 0.0) +
                           (1.0 - profile.p(k)) * s_m(profile, k + 1, m);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
      }
    // Forward: append trial n, via the truncated profile.
    std::vector<double> head(profile.probabilities().begin(),
                             profile.probabilities().end() - 1);
    if (!head.empty()) {
      const auto shorter = SuccessProfile::from_probabilities(head);
      for (int k = 1; k <= n - 1; ++k)
        for (int m = 0; m <= n - k + 1; ++m) {
          const double lhs = s_m(profile, k, m);
          const double rhs = profile.p(n) * (m >= 1 ? s_m(shorter, k, m - 1) : 0.0) +
                             (1.0 - profile.p(n)) * s_m(shorter, k, m);
          CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
        }
    }
  }
}

TEST_CASE("operator identity links the k and m increments") {
  // s_m(k, n) - s_m(k-1, n) = p_{k-1} (s_m(k, n) - s_{m-1}(k, n))
  ProfileGen gen(37);
  for (int trial = 0; trial < 60; ++trial) {
    const auto profile = gen.random(2, 30);
    const int n = profile.size();
    const auto table = all_suffix_masses(profile, n);
    for (int k = 2; k <= n + 1; ++k)
      for (int m = 1; m <= n; ++m) {
        const double lhs = table.s(k, m) - table.s(k - 1, m);
        const double rhs = profile.p(k - 1) * (table.s(k, m) - table.s(k, m - 1));
        CHECK(std::fabs(lhs - rhs) <= 1e-12 * std::max({1.0, std::fabs(lhs), std::fabs(rhs)}));
      }
  }
}

TEST_CASE("product form: s_m = s_0 R_m within 1e-10 relative") {
  ProfileGen gen(41);
  for (int trial = 0; trial < 60; ++trial) {
    const auto profile = gen.random(1, 50);
    const int n = profile.size();
    const auto odds_seq = odds(profile);
    for (int k = 1; k <= n; ++k) {
      const double base = s0(profile, k);
      for (int m = 0; m <= std::min(6, n - k + 1); ++m) {
        const double direct = s_m(profile, k, m);
        const double product = base * elementary_symmetric_R(odds_seq, k, n, m);
        CHECK(std::fabs(direct - product) <= 1e-10 * std::max(direct, 1e-300));
      }
    }
  }
}

TEST_CASE("elementary_symmetric_R conventions and errors") {
  const auto ones = odds(SuccessProfile::from_probabilities({0.5, 0.5, 0.5}));
  CHECK(elementary_symmetric_R(ones, 1, 3, 2) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(elementary_symmetric_R(ones, 1, 3, 0) == 1.0);
  CHECK(elementary_symmetric_R(ones, 3, 3, 2) == 0.0);  // k > n-m+1

  const auto mixed =
      odds(SuccessProfile::from_probabilities({0.5, 1.0 / 3.0, 0.25}));
  CHECK(elementary_symmetric_R(mixed, 1, 3, 3) ==
        doctest::Approx(1.0 / 6.0).epsilon(1e-12));

  // A certain trial poisons only ranges that include it.
  const auto record = odds(SuccessProfile::karamata_stirling(1.0, 6));
  CHECK_THROWS_AS(elementary_symmetric_R(record, 1, 6, 1), InfiniteOddsError);
  CHECK_NOTHROW(elementary_symmetric_R(record, 2, 6, 2));

  // Huge odds overflow at high order.
  std::vector<double> huge(40, 1.0 - 1e-16);
  const auto big = odds(SuccessProfile::from_probabilities(huge));
  CHECK_THROWS_AS(elementary_symmetric_R(big, 1, 40, 25), OverflowError);
}

TEST_CASE("suffix_sums and the cumulative table agree") {
  const auto fair = SuccessProfile::from_probabilities({0.5, 0.5, 0.5, 0.5});
  const auto sums = suffix_sums(fair, 1);
  CHECK(sums.lambda == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(sums.lambda2 == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(suffix_sums(fair, 5).lambda == 0.0);
  CHECK(suffix_sums(fair, 5).lambda2 == 0.0);

  const auto record = SuccessProfile::karamata_stirling(1.0, 10);
  double direct = 0.0;
  for (int j = 10; j >= 4; --j) direct += 1.0 / j;
  CHECK(suffix_sums(record, 4).lambda == doctest::Approx(direct).epsilon(1e-14));
  CHECK(suffix_sums(record, 4).lambda == doctest::Approx(1.09563).epsilon(1e-5));

  ProfileGen gen(43);
  const auto profile = gen.random(30, 60);
  const SuffixSumTable table(profile);
  for (int k = 1; k <= profile.size() + 1; ++k) {
    CHECK(table.lambda(k) == suffix_sums(profile, k).lambda);
    CHECK(table.lambda2(k) == suffix_sums(profile, k).lambda2);
    CHECK(table.lambda2(k) <= table.lambda(k));
    CHECK(table.lambda(k) <= profile.size() - k + 1);
  }
}

TEST_CASE("mode_of finds the plateau and refuses blind truncation") {
  const auto b10 = suffix_distribution(
      SuccessProfile::from_probabilities(std::vector<double>(10, 0.5)), 1, 10);
  CHECK(mode_of(b10) == std::pair<int, int>{5, 5});

  const auto b3 = suffix_distribution(
      SuccessProfile::from_probabilities(std::vector<double>(3, 0.5)), 1, 3);
  CHECK(mode_of(b3) == std::pair<int, int>{1, 2});

  const auto skew = suffix_distribution(SuccessProfile::from_probabilities({0.9, 0.1}), 1, 2);
  CHECK(mode_of(skew) == std::pair<int, int>{1, 1});

  // Truncated below the mode with the stored tail still rising: refuse.
  const auto rising = suffix_distribution(
      SuccessProfile::from_probabilities(std::vector<double>(20, 0.5)), 1, 3);
  CHECK_THROWS_AS(mode_of(rising), IncompleteDistributionError);

  // Truncated but already strictly decreasing at the cap: the mode is pinned.
  const auto pinned = suffix_distribution(
      SuccessProfile::from_probabilities(std::vector<double>(20, 0.05)), 1, 10);
  CHECK_FALSE(pinned.complete(0.0));
  CHECK(mode_of(pinned) == std::pair<int, int>{1, 1});
}

TEST_CASE("Newton's inequality holds on complete distributions") {
  ProfileGen gen(47);
  for (int trial = 0; trial < 80; ++trial) {
    const auto profile = gen.random(2, 50);
    const int len = profile.size();
    const auto dist = suffix_distribution(profile, 1, len);
    for (int m = 1; m < len; ++m) {
      const double lhs = dist.mass[static_cast<std::size_t>(m)] *
                         dist.mass[static_cast<std::size_t>(m)];
      const double rhs = (1.0 + 1.0 / m) * (1.0 + 1.0 / (len - m)) *
                         dist.mass[static_cast<std::size_t>(m) - 1] *
                         dist.mass[static_cast<std::size_t>(m) + 1];
      CHECK(lhs >= rhs * (1.0 - 1e-9));
    }
    check_unimodal(dist.mass);
  }
}

TEST_CASE("darroch_bracket case split") {
  CHECK(darroch_bracket(5.0, 10).kind == DarrochCase::ModeExactlyM);
  CHECK(darroch_bracket(5.0, 10).m == 5);

  // 0.99 > 1 - 1/(3-0+1) = 0.75, so the mode is m+1 = 1; confirmed by the
  // profile (0.33, 0.33, 0.33) whose mode is 1 by enumeration.
  const auto b = darroch_bracket(0.99, 3);
  CHECK(b.kind == DarrochCase::ModeExactlyMPlusOne);
  CHECK(b.mode_lo() == 1);
  const auto trio = SuccessProfile::from_probabilities({0.33, 0.33, 0.33});
  CHECK(mode_of(suffix_distribution(trio, 1, 3)) == std::pair<int, int>{1, 1});

  // mu = 0.4, n = 4: 0.4 < 0 + 1/2, so the first branch applies and the mode
  // is exactly 0; the profile (0.1 x4) confirms by enumeration.
  const auto c = darroch_bracket(0.4, 4);
  CHECK(c.kind == DarrochCase::ModeExactlyM);
  CHECK(c.m == 0);
  const auto low = SuccessProfile::from_probabilities(std::vector<double>(4, 0.1));
  CHECK(mode_of(suffix_distribution(low, 1, 4)) == std::pair<int, int>{0, 0});

  // Boundary memberships.
  CHECK(darroch_bracket(0.5, 4).kind == DarrochCase::ModeMOrMPlusOne);   // mu = m + 1/(m+2)
  CHECK(darroch_bracket(0.8, 4).kind == DarrochCase::ModeMOrMPlusOne);   // mu = m+1 - 1/(n-m+1)
  CHECK(darroch_bracket(0.81, 4).kind == DarrochCase::ModeExactlyMPlusOne);

  CHECK_THROWS_AS(darroch_bracket(-0.1, 4), ValidationError);
  CHECK_THROWS_AS(darroch_bracket(4.1, 4), ValidationError);
}

TEST_CASE("darroch_bracket never contradicts the computed mode") {
  ProfileGen gen(53);
  for (int trial = 0; trial < 300; ++trial) {
    const auto profile = gen.random(1, 30);
    const int len = profile.size();
    const auto dist = suffix_distribution(profile, 1, len);
    const auto sums = suffix_sums(profile, 1);
    const auto bracket = darroch_bracket(sums.lambda, len);
    const auto [lo, hi] = mode_of(dist);
    CHECK(hi - lo <= 1);
    CHECK(lo >= bracket.mode_lo());
    CHECK(hi <= bracket.mode_hi());
  }
}

}  // TEST_SUITE
