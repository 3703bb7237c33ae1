#include "laststop/goldens.hpp"

#include <cmath>
#include <sstream>

#include "laststop/rules.hpp"

namespace laststop {

namespace {

// Reference grid for the Karamata-Stirling family, keyed by (m, theta, n):
// odds threshold, mean threshold, s*_m(n), epsilon. Two published values are
// internally impossible and carry a note instead of an assertion; both sit at
// threshold 1, where the leading trial is certain and an odds-ratio-based
// evaluation divides by zero:
//   - m=2, theta=0.5, n=10: s* printed as 0.000000, impossible for a
//     positive profile (the engine recomputes it);
//   - m=2, theta=1, n=10: epsilon printed equal to s*, implying a zero
//     mean-rule value at threshold 1, likewise impossible.
constexpr GoldenCell kCells[] = {
    // m = 1
    {1, 0.5, 10, 2, 2, 0.401393, 0.000000, true, true, nullptr},
    {1, 1.0, 10, 4, 4, 0.398690, 0.000000, true, true, nullptr},
    {1, 1.5, 10, 6, 5, 0.409131, 0.011817, true, true, nullptr},
    {1, 2.0, 10, 7, 6, 0.416667, 0.009957, true, true, nullptr},
    {1, 0.5, 100, 14, 14, 0.370812, 0.000000, true, true, nullptr},
    {1, 1.0, 100, 38, 37, 0.371043, 0.000028, true, true, nullptr},
    {1, 1.5, 100, 52, 51, 0.371823, 0.000184, true, true, nullptr},
    {1, 2.0, 100, 61, 61, 0.372649, 0.000000, true, true, nullptr},
    {1, 0.5, 1000, 136, 136, 0.368174, 0.000000, true, true, nullptr},
    {1, 1.0, 1000, 369, 368, 0.368196, 0.000001, true, true, nullptr},
    {1, 1.5, 1000, 514, 513, 0.368272, 0.000002, true, true, nullptr},
    {1, 2.0, 1000, 607, 606, 0.368357, 0.000003, true, true, nullptr},
    {1, 0.5, 10000, 1354, 1354, 0.367909, 0.000000, true, true, nullptr},
    {1, 1.0, 10000, 3680, 3679, 0.367911, 0.000000, true, true, nullptr},
    {1, 1.5, 10000, 5135, 5134, 0.367919, 0.000000, true, true, nullptr},
    {1, 2.0, 10000, 6066, 6065, 0.367927, 0.000000, true, true, nullptr},
    {1, 0.5, 100000, 13534, 13534, 0.367882, 0.000000, true, true, nullptr},
    {1, 1.0, 100000, 36789, 36788, 0.367883, 0.000000, true, true, nullptr},
    {1, 1.5, 100000, 51342, 51342, 0.367883, 0.000000, true, true, nullptr},
    {1, 2.0, 100000, 60654, 60653, 0.367884, 0.000000, true, true, nullptr},
    // m = 2
    {2, 0.5, 10, 1, 1, 0.000000, 0.000000, false, true,
     "published s* is 0.000000, impossible for a positive profile; recomputed"},
    {2, 1.0, 10, 2, 1, 0.323165, 0.323165, true, false,
     "published epsilon equals s*, implying a zero mean-rule value; recomputed"},
    {2, 1.5, 10, 3, 2, 0.319856, 0.025088, true, true, nullptr},
    {2, 2.0, 10, 4, 3, 0.322121, 0.016082, true, true, nullptr},
    {2, 0.5, 100, 3, 2, 0.279770, 0.000588, true, true, nullptr},
    {2, 1.0, 100, 14, 14, 0.275097, 0.000000, true, true, nullptr},
    {2, 1.5, 100, 27, 26, 0.274961, 0.000077, true, true, nullptr},
    {2, 2.0, 100, 37, 36, 0.275371, 0.000191, true, true, nullptr},
    {2, 0.5, 1000, 19, 19, 0.271589, 0.000000, true, true, nullptr},
    {2, 1.0, 1000, 136, 135, 0.271104, 0.000002, true, true, nullptr},
    {2, 1.5, 1000, 264, 263, 0.271096, 0.000002, true, true, nullptr},
    {2, 2.0, 1000, 368, 367, 0.271136, 0.000002, true, true, nullptr},
    {2, 0.5, 10000, 184, 184, 0.270761, 0.000000, true, true, nullptr},
    {2, 1.0, 10000, 1354, 1353, 0.270714, 0.000000, true, true, nullptr},
    {2, 1.5, 10000, 2636, 2636, 0.270713, 0.000000, true, true, nullptr},
    {2, 2.0, 10000, 3679, 3678, 0.270717, 0.000000, true, true, nullptr},
    {2, 0.5, 100000, 1832, 1832, 0.270680, 0.000000, true, true, nullptr},
    {2, 1.0, 100000, 13534, 13534, 0.270675, 0.000000, true, true, nullptr},
    {2, 1.5, 100000, 26360, 26359, 0.270675, 0.000000, true, true, nullptr},
    {2, 2.0, 100000, 36788, 36787, 0.270675, 0.000000, true, true, nullptr},
};

}  // namespace

std::span<const GoldenCell> golden_cells() { return kCells; }

std::vector<GoldenOutcome> run_golden_comparison() {
  std::vector<GoldenOutcome> outcomes;
  outcomes.reserve(std::size(kCells));
  for (const GoldenCell& cell : kCells) {
    const SuccessProfile profile = SuccessProfile::karamata_stirling(cell.theta, cell.n);
    const EpsilonGap gap = epsilon_gap(profile, cell.m);

    GoldenOutcome out;
    out.cell = &cell;
    out.odds_threshold = gap.odds.threshold;
    out.mean_threshold = gap.mean.threshold;
    out.win_probability = gap.odds.win_probability;
    out.epsilon = gap.epsilon;
    out.thresholds_match =
        out.odds_threshold == cell.odds_threshold && out.mean_threshold == cell.mean_threshold;
    bool win_ok = !cell.assert_win ||
                  std::fabs(out.win_probability - cell.win_probability) <= kGoldenValueTolerance;
    bool eps_ok = !cell.assert_epsilon ||
                  std::fabs(out.epsilon - cell.epsilon) <= kGoldenValueTolerance;
    out.values_match = win_ok && eps_ok;

    std::ostringstream detail;
    if (!out.thresholds_match)
      detail << "thresholds (" << out.odds_threshold << ", " << out.mean_threshold
             << ") expected (" << cell.odds_threshold << ", " << cell.mean_threshold << "); ";
    if (!win_ok)
      detail << "s* " << out.win_probability << " expected " << cell.win_probability << "; ";
    if (!eps_ok) detail << "epsilon " << out.epsilon << " expected " << cell.epsilon << "; ";
    if (cell.note != nullptr) detail << "note: " << cell.note;
    out.detail = detail.str();
    outcomes.push_back(std::move(out));
  }
  return outcomes;
}

bool all_golden_pass(std::span<const GoldenOutcome> outcomes) {
  for (const GoldenOutcome& out : outcomes)
    if (!out.thresholds_match || !out.values_match) return false;
  return true;
}

}  // namespace laststop
