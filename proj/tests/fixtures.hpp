#pragma once

#include <array>
#include <vector>

#include "ahprank/ahp.hpp"
#include "ahprank/pattern.hpp"

namespace fixtures {

// Ten patterns P1..P10 scored under five measures already in [0,1], with a
// user ranking and the scores of a fitted weight vector.
struct RunningRow {
  ahprank::PatternId id;
  std::array<double, 5> m;
  std::uint32_t user_rank;
  double printed_gw;
  std::uint32_t printed_gw_rank;
};

inline const std::array<RunningRow, 10> kRows = {{
    {7, {.95, .48, .79, .30, .80}, 1, 0.72, 1},
    {3, {.75, .72, .78, .70, .61}, 2, 0.68, 2},
    {6, {.80, .49, .50, .65, .60}, 3, 0.61, 3},
    {1, {.47, .47, .76, .56, .59}, 4, 0.54, 4},
    {8, {.56, .65, .63, .69, .40}, 5, 0.53, 5},
    {10, {.57, .50, .80, .40, .02}, 6, 0.34, 8},
    {5, {.62, .62, .66, .57, .27}, 7, 0.48, 7},
    {2, {.48, .66, .65, .10, .05}, 8, 0.33, 9},
    {4, {.50, .68, .77, .50, .35}, 9, 0.50, 6},
    {9, {.02, .10, .05, .80, .25}, 10, 0.18, 10},
}};

// Printed per-measure rank columns, in kRows order.
inline const std::array<std::array<std::uint32_t, 10>, 5> kMeasureRanks = {{
    {1, 3, 2, 9, 6, 5, 4, 8, 7, 10},
    {8, 1, 7, 9, 4, 6, 5, 3, 2, 10},
    {2, 3, 9, 5, 8, 1, 6, 7, 4, 10},
    {9, 2, 4, 6, 3, 8, 5, 10, 7, 1},
    {1, 2, 3, 4, 5, 10, 7, 9, 6, 8},
}};

inline const std::vector<double> kFittedWeights = {0.24, 0.24, 0.065, 0.065, 0.39};

inline ahprank::PatternCollection running_collection() {
  std::vector<ahprank::PatternRecord> records;
  for (const auto& row : kRows) {
    ahprank::PatternRecord r;
    r.id = row.id;
    r.measures.assign(row.m.begin(), row.m.end());
    records.push_back(std::move(r));
  }
  return ahprank::PatternCollection({"M1", "M2", "M3", "M4", "M5"}, std::move(records),
                                    ahprank::ScalingMode::Identity);
}

// Averaged gaps of the five measures, upper triangle row by row, and their
// integer judgments.
struct GapEntry {
  std::size_t i, j;
  double delta;
  int scaled;
};

inline const std::array<GapEntry, 10> kGaps = {{
    {0, 1, 0.0, 1},
    {0, 2, 0.42, 4},
    {0, 3, 0.42, 4},
    {0, 4, -0.43, -4},
    {1, 2, 0.20, 2},
    {1, 3, 0.28, 3},
    {1, 4, -0.25, -3},
    {2, 3, -0.08, -1},
    {2, 4, -0.55, -6},
    {3, 4, -0.60, -6},
}};

inline const std::vector<std::vector<double>> kComparison = {
    {1.0, 1.0, 4.0, 4.0, 1.0 / 4},
    {1.0, 1.0, 2.0, 3.0, 1.0 / 3},
    {1.0 / 4, 1.0 / 2, 1.0, 1.0, 1.0 / 6},
    {1.0 / 4, 1.0 / 3, 1.0, 1.0, 1.0 / 6},
    {4.0, 3.0, 6.0, 6.0, 1.0},
};

inline ahprank::DeltaState running_gaps() {
  ahprank::DeltaState state(5);
  for (const auto& g : kGaps) state.set(g.i, g.j, g.delta);
  return state;
}

}  // namespace fixtures
