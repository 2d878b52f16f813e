#pragma once

#include <array>

namespace fixtures {

// Published field validation counts with their printed percentages.
struct FieldRow {
  const char* target;
  const char* strategy;
  const char* stream;
  int tp, fp, fn;
  int recall_pct, precision_pct;
};

inline constexpr std::array<FieldRow, 16> kFieldRows{{
    {"Y", "baseline", "E", 105, 6, 32, 77, 95},
    {"Y", "baseline", "s", 200, 29, 18, 92, 87},
    {"Y", "baseline", "N", 104, 28, 7, 94, 79},
    {"Y", "baseline", "e", 110, 13, 6, 95, 89},
    {"Y", "adaptive", "E", 53, 2, 14, 79, 96},
    {"Y", "adaptive", "s", 198, 14, 12, 94, 93},
    {"Y", "adaptive", "N", 135, 43, 6, 96, 76},
    {"Y", "adaptive", "e", 89, 27, 9, 91, 77},
    {"Ym", "baseline", "E", 45, 2, 12, 79, 96},
    {"Ym", "baseline", "s", 20, 15, 6, 77, 57},
    {"Ym", "baseline", "N", 36, 12, 2, 95, 75},
    {"Ym", "baseline", "e", 18, 5, 0, 100, 78},
    {"Ym", "adaptive", "E", 24, 1, 7, 77, 96},
    {"Ym", "adaptive", "s", 15, 10, 5, 75, 60},
    {"Ym", "adaptive", "N", 31, 12, 2, 94, 72},
    {"Ym", "adaptive", "e", 15, 5, 3, 83, 75},
}};

}  // namespace fixtures
