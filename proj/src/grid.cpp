#include "lateral/grid.hpp"

#include <algorithm>

namespace lateral {

namespace {

void count(ZoneStats& s, CellState c) {
  ++s.total;
  switch (c) {
    case CellState::Empty: return;
    case CellState::MovingPresence: ++s.n_moving_presence; ++s.n_movement; break;
    case CellState::EndOfPresence: ++s.n_end_of_presence; ++s.n_movement; break;
    case CellState::StationaryPresence: ++s.n_stationary_presence; break;
  }
  ++s.n_presence;
}

}  // namespace

ZoneStats zone_stats(const Frame& frame, std::span<const CellRef> subset) {
  ZoneStats s;
  for (const auto& ref : subset) count(s, frame.at(ref));
  return s;
}

ZoneStats zone_stats(std::span<const CellState> cells) {
  ZoneStats s;
  for (auto c : cells) count(s, c);
  return s;
}

std::vector<Group> detect_groups(std::span<const CellState> cells, const Zone& zone, std::size_t zone_index,
                                 const Thresholds& thresholds) {
  std::vector<Group> out;
  const int n = zone.cell_count();
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<int> stack;

  for (auto cls : {GroupClass::Moving, GroupClass::Stationary}) {
    const auto wanted = cls == GroupClass::Moving ? CellState::MovingPresence : CellState::StationaryPresence;
    const int threshold = cls == GroupClass::Moving ? thresholds.moving : thresholds.stationary;

    for (int start = 0; start < n; ++start) {
      if (seen[static_cast<std::size_t>(start)] || cells[static_cast<std::size_t>(start)] != wanted) continue;
      Group g{zone_index, cls, {}};
      stack.assign(1, start);
      seen[static_cast<std::size_t>(start)] = 1;
      while (!stack.empty()) {
        int c = stack.back();
        stack.pop_back();
        g.cells.push_back(c);
        const int r = zone.row_of(c), col = zone.col_of(c);
        auto visit = [&](int rr, int cc) {
          if (rr < 0 || cc < 0 || rr >= zone.height || cc >= zone.width) return;
          int k = zone.index(rr, cc);
          if (seen[static_cast<std::size_t>(k)] || cells[static_cast<std::size_t>(k)] != wanted) return;
          seen[static_cast<std::size_t>(k)] = 1;
          stack.push_back(k);
        };
        visit(r - 1, col);
        visit(r + 1, col);
        visit(r, col - 1);
        visit(r, col + 1);
      }
      if (g.size() < threshold) continue;
      std::sort(g.cells.begin(), g.cells.end());
      out.push_back(std::move(g));
    }
  }
  return out;
}

std::vector<Group> detect_groups(const Frame& frame, const Layout& layout, std::size_t zone_index,
                                 const Thresholds& thresholds) {
  return detect_groups(frame.cells[zone_index], layout.zones[zone_index], zone_index, thresholds);
}

}  // namespace lateral
