#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lateral/cell.hpp"
#include "lateral/frame.hpp"
#include "lateral/layout.hpp"

namespace lateral {

/// State counts and ratios over a fixed cell subset.
struct ZoneStats {
  int total = 0;
  int n_presence = 0;
  int n_movement = 0;
  int n_moving_presence = 0;
  int n_end_of_presence = 0;
  int n_stationary_presence = 0;

  double tau_presence() const { return total ? static_cast<double>(n_presence) / total : 0.0; }
  double tau_movement() const { return total ? static_cast<double>(n_movement) / total : 0.0; }
};

ZoneStats zone_stats(const Frame& frame, std::span<const CellRef> subset);
ZoneStats zone_stats(std::span<const CellState> cells);

enum class GroupClass : std::uint8_t { Moving, Stationary };

/// Thresholded connected component of same-state cells within one zone.
struct Group {
  std::size_t zone = 0;
  GroupClass cls = GroupClass::Moving;
  std::vector<int> cells;  // sorted cell indices

  int size() const { return static_cast<int>(cells.size()); }
  int min_cell() const { return cells.front(); }
  bool operator==(const Group&) const = default;
};

/// Connected components of MovingPresence (class moving) and StationaryPresence
/// (class stationary) cells, 4-neighbourhood on the zone grid (two neighbours on
/// a lane). Components smaller than the class threshold are dropped. Output is
/// ordered by class, then by smallest cell.
std::vector<Group> detect_groups(std::span<const CellState> cells, const Zone& zone, std::size_t zone_index,
                                 const Thresholds& thresholds);

std::vector<Group> detect_groups(const Frame& frame, const Layout& layout, std::size_t zone_index,
                                 const Thresholds& thresholds);

}  // namespace lateral
