#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lateral/grid.hpp"
#include "lateral/layout.hpp"

namespace lateral {

/// A conflict-zone group and the approach its road users came from.
struct LabeledGroup {
  Group group;
  std::optional<std::size_t> origin;  // approach index
  std::int64_t assigned_t = 0;
};

/// A moving conflict-zone group whose origin could not be derived.
struct UnlabeledGroup {
  std::int64_t t = 0;
  std::size_t zone = 0;
  int size = 0;
  int min_cell = 0;
};

struct Propagation {
  std::vector<LabeledGroup> groups;
  std::vector<UnlabeledGroup> unlabeled;
};

/// Carries origins from the previous second's conflict-zone groups to the
/// current ones. A group inherits from the previous labeled group it overlaps
/// most (ties to the lexicographically smaller approach id); groups with no
/// overlap take `new_origin` when a crossing was attributed this second.
Propagation propagate_origins(std::span<const LabeledGroup> previous, std::vector<Group> current,
                              std::optional<std::size_t> new_origin, std::int64_t t,
                              std::span<const std::string> approach_ids);

/// For each lane, the group nearest the conflict zone (smallest cell index).
/// `lanes[i]` holds the groups detected on lane i.
std::vector<std::optional<Group>> close_groups(std::span<const std::vector<Group>> lanes);

struct StreamCounters {
  std::int64_t z = 0;
  std::int64_t x = 0;
  std::int64_t y = 0;
  std::int64_t y_moving = 0;

  bool operator==(const StreamCounters&) const = default;
};

/// Exposure durations per stream (approach) over [period_start, period_end).
struct ExposureCounters {
  std::int64_t period_start = 0;
  std::int64_t period_end = 0;
  std::vector<StreamCounters> streams;

  static ExposureCounters for_period(const Layout& layout, std::int64_t t);
};

/// Per-stream classification of one second.
struct SecondFlags {
  std::int64_t t = 0;
  std::size_t stream = 0;
  bool crossing = false;
  bool critical = false;
  bool critical_moving = false;

  bool operator==(const SecondFlags&) const = default;
};

/// What the detector sees on one approach's entry lanes.
struct ApproachOccupancy {
  bool occupied = false;     // at least one group on any lane
  bool close_moving = false;  // some lane's close group is moving
};

ApproachOccupancy approach_occupancy(std::span<const std::vector<Group>> lanes);

/// Advances the counters by one second. `conflict_groups` are the labeled
/// groups of every conflict zone; `occupancy` is indexed by approach. Returns
/// one flag record per stream in approach order.
std::vector<SecondFlags> update_exposure(ExposureCounters& counters, const Layout& layout, std::int64_t t,
                                         std::span<const LabeledGroup> conflict_groups,
                                         std::span<const ApproachOccupancy> occupancy);

struct PeriodRow {
  std::size_t stream = 0;
  std::int64_t period_start = 0;
  std::int64_t period_end = 0;
  StreamCounters counters;

  bool operator==(const PeriodRow&) const = default;
};

/// Throws InvariantViolation unless Z = X + Y, Y_m <= Y and every counter
/// fits in the period.
void check_counters(const ExposureCounters& counters);

/// Emits one row per stream and resets the counters to the following period.
std::vector<PeriodRow> finalize_period(ExposureCounters& counters);

/// Start of the period containing `t` for periods aligned on multiples of T.
std::int64_t period_floor(std::int64_t t, std::int64_t period);

}  // namespace lateral
