#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "lateral/cell.hpp"
#include "lateral/grid.hpp"

namespace lateral {

/// Movement state of a stop-line subset for one second.
enum class ZoneMovementState : std::uint8_t { Empty, Stationary, PastMovement, FutureMovement, Movement };

std::string_view to_string(ZoneMovementState s);

/// Downstream (conflict-side) qualification rules. Never yields FutureMovement.
ZoneMovementState qualify_downstream(const ZoneStats& stats);

/// Upstream (storage-side) qualification rules. Never yields PastMovement.
ZoneMovementState qualify_upstream(const ZoneStats& stats);

/// Per-stop-line crossing conditions. The upstream condition has memory; the
/// downstream one is recomputed every second.
struct StopLineState {
  bool upstream_met = false;
  bool downstream_met = false;
  ZoneMovementState previous_upstream = ZoneMovementState::Empty;

  bool operator==(const StopLineState&) const = default;
};

StopLineState update_crossing_conditions(const StopLineState& state, ZoneMovementState upstream,
                                         ZoneMovementState downstream);

/// Which subset feeds the `n_movement >= 0.5 n_presence` check.
enum class RatioSubset : std::uint8_t { Upstream, Downstream, Both };

/// True when a crossing is detected this second. `state` must already be
/// updated for the current second.
bool detect_crossing(const StopLineState& state, ZoneMovementState upstream, const ZoneStats& upstream_stats,
                     const ZoneStats& downstream_stats = {}, RatioSubset ratio_subset = RatioSubset::Upstream);

struct CrossingEvent {
  std::int64_t t = 0;
  std::size_t stop_line = 0;
  std::size_t approach = 0;

  bool operator==(const CrossingEvent&) const = default;
};

/// How the origin of a second's crossings was decided.
enum class TieBreak : std::uint8_t { None, Signal, RecentGreen, Lexicographic };

std::string_view to_string(TieBreak t);

struct Attribution {
  std::size_t approach = 0;
  TieBreak rule = TieBreak::None;
};

/// Resolves the single origin of this second's crossings into one conflict
/// zone. `signals` and `last_green` are indexed by approach; `approach_ids`
/// supplies the lexicographic order for the final tie-break.
std::optional<Attribution> attribute_origin(std::span<const CrossingEvent> events, std::span<const Signal> signals,
                                            std::span<const std::optional<std::int64_t>> last_green,
                                            std::span<const std::string> approach_ids);

/// Whole-intersection crossing state advanced one second at a time.
struct CrossingState {
  std::vector<StopLineState> stop_lines;
  std::vector<std::optional<std::int64_t>> last_green;  // by approach

  static CrossingState initial(const Layout& layout);
};

}  // namespace lateral
