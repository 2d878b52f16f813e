#include "lateral/crossing.hpp"

#include <algorithm>

namespace lateral {

std::string_view to_string(ZoneMovementState s) {
  switch (s) {
    case ZoneMovementState::Empty: return "Empty";
    case ZoneMovementState::Stationary: return "Stationary";
    case ZoneMovementState::PastMovement: return "PastMovement";
    case ZoneMovementState::FutureMovement: return "FutureMovement";
    case ZoneMovementState::Movement: return "Movement";
  }
  return "?";
}

std::string_view to_string(TieBreak t) {
  switch (t) {
    case TieBreak::None: return "none";
    case TieBreak::Signal: return "signal";
    case TieBreak::RecentGreen: return "recent_green";
    case TieBreak::Lexicographic: return "lexicographic";
  }
  return "?";
}

namespace {

// Ratios compared against 10 % in integer arithmetic: n / total < 0.1 <=> 10 n < total.
bool below_ten_percent(int n, int total) { return 10 * n < total; }

}  // namespace

ZoneMovementState qualify_downstream(const ZoneStats& s) {
  if (below_ten_percent(s.n_presence, s.total) && s.n_moving_presence == 0) return ZoneMovementState::Empty;
  if (!below_ten_percent(s.n_presence, s.total) && below_ten_percent(s.n_movement, s.total) &&
      s.n_moving_presence == 0)
    return ZoneMovementState::Stationary;
  return s.n_movement == s.n_end_of_presence ? ZoneMovementState::PastMovement : ZoneMovementState::Movement;
}

ZoneMovementState qualify_upstream(const ZoneStats& s) {
  if (below_ten_percent(s.n_presence, s.total) && s.n_end_of_presence == 0) return ZoneMovementState::Empty;
  if (!below_ten_percent(s.n_presence, s.total) && below_ten_percent(s.n_movement, s.total) &&
      s.n_end_of_presence == 0)
    return ZoneMovementState::Stationary;
  return s.n_movement == s.n_moving_presence ? ZoneMovementState::FutureMovement : ZoneMovementState::Movement;
}

StopLineState update_crossing_conditions(const StopLineState& state, ZoneMovementState upstream,
                                         ZoneMovementState downstream) {
  StopLineState next = state;
  if (upstream == ZoneMovementState::Movement)
    next.upstream_met = true;
  else if (state.previous_upstream == ZoneMovementState::Movement)
    next.upstream_met = false;
  next.downstream_met = downstream == ZoneMovementState::Movement && next.upstream_met;
  next.previous_upstream = upstream;
  return next;
}

bool detect_crossing(const StopLineState& state, ZoneMovementState upstream, const ZoneStats& upstream_stats,
                     const ZoneStats& downstream_stats, RatioSubset ratio_subset) {
  if (!state.upstream_met || !state.downstream_met) return false;
  if (upstream != ZoneMovementState::Movement) return false;
  // n_movement >= 0.5 n_presence
  auto mostly_moving = [](const ZoneStats& s) { return 2 * s.n_movement >= s.n_presence; };
  switch (ratio_subset) {
    case RatioSubset::Upstream: return mostly_moving(upstream_stats);
    case RatioSubset::Downstream: return mostly_moving(downstream_stats);
    case RatioSubset::Both: return mostly_moving(upstream_stats) && mostly_moving(downstream_stats);
  }
  return false;
}

std::optional<Attribution> attribute_origin(std::span<const CrossingEvent> events, std::span<const Signal> signals,
                                            std::span<const std::optional<std::int64_t>> last_green,
                                            std::span<const std::string> approach_ids) {
  std::vector<std::size_t> candidates;
  for (const auto& e : events)
    if (std::find(candidates.begin(), candidates.end(), e.approach) == candidates.end())
      candidates.push_back(e.approach);
  if (candidates.empty()) return std::nullopt;
  if (candidates.size() == 1) return Attribution{candidates.front(), TieBreak::None};

  auto by_id = [&](std::size_t a, std::size_t b) { return approach_ids[a] < approach_ids[b]; };
  auto lexicographic = [&](std::vector<std::size_t> pool) {
    return Attribution{*std::min_element(pool.begin(), pool.end(), by_id), TieBreak::Lexicographic};
  };

  std::vector<std::size_t> not_red;
  for (auto a : candidates)
    if (signals[a] != Signal::Red) not_red.push_back(a);
  if (not_red.size() == 1) return Attribution{not_red.front(), TieBreak::Signal};
  if (not_red.size() > 1) return lexicographic(not_red);

  // All red: the most recently green wins; never-green loses.
  std::optional<std::int64_t> best;
  for (auto a : candidates)
    if (last_green[a] && (!best || *last_green[a] > *best)) best = last_green[a];
  if (!best) return lexicographic(candidates);
  std::vector<std::size_t> recent;
  for (auto a : candidates)
    if (last_green[a] == best) recent.push_back(a);
  if (recent.size() == 1) return Attribution{recent.front(), TieBreak::RecentGreen};
  return lexicographic(recent);
}

CrossingState CrossingState::initial(const Layout& layout) {
  CrossingState s;
  s.stop_lines.assign(layout.stop_lines.size(), StopLineState{});
  s.last_green.assign(layout.approaches.size(), std::nullopt);
  return s;
}

}  // namespace lateral
