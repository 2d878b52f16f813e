#include "lateral/exposure.hpp"

#include <algorithm>

#include "lateral/error.hpp"

namespace lateral {

namespace {

int overlap(const std::vector<int>& a, const std::vector<int>& b) {
  int n = 0;
  auto i = a.begin(), j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) ++i;
    else if (*j < *i) ++j;
    else { ++n; ++i; ++j; }
  }
  return n;
}

}  // namespace

Propagation propagate_origins(std::span<const LabeledGroup> previous, std::vector<Group> current,
                              std::optional<std::size_t> new_origin, std::int64_t t,
                              std::span<const std::string> approach_ids) {
  Propagation out;
  out.groups.reserve(current.size());
  for (auto& g : current) {
    LabeledGroup labeled{std::move(g), std::nullopt, t};
    int best_overlap = 0;
    for (const auto& p : previous) {
      if (!p.origin || p.group.zone != labeled.group.zone) continue;
      int n = overlap(p.group.cells, labeled.group.cells);
      if (n == 0) continue;
      bool better = n > best_overlap ||
                    (n == best_overlap && approach_ids[*p.origin] < approach_ids[*labeled.origin]);
      if (better) {
        best_overlap = n;
        labeled.origin = p.origin;
        labeled.assigned_t = p.assigned_t;
      }
    }
    if (!labeled.origin && new_origin) {
      labeled.origin = new_origin;
      labeled.assigned_t = t;
    }
    if (!labeled.origin && labeled.group.cls == GroupClass::Moving)
      out.unlabeled.push_back({t, labeled.group.zone, labeled.group.size(), labeled.group.min_cell()});
    out.groups.push_back(std::move(labeled));
  }
  return out;
}

std::vector<std::optional<Group>> close_groups(std::span<const std::vector<Group>> lanes) {
  std::vector<std::optional<Group>> out;
  out.reserve(lanes.size());
  for (const auto& lane : lanes) {
    auto it = std::min_element(lane.begin(), lane.end(),
                               [](const Group& a, const Group& b) { return a.min_cell() < b.min_cell(); });
    out.push_back(it == lane.end() ? std::nullopt : std::optional<Group>(*it));
  }
  return out;
}

ApproachOccupancy approach_occupancy(std::span<const std::vector<Group>> lanes) {
  ApproachOccupancy occ;
  for (const auto& close : close_groups(lanes)) {
    if (!close) continue;
    occ.occupied = true;
    occ.close_moving = occ.close_moving || close->cls == GroupClass::Moving;
  }
  return occ;
}

std::int64_t period_floor(std::int64_t t, std::int64_t period) {
  auto q = t / period;
  if (t % period != 0 && t < 0) --q;
  return q * period;
}

ExposureCounters ExposureCounters::for_period(const Layout& layout, std::int64_t t) {
  ExposureCounters c;
  c.period_start = period_floor(t, layout.period);
  c.period_end = c.period_start + layout.period;
  c.streams.assign(layout.approaches.size(), StreamCounters{});
  return c;
}

std::vector<SecondFlags> update_exposure(ExposureCounters& counters, const Layout& layout, std::int64_t t,
                                         std::span<const LabeledGroup> conflict_groups,
                                         std::span<const ApproachOccupancy> occupancy) {
  if (t < counters.period_start || t >= counters.period_end)
    throw InvariantViolation("second " + std::to_string(t) + " outside the current period");

  std::vector<SecondFlags> flags;
  flags.reserve(layout.approaches.size());
  for (std::size_t s = 0; s < layout.approaches.size(); ++s) {
    SecondFlags f{t, s, false, false, false};
    f.crossing = std::any_of(conflict_groups.begin(), conflict_groups.end(), [&](const LabeledGroup& g) {
      return g.origin == s && g.group.cls == GroupClass::Moving;
    });
    if (f.crossing) {
      auto& c = counters.streams[s];
      ++c.z;
      auto cross = layout.cross_traffic[s];
      if (cross && occupancy[*cross].occupied) {
        f.critical = true;
        ++c.y;
        if (occupancy[*cross].close_moving) {
          f.critical_moving = true;
          ++c.y_moving;
        }
      } else {
        ++c.x;
      }
    }
    flags.push_back(f);
  }
  return flags;
}

void check_counters(const ExposureCounters& counters) {
  const auto length = counters.period_end - counters.period_start;
  for (std::size_t s = 0; s < counters.streams.size(); ++s) {
    const auto& c = counters.streams[s];
    const auto where = "stream " + std::to_string(s) + " in period [" + std::to_string(counters.period_start) +
                       "," + std::to_string(counters.period_end) + "): ";
    if (c.z != c.x + c.y) throw InvariantViolation(where + "Z != X + Y");
    if (c.y_moving > c.y) throw InvariantViolation(where + "Y_m > Y");
    if (c.x < 0 || c.y_moving < 0) throw InvariantViolation(where + "negative counter");
    if (c.z > length) throw InvariantViolation(where + "counter exceeds period length");
  }
}

std::vector<PeriodRow> finalize_period(ExposureCounters& counters) {
  check_counters(counters);
  std::vector<PeriodRow> rows;
  rows.reserve(counters.streams.size());
  for (std::size_t s = 0; s < counters.streams.size(); ++s)
    rows.push_back({s, counters.period_start, counters.period_end, counters.streams[s]});
  const auto length = counters.period_end - counters.period_start;
  counters.period_start = counters.period_end;
  counters.period_end += length;
  std::fill(counters.streams.begin(), counters.streams.end(), StreamCounters{});
  return rows;
}

}  // namespace lateral
