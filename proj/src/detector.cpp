#include "lateral/detector.hpp"

#include <algorithm>
#include <utility>

#include "lateral/error.hpp"

namespace lateral {

Detector::Detector(Layout layout, DetectorOptions options)
    : layout_(std::move(layout)), ratio_subset_(options.ratio_subset) {
  if (options.thresholds) layout_.thresholds = *options.thresholds;
  if (options.period) layout_.period = *options.period;
  validate_layout(layout_);
  thresholds_ = layout_.thresholds;
  for (const auto& a : layout_.approaches) approach_ids_.push_back(a.id);
  conflict_zones_ = layout_.conflict_zones();
  crossing_ = CrossingState::initial(layout_);
  trace_.resize(layout_.stop_lines.size());
}

void Detector::check_shape(const Frame& frame) const {
  if (frame.cells.size() != layout_.zones.size() || frame.signals.size() != layout_.approaches.size())
    throw ValidationError("t=" + std::to_string(frame.t) + ": frame does not match the layout");
  for (std::size_t z = 0; z < layout_.zones.size(); ++z)
    if (static_cast<int>(frame.cells[z].size()) != layout_.zones[z].cell_count())
      throw ValidationError("t=" + std::to_string(frame.t) + ": zone '" + layout_.zones[z].id +
                            "' has the wrong number of cells");
  if (last_t_ && frame.t != *last_t_ + 1)
    throw ValidationError("t=" + std::to_string(frame.t) + ": expected t=" + std::to_string(*last_t_ + 1));
}

StepResult Detector::step(const Frame& frame) {
  check_shape(frame);
  const auto t = frame.t;
  StepResult out;

  if (!last_t_) {
    counters_ = ExposureCounters::for_period(layout_, t);
  } else if (t >= counters_.period_end) {
    out.finished = finalize_period(counters_);
  }
  last_t_ = t;

  for (std::size_t a = 0; a < layout_.approaches.size(); ++a)
    if (frame.signals[a] == Signal::Green) crossing_.last_green[a] = t;

  // Stop-line crossings.
  std::vector<CrossingEvent> events;
  for (std::size_t i = 0; i < layout_.stop_lines.size(); ++i) {
    const auto& line = layout_.stop_lines[i];
    auto& tr = trace_[i];
    tr.upstream_stats = zone_stats(frame, line.upstream);
    tr.downstream_stats = zone_stats(frame, line.downstream);
    tr.upstream = qualify_upstream(tr.upstream_stats);
    tr.downstream = qualify_downstream(tr.downstream_stats);
    tr.state = update_crossing_conditions(crossing_.stop_lines[i], tr.upstream, tr.downstream);
    crossing_.stop_lines[i] = tr.state;
    tr.crossing = detect_crossing(tr.state, tr.upstream, tr.upstream_stats, tr.downstream_stats, ratio_subset_);
    if (tr.crossing) events.push_back({t, i, line.approach});
  }

  // Conflict-zone groups and their origins.
  std::vector<LabeledGroup> labeled;
  for (auto cz : conflict_zones_) {
    std::vector<CrossingEvent> into;
    for (const auto& e : events)
      if (layout_.stop_lines[e.stop_line].conflict_zone == cz) into.push_back(e);
    auto origin = attribute_origin(into, frame.signals, crossing_.last_green, approach_ids_);
    for (const auto& e : into) out.events.push_back({e, origin->rule, origin->approach});

    std::vector<LabeledGroup> previous;
    for (const auto& g : labeled_)
      if (g.group.zone == cz) previous.push_back(g);
    auto prop = propagate_origins(previous, detect_groups(frame, layout_, cz, thresholds_),
                                  origin ? std::optional(origin->approach) : std::nullopt, t, approach_ids_);
    std::move(prop.groups.begin(), prop.groups.end(), std::back_inserter(labeled));
    std::move(prop.unlabeled.begin(), prop.unlabeled.end(), std::back_inserter(out.unlabeled));
  }
  labeled_ = std::move(labeled);
  std::sort(out.events.begin(), out.events.end(),
            [](const EventRecord& a, const EventRecord& b) { return a.event.stop_line < b.event.stop_line; });

  // Entry-lane occupancy per approach.
  std::vector<ApproachOccupancy> occupancy;
  occupancy.reserve(layout_.approaches.size());
  std::vector<std::vector<Group>> lanes;
  for (const auto& a : layout_.approaches) {
    lanes.clear();
    for (auto z : a.lanes) lanes.push_back(detect_groups(frame, layout_, z, thresholds_));
    occupancy.push_back(approach_occupancy(lanes));
  }

  out.flags = update_exposure(counters_, layout_, t, labeled_, occupancy);
  check_counters(counters_);
  return out;
}

std::vector<PeriodRow> Detector::finish() {
  if (!last_t_) return {};
  return finalize_period(counters_);
}

RunOutput run_detector(const Layout& layout, const std::vector<Frame>& frames, DetectorOptions options) {
  Detector detector(layout, options);
  RunOutput out;
  for (const auto& f : frames) {
    auto r = detector.step(f);
    std::move(r.events.begin(), r.events.end(), std::back_inserter(out.events));
    std::move(r.flags.begin(), r.flags.end(), std::back_inserter(out.flags));
    std::move(r.unlabeled.begin(), r.unlabeled.end(), std::back_inserter(out.unlabeled));
    std::move(r.finished.begin(), r.finished.end(), std::back_inserter(out.periods));
  }
  auto last = detector.finish();
  std::move(last.begin(), last.end(), std::back_inserter(out.periods));
  return out;
}

}  // namespace lateral
