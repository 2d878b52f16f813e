#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lateral/crossing.hpp"
#include "lateral/exposure.hpp"
#include "lateral/frame.hpp"
#include "lateral/layout.hpp"

namespace lateral {

struct DetectorOptions {
  std::optional<Thresholds> thresholds;  // overrides the layout's
  std::optional<std::int64_t> period;    // overrides the layout's
  RatioSubset ratio_subset = RatioSubset::Upstream;
};

struct EventRecord {
  CrossingEvent event;
  TieBreak rule = TieBreak::None;  // how this second's origin was resolved
  std::size_t origin = 0;
};

/// Per-stop-line view of one second, kept for tracing.
struct StopLineTrace {
  ZoneStats upstream_stats;
  ZoneStats downstream_stats;
  ZoneMovementState upstream = ZoneMovementState::Empty;
  ZoneMovementState downstream = ZoneMovementState::Empty;
  StopLineState state;
  bool crossing = false;
};

struct StepResult {
  std::vector<EventRecord> events;
  std::vector<SecondFlags> flags;
  std::vector<UnlabeledGroup> unlabeled;
  std::vector<PeriodRow> finished;  // rows of a period that closed before this second
};

/// Runs grouping, stop-line detection, origin labelling and exposure
/// accounting over a frame stream, one second at a time.
class Detector {
 public:
  explicit Detector(Layout layout, DetectorOptions options = {});

  StepResult step(const Frame& frame);

  /// Closes the current (possibly partial) period. Empty if no frame was seen.
  std::vector<PeriodRow> finish();

  const Layout& layout() const { return layout_; }
  const ExposureCounters& counters() const { return counters_; }
  const CrossingState& crossing_state() const { return crossing_; }
  const std::vector<StopLineTrace>& trace() const { return trace_; }
  const std::vector<LabeledGroup>& conflict_groups() const { return labeled_; }

 private:
  void check_shape(const Frame& frame) const;

  Layout layout_;
  Thresholds thresholds_;
  RatioSubset ratio_subset_;
  std::vector<std::string> approach_ids_;
  std::vector<std::size_t> conflict_zones_;

  CrossingState crossing_;
  ExposureCounters counters_;
  std::vector<LabeledGroup> labeled_;  // all conflict zones, previous second
  std::vector<StopLineTrace> trace_;
  std::optional<std::int64_t> last_t_;
};

/// Everything a full run produces.
struct RunOutput {
  std::vector<EventRecord> events;
  std::vector<SecondFlags> flags;
  std::vector<UnlabeledGroup> unlabeled;
  std::vector<PeriodRow> periods;
};

RunOutput run_detector(const Layout& layout, const std::vector<Frame>& frames, DetectorOptions options = {});

}  // namespace lateral
