#pragma once

// CSV logs exchanged between the detector, the scenario generator and the
// evaluation harness. All files have a header row and LF line endings.

#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lateral/detector.hpp"
#include "lateral/evaluation.hpp"
#include "lateral/exposure.hpp"
#include "lateral/layout.hpp"

namespace lateral {

inline constexpr std::string_view kFlagsHeader = "t,stream,crossing,critical,critical_moving";
inline constexpr std::string_view kEventsHeader = "t,stopline,approach,origin_tiebreak_flag";
inline constexpr std::string_view kReportHeader = "stream,period_start,period_end,Z,X,Y,Ym";
inline constexpr std::string_view kAnnotationHeader = "t,stream,truth_critical,truth_critical_moving";
inline constexpr std::string_view kScoresHeader = "stream,target,TP,FP,FN,recall_pct,precision_pct";

void write_flags_csv(std::ostream& out, std::span<const SecondFlags> flags, const Layout& layout);
void write_events_csv(std::ostream& out, std::span<const EventRecord> events, const Layout& layout);
void write_report_csv(std::ostream& out, std::span<const PeriodRow> rows, const Layout& layout);
void write_annotations_csv(std::ostream& out, std::span<const AnnotationRecord> records);

struct ScoreRow {
  std::string stream;
  Target target = Target::Y;
  ConfusionCounts counts;
};

void write_scores_csv(std::ostream& out, std::span<const ScoreRow> rows);

/// Reads either an annotation file or a flags log (its critical columns).
std::vector<AnnotationRecord> read_annotations(std::string_view text);

std::vector<AnnotationRecord> to_annotations(std::span<const SecondFlags> flags, const Layout& layout);

}  // namespace lateral
