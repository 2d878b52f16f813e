#include "lateral/records.hpp"

#include <ostream>

#include "kv_document.hpp"

namespace lateral {

void write_flags_csv(std::ostream& out, std::span<const SecondFlags> flags, const Layout& layout) {
  out << kFlagsHeader << '\n';
  for (const auto& f : flags)
    out << f.t << ',' << layout.approaches[f.stream].id << ',' << int(f.crossing) << ',' << int(f.critical) << ','
        << int(f.critical_moving) << '\n';
}

void write_events_csv(std::ostream& out, std::span<const EventRecord> events, const Layout& layout) {
  out << kEventsHeader << '\n';
  for (const auto& e : events)
    out << e.event.t << ',' << layout.stop_lines[e.event.stop_line].id << ','
        << layout.approaches[e.event.approach].id << ',' << to_string(e.rule) << '\n';
}

void write_report_csv(std::ostream& out, std::span<const PeriodRow> rows, const Layout& layout) {
  out << kReportHeader << '\n';
  for (const auto& r : rows)
    out << layout.approaches[r.stream].id << ',' << r.period_start << ',' << r.period_end << ',' << r.counters.z
        << ',' << r.counters.x << ',' << r.counters.y << ',' << r.counters.y_moving << '\n';
}

void write_annotations_csv(std::ostream& out, std::span<const AnnotationRecord> records) {
  out << kAnnotationHeader << '\n';
  for (const auto& r : records)
    out << r.t << ',' << r.stream << ',' << int(r.critical) << ',' << int(r.critical_moving) << '\n';
}

void write_scores_csv(std::ostream& out, std::span<const ScoreRow> rows) {
  out << kScoresHeader << '\n';
  for (const auto& r : rows) {
    auto pr = precision_recall(r.counts);
    out << r.stream << ',' << to_string(r.target) << ',' << r.counts.tp << ',' << r.counts.fp << ',' << r.counts.fn
        << ',';
    if (pr.recall_pct) out << *pr.recall_pct;
    out << ',';
    if (pr.precision_pct) out << *pr.precision_pct;
    out << '\n';
  }
}

std::vector<AnnotationRecord> read_annotations(std::string_view text) {
  std::vector<AnnotationRecord> out;
  std::size_t line_no = 0, pos = 0;
  int critical_col = -1, moving_col = -1;
  std::size_t columns = 0;

  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    auto line = detail::trim(text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos));
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (line.empty()) continue;

    auto fields = detail::split_top(line, ',');
    if (critical_col < 0) {
      if (line == kAnnotationHeader) {
        critical_col = 2, moving_col = 3;
      } else if (line == kFlagsHeader) {
        critical_col = 3, moving_col = 4;
      } else {
        throw ParseError(line_no, "expected header '" + std::string(kAnnotationHeader) + "' or '" +
                                      std::string(kFlagsHeader) + "'");
      }
      columns = fields.size();
      continue;
    }
    if (fields.size() != columns)
      throw ParseError(line_no, "expected " + std::to_string(columns) + " fields, got " + std::to_string(fields.size()));

    auto flag = [&](std::string_view f) {
      if (f == "0") return false;
      if (f == "1") return true;
      throw ParseError(line_no, "expected 0 or 1, got '" + std::string(f) + "'");
    };
    AnnotationRecord r;
    auto t = detail::to_int(fields[0]);
    if (!t) throw ParseError(line_no, "bad second '" + std::string(fields[0]) + "'");
    r.t = *t;
    r.stream = std::string(fields[1]);
    if (r.stream.empty()) throw ParseError(line_no, "empty stream id");
    r.critical = flag(fields[static_cast<std::size_t>(critical_col)]);
    r.critical_moving = flag(fields[static_cast<std::size_t>(moving_col)]);
    if (r.critical_moving && !r.critical)
      throw ParseError(line_no, "critical_moving set without critical");
    out.push_back(std::move(r));
  }
  if (critical_col < 0) throw ParseError(0, "empty annotation file");
  return out;
}

std::vector<AnnotationRecord> to_annotations(std::span<const SecondFlags> flags, const Layout& layout) {
  std::vector<AnnotationRecord> out;
  out.reserve(flags.size());
  for (const auto& f : flags) out.push_back({f.t, layout.approaches[f.stream].id, f.critical, f.critical_moving});
  return out;
}

}  // namespace lateral
