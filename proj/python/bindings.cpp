#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "lateral/detector.hpp"
#include "lateral/error.hpp"
#include "lateral/evaluation.hpp"
#include "lateral/frame.hpp"
#include "lateral/grid.hpp"
#include "lateral/records.hpp"
#include "lateral/scenario.hpp"

namespace py = pybind11;
using namespace lateral;

namespace {

std::vector<CellState> decode_cells(const std::string& codes) {
  std::vector<CellState> out;
  for (char c : codes) {
    auto s = from_code(c);
    if (!s) throw py::value_error(std::string("unknown cell code '") + c + "'");
    out.push_back(*s);
  }
  return out;
}

std::size_t zone_or_throw(const Layout& layout, const std::string& id) {
  auto z = layout.zone_index(id);
  if (!z) throw py::key_error("unknown zone '" + id + "'");
  return *z;
}

py::dict run_to_dict(const Layout& layout, const RunOutput& r) {
  std::ostringstream flags, events, report;
  write_flags_csv(flags, r.flags, layout);
  write_events_csv(events, r.events, layout);
  write_report_csv(report, r.periods, layout);
  py::dict d;
  d["flags_csv"] = flags.str();
  d["events_csv"] = events.str();
  d["report_csv"] = report.str();
  d["unlabeled"] = r.unlabeled.size();
  return d;
}

}  // namespace

PYBIND11_MODULE(_lateral, m) {
  m.doc() = "Exposure to lateral collision from intersection occupancy grids.";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<InvariantViolation>(m, "InvariantViolation", PyExc_RuntimeError);

  py::enum_<ZoneMovementState>(m, "ZoneMovementState")
      .value("Empty", ZoneMovementState::Empty)
      .value("Stationary", ZoneMovementState::Stationary)
      .value("PastMovement", ZoneMovementState::PastMovement)
      .value("FutureMovement", ZoneMovementState::FutureMovement)
      .value("Movement", ZoneMovementState::Movement);

  py::class_<Layout>(m, "Layout")
      .def_property_readonly("zones", [](const Layout& l) {
        std::vector<std::string> ids;
        for (const auto& z : l.zones) ids.push_back(z.id);
        return ids;
      })
      .def_property_readonly("approaches", [](const Layout& l) {
        std::vector<std::string> ids;
        for (const auto& a : l.approaches) ids.push_back(a.id);
        return ids;
      })
      .def_property_readonly("stop_lines", [](const Layout& l) {
        std::vector<std::string> ids;
        for (const auto& s : l.stop_lines) ids.push_back(s.id);
        return ids;
      })
      .def_readonly("period", &Layout::period)
      .def_property_readonly("thresholds", [](const Layout& l) {
        return std::make_pair(l.thresholds.moving, l.thresholds.stationary);
      });

  py::class_<Frame>(m, "Frame").def_readonly("t", &Frame::t);

  py::class_<ZoneStats>(m, "ZoneStats")
      .def(py::init([](int total, int moving, int end, int stationary) {
             ZoneStats s;
             s.total = total;
             s.n_moving_presence = moving;
             s.n_end_of_presence = end;
             s.n_stationary_presence = stationary;
             s.n_movement = moving + end;
             s.n_presence = moving + end + stationary;
             return s;
           }),
           py::arg("total"), py::arg("moving") = 0, py::arg("end") = 0, py::arg("stationary") = 0)
      .def_readonly("total", &ZoneStats::total)
      .def_readonly("n_presence", &ZoneStats::n_presence)
      .def_readonly("n_movement", &ZoneStats::n_movement)
      .def_readonly("n_moving_presence", &ZoneStats::n_moving_presence)
      .def_readonly("n_end_of_presence", &ZoneStats::n_end_of_presence)
      .def_readonly("n_stationary_presence", &ZoneStats::n_stationary_presence)
      .def_property_readonly("tau_presence", &ZoneStats::tau_presence)
      .def_property_readonly("tau_movement", &ZoneStats::tau_movement);

  m.def("parse_layout", &parse_layout, py::arg("text"));
  m.def("load_layout", &load_layout, py::arg("path"));
  m.def("read_frames", &read_frames, py::arg("text"), py::arg("layout"));
  m.def("write_frames", &write_frames, py::arg("frames"), py::arg("layout"));

  m.def("zone_stats", [](const std::string& codes) { return zone_stats(decode_cells(codes)); }, py::arg("codes"),
        "Counts over a string of cell codes ('.', 'm', 's', 'e').");

  m.def(
      "detect_groups",
      [](const Frame& frame, const Layout& layout, const std::string& zone) {
        auto zi = zone_or_throw(layout, zone);
        py::list out;
        for (const auto& g : detect_groups(frame, layout, zi, layout.thresholds))
          out.append(py::make_tuple(g.cls == GroupClass::Moving ? "moving" : "stationary", g.cells));
        return out;
      },
      py::arg("frame"), py::arg("layout"), py::arg("zone"));

  m.def("qualify_upstream", &qualify_upstream, py::arg("stats"));
  m.def("qualify_downstream", &qualify_downstream, py::arg("stats"));

  m.def(
      "precision_recall",
      [](std::int64_t tp, std::int64_t fp, std::int64_t fn) {
        auto pr = precision_recall({tp, fp, fn});
        return std::make_pair(pr.precision_pct, pr.recall_pct);
      },
      py::arg("tp"), py::arg("fp"), py::arg("fn"), "(precision %, recall %), None for an undefined ratio.");

  m.def(
      "score",
      [](const std::string& detected_csv, const std::string& truth_csv, const std::string& target) {
        auto t = target_from_string(target);
        if (!t) throw py::value_error("target must be 'Y' or 'Ym'");
        py::dict out;
        for (const auto& [stream, c] : score(read_annotations(detected_csv), read_annotations(truth_csv), *t))
          out[py::str(stream)] = py::make_tuple(c.tp, c.fp, c.fn);
        return out;
      },
      py::arg("detected_csv"), py::arg("truth_csv"), py::arg("target") = "Y",
      "Per-stream (TP, FP, FN) from two CSV texts.");

  m.def(
      "detect",
      [](const Layout& layout, const std::string& frames_text) {
        return run_to_dict(layout, run_detector(layout, read_frames(frames_text, layout)));
      },
      py::arg("layout"), py::arg("frames_text"), "Runs the detector; returns the CSV logs.");

  m.def(
      "generate",
      [](const std::filesystem::path& scenario) {
        auto spec = load_scenario(scenario);
        auto r = render(spec);
        std::ostringstream flags, report;
        write_flags_csv(flags, r.truth, spec.layout);
        write_report_csv(report, r.truth_periods, spec.layout);
        py::dict d;
        d["layout"] = spec.layout;
        d["frames_text"] = write_frames(r.frames, spec.layout);
        d["truth_flags_csv"] = flags.str();
        d["truth_report_csv"] = report.str();
        return d;
      },
      py::arg("scenario_path"), "Renders a scenario file into frames and ground truth.");
}
