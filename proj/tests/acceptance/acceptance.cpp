// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lateral/crossing.hpp"
#include "lateral/detector.hpp"
#include "lateral/evaluation.hpp"
#include "lateral/frame.hpp"
#include "lateral/grid.hpp"
#include "lateral/records.hpp"
#include "lateral/scenario.hpp"
#include "support/field_results.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace lateral;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::vector<fs::path> files(const fs::path& dir, const std::string& ext) {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ext) out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Route> full_routes() {
  return {
      {"RA", 1, 7, 0u, 0, 3, 1, 2, Heading::Down},
      {"RB", 2, 7, 0u, 1, 2, 0, 3, Heading::Right},
  };
}

Outcome field_arithmetic() {
  int matched = 0;
  std::string first_miss;
  for (const auto& row : fixtures::kFieldRows) {
    auto pr = precision_recall({row.tp, row.fp, row.fn});
    if (pr.recall_pct == row.recall_pct && pr.precision_pct == row.precision_pct) {
      ++matched;
    } else if (first_miss.empty()) {
      first_miss = std::string(" first miss ") + row.target + "/" + row.strategy + "/" + row.stream;
    }
  }
  return {matched == static_cast<int>(fixtures::kFieldRows.size()),
          std::to_string(matched) + "/" + std::to_string(fixtures::kFieldRows.size()) + " rows" + first_miss};
}

Outcome counter_identities() {
  auto layout = fixtures::two_roads();
  int scenarios = 0;
  long seconds = 0, violations = 0, crossing_seconds = 0;
  for (std::uint64_t seed = 1; seed <= 120; ++seed) {
    RandomScenarioOptions opts{180, 30, seed % 3 == 0 ? 0.02 : 0.0};
    auto frames = render(random_scenario(layout, full_routes(), seed, opts)).frames;
    Detector d(layout);
    for (const auto& f : frames) {
      StepResult r;
      try {
        r = d.step(f);
      } catch (const InvariantViolation&) {
        ++violations;
        break;
      }
      for (const auto& s : d.counters().streams) {
        if (s.z != s.x + s.y || s.y_moving > s.y) ++violations;
      }
      for (const auto& fl : r.flags) crossing_seconds += fl.crossing;
      ++seconds;
    }
    ++scenarios;
  }
  return {violations == 0 && crossing_seconds > 0,
          std::to_string(scenarios) + " scenarios, " + std::to_string(seconds) + " seconds, " +
              std::to_string(crossing_seconds) + " crossing stream-seconds, " + std::to_string(violations) +
              " violations"};
}

Outcome grouping_oracle() {
  std::mt19937_64 rng(31337);
  int grids = 0, mismatches = 0;
  for (int moving = 1; moving <= 3; ++moving)
    for (int stationary = 1; stationary <= 3; ++stationary)
      for (int k = 0; k < 112; ++k) {
        const bool is_lane = k % 2 == 1;
        const int w = is_lane ? 1 + static_cast<int>(rng() % 20) : 1 + static_cast<int>(rng() % 8);
        const int h = is_lane ? 1 : 1 + static_cast<int>(rng() % 8);
        Zone z{"Z", is_lane ? ZoneKind::Lane : ZoneKind::Conflict, w, h, ""};
        auto cells = oracle::random_cells(rng, w * h);
        auto got = detect_groups(cells, z, 0, Thresholds{moving, stationary});
        auto want = oracle::components(cells, w, h, moving, stationary);
        bool same = got.size() == want.size();
        for (std::size_t i = 0; same && i < got.size(); ++i)
          same = (got[i].cls == GroupClass::Moving ? 'm' : 's') == want[i].first && got[i].cells == want[i].second;
        mismatches += !same;
        ++grids;
      }
  return {grids >= 1000 && mismatches == 0,
          std::to_string(grids) + " grids, " + std::to_string(mismatches) + " mismatches"};
}

Outcome scenario_equivalence() {
  auto paths = files(fixtures::dir() / "scenarios", ".scn");
  int clean = 0;
  std::string failures;
  for (const auto& p : paths) {
    auto spec = load_scenario(p);
    auto rendered = render(spec);
    auto run = run_detector(spec.layout, rendered.frames);
    auto detected = to_annotations(run.flags, spec.layout);
    auto truth = to_annotations(rendered.truth, spec.layout);
    bool ok = true;
    for (auto target : {Target::Y, Target::Ym})
      for (const auto& [stream, c] : score(detected, truth, target)) ok = ok && c.fp == 0 && c.fn == 0;
    ok = ok && run.periods == rendered.truth_periods;
    if (ok) ++clean;
    else failures += " " + p.stem().string();
  }
  return {paths.size() == 20 && clean == 20,
          std::to_string(clean) + "/" + std::to_string(paths.size()) + " scenarios with FP=FN=0" + failures};
}

// One stop line with 20-cell subsets; each step gives the upstream and
// downstream contents (padded with empty cells).
struct TraceStep {
  const char* up;
  const char* down;
  ZoneMovementState up_state, down_state;
  bool up_met, down_met, event;
};

std::string pad(const char* codes) {
  std::string s(codes);
  s.resize(20, '.');
  return s;
}

Outcome state_machine_trace() {
  using Z = ZoneMovementState;
  const std::vector<TraceStep> script{
      {"", "", Z::Empty, Z::Empty, false, false, false},
      {"s", "s", Z::Empty, Z::Empty, false, false, false},                   // sparse presence is Empty
      {"ssss", "", Z::Stationary, Z::Empty, false, false, false},
      {"mmss", "", Z::FutureMovement, Z::Empty, false, false, false},
      {"emss", "m", Z::Movement, Z::Movement, true, true, true},             // lone moving cell is not Empty
      {"esssss", "mm", Z::Movement, Z::Movement, true, true, false},         // 1 < 0.5 * 6: rejected
      {"ssssss", "mm", Z::Stationary, Z::Movement, false, false, false},     // Movement -> Stationary resets
      {"mmssss", "ee", Z::FutureMovement, Z::PastMovement, false, false, false},
      {"emmsss", "mm", Z::Movement, Z::Movement, true, true, true},          // 3 >= 0.5 * 6
      {"eemm", "emm", Z::Movement, Z::Movement, true, true, true},
      {"e", "eee", Z::Movement, Z::PastMovement, true, false, false},
      {"", "sss", Z::Empty, Z::Stationary, false, false, false},             // Movement -> Empty resets
      {"mm", "ms", Z::FutureMovement, Z::Movement, false, false, false},
      {"mmee", "mm", Z::Movement, Z::Movement, true, true, true},
  };

  // Function level.
  StopLineState st;
  std::vector<std::int64_t> events;
  int step_mismatches = 0;
  for (std::size_t t = 0; t < script.size(); ++t) {
    const auto& s = script[t];
    auto up = fixtures::stats(pad(s.up)), down = fixtures::stats(pad(s.down));
    auto uq = qualify_upstream(up), dq = qualify_downstream(down);
    st = update_crossing_conditions(st, uq, dq);
    bool ev = detect_crossing(st, uq, up, down);
    if (uq != s.up_state || dq != s.down_state || st.upstream_met != s.up_met || st.downstream_met != s.down_met ||
        ev != s.event)
      ++step_mismatches;
    if (ev) events.push_back(static_cast<std::int64_t>(t));
  }

  // Same script through the full detector.
  auto layout = parse_layout(
      "[zone] id=CZ kind=conflict w=20 h=1\n"
      "[zone] id=L kind=lane len=20 approach=A\n"
      "[approach] id=A lanes=L\n"
      "[stopline] id=S approach=A upstream=L:0-19 downstream=CZ:(0,0)-(0,19)\n");
  std::string text;
  for (std::size_t t = 0; t < script.size(); ++t)
    text += "FRAME " + std::to_string(t) + "\nZONE CZ\n" + pad(script[t].down) + "\nZONE L\n" + pad(script[t].up) +
            "\nSIG A G\nEND\n";
  std::vector<std::int64_t> detector_events;
  for (const auto& e : run_detector(layout, read_frames(text, layout)).events) detector_events.push_back(e.event.t);

  const std::vector<std::int64_t> expected{4, 8, 9, 13};
  std::string got;
  for (auto t : events) got += (got.empty() ? "" : ",") + std::to_string(t);
  return {step_mismatches == 0 && events == expected && detector_events == expected,
          std::to_string(script.size()) + " steps, " + std::to_string(step_mismatches) + " state mismatches, events at " +
              got + (detector_events == expected ? "" : " (detector differs)")};
}

std::string pipeline_bytes(const ScenarioSpec& spec) {
  auto rendered = render(spec);
  auto run = run_detector(spec.layout, rendered.frames);
  std::ostringstream out;
  out << write_frames(rendered.frames, spec.layout);
  write_flags_csv(out, run.flags, spec.layout);
  write_events_csv(out, run.events, spec.layout);
  write_report_csv(out, run.periods, spec.layout);
  return out.str();
}

Outcome determinism_round_trip() {
  int runs = 0, differing = 0, streams = 0, round_trip_failures = 0;
  auto layout = fixtures::two_roads();
  for (const auto& p : files(fixtures::dir() / "scenarios", ".scn")) {
    auto spec = load_scenario(p);
    differing += pipeline_bytes(spec) != pipeline_bytes(load_scenario(p));
    ++runs;
    auto text = write_frames(render(spec).frames, spec.layout);
    round_trip_failures += write_frames(read_frames(text, spec.layout), spec.layout) != text;
    ++streams;
  }
  for (const auto& p : files(fixtures::dir() / "frames", ".txt")) {
    auto text = fixtures::read(p);
    round_trip_failures += write_frames(read_frames(text, layout), layout) != text;
    ++streams;
  }
  auto noisy = random_scenario(layout, full_routes(), 77, {400, 60, 0.05});
  differing += pipeline_bytes(noisy) != pipeline_bytes(random_scenario(layout, full_routes(), 77, {400, 60, 0.05}));
  ++runs;
  return {differing == 0 && round_trip_failures == 0,
          std::to_string(runs) + " repeated runs, " + std::to_string(differing) + " differ; " + std::to_string(streams) +
              " streams, " + std::to_string(round_trip_failures) + " round-trip failures"};
}

Outcome throughput() {
  auto layout = fixtures::two_roads();
  std::vector<Frame> frames;
  for (std::uint64_t seed = 0; frames.size() < 20000; ++seed) {
    auto r = render(random_scenario(layout, full_routes(), 500 + seed, {2000, 400, 0.01}));
    for (auto& f : r.frames) {
      f.t = static_cast<std::int64_t>(frames.size());
      frames.push_back(std::move(f));
    }
  }
  Detector d(layout);
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t flagged = 0;
  for (const auto& f : frames) flagged += d.step(f).flags.size();
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const double rate = static_cast<double>(frames.size()) / secs;
  char buf[128];
  std::snprintf(buf, sizeof buf, "%zu frames in %.3f s, %.0f frames/s", frames.size(), secs, rate);
  return {rate >= 5000.0 && flagged == 2 * frames.size(), buf};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"field result arithmetic", field_arithmetic},
      {"counter identities", counter_identities},
      {"grouping oracle", grouping_oracle},
      {"scenario ground truth", scenario_equivalence},
      {"state machine trace", state_machine_trace},
      {"determinism and round-trip", determinism_round_trip},
      {"throughput", throughput},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s criterion %zu (%s): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
  }
  return failed == 0 ? 0 : 1;
}
