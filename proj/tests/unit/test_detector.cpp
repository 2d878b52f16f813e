#include "doctest.h"
#include "lateral/detector.hpp"
#include "lateral/error.hpp"
#include "lateral/scenario.hpp"
#include "support/fixtures.hpp"

using namespace lateral;

namespace {

std::vector<Route> full_routes() {
  return {
      {"RA", 1, 7, 0u, 0, 3, 1, 2, Heading::Down},
      {"RB", 2, 7, 0u, 1, 2, 0, 3, Heading::Right},
  };
}

// Mirrors the two roads onto each other: transposes the conflict zone and
// swaps the lanes and signals of A and B. The fixture layout maps onto itself.
Frame mirror(const Frame& f) {
  Frame out = f;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) out.cells[0][static_cast<std::size_t>(c * 4 + r)] = f.cells[0][static_cast<std::size_t>(r * 4 + c)];
  std::swap(out.cells[1], out.cells[2]);
  std::swap(out.signals[0], out.signals[1]);
  return out;
}

}  // namespace

TEST_CASE("mirroring the roads swaps the streams") {
  auto layout = fixtures::two_roads();
  int compared = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    auto r = render(random_scenario(layout, full_routes(), seed));
    std::vector<Frame> mirrored;
    for (const auto& f : r.frames) mirrored.push_back(mirror(f));

    auto a = run_detector(layout, r.frames);
    auto b = run_detector(layout, mirrored);
    // the smaller-id rule is the one place the streams are not interchangeable
    bool lexicographic = false;
    for (const auto* run : {&a, &b})
      for (const auto& e : run->events) lexicographic = lexicographic || e.rule == TieBreak::Lexicographic;
    if (lexicographic) continue;

    REQUIRE(a.flags.size() == b.flags.size());
    for (std::size_t i = 0; i < a.flags.size(); ++i) {
      auto expect = a.flags[i];
      expect.stream = 1 - expect.stream;
      // flags come in approach order within a second
      CHECK(b.flags[i - a.flags[i].stream + expect.stream] == expect);
    }
    ++compared;
  }
  CHECK(compared >= 30);
}

TEST_CASE("repeated runs are identical") {
  auto layout = fixtures::two_roads();
  auto spec = random_scenario(layout, full_routes(), 99, {300, 40, 0.02});
  auto frames = render(spec).frames;
  auto a = run_detector(layout, frames);
  auto b = run_detector(layout, frames);
  CHECK(a.flags == b.flags);
  CHECK(a.periods == b.periods);
  REQUIRE(a.events.size() == b.events.size());
  for (std::size_t i = 0; i < a.events.size(); ++i) {
    CHECK(a.events[i].event.t == b.events[i].event.t);
    CHECK(a.events[i].rule == b.events[i].rule);
  }
}

TEST_CASE("periods roll over on multiples of T") {
  auto layout = fixtures::two_roads();
  auto spec = random_scenario(layout, full_routes(), 3, {45, 10, 0.0});
  spec.start = 0;
  auto frames = render(spec).frames;
  auto run = run_detector(layout, frames, DetectorOptions{std::nullopt, 20, RatioSubset::Upstream});
  REQUIRE(run.periods.size() == 6);  // [0,20) [20,40) [40,60) for two streams
  CHECK(run.periods[0].period_start == 0);
  CHECK(run.periods[2].period_start == 20);
  CHECK(run.periods[4].period_end == 60);

  // period totals equal the flag counts
  for (const auto& p : run.periods) {
    std::int64_t z = 0, y = 0, ym = 0;
    for (const auto& f : run.flags)
      if (f.stream == p.stream && f.t >= p.period_start && f.t < p.period_end) {
        z += f.crossing;
        y += f.critical;
        ym += f.critical_moving;
      }
    CHECK(p.counters.z == z);
    CHECK(p.counters.y == y);
    CHECK(p.counters.y_moving == ym);
  }
}

TEST_CASE("malformed streams are refused") {
  auto layout = fixtures::two_roads();
  Detector d(layout);
  d.step(blank_frame(layout, 5));
  CHECK_THROWS_AS(d.step(blank_frame(layout, 7)), ValidationError);

  Detector shape(layout);
  auto f = blank_frame(layout, 0);
  f.cells[1].pop_back();
  CHECK_THROWS_AS(shape.step(f), ValidationError);
}

TEST_CASE("threshold overrides change grouping") {
  auto layout = fixtures::two_roads();
  auto r = render(load_scenario(fixtures::dir() / "scenarios" / "07_below_threshold.scn"));
  auto base = run_detector(layout, r.frames);
  auto loose = run_detector(layout, r.frames, DetectorOptions{Thresholds{1, 1}, std::nullopt, RatioSubset::Upstream});
  auto critical = [](const RunOutput& o) {
    int n = 0;
    for (const auto& f : o.flags) n += f.critical;
    return n;
  };
  CHECK(critical(base) == 0);
  CHECK(critical(loose) > 0);
}
