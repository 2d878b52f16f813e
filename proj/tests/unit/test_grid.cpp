#include <random>

#include "doctest.h"
#include "lateral/grid.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace lateral;

namespace {

std::vector<CellState> cells(std::string_view codes) {
  std::vector<CellState> out;
  for (char c : codes) out.push_back(*from_code(c));
  return out;
}

Zone lane(int len) { return Zone{"L", ZoneKind::Lane, len, 1, "A"}; }
Zone square(int w, int h) { return Zone{"CZ", ZoneKind::Conflict, w, h, ""}; }

}  // namespace

TEST_CASE("zone_stats counts") {
  SUBCASE("all empty") {
    auto s = fixtures::stats("..........");
    CHECK(s.n_presence == 0);
    CHECK(s.tau_presence() == 0.0);
  }
  SUBCASE("one stationary in ten") {
    auto s = fixtures::stats("s.........");
    CHECK(s.tau_presence() == doctest::Approx(0.1));
    CHECK(s.tau_movement() == 0.0);
    CHECK(s.n_moving_presence == 0);
  }
  SUBCASE("three moving, two end of presence") {
    auto s = fixtures::stats("mmmee.....");
    CHECK(s.n_movement == 5);
    CHECK(s.tau_movement() == doctest::Approx(0.5));
    CHECK(s.n_presence == 5);
  }
}

TEST_CASE("zone_stats identities on random subsets") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    auto c = oracle::random_cells(rng, 1 + static_cast<int>(rng() % 30));
    auto s = zone_stats(c);
    CHECK(s.n_movement == s.n_moving_presence + s.n_end_of_presence);
    CHECK(s.n_presence == s.n_movement + s.n_stationary_presence);
    CHECK(0.0 <= s.tau_movement());
    CHECK(s.tau_movement() <= s.tau_presence());
    CHECK(s.tau_presence() <= 1.0);
  }
}

TEST_CASE("detect_groups examples") {
  Thresholds th{2, 3};
  SUBCASE("lane [m, m, ., m]") {
    auto g = detect_groups(cells("mm.m"), lane(4), 0, th);
    REQUIRE(g.size() == 1);
    CHECK(g[0].cls == GroupClass::Moving);
    CHECK(g[0].cells == std::vector<int>{0, 1});
  }
  SUBCASE("two moving components of 6 and 4 cells") {
    // 6-cell L shape top-left, 4-cell block bottom-right
    auto g = detect_groups(cells("mmm..."
                                 "m....."
                                 "mm...."
                                 "....mm"
                                 "....mm"
                                 "......"),
                           square(6, 6), 0, th);
    REQUIRE(g.size() == 2);
    CHECK(g[0].size() == 6);
    CHECK(g[1].size() == 4);
  }
  SUBCASE("all empty") { CHECK(detect_groups(cells("................"), square(4, 4), 0, th).empty()); }
  SUBCASE("diagonal cells do not connect") {
    // (0,0) and (1,1): two singletons, both under the moving threshold
    CHECK(detect_groups(cells("m..m"), square(2, 2), 0, th).empty());
    CHECK(detect_groups(cells("m..m"), square(2, 2), 0, Thresholds{1, 1}).size() == 2);
  }
  SUBCASE("end of presence never groups, nor bridges") {
    CHECK(detect_groups(cells("eeee"), lane(4), 0, Thresholds{1, 1}).empty());
    auto g = detect_groups(cells("mem"), lane(3), 0, Thresholds{1, 1});
    CHECK(g.size() == 2);
  }
  SUBCASE("stationary threshold") {
    CHECK(detect_groups(cells("ss.sss"), lane(6), 0, th).size() == 1);
    CHECK(detect_groups(cells("ss.sss"), lane(6), 0, Thresholds{2, 2}).size() == 2);
  }
  SUBCASE("mixed classes stay separate") {
    auto g = detect_groups(cells("mmsss"), lane(5), 0, th);
    REQUIRE(g.size() == 2);
    CHECK(g[0].cls == GroupClass::Moving);
    CHECK(g[1].cls == GroupClass::Stationary);
    CHECK(g[1].cells == std::vector<int>{2, 3, 4});
  }
}

TEST_CASE("detect_groups agrees with the union-find oracle") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const bool is_lane = trial % 2 == 0;
    const int w = is_lane ? 1 + static_cast<int>(rng() % 20) : 1 + static_cast<int>(rng() % 8);
    const int h = is_lane ? 1 : 1 + static_cast<int>(rng() % 8);
    const Thresholds th{1 + static_cast<int>(rng() % 3), 1 + static_cast<int>(rng() % 3)};
    Zone z{"Z", is_lane ? ZoneKind::Lane : ZoneKind::Conflict, w, h, ""};
    auto c = oracle::random_cells(rng, w * h);

    auto got = detect_groups(c, z, 0, th);
    auto want = oracle::components(c, w, h, th.moving, th.stationary);
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      CHECK((got[i].cls == GroupClass::Moving ? 'm' : 's') == want[i].first);
      CHECK(got[i].cells == want[i].second);
    }

    // groups are disjoint and drawn from cells of their class
    std::vector<int> owner(static_cast<std::size_t>(w * h), 0);
    for (const auto& g : got)
      for (int cell : g.cells) {
        CHECK(++owner[static_cast<std::size_t>(cell)] == 1);
        CHECK(c[static_cast<std::size_t>(cell)] ==
              (g.cls == GroupClass::Moving ? CellState::MovingPresence : CellState::StationaryPresence));
      }
  }
}
