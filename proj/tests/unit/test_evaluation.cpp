#include <algorithm>
#include <random>
#include <sstream>

#include "doctest.h"
#include "lateral/error.hpp"
#include "lateral/evaluation.hpp"
#include "lateral/records.hpp"
#include "support/field_results.hpp"

using namespace lateral;

namespace {

std::vector<AnnotationRecord> seconds(std::int64_t t0, std::int64_t t1, std::vector<std::int64_t> critical,
                                      const std::string& stream = "A") {
  std::vector<AnnotationRecord> out;
  for (auto t = t0; t < t1; ++t) {
    bool c = std::find(critical.begin(), critical.end(), t) != critical.end();
    out.push_back({t, stream, c, c});
  }
  return out;
}

}  // namespace

TEST_CASE("score counts per stream") {
  auto truth = seconds(0, 8, {2, 3, 4});
  auto detected = seconds(0, 8, {3, 4, 5});
  auto s = score(detected, truth, Target::Y);
  REQUIRE(s.size() == 1);
  CHECK(s["A"] == ConfusionCounts{2, 1, 1});

  auto pr = precision_recall(s["A"]);
  CHECK(pr.precision_pct == 67);
  CHECK(pr.recall_pct == 67);
}

TEST_CASE("targets read different columns") {
  std::vector<AnnotationRecord> truth{{0, "A", true, false}, {1, "A", true, true}};
  std::vector<AnnotationRecord> detected{{0, "A", true, true}, {1, "A", true, true}};
  CHECK(score(detected, truth, Target::Y)["A"] == ConfusionCounts{2, 0, 0});
  CHECK(score(detected, truth, Target::Ym)["A"] == ConfusionCounts{1, 1, 0});
}

TEST_CASE("absent ratios") {
  CHECK(precision_recall({0, 0, 0}) == PrecisionRecall{});
  CHECK(precision_recall({0, 0, 4}) == PrecisionRecall{std::nullopt, 0});
  CHECK(precision_recall({0, 3, 0}) == PrecisionRecall{0, std::nullopt});
}

TEST_CASE("rounding is exact and half away from zero") {
  CHECK(rounded_percent(1, 8) == 13);  // 12.5
  CHECK(rounded_percent(3, 8) == 38);  // 37.5
  CHECK(rounded_percent(1, 3) == 33);
  CHECK(rounded_percent(2, 3) == 67);
  CHECK(rounded_percent(5, 5) == 100);
  CHECK(rounded_percent(0, 9) == 0);
}

TEST_CASE("published field rows reproduce") {
  for (const auto& row : fixtures::kFieldRows) {
    CAPTURE(row.target);
    CAPTURE(row.strategy);
    CAPTURE(row.stream);
    auto pr = precision_recall({row.tp, row.fp, row.fn});
    CHECK(pr.recall_pct == row.recall_pct);
    CHECK(pr.precision_pct == row.precision_pct);
  }
}

TEST_CASE("domain mismatch") {
  auto truth = seconds(0, 5, {1});
  auto detected = seconds(0, 4, {1});
  try {
    score(detected, truth, Target::Y);
    FAIL("expected DomainMismatch");
  } catch (const DomainMismatch& e) {
    REQUIRE(e.seconds().size() == 1);
    CHECK(e.seconds()[0].first == 4);
  }
  auto dup = detected;
  dup.push_back(dup.front());
  CHECK_THROWS_AS(score(dup, dup, Target::Y), ValidationError);
}

TEST_CASE("score properties on random streams") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<AnnotationRecord> truth, detected;
    for (std::int64_t t = 0; t < 60; ++t)
      for (const char* s : {"A", "B"}) {
        bool tc = rng() % 3 == 0, dc = rng() % 3 == 0;
        truth.push_back({t, s, tc, tc && rng() % 2 == 0});
        detected.push_back({t, s, dc, dc && rng() % 2 == 0});
      }
    for (auto target : {Target::Y, Target::Ym}) {
      auto base = score(detected, truth, target);

      // order does not matter
      auto shuffled = detected;
      std::shuffle(shuffled.begin(), shuffled.end(), rng);
      CHECK(score(shuffled, truth, target) == base);

      // scoring truth against itself is perfect
      for (const auto& [stream, c] : score(truth, truth, target)) {
        CHECK(c.fp == 0);
        CHECK(c.fn == 0);
      }

      // TP + FN equals the truth positives
      for (const auto& [stream, c] : base) {
        auto positives = std::count_if(truth.begin(), truth.end(), [&](const AnnotationRecord& r) {
          return r.stream == stream && r.positive(target);
        });
        CHECK(c.tp + c.fn == positives);
      }
    }
  }
}

TEST_CASE("annotation csv") {
  std::vector<AnnotationRecord> recs{{0, "A", false, false}, {1, "A", true, true}, {1, "B", true, false}};
  std::ostringstream out;
  write_annotations_csv(out, recs);
  CHECK(out.str() ==
        "t,stream,truth_critical,truth_critical_moving\n0,A,0,0\n1,A,1,1\n1,B,1,0\n");
  CHECK(read_annotations(out.str()) == recs);

  // a flags log is accepted too
  auto flags = read_annotations("t,stream,crossing,critical,critical_moving\n4,A,1,1,0\n");
  REQUIRE(flags.size() == 1);
  CHECK(flags[0] == AnnotationRecord{4, "A", true, false});

  CHECK_THROWS_AS(read_annotations("t,stream,truth_critical,truth_critical_moving\n0,A,0,1\n"), ParseError);
  CHECK_THROWS_AS(read_annotations("t,stream,truth_critical,truth_critical_moving\n0,A,2,0\n"), ParseError);
  CHECK_THROWS_AS(read_annotations("a,b\n"), ParseError);
}

TEST_CASE("scores csv leaves absent ratios empty") {
  std::vector<ScoreRow> rows{{"A", Target::Y, {105, 6, 32}}, {"B", Target::Ym, {0, 0, 0}}};
  std::ostringstream out;
  write_scores_csv(out, rows);
  CHECK(out.str() == "stream,target,TP,FP,FN,recall_pct,precision_pct\nA,Y,105,6,32,77,95\nB,Ym,0,0,0,,\n");
}
