// lateral: detection, evaluation and scenario generation driver.
//
// Exit status: 0 success, 1 usage error, 2 data error, 3 internal invariant violation.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "lateral/detector.hpp"
#include "lateral/error.hpp"
#include "lateral/evaluation.hpp"
#include "lateral/frame.hpp"
#include "lateral/records.hpp"
#include "lateral/scenario.hpp"

namespace fs = std::filesystem;
using namespace lateral;

namespace {

enum Exit : int { kOk = 0, kUsage = 1, kData = 2, kInternal = 3 };

struct Options {
  std::string layout;
  std::string frames;
  std::string scenario;
  std::string out = ".";
  std::string flags;
  std::string truth;
  std::string target;
  std::string ratio_subset = "upstream";
  std::int64_t period = 0;
  int moving_threshold = 0;
  int stationary_threshold = 0;
  std::int64_t seed = -1;
  bool verbose = false;
};

std::string slurp(const fs::path& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(std::string(what) + " not found: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << content;
}

void prepare_out(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ValidationError("cannot create output directory " + dir + ": " + ec.message());
}

int cmd_detect(const Options& o) {
  DetectorOptions opts;
  Layout layout;
  std::optional<Rendered> rendered;

  if (!o.scenario.empty()) {
    auto spec = load_scenario(o.scenario);
    layout = spec.layout;
    rendered = render(spec);
  } else {
    if (o.layout.empty() || o.frames.empty()) {
      std::cerr << "detect: --layout and --frames (or --scenario) are required\n";
      return kUsage;
    }
    layout = load_layout(o.layout);
  }

  if (o.period > 0) opts.period = o.period;
  if (o.moving_threshold > 0 || o.stationary_threshold > 0) {
    Thresholds th = layout.thresholds;
    if (o.moving_threshold > 0) th.moving = o.moving_threshold;
    if (o.stationary_threshold > 0) th.stationary = o.stationary_threshold;
    opts.thresholds = th;
  }
  if (o.ratio_subset == "downstream") opts.ratio_subset = RatioSubset::Downstream;
  else if (o.ratio_subset == "both") opts.ratio_subset = RatioSubset::Both;

  Detector detector(layout, opts);
  std::vector<SecondFlags> flags;
  std::vector<EventRecord> events;
  std::vector<PeriodRow> periods;
  std::size_t unlabeled = 0;
  std::int64_t frames = 0;

  auto consume = [&](const Frame& f) {
    auto r = detector.step(f);
    ++frames;
    flags.insert(flags.end(), r.flags.begin(), r.flags.end());
    events.insert(events.end(), r.events.begin(), r.events.end());
    periods.insert(periods.end(), r.finished.begin(), r.finished.end());
    for (const auto& u : r.unlabeled) {
      ++unlabeled;
      if (o.verbose)
        std::cerr << "t=" << u.t << ": moving group of " << u.size << " cells in "
                  << describe(detector.layout(), CellRef{u.zone, u.min_cell}) << " has no origin\n";
    }
  };

  if (rendered) {
    for (const auto& f : rendered->frames) consume(f);
  } else {
    std::ifstream in(o.frames, std::ios::binary);
    if (!in) throw ValidationError("frames not found: " + o.frames);
    FrameReader reader(in, detector.layout());
    while (auto f = reader.next()) consume(*f);
  }
  auto last = detector.finish();
  periods.insert(periods.end(), last.begin(), last.end());

  prepare_out(o.out);
  std::ostringstream fl, ev, rp;
  write_flags_csv(fl, flags, detector.layout());
  write_events_csv(ev, events, detector.layout());
  write_report_csv(rp, periods, detector.layout());
  write_file(fs::path(o.out) / "flags.csv", fl.str());
  write_file(fs::path(o.out) / "events.csv", ev.str());
  write_file(fs::path(o.out) / "report.csv", rp.str());

  if (unlabeled) std::cerr << unlabeled << " moving conflict-zone group(s) without origin were not counted\n";
  if (o.verbose) std::cerr << "processed " << frames << " frames, " << events.size() << " crossing events\n";
  return kOk;
}

int cmd_evaluate(const Options& o) {
  if (o.flags.empty() || o.truth.empty()) {
    std::cerr << "evaluate: --flags and --truth are required\n";
    return kUsage;
  }
  std::vector<Target> targets{Target::Y, Target::Ym};
  if (!o.target.empty()) {
    auto t = target_from_string(o.target);
    if (!t) {
      std::cerr << "evaluate: --target must be Y or Ym\n";
      return kUsage;
    }
    targets = {*t};
  }
  auto detected = read_annotations(slurp(o.flags, "flags"));
  auto truth = read_annotations(slurp(o.truth, "annotations"));

  std::map<std::string, std::vector<ScoreRow>> by_stream;
  for (auto target : targets)
    for (const auto& [stream, counts] : score(detected, truth, target))
      by_stream[stream].push_back({stream, target, counts});
  std::vector<ScoreRow> rows;
  for (auto& [_, r] : by_stream) rows.insert(rows.end(), r.begin(), r.end());

  std::ostringstream out;
  write_scores_csv(out, rows);
  prepare_out(o.out);
  write_file(fs::path(o.out) / "scores.csv", out.str());
  std::cout << out.str();
  return kOk;
}

int cmd_generate(const Options& o) {
  if (o.scenario.empty()) {
    std::cerr << "generate: --scenario is required\n";
    return kUsage;
  }
  auto spec = load_scenario(o.scenario);
  if (o.seed >= 0) spec.seed = static_cast<std::uint64_t>(o.seed);
  if (o.period > 0) spec.layout.period = o.period;
  auto r = render(spec);

  prepare_out(o.out);
  std::ostringstream fl, rp;
  write_flags_csv(fl, r.truth, spec.layout);
  write_report_csv(rp, r.truth_periods, spec.layout);
  write_file(fs::path(o.out) / "frames.txt", write_frames(r.frames, spec.layout));
  write_file(fs::path(o.out) / "truth_flags.csv", fl.str());
  write_file(fs::path(o.out) / "truth_report.csv", rp.str());
  for (const auto& id : r.unattributed)
    std::cerr << "vehicle '" << id << "' enters the conflict zone without a stop-line crossing\n";
  if (o.verbose) std::cerr << "rendered " << r.frames.size() << " frames, " << spec.vehicles.size() << " vehicles\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exposure to lateral collision from intersection occupancy grids"};
  app.require_subcommand(1);
  Options o;

  auto* detect = app.add_subcommand("detect", "Run the detector over a frame stream");
  detect->add_option("--layout", o.layout, "Layout document");
  detect->add_option("--frames", o.frames, "Frame stream");
  detect->add_option("--scenario", o.scenario, "Render this scenario and detect on it instead of --frames");
  detect->add_option("--out", o.out, "Output directory")->capture_default_str();
  detect->add_option("--period", o.period, "Override the reporting period T (seconds)")->check(CLI::PositiveNumber);
  detect->add_option("--moving-threshold", o.moving_threshold, "Minimum moving group size")->check(CLI::PositiveNumber);
  detect->add_option("--stationary-threshold", o.stationary_threshold, "Minimum stationary group size")
      ->check(CLI::PositiveNumber);
  detect->add_option("--ratio-subset", o.ratio_subset, "Subset for the crossing movement ratio")
      ->check(CLI::IsMember({"upstream", "downstream", "both"}))
      ->capture_default_str();
  detect->add_flag("--verbose", o.verbose, "Report every unlabeled group");

  auto* evaluate = app.add_subcommand("evaluate", "Score detected flags against annotations");
  evaluate->add_option("--flags", o.flags, "Detector flags log")->required();
  evaluate->add_option("--truth", o.truth, "Annotations (or a flags log used as ground truth)")->required();
  evaluate->add_option("--target", o.target, "Y or Ym (both when omitted)");
  evaluate->add_option("--out", o.out, "Output directory")->capture_default_str();
  evaluate->add_flag("--verbose", o.verbose);

  auto* generate = app.add_subcommand("generate", "Render a scenario into frames and ground truth");
  generate->add_option("--scenario", o.scenario, "Scenario document")->required();
  generate->add_option("--out", o.out, "Output directory")->capture_default_str();
  generate->add_option("--seed", o.seed, "Noise seed (overrides the scenario)");
  generate->add_option("--period", o.period, "Override the reporting period T (seconds)")->check(CLI::PositiveNumber);
  generate->add_flag("--verbose", o.verbose);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    if (*detect) return cmd_detect(o);
    if (*evaluate) return cmd_evaluate(o);
    if (*generate) return cmd_generate(o);
  } catch (const InvariantViolation& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  }
  return kUsage;
}
