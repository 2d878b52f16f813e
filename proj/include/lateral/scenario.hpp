#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lateral/exposure.hpp"
#include "lateral/frame.hpp"
#include "lateral/layout.hpp"

namespace lateral {

enum class Heading : std::uint8_t { Down, Up, Right, Left };

/// A path through the grid: lane cells from `from` down to 0, then optionally
/// a rectangular track through a conflict zone, cut into slices across the
/// direction of travel. A vehicle of length L covers L consecutive slices.
struct Route {
  std::string id;
  std::size_t lane = 0;
  int from = 0;
  std::optional<std::size_t> conflict_zone;
  int row0 = 0, row1 = 0, col0 = 0, col1 = 0;
  Heading heading = Heading::Down;

  std::vector<std::vector<CellRef>> slices(const Layout& layout) const;
};

struct VehicleScript {
  std::string id;
  std::size_t route = 0;
  std::int64_t enter = 0;
  int head = 0;    // slice index of the front at `enter`
  int length = 2;  // slices
  int speed = 1;   // slices per moving second
  std::vector<std::pair<std::int64_t, std::int64_t>> stops;  // [start, end), stationary seconds

  bool stopped_at(std::int64_t t) const;
};

struct SignalInterval {
  Signal signal = Signal::Red;
  std::int64_t start = 0;
  std::int64_t end = 0;
};

struct ScenarioSpec {
  Layout layout;
  std::int64_t start = 0;
  std::int64_t duration = 0;
  std::vector<std::vector<SignalInterval>> signals;  // by approach
  std::vector<Route> routes;
  std::vector<VehicleScript> vehicles;
  double noise = 0.0;  // per-cell probability of replacing the rendered state
  std::uint64_t seed = 0;
};

/// Ground truth computed from the scripts, not from rendered cells.
struct Rendered {
  std::vector<Frame> frames;
  std::vector<SecondFlags> truth;
  std::vector<PeriodRow> truth_periods;
  /// Vehicles that reached the conflict zone without an attributable stop-line crossing.
  std::vector<std::string> unattributed;
};

/// Renders the scripts into frames and ground truth. Throws ValidationError on
/// an invalid spec, including two vehicles on one cell.
Rendered render(const ScenarioSpec& spec);

/// First cell shared by two vehicles, as a message, if any.
std::optional<std::string> find_collision(const ScenarioSpec& spec);

void validate_scenario(const ScenarioSpec& spec);

/// `[scenario]`, `[signal]`, `[route]`, `[vehicle]` document. The layout path is
/// resolved relative to `base_dir`.
ScenarioSpec parse_scenario(std::string_view text, const std::filesystem::path& base_dir);
ScenarioSpec parse_scenario(std::string_view text, Layout layout);
ScenarioSpec load_scenario(const std::filesystem::path& path);

struct RandomScenarioOptions {
  std::int64_t duration = 120;
  int vehicles = 24;
  double noise = 0.0;
};

/// A seeded random scenario on a layout whose approaches each have a route
/// into a conflict zone. Colliding candidates are dropped.
ScenarioSpec random_scenario(const Layout& layout, const std::vector<Route>& routes, std::uint64_t seed,
                             const RandomScenarioOptions& options = {});

}  // namespace lateral
