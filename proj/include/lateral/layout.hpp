#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lateral/cell.hpp"

namespace lateral {

enum class ZoneKind : std::uint8_t { Conflict, Lane };

/// A functional zone of the sensor grid. Lanes are stored as a single row of
/// `width` cells; cell 0 is the one adjacent to the conflict zone.
struct Zone {
  std::string id;
  ZoneKind kind = ZoneKind::Conflict;
  int width = 0;
  int height = 0;
  std::string approach;  // lanes only

  int cell_count() const { return width * height; }
  int index(int row, int col) const { return row * width + col; }
  int row_of(int cell) const { return cell / width; }
  int col_of(int cell) const { return cell % width; }
};

/// One cell of one zone, addressed by the zone's position in `Layout::zones`.
struct CellRef {
  std::size_t zone = 0;
  int cell = 0;

  auto operator<=>(const CellRef&) const = default;
};

struct Approach {
  std::string id;
  std::string signal;
  std::vector<std::size_t> lanes;  // zone indices
};

/// Stop line between a storage (upstream) cell subset and a conflict-zone
/// (downstream) cell subset.
struct StopLine {
  std::string id;
  std::size_t approach = 0;
  std::size_t conflict_zone = 0;
  std::vector<CellRef> upstream;
  std::vector<CellRef> downstream;
};

struct Thresholds {
  int moving = 2;
  int stationary = 3;
};

struct Layout {
  std::vector<Zone> zones;
  std::vector<Approach> approaches;
  std::vector<StopLine> stop_lines;
  std::vector<std::optional<std::size_t>> cross_traffic;  // by approach index
  Thresholds thresholds;
  std::int64_t period = 3600;
  /// Optional raw-code table: raw character -> main state.
  std::array<std::optional<CellState>, 256> raw_codes{};

  std::optional<std::size_t> zone_index(std::string_view id) const;
  std::optional<std::size_t> approach_index(std::string_view id) const;
  std::vector<std::size_t> conflict_zones() const;
  /// Stop lines whose downstream subset lies in `zone`.
  std::vector<std::size_t> stop_lines_into(std::size_t zone) const;
  std::optional<CellState> decode(char c) const;
};

/// Parses the line-oriented `[section] key=value ...` layout document.
/// Throws ParseError on syntax problems and ValidationError on semantic ones.
Layout parse_layout(std::string_view text);
Layout load_layout(const std::filesystem::path& path);

/// Checks every layout invariant; parse_layout calls this before returning.
void validate_layout(const Layout& layout);

/// Renders a subset back to the document's `zone:range` notation, one ref per cell.
std::string describe(const Layout& layout, const CellRef& ref);

}  // namespace lateral
