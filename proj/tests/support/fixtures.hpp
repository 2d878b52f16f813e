#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "lateral/cell.hpp"
#include "lateral/grid.hpp"
#include "lateral/layout.hpp"

namespace fixtures {

inline std::filesystem::path dir() { return LATERAL_FIXTURE_DIR; }

inline std::string read(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline lateral::Layout two_roads() { return lateral::load_layout(dir() / "two_roads.layout"); }

/// Stats over a string of cell codes.
inline lateral::ZoneStats stats(std::string_view codes) {
  std::vector<lateral::CellState> cells;
  for (char c : codes) cells.push_back(*lateral::from_code(c));
  return lateral::zone_stats(cells);
}

}  // namespace fixtures
