#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lateral/cell.hpp"
#include "lateral/layout.hpp"

namespace lateral {

/// One second of sensor output. `cells` and `signals` are indexed like
/// `Layout::zones` and `Layout::approaches`.
struct Frame {
  std::int64_t t = 0;
  std::vector<std::vector<CellState>> cells;
  std::vector<Signal> signals;

  CellState at(const CellRef& ref) const { return cells[ref.zone][static_cast<std::size_t>(ref.cell)]; }

  bool operator==(const Frame&) const = default;
};

/// An all-empty, all-red frame shaped for `layout`.
Frame blank_frame(const Layout& layout, std::int64_t t);

/// Incremental reader for the FRAME/ZONE/SIG/END stream. Zones must appear in
/// layout order, followed by one SIG line per approach in layout order.
class FrameReader {
 public:
  FrameReader(std::istream& in, const Layout& layout);

  /// Next frame, or nullopt at end of input. Throws ParseError.
  std::optional<Frame> next();

 private:
  bool getline(std::string& out);
  [[noreturn]] void fail(const std::string& what) const;

  std::istream& in_;
  const Layout& layout_;
  std::size_t line_ = 0;
  std::optional<std::int64_t> last_t_;
  std::optional<std::int64_t> current_t_;
};

std::vector<Frame> read_frames(std::string_view text, const Layout& layout);

void write_frame(std::ostream& out, const Frame& frame, const Layout& layout);
std::string write_frames(const std::vector<Frame>& frames, const Layout& layout);

}  // namespace lateral
