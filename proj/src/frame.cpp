#include "lateral/frame.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include "kv_document.hpp"
#include "lateral/error.hpp"

namespace lateral {

Frame blank_frame(const Layout& layout, std::int64_t t) {
  Frame f;
  f.t = t;
  f.cells.reserve(layout.zones.size());
  for (const auto& z : layout.zones) f.cells.emplace_back(static_cast<std::size_t>(z.cell_count()), CellState::Empty);
  f.signals.assign(layout.approaches.size(), Signal::Red);
  return f;
}

FrameReader::FrameReader(std::istream& in, const Layout& layout) : in_(in), layout_(layout) {}

bool FrameReader::getline(std::string& out) {
  if (!std::getline(in_, out)) return false;
  ++line_;
  if (!out.empty() && out.back() == '\r') out.pop_back();
  return true;
}

void FrameReader::fail(const std::string& what) const {
  if (current_t_) throw ParseError(line_, "t=" + std::to_string(*current_t_) + ": " + what);
  throw ParseError(line_, what);
}

std::optional<Frame> FrameReader::next() {
  std::string line;
  current_t_.reset();
  if (!getline(line)) return std::nullopt;

  auto head = detail::split_ws(line);
  if (head.size() != 2 || head[0] != "FRAME") fail("expected 'FRAME <t>'");
  auto t = detail::to_int(head[1]);
  if (!t) fail("bad frame index '" + std::string(head[1]) + "'");
  current_t_ = *t;
  if (last_t_ && *t != *last_t_ + 1) {
    if (*t <= *last_t_) fail("frame index regresses (previous t=" + std::to_string(*last_t_) + ")");
    fail("gap in frame stream: expected t=" + std::to_string(*last_t_ + 1));
  }

  Frame f;
  f.t = *t;
  f.cells.resize(layout_.zones.size());
  for (std::size_t zi = 0; zi < layout_.zones.size(); ++zi) {
    const auto& zone = layout_.zones[zi];
    if (!getline(line)) fail("unexpected end of stream, expected 'ZONE " + zone.id + "'");
    auto zh = detail::split_ws(line);
    if (zh.size() != 2 || zh[0] != "ZONE") fail("expected 'ZONE " + zone.id + "'");
    if (zh[1] != zone.id) fail("expected zone '" + zone.id + "', got '" + std::string(zh[1]) + "'");

    auto& cells = f.cells[zi];
    cells.reserve(static_cast<std::size_t>(zone.cell_count()));
    for (int r = 0; r < zone.height; ++r) {
      if (!getline(line)) fail("unexpected end of stream inside zone '" + zone.id + "'");
      if (static_cast<int>(line.size()) != zone.width)
        fail("zone '" + zone.id + "' row " + std::to_string(r) + " has " + std::to_string(line.size()) +
             " cells, expected " + std::to_string(zone.width));
      for (char c : line) {
        auto s = layout_.decode(c);
        if (!s) fail("unknown cell state '" + std::string(1, c) + "' in zone '" + zone.id + "'");
        cells.push_back(*s);
      }
    }
  }

  f.signals.resize(layout_.approaches.size());
  for (std::size_t ai = 0; ai < layout_.approaches.size(); ++ai) {
    const auto& id = layout_.approaches[ai].id;
    if (!getline(line)) fail("unexpected end of stream, expected 'SIG " + id + "'");
    auto sig = detail::split_ws(line);
    if (sig.size() != 3 || sig[0] != "SIG") fail("expected 'SIG " + id + " <R|G|A>'");
    if (sig[1] != id) fail("expected signal for approach '" + id + "', got '" + std::string(sig[1]) + "'");
    auto s = signal_from_code(sig[2]);
    if (!s) fail("unknown signal state '" + std::string(sig[2]) + "'");
    f.signals[ai] = *s;
  }

  if (!getline(line) || line != "END") fail("expected 'END'");
  last_t_ = *t;
  return f;
}

std::vector<Frame> read_frames(std::string_view text, const Layout& layout) {
  std::istringstream in{std::string(text)};
  FrameReader reader(in, layout);
  std::vector<Frame> out;
  while (auto f = reader.next()) out.push_back(std::move(*f));
  return out;
}

void write_frame(std::ostream& out, const Frame& frame, const Layout& layout) {
  out << "FRAME " << frame.t << '\n';
  std::string row;
  for (std::size_t zi = 0; zi < layout.zones.size(); ++zi) {
    const auto& zone = layout.zones[zi];
    out << "ZONE " << zone.id << '\n';
    for (int r = 0; r < zone.height; ++r) {
      row.clear();
      for (int c = 0; c < zone.width; ++c) row.push_back(to_code(frame.cells[zi][static_cast<std::size_t>(zone.index(r, c))]));
      out << row << '\n';
    }
  }
  for (std::size_t ai = 0; ai < layout.approaches.size(); ++ai)
    out << "SIG " << layout.approaches[ai].id << ' ' << to_code(frame.signals[ai]) << '\n';
  out << "END\n";
}

std::string write_frames(const std::vector<Frame>& frames, const Layout& layout) {
  std::ostringstream out;
  for (const auto& f : frames) write_frame(out, f, layout);
  return out.str();
}

}  // namespace lateral
