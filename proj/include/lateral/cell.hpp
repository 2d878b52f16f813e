#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

namespace lateral {

/// Occupancy dynamics of one grid unit over one second.
enum class CellState : std::uint8_t {
  Empty,
  MovingPresence,
  StationaryPresence,
  EndOfPresence,
};

constexpr bool is_presence(CellState s) { return s != CellState::Empty; }

constexpr bool is_movement(CellState s) {
  return s == CellState::MovingPresence || s == CellState::EndOfPresence;
}

constexpr char to_code(CellState s) {
  switch (s) {
    case CellState::Empty: return '.';
    case CellState::MovingPresence: return 'm';
    case CellState::StationaryPresence: return 's';
    case CellState::EndOfPresence: return 'e';
  }
  return '?';
}

constexpr std::optional<CellState> from_code(char c) {
  switch (c) {
    case '.': return CellState::Empty;
    case 'm': return CellState::MovingPresence;
    case 's': return CellState::StationaryPresence;
    case 'e': return CellState::EndOfPresence;
    default: return std::nullopt;
  }
}

enum class Signal : std::uint8_t { Red, Green, Amber };

constexpr char to_code(Signal s) {
  switch (s) {
    case Signal::Red: return 'R';
    case Signal::Green: return 'G';
    case Signal::Amber: return 'A';
  }
  return '?';
}

constexpr std::optional<Signal> signal_from_code(std::string_view c) {
  if (c == "R") return Signal::Red;
  if (c == "G") return Signal::Green;
  if (c == "A") return Signal::Amber;
  return std::nullopt;
}

}  // namespace lateral
