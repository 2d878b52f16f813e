#pragma once

// Shared reader for the `[section] key=value key=value` documents used by
// layouts and scenarios.

#include <charconv>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lateral/error.hpp"

namespace lateral::detail {

struct KvEntry {
  std::string key;
  std::string value;
};

struct KvLine {
  std::size_t line = 0;
  std::string section;
  std::vector<KvEntry> entries;

  const std::string* find(std::string_view key) const {
    for (const auto& e : entries)
      if (e.key == key) return &e.value;
    return nullptr;
  }

  const std::string& require(std::string_view key) const {
    if (const auto* v = find(key)) return *v;
    throw ParseError(line, "[" + section + "] missing field '" + std::string(key) + "'");
  }

  void allow_only(std::initializer_list<std::string_view> keys) const {
    for (const auto& e : entries) {
      bool known = false;
      for (auto k : keys) known = known || e.key == k;
      if (!known) throw ParseError(line, "[" + section + "] unknown field '" + e.key + "'");
    }
  }
};

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

/// Splits on `sep` outside parentheses.
inline std::vector<std::string_view> split_top(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    else if (s[i] == ')') --depth;
    else if (s[i] == sep && depth == 0) {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  out.push_back(s.substr(start));
  return out;
}

template <typename Int = std::int64_t>
std::optional<Int> to_int(std::string_view s) {
  Int v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
  return v;
}

template <typename Int = std::int64_t>
Int require_int(const KvLine& l, std::string_view key) {
  const auto& raw = l.require(key);
  auto v = to_int<Int>(raw);
  if (!v) throw ParseError(l.line, "field '" + std::string(key) + "' is not an integer: '" + raw + "'");
  return *v;
}

/// Parses a whole document. Blank lines and `#` comments are skipped.
inline std::vector<KvLine> parse_kv_document(std::string_view text) {
  std::vector<KvLine> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    auto hash = raw.find('#');
    auto body = trim(raw.substr(0, hash));
    if (body.empty()) continue;
    if (body.front() != '[') throw ParseError(line_no, "expected '[section]'");
    auto close = body.find(']');
    if (close == std::string_view::npos) throw ParseError(line_no, "unterminated section name");

    KvLine kv;
    kv.line = line_no;
    kv.section = std::string(trim(body.substr(1, close - 1)));
    for (auto tok : split_ws(body.substr(close + 1))) {
      auto eq = tok.find('=');
      if (eq == std::string_view::npos || eq == 0)
        throw ParseError(line_no, "expected key=value, got '" + std::string(tok) + "'");
      auto key = std::string(tok.substr(0, eq));
      if (kv.find(key)) throw ParseError(line_no, "duplicate field '" + key + "'");
      kv.entries.push_back({std::move(key), std::string(tok.substr(eq + 1))});
    }
    out.push_back(std::move(kv));
  }
  return out;
}

}  // namespace lateral::detail
