#include "lateral/layout.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "kv_document.hpp"

namespace lateral {

using detail::KvLine;

std::optional<std::size_t> Layout::zone_index(std::string_view id) const {
  for (std::size_t i = 0; i < zones.size(); ++i)
    if (zones[i].id == id) return i;
  return std::nullopt;
}

std::optional<std::size_t> Layout::approach_index(std::string_view id) const {
  for (std::size_t i = 0; i < approaches.size(); ++i)
    if (approaches[i].id == id) return i;
  return std::nullopt;
}

std::vector<std::size_t> Layout::conflict_zones() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < zones.size(); ++i)
    if (zones[i].kind == ZoneKind::Conflict) out.push_back(i);
  return out;
}

std::vector<std::size_t> Layout::stop_lines_into(std::size_t zone) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < stop_lines.size(); ++i)
    if (stop_lines[i].conflict_zone == zone) out.push_back(i);
  return out;
}

std::optional<CellState> Layout::decode(char c) const {
  if (auto raw = raw_codes[static_cast<unsigned char>(c)]) return raw;
  return from_code(c);
}

std::string describe(const Layout& layout, const CellRef& ref) {
  const auto& z = layout.zones.at(ref.zone);
  if (z.kind == ZoneKind::Lane) return z.id + ":" + std::to_string(ref.cell);
  return z.id + ":(" + std::to_string(z.row_of(ref.cell)) + "," + std::to_string(z.col_of(ref.cell)) + ")";
}

namespace {

struct PendingLane {
  std::size_t zone;
  std::string approach;
  std::size_t line;
};

std::pair<int, int> parse_coord(std::string_view s, std::size_t line) {
  if (s.size() < 5 || s.front() != '(' || s.back() != ')')
    throw ParseError(line, "expected (row,col), got '" + std::string(s) + "'");
  auto inner = s.substr(1, s.size() - 2);
  auto comma = inner.find(',');
  auto r = detail::to_int<int>(detail::trim(inner.substr(0, comma)));
  auto c = comma == std::string_view::npos ? std::nullopt
                                           : detail::to_int<int>(detail::trim(inner.substr(comma + 1)));
  if (!r || !c) throw ParseError(line, "bad coordinate '" + std::string(s) + "'");
  return {*r, *c};
}

// `Z:3`, `Z:0-2`, `Z:(r,c)`, `Z:(r0,c0)-(r1,c1)`; comma-separated.
std::vector<CellRef> parse_subset(const Layout& layout, std::string_view value, std::size_t line) {
  std::vector<CellRef> out;
  for (auto part : detail::split_top(value, ',')) {
    auto colon = part.find(':');
    if (colon == std::string_view::npos || colon == 0)
      throw ParseError(line, "expected zone:cells, got '" + std::string(part) + "'");
    auto zid = part.substr(0, colon);
    auto range = part.substr(colon + 1);
    auto zi = layout.zone_index(zid);
    if (!zi) throw ValidationError("line " + std::to_string(line) + ": unknown zone '" + std::string(zid) + "'");
    const auto& zone = layout.zones[*zi];

    if (!range.empty() && range.front() == '(') {
      auto close = range.find(')');
      auto first = parse_coord(range.substr(0, close + 1), line);
      auto second = first;
      if (close + 1 < range.size()) {
        if (range[close + 1] != '-') throw ParseError(line, "bad cell range '" + std::string(range) + "'");
        second = parse_coord(range.substr(close + 2), line);
      }
      for (int r = std::min(first.first, second.first); r <= std::max(first.first, second.first); ++r)
        for (int c = std::min(first.second, second.second); c <= std::max(first.second, second.second); ++c) {
          if (r < 0 || c < 0 || r >= zone.height || c >= zone.width)
            throw ValidationError("line " + std::to_string(line) + ": cell (" + std::to_string(r) + "," +
                                  std::to_string(c) + ") outside zone '" + zone.id + "'");
          out.push_back({*zi, zone.index(r, c)});
        }
    } else {
      auto dash = range.find('-');
      auto lo = detail::to_int<int>(range.substr(0, dash));
      auto hi = dash == std::string_view::npos ? lo : detail::to_int<int>(range.substr(dash + 1));
      if (!lo || !hi) throw ParseError(line, "bad cell range '" + std::string(range) + "'");
      if (zone.kind != ZoneKind::Lane)
        throw ValidationError("line " + std::to_string(line) + ": zone '" + zone.id +
                              "' is two-dimensional; use (row,col) cells");
      for (int i = std::min(*lo, *hi); i <= std::max(*lo, *hi); ++i) {
        if (i < 0 || i >= zone.width)
          throw ValidationError("line " + std::to_string(line) + ": cell " + std::to_string(i) +
                                " outside lane '" + zone.id + "'");
        out.push_back({*zi, i});
      }
    }
  }
  return out;
}

std::size_t require_approach(const Layout& layout, const KvLine& l, const std::string& id) {
  auto ai = layout.approach_index(id);
  if (!ai) throw ValidationError("line " + std::to_string(l.line) + ": unknown approach '" + id + "'");
  return *ai;
}

}  // namespace

Layout parse_layout(std::string_view text) {
  auto doc = detail::parse_kv_document(text);
  Layout layout;
  std::vector<PendingLane> lanes;
  std::vector<const KvLine*> approach_lines, stop_lines, cross_lines;

  // Zones and approaches first so later sections can refer to them in any order.
  for (const auto& l : doc) {
    if (l.section == "zone") {
      l.allow_only({"id", "kind", "w", "h", "len", "approach"});
      Zone z;
      z.id = l.require("id");
      if (layout.zone_index(z.id)) throw ValidationError("line " + std::to_string(l.line) + ": duplicate zone '" + z.id + "'");
      const auto& kind = l.require("kind");
      if (kind == "conflict") {
        z.kind = ZoneKind::Conflict;
        z.width = detail::require_int<int>(l, "w");
        z.height = detail::require_int<int>(l, "h");
      } else if (kind == "lane") {
        z.kind = ZoneKind::Lane;
        z.width = detail::require_int<int>(l, "len");
        z.height = 1;
        z.approach = l.require("approach");
        lanes.push_back({layout.zones.size(), z.approach, l.line});
      } else {
        throw ParseError(l.line, "unknown zone kind '" + kind + "'");
      }
      if (z.width < 1 || z.height < 1)
        throw ValidationError("line " + std::to_string(l.line) + ": zone '" + z.id + "' must have at least one cell");
      layout.zones.push_back(std::move(z));
    } else if (l.section == "approach") {
      l.allow_only({"id", "signal", "lanes"});
      Approach a;
      a.id = l.require("id");
      if (layout.approach_index(a.id))
        throw ValidationError("line " + std::to_string(l.line) + ": duplicate approach '" + a.id + "'");
      a.signal = l.find("signal") ? *l.find("signal") : a.id;
      layout.approaches.push_back(std::move(a));
      approach_lines.push_back(&l);
    } else if (l.section == "stopline") {
      stop_lines.push_back(&l);
    } else if (l.section == "cross") {
      cross_lines.push_back(&l);
    } else if (l.section == "thresholds") {
      l.allow_only({"moving", "stationary"});
      if (l.find("moving")) layout.thresholds.moving = detail::require_int<int>(l, "moving");
      if (l.find("stationary")) layout.thresholds.stationary = detail::require_int<int>(l, "stationary");
    } else if (l.section == "period") {
      l.allow_only({"T"});
      layout.period = detail::require_int(l, "T");
    } else if (l.section == "codes") {
      for (const auto& e : l.entries) {
        auto target = e.value.size() == 1 ? from_code(e.value[0]) : std::nullopt;
        if (e.key.size() != 1 || !target)
          throw ParseError(l.line, "code mapping must be <char>=<one of . m s e>, got '" + e.key + "=" + e.value + "'");
        layout.raw_codes[static_cast<unsigned char>(e.key[0])] = target;
      }
    } else {
      throw ParseError(l.line, "unknown section [" + l.section + "]");
    }
  }

  layout.cross_traffic.assign(layout.approaches.size(), std::nullopt);

  for (std::size_t i = 0; i < approach_lines.size(); ++i) {
    const auto& l = *approach_lines[i];
    auto& a = layout.approaches[i];
    for (auto id : detail::split_top(l.require("lanes"), ',')) {
      auto zi = layout.zone_index(id);
      if (!zi) throw ValidationError("line " + std::to_string(l.line) + ": unknown zone '" + std::string(id) + "'");
      if (layout.zones[*zi].kind != ZoneKind::Lane)
        throw ValidationError("line " + std::to_string(l.line) + ": zone '" + std::string(id) + "' is not a lane");
      if (layout.zones[*zi].approach != a.id)
        throw ValidationError("line " + std::to_string(l.line) + ": lane '" + std::string(id) +
                              "' declares approach '" + layout.zones[*zi].approach + "'");
      a.lanes.push_back(*zi);
    }
  }
  for (const auto& p : lanes) {
    auto ai = layout.approach_index(p.approach);
    if (!ai) throw ValidationError("line " + std::to_string(p.line) + ": unknown approach '" + p.approach + "'");
    const auto& listed = layout.approaches[*ai].lanes;
    if (std::find(listed.begin(), listed.end(), p.zone) == listed.end())
      throw ValidationError("line " + std::to_string(p.line) + ": lane '" + layout.zones[p.zone].id +
                            "' is not listed by approach '" + p.approach + "'");
  }

  for (const auto* lp : stop_lines) {
    const auto& l = *lp;
    l.allow_only({"id", "approach", "upstream", "downstream"});
    StopLine s;
    s.id = l.require("id");
    for (const auto& other : layout.stop_lines)
      if (other.id == s.id) throw ValidationError("line " + std::to_string(l.line) + ": duplicate stop line '" + s.id + "'");
    s.approach = require_approach(layout, l, l.require("approach"));
    s.upstream = parse_subset(layout, l.require("upstream"), l.line);
    s.downstream = parse_subset(layout, l.require("downstream"), l.line);
    if (!s.downstream.empty()) s.conflict_zone = s.downstream.front().zone;
    try {
      std::set<CellRef> up(s.upstream.begin(), s.upstream.end());
      std::set<CellRef> down(s.downstream.begin(), s.downstream.end());
      if (up.size() != s.upstream.size() || down.size() != s.downstream.size())
        throw ValidationError("repeated cell in subset");
      for (const auto& c : s.upstream)
        if (down.count(c)) throw ValidationError("upstream and downstream subsets overlap at " + describe(layout, c));
    } catch (const ValidationError& e) {
      throw ValidationError("line " + std::to_string(l.line) + ": stop line '" + s.id + "': " + e.what());
    }
    layout.stop_lines.push_back(std::move(s));
  }

  for (const auto* lp : cross_lines) {
    for (const auto& e : lp->entries) {
      auto from = require_approach(layout, *lp, e.key);
      auto to = require_approach(layout, *lp, e.value);
      if (layout.cross_traffic[from] && *layout.cross_traffic[from] != to)
        throw ValidationError("line " + std::to_string(lp->line) + ": conflicting cross-traffic for '" + e.key + "'");
      layout.cross_traffic[from] = to;
    }
  }

  validate_layout(layout);
  return layout;
}

Layout load_layout(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("layout not found: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_layout(ss.str());
}

void validate_layout(const Layout& layout) {
  auto fail = [](const std::string& msg) { throw ValidationError(msg); };

  if (layout.conflict_zones().empty()) fail("layout has no conflict zone");
  if (layout.thresholds.moving < 1 || layout.thresholds.stationary < 1) fail("group thresholds must be >= 1");
  if (layout.period < 1) fail("period T must be >= 1 second");
  if (layout.cross_traffic.size() != layout.approaches.size()) fail("cross-traffic table size mismatch");

  for (const auto& z : layout.zones)
    if (z.width < 1 || z.height < 1) fail("zone '" + z.id + "' must have at least one cell");

  for (const auto& a : layout.approaches)
    if (a.lanes.empty()) fail("approach '" + a.id + "' has no lanes");

  for (const auto& s : layout.stop_lines) {
    const auto where = "stop line '" + s.id + "': ";
    if (s.upstream.empty() || s.downstream.empty()) fail(where + "upstream and downstream subsets must be nonempty");
    const auto& lanes = layout.approaches.at(s.approach).lanes;
    for (const auto& c : s.upstream) {
      if (std::find(lanes.begin(), lanes.end(), c.zone) == lanes.end())
        fail(where + "upstream cell " + describe(layout, c) + " is not on a lane of approach '" +
             layout.approaches[s.approach].id + "'");
    }
    for (const auto& c : s.downstream) {
      if (layout.zones.at(c.zone).kind != ZoneKind::Conflict)
        fail(where + "downstream cell " + describe(layout, c) + " is not in a conflict zone");
      if (c.zone != s.conflict_zone) fail(where + "downstream cells span several conflict zones");
    }
    for (const auto& c : s.upstream) {
      if (std::find(s.downstream.begin(), s.downstream.end(), c) != s.downstream.end())
        fail(where + "upstream and downstream subsets overlap");
    }
  }

  for (auto cz : layout.conflict_zones()) {
    std::set<std::size_t> feeding;
    for (auto si : layout.stop_lines_into(cz)) feeding.insert(layout.stop_lines[si].approach);
    if (feeding.size() > 2)
      fail("conflict zone '" + layout.zones[cz].id + "' is fed by more than two approaches");
  }

  for (std::size_t a = 0; a < layout.cross_traffic.size(); ++a) {
    auto b = layout.cross_traffic[a];
    if (!b) continue;
    if (*b == a) fail("approach '" + layout.approaches[a].id + "' cannot be its own cross traffic");
    if (layout.cross_traffic[*b] != a)
      fail("cross traffic is not symmetric: " + layout.approaches[a].id + "=" + layout.approaches[*b].id +
           " without the reverse");
  }
}

}  // namespace lateral
