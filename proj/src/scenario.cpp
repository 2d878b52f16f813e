#include "lateral/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "kv_document.hpp"
#include "lateral/error.hpp"

namespace lateral {

std::vector<std::vector<CellRef>> Route::slices(const Layout& layout) const {
  std::vector<std::vector<CellRef>> out;
  for (int i = from; i >= 0; --i) out.push_back({CellRef{lane, i}});
  if (!conflict_zone) return out;

  const auto& zone = layout.zones[*conflict_zone];
  auto row_slice = [&](int r) {
    std::vector<CellRef> s;
    for (int c = col0; c <= col1; ++c) s.push_back({*conflict_zone, zone.index(r, c)});
    return s;
  };
  auto col_slice = [&](int c) {
    std::vector<CellRef> s;
    for (int r = row0; r <= row1; ++r) s.push_back({*conflict_zone, zone.index(r, c)});
    return s;
  };
  switch (heading) {
    case Heading::Down: for (int r = row0; r <= row1; ++r) out.push_back(row_slice(r)); break;
    case Heading::Up: for (int r = row1; r >= row0; --r) out.push_back(row_slice(r)); break;
    case Heading::Right: for (int c = col0; c <= col1; ++c) out.push_back(col_slice(c)); break;
    case Heading::Left: for (int c = col1; c >= col0; --c) out.push_back(col_slice(c)); break;
  }
  return out;
}

bool VehicleScript::stopped_at(std::int64_t t) const {
  return std::any_of(stops.begin(), stops.end(), [t](const auto& s) { return t >= s.first && t < s.second; });
}

namespace {

// Where one vehicle is, second by second, while it is on its route.
struct Track {
  std::int64_t enter = 0;
  std::vector<int> heads;
  std::vector<char> moving;
  int length = 0;
  int path_size = 0;

  bool present(std::int64_t t) const { return t >= enter && t - enter < static_cast<std::int64_t>(heads.size()); }

  // Footprint slice range [lo, hi] at t.
  std::pair<int, int> span_at(std::int64_t t) const {
    int h = heads[static_cast<std::size_t>(t - enter)];
    return {std::max(0, h - length + 1), std::min(h, path_size - 1)};
  }

  bool moving_at(std::int64_t t) const { return moving[static_cast<std::size_t>(t - enter)] != 0; }
};

Track make_track(const VehicleScript& v, int path_size, std::int64_t end) {
  Track tr;
  tr.enter = v.enter;
  tr.length = v.length;
  tr.path_size = path_size;
  int h = v.head;
  for (std::int64_t t = v.enter; t < end; ++t) {
    if (h - v.length + 1 > path_size - 1) break;
    bool moving = !v.stopped_at(t);
    tr.heads.push_back(h);
    tr.moving.push_back(moving);
    if (moving) h += v.speed;
  }
  return tr;
}

struct Prepared {
  std::vector<std::vector<std::vector<CellRef>>> paths;  // by route
  std::vector<Track> tracks;                             // by vehicle
};

Prepared prepare(const ScenarioSpec& spec) {
  Prepared p;
  for (const auto& r : spec.routes) p.paths.push_back(r.slices(spec.layout));
  const auto end = spec.start + spec.duration;
  for (const auto& v : spec.vehicles)
    p.tracks.push_back(make_track(v, static_cast<int>(p.paths[v.route].size()), end));
  return p;
}

std::vector<CellRef> cells_at(const Prepared& p, const ScenarioSpec& spec, std::size_t v, std::int64_t t) {
  std::vector<CellRef> out;
  const auto& tr = p.tracks[v];
  if (!tr.present(t)) return out;
  auto [lo, hi] = tr.span_at(t);
  const auto& path = p.paths[spec.vehicles[v].route];
  for (int i = lo; i <= hi; ++i)
    for (const auto& c : path[static_cast<std::size_t>(i)]) out.push_back(c);
  return out;
}

Signal signal_at(const ScenarioSpec& spec, std::size_t approach, std::int64_t t) {
  for (const auto& iv : spec.signals[approach])
    if (t >= iv.start && t < iv.end) return iv.signal;
  return Signal::Red;
}

std::optional<std::string> collision_between(const ScenarioSpec& spec, const Prepared& p) {
  const auto end = spec.start + spec.duration;
  std::map<CellRef, std::size_t> owner;
  for (std::int64_t t = spec.start; t < end; ++t) {
    owner.clear();
    for (std::size_t v = 0; v < spec.vehicles.size(); ++v) {
      for (const auto& c : cells_at(p, spec, v, t)) {
        auto [it, fresh] = owner.emplace(c, v);
        if (!fresh)
          return "vehicles '" + spec.vehicles[it->second].id + "' and '" + spec.vehicles[v].id + "' collide at " +
                 describe(spec.layout, c) + " t=" + std::to_string(t);
      }
    }
  }
  return std::nullopt;
}

// Resolution of simultaneous stop-line crossings into one conflict zone:
// a single approach wins outright, otherwise the one not facing red, then the
// most recently green, then the smaller id.
std::size_t resolve_origin(const ScenarioSpec& spec, const std::set<std::size_t>& crossing,
                           const std::vector<std::optional<std::int64_t>>& last_green, std::int64_t t) {
  const auto& approaches = spec.layout.approaches;
  auto smallest_id = [&](const std::vector<std::size_t>& pool) {
    return *std::min_element(pool.begin(), pool.end(),
                             [&](std::size_t a, std::size_t b) { return approaches[a].id < approaches[b].id; });
  };
  std::vector<std::size_t> all(crossing.begin(), crossing.end());
  if (all.size() == 1) return all.front();
  std::vector<std::size_t> open;
  for (auto a : all)
    if (signal_at(spec, a, t) != Signal::Red) open.push_back(a);
  if (!open.empty()) return smallest_id(open);
  std::vector<std::size_t> recent;
  std::optional<std::int64_t> best;
  for (auto a : all) {
    if (!last_green[a]) continue;
    if (!best || *last_green[a] > *best) {
      best = last_green[a];
      recent.assign(1, a);
    } else if (*last_green[a] == *best) {
      recent.push_back(a);
    }
  }
  return smallest_id(recent.empty() ? all : recent);
}

// Entry-lane occupancy from vehicle footprints: contiguous same-motion runs of
// cells, kept when at least as long as the class threshold.
ApproachOccupancy lane_truth(const ScenarioSpec& spec, const std::vector<std::vector<char>>& lane_cells,
                             std::size_t approach) {
  ApproachOccupancy occ;
  const auto& th = spec.layout.thresholds;
  for (auto z : spec.layout.approaches[approach].lanes) {
    const auto& cls = lane_cells[z];
    const int n = static_cast<int>(cls.size());
    for (int i = 0; i < n;) {
      if (cls[static_cast<std::size_t>(i)] == 0) {
        ++i;
        continue;
      }
      int j = i;
      while (j < n && cls[static_cast<std::size_t>(j)] == cls[static_cast<std::size_t>(i)]) ++j;
      const bool moving = cls[static_cast<std::size_t>(i)] == 'm';
      if (j - i >= (moving ? th.moving : th.stationary)) {
        occ.occupied = true;
        occ.close_moving = occ.close_moving || moving;
        break;  // nearest visible run of this lane
      }
      i = j;
    }
  }
  return occ;
}

}  // namespace

std::optional<std::string> find_collision(const ScenarioSpec& spec) {
  return collision_between(spec, prepare(spec));
}

void validate_scenario(const ScenarioSpec& spec) {
  validate_layout(spec.layout);
  auto fail = [](const std::string& m) { throw ValidationError(m); };
  const auto& layout = spec.layout;
  if (spec.duration < 0) fail("scenario duration must be >= 0");
  if (spec.noise < 0.0 || spec.noise > 1.0) fail("noise rate must lie in [0, 1]");
  if (spec.signals.size() != layout.approaches.size()) fail("one signal timeline per approach is required");

  const auto end = spec.start + spec.duration;
  for (std::size_t a = 0; a < spec.signals.size(); ++a) {
    auto ivs = spec.signals[a];
    std::sort(ivs.begin(), ivs.end(), [](const auto& x, const auto& y) { return x.start < y.start; });
    const auto& id = layout.approaches[a].id;
    std::optional<std::int64_t> covered;
    for (const auto& iv : ivs) {
      if (iv.end <= iv.start) fail("empty signal interval for approach '" + id + "'");
      if (covered && iv.start != *covered)
        fail("signal timeline of approach '" + id + "' has a " + (iv.start < *covered ? "overlap" : "gap") +
             " at t=" + std::to_string(std::min(iv.start, *covered)));
      if (!covered && iv.start > spec.start && spec.duration > 0)
        fail("signal timeline of approach '" + id + "' starts after the scenario");
      covered = iv.end;
    }
    if (spec.duration > 0 && (!covered || *covered < end))
      fail("signal timeline of approach '" + id + "' ends before the scenario");
  }

  for (const auto& r : spec.routes) {
    if (r.lane >= layout.zones.size() || layout.zones[r.lane].kind != ZoneKind::Lane)
      fail("route '" + r.id + "' must start on a lane");
    if (r.from < 0 || r.from >= layout.zones[r.lane].width) fail("route '" + r.id + "' starts outside its lane");
    if (r.conflict_zone) {
      if (*r.conflict_zone >= layout.zones.size() || layout.zones[*r.conflict_zone].kind != ZoneKind::Conflict)
        fail("route '" + r.id + "' must cross a conflict zone");
      const auto& z = layout.zones[*r.conflict_zone];
      if (r.row0 < 0 || r.col0 < 0 || r.row1 >= z.height || r.col1 >= z.width || r.row0 > r.row1 || r.col0 > r.col1)
        fail("route '" + r.id + "' leaves conflict zone '" + z.id + "'");
    }
  }

  std::set<std::string> ids;
  for (const auto& v : spec.vehicles) {
    if (!ids.insert(v.id).second) fail("duplicate vehicle '" + v.id + "'");
    if (v.route >= spec.routes.size()) fail("vehicle '" + v.id + "' has no route");
    if (v.length < 1 || v.speed < 1) fail("vehicle '" + v.id + "' needs length >= 1 and speed >= 1");
    if (v.head < 0) fail("vehicle '" + v.id + "' starts before its route");
    if (v.enter < spec.start) fail("vehicle '" + v.id + "' enters before the scenario starts");
    for (const auto& s : v.stops)
      if (s.second < s.first) fail("vehicle '" + v.id + "' has an inverted stop interval");
  }
}

Rendered render(const ScenarioSpec& spec) {
  validate_scenario(spec);
  const auto& layout = spec.layout;
  const auto prepared = prepare(spec);
  if (auto c = collision_between(spec, prepared)) throw ValidationError("script collision: " + *c);

  const auto end = spec.start + spec.duration;
  const auto n_vehicles = spec.vehicles.size();
  Rendered out;

  std::mt19937_64 rng(spec.seed);
  auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

  std::vector<std::optional<std::int64_t>> last_green(layout.approaches.size());
  std::vector<std::optional<std::size_t>> origin(n_vehicles);
  std::vector<char> resolved(n_vehicles, 0);
  std::vector<std::vector<CellRef>> prev_cells(n_vehicles), cur_cells(n_vehicles);
  ExposureCounters counters = ExposureCounters::for_period(layout, spec.start);

  for (std::int64_t t = spec.start; t < end; ++t) {
    Frame f = blank_frame(layout, t);
    for (std::size_t a = 0; a < layout.approaches.size(); ++a) {
      f.signals[a] = signal_at(spec, a, t);
      if (f.signals[a] == Signal::Green) last_green[a] = t;
    }

    // Cells: vacated ones first, then occupied ones on top.
    for (std::size_t v = 0; v < n_vehicles; ++v) {
      cur_cells[v] = cells_at(prepared, spec, v, t);
      for (const auto& c : prev_cells[v]) f.cells[c.zone][static_cast<std::size_t>(c.cell)] = CellState::EndOfPresence;
    }
    std::vector<std::vector<char>> lane_class(layout.zones.size());
    for (std::size_t z = 0; z < layout.zones.size(); ++z)
      if (layout.zones[z].kind == ZoneKind::Lane) lane_class[z].assign(static_cast<std::size_t>(layout.zones[z].width), 0);
    for (std::size_t v = 0; v < n_vehicles; ++v) {
      if (cur_cells[v].empty()) continue;
      const bool moving = prepared.tracks[v].moving_at(t);
      for (const auto& c : cur_cells[v]) {
        f.cells[c.zone][static_cast<std::size_t>(c.cell)] =
            moving ? CellState::MovingPresence : CellState::StationaryPresence;
        if (!lane_class[c.zone].empty()) lane_class[c.zone][static_cast<std::size_t>(c.cell)] = moving ? 'm' : 's';
      }
    }

    // Stop-line crossings during this second, per conflict zone.
    std::map<std::size_t, std::set<std::size_t>> crossing;
    std::vector<int> cz_count(n_vehicles, 0);
    std::vector<char> crossed(n_vehicles, 0);
    for (std::size_t v = 0; v < n_vehicles; ++v) {
      const auto& route = spec.routes[spec.vehicles[v].route];
      if (!route.conflict_zone) continue;
      for (const auto& c : cur_cells[v]) cz_count[v] += c.zone == *route.conflict_zone;
      bool was_on_lane = std::any_of(prev_cells[v].begin(), prev_cells[v].end(),
                                     [&](const CellRef& c) { return c.zone == route.lane; });
      if (cz_count[v] > 0 && was_on_lane && cur_cells[v] != prev_cells[v]) {
        crossed[v] = 1;
        crossing[*route.conflict_zone].insert(*layout.approach_index(layout.zones[route.lane].approach));
      }
    }

    // A vehicle takes its origin the first second it is visible in the conflict zone.
    const auto& th = layout.thresholds;
    for (std::size_t v = 0; v < n_vehicles; ++v) {
      if (resolved[v] || cz_count[v] == 0) continue;
      const bool moving = prepared.tracks[v].moving_at(t);
      if (cz_count[v] < (moving ? th.moving : th.stationary)) continue;
      resolved[v] = 1;
      const auto cz = *spec.routes[spec.vehicles[v].route].conflict_zone;
      if (crossed[v]) origin[v] = resolve_origin(spec, crossing[cz], last_green, t);
      else out.unattributed.push_back(spec.vehicles[v].id);
    }

    if (t >= counters.period_end) {
      auto rows = finalize_period(counters);
      out.truth_periods.insert(out.truth_periods.end(), rows.begin(), rows.end());
    }
    std::vector<ApproachOccupancy> occupancy;
    for (std::size_t a = 0; a < layout.approaches.size(); ++a) occupancy.push_back(lane_truth(spec, lane_class, a));
    for (std::size_t s = 0; s < layout.approaches.size(); ++s) {
      SecondFlags fl{t, s, false, false, false};
      for (std::size_t v = 0; v < n_vehicles; ++v)
        if (origin[v] == s && prepared.tracks[v].present(t) && prepared.tracks[v].moving_at(t) &&
            cz_count[v] >= th.moving)
          fl.crossing = true;
      if (fl.crossing) {
        auto& c = counters.streams[s];
        ++c.z;
        auto cross = layout.cross_traffic[s];
        if (cross && occupancy[*cross].occupied) {
          fl.critical = true;
          ++c.y;
          if (occupancy[*cross].close_moving) {
            fl.critical_moving = true;
            ++c.y_moving;
          }
        } else {
          ++c.x;
        }
      }
      out.truth.push_back(fl);
    }

    if (spec.noise > 0.0) {
      for (auto& zone : f.cells)
        for (auto& c : zone)
          if (uniform() < spec.noise) c = static_cast<CellState>(rng() % 4);
    }
    out.frames.push_back(std::move(f));
    std::swap(prev_cells, cur_cells);
  }
  if (spec.duration > 0) {
    auto rows = finalize_period(counters);
    out.truth_periods.insert(out.truth_periods.end(), rows.begin(), rows.end());
  }
  return out;
}

namespace {

Heading parse_heading(const detail::KvLine& l) {
  const auto& d = l.require("dir");
  if (d == "down") return Heading::Down;
  if (d == "up") return Heading::Up;
  if (d == "right") return Heading::Right;
  if (d == "left") return Heading::Left;
  throw ParseError(l.line, "dir must be one of down, up, right, left");
}

std::pair<std::int64_t, std::int64_t> parse_interval(std::string_view s, std::size_t line) {
  auto dash = s.find('-');
  auto a = detail::to_int(s.substr(0, dash));
  auto b = dash == std::string_view::npos ? std::nullopt : detail::to_int(s.substr(dash + 1));
  if (!a || !b) throw ParseError(line, "expected <start>-<end>, got '" + std::string(s) + "'");
  return {*a, *b};
}

std::pair<int, int> parse_range(const detail::KvLine& l, std::string_view key) {
  auto [a, b] = parse_interval(l.require(key), l.line);
  return {static_cast<int>(a), static_cast<int>(b)};
}

ScenarioSpec parse_body(const std::vector<detail::KvLine>& doc, Layout layout) {
  ScenarioSpec spec;
  spec.layout = std::move(layout);
  spec.signals.resize(spec.layout.approaches.size());
  std::vector<bool> has_signal(spec.layout.approaches.size(), false);
  bool has_header = false;

  for (const auto& l : doc) {
    if (l.section == "scenario") {
      l.allow_only({"layout", "duration", "start", "noise", "seed"});
      has_header = true;
      spec.duration = detail::require_int(l, "duration");
      if (l.find("start")) spec.start = detail::require_int(l, "start");
      if (l.find("seed")) spec.seed = detail::require_int<std::uint64_t>(l, "seed");
      if (const auto* n = l.find("noise")) {
        try {
          std::size_t used = 0;
          spec.noise = std::stod(*n, &used);
          if (used != n->size()) throw std::invalid_argument(*n);
        } catch (const std::exception&) {
          throw ParseError(l.line, "bad noise rate '" + *n + "'");
        }
      }
    } else if (l.section == "signal") {
      l.allow_only({"approach", "timeline"});
      auto a = spec.layout.approach_index(l.require("approach"));
      if (!a) throw ValidationError("line " + std::to_string(l.line) + ": unknown approach '" + l.require("approach") + "'");
      if (has_signal[*a]) throw ValidationError("line " + std::to_string(l.line) + ": duplicate signal timeline");
      has_signal[*a] = true;
      for (auto part : detail::split_top(l.require("timeline"), ',')) {
        auto colon = part.find(':');
        auto sig = colon == std::string_view::npos ? std::nullopt : signal_from_code(part.substr(0, colon));
        if (!sig) throw ParseError(l.line, "expected <R|G|A>:<start>-<end>, got '" + std::string(part) + "'");
        auto [s, e] = parse_interval(part.substr(colon + 1), l.line);
        spec.signals[*a].push_back({*sig, s, e});
      }
    } else if (l.section == "route") {
      l.allow_only({"id", "lane", "from", "zone", "rows", "cols", "dir"});
      Route r;
      r.id = l.require("id");
      for (const auto& other : spec.routes)
        if (other.id == r.id) throw ValidationError("line " + std::to_string(l.line) + ": duplicate route '" + r.id + "'");
      auto lane = spec.layout.zone_index(l.require("lane"));
      if (!lane) throw ValidationError("line " + std::to_string(l.line) + ": unknown zone '" + l.require("lane") + "'");
      r.lane = *lane;
      r.from = l.find("from") ? detail::require_int<int>(l, "from") : spec.layout.zones[*lane].width - 1;
      if (const auto* zid = l.find("zone")) {
        auto cz = spec.layout.zone_index(*zid);
        if (!cz) throw ValidationError("line " + std::to_string(l.line) + ": unknown zone '" + *zid + "'");
        r.conflict_zone = *cz;
        std::tie(r.row0, r.row1) = parse_range(l, "rows");
        std::tie(r.col0, r.col1) = parse_range(l, "cols");
        r.heading = parse_heading(l);
      }
      spec.routes.push_back(std::move(r));
    } else if (l.section == "vehicle") {
      l.allow_only({"id", "route", "enter", "head", "len", "speed", "stops"});
      VehicleScript v;
      v.id = l.require("id");
      const auto& rid = l.require("route");
      auto it = std::find_if(spec.routes.begin(), spec.routes.end(), [&](const Route& r) { return r.id == rid; });
      if (it == spec.routes.end())
        throw ValidationError("line " + std::to_string(l.line) + ": unknown route '" + rid + "' (declare routes first)");
      v.route = static_cast<std::size_t>(it - spec.routes.begin());
      v.enter = detail::require_int(l, "enter");
      if (l.find("head")) v.head = detail::require_int<int>(l, "head");
      if (l.find("len")) v.length = detail::require_int<int>(l, "len");
      if (l.find("speed")) v.speed = detail::require_int<int>(l, "speed");
      if (const auto* stops = l.find("stops"))
        for (auto part : detail::split_top(*stops, ',')) v.stops.push_back(parse_interval(part, l.line));
      spec.vehicles.push_back(std::move(v));
    } else {
      throw ParseError(l.line, "unknown section [" + l.section + "]");
    }
  }
  if (!has_header) throw ParseError(0, "missing [scenario] section");
  for (std::size_t a = 0; a < has_signal.size(); ++a)
    if (!has_signal[a]) throw ValidationError("no signal timeline for approach '" + spec.layout.approaches[a].id + "'");
  validate_scenario(spec);
  return spec;
}

}  // namespace

ScenarioSpec parse_scenario(std::string_view text, Layout layout) {
  return parse_body(detail::parse_kv_document(text), std::move(layout));
}

ScenarioSpec parse_scenario(std::string_view text, const std::filesystem::path& base_dir) {
  auto doc = detail::parse_kv_document(text);
  const detail::KvLine* header = nullptr;
  for (const auto& l : doc)
    if (l.section == "scenario") header = &l;
  if (!header) throw ParseError(0, "missing [scenario] section");
  return parse_body(doc, load_layout(base_dir / header->require("layout")));
}

ScenarioSpec load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("scenario not found: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), path.parent_path());
}

ScenarioSpec random_scenario(const Layout& layout, const std::vector<Route>& routes, std::uint64_t seed,
                             const RandomScenarioOptions& options) {
  std::mt19937_64 rng(seed);
  auto below = [&rng](std::uint64_t n) { return static_cast<std::int64_t>(rng() % n); };

  ScenarioSpec spec;
  spec.layout = layout;
  spec.duration = options.duration;
  spec.noise = options.noise;
  spec.seed = seed;
  spec.routes = routes;

  // Alternating phases: one approach green at a time, amber and all-red in between.
  const auto n = layout.approaches.size();
  spec.signals.assign(n, {});
  std::int64_t t = 0;
  std::size_t turn = static_cast<std::size_t>(below(n));
  while (t < spec.duration) {
    const auto green = 8 + below(20), amber = below(3), all_red = below(3);
    for (std::size_t a = 0; a < n; ++a) {
      if (a == turn) {
        spec.signals[a].push_back({Signal::Green, t, t + green});
        if (amber) spec.signals[a].push_back({Signal::Amber, t + green, t + green + amber});
        spec.signals[a].push_back({Signal::Red, t + green + amber, t + green + amber + all_red + 1});
      } else {
        spec.signals[a].push_back({Signal::Red, t, t + green + amber + all_red + 1});
      }
    }
    t += green + amber + all_red + 1;
    turn = (turn + 1) % n;
  }

  for (int i = 0; i < options.vehicles; ++i) {
    VehicleScript v;
    v.id = "v" + std::to_string(i);
    v.route = static_cast<std::size_t>(below(routes.size()));
    v.enter = below(static_cast<std::uint64_t>(std::max<std::int64_t>(1, spec.duration)));
    v.length = 2 + static_cast<int>(below(3));
    v.speed = 1 + static_cast<int>(below(5) == 0);
    v.head = static_cast<int>(below(4));
    const int n_stops = static_cast<int>(below(3));
    for (int k = 0; k < n_stops; ++k) {
      auto s = v.enter + below(30);
      v.stops.push_back({s, s + 1 + below(15)});
    }
    spec.vehicles.push_back(std::move(v));
    if (find_collision(spec)) spec.vehicles.pop_back();
  }
  validate_scenario(spec);
  return spec;
}

}  // namespace lateral
