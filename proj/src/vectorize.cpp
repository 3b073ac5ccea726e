#include "actfloor/vectorize.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "actfloor/grid.hpp"

namespace actfloor {

std::string_view condition_name(SuccessCondition c) {
  switch (c) {
    case SuccessCondition::ClosedRooms: return "ClosedRooms";
    case SuccessCondition::BalancedTypes: return "BalancedTypes";
    case SuccessCondition::LivingConnectivity: return "LivingConnectivity";
  }
  return "?";
}

bool SuccessReport::failed(SuccessCondition c) const {
  return std::find(failed_conditions.begin(), failed_conditions.end(), c) != failed_conditions.end();
}

// ---------------------------------------------------------------------------
// Walls

Mask extract_walls(const LabelImage& category) {
  const int w = category.width(), h = category.height();
  Mask evidence(w, h, 0);
  for (std::size_t i = 0; i < category.size(); ++i) evidence.pixels()[i] = is_structural(category.pixels()[i]);
  Mask out(w, h, 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      int n = 0;
      for (Point d : kNeighbors8) n += evidence.in_bounds(x + d.x, y + d.y) && evidence(x + d.x, y + d.y);
      out(x, y) = evidence(x, y) ? n >= 2 : n >= 6;
    }
  }
  return out;
}

namespace {

struct Run {
  int line;  // row for horizontal runs, column for vertical ones
  int from;
  int to;
};

int find_root(std::vector<int>& parent, int i) {
  while (parent[i] != i) i = parent[i] = parent[parent[i]];
  return i;
}

// Bands of runs along one axis. `at(line, k)` reads the mask with `k` the
// coordinate along the run.
template <class At>
std::vector<WallSegment> detect_bands(At at, int lines, int span, bool horizontal, int min_len) {
  std::vector<Run> runs;
  std::vector<std::size_t> line_start(lines + 1, 0);
  for (int l = 0; l < lines; ++l) {
    line_start[l] = runs.size();
    for (int k = 0; k < span;) {
      if (!at(l, k)) {
        ++k;
        continue;
      }
      int e = k;
      while (e + 1 < span && at(l, e + 1)) ++e;
      if (e - k + 1 >= min_len) runs.push_back({l, k, e});
      k = e + 1;
    }
  }
  line_start[lines] = runs.size();

  std::vector<int> parent(runs.size());
  std::iota(parent.begin(), parent.end(), 0);
  for (int l = 1; l < lines; ++l)
    for (std::size_t i = line_start[l]; i < line_start[l + 1]; ++i)
      for (std::size_t j = line_start[l - 1]; j < line_start[l]; ++j)
        if (runs[i].from <= runs[j].to + 1 && runs[j].from <= runs[i].to + 1)
          parent[find_root(parent, static_cast<int>(i))] = find_root(parent, static_cast<int>(j));

  std::vector<std::vector<int>> groups(runs.size());
  for (std::size_t i = 0; i < runs.size(); ++i) groups[find_root(parent, static_cast<int>(i))].push_back(static_cast<int>(i));

  std::vector<WallSegment> out;
  for (const auto& g : groups) {
    if (g.empty()) continue;
    int lo = span, hi = -1;
    double sum_line = 0.0, count = 0.0;
    for (int i : g) {
      lo = std::min(lo, runs[i].from);
      hi = std::max(hi, runs[i].to);
      const double n = runs[i].to - runs[i].from + 1;
      sum_line += runs[i].line * n;
      count += n;
    }
    std::vector<int> per_k(hi - lo + 1, 0);
    for (int i : g)
      for (int k = runs[i].from; k <= runs[i].to; ++k) ++per_k[k - lo];
    std::vector<int> nonzero;
    for (int c : per_k)
      if (c > 0) nonzero.push_back(c);
    std::nth_element(nonzero.begin(), nonzero.begin() + nonzero.size() / 2, nonzero.end());
    const int t = std::max(1, nonzero[nonzero.size() / 2]);
    const double mean = sum_line / count;
    const int offset = static_cast<int>(std::floor(mean - (t - 1) / 2.0 + 0.5));
    out.push_back({horizontal, lo, hi, offset, t});
  }
  return out;
}

bool spans_overlap(int a0, int a1, int b0, int b1, int tol) { return a0 <= b1 + tol && b0 <= a1 + tol; }

}  // namespace

std::vector<WallSegment> regularize_walls(const Mask& walls, const VectorizeOptions& opts) {
  const Mask m = close3x3(walls);
  const int w = m.width(), h = m.height();
  auto hs = detect_bands([&](int l, int k) { return m(k, l) != 0; }, h, w, true, opts.min_segment);
  auto vs = detect_bands([&](int l, int k) { return m(l, k) != 0; }, w, h, false, opts.min_segment);

  // Extend endpoints that stop short of (or inside) a perpendicular wall so
  // the rendered bands meet.
  const int s = opts.snap_distance;
  auto snap = [s](std::vector<WallSegment>& segs, const std::vector<WallSegment>& perp) {
    for (auto& a : segs) {
      const int a_lo = a.offset, a_hi = a.offset + a.thickness - 1;
      int from = a.from, to = a.to;
      for (const auto& b : perp) {
        const int b_lo = b.offset, b_hi = b.offset + b.thickness - 1;
        if (!spans_overlap(b.from, b.to, a_lo, a_hi, s)) continue;
        if (spans_overlap(b_lo, b_hi, a.from, a.from, s)) from = std::min(from, b_lo);
        if (spans_overlap(b_lo, b_hi, a.to, a.to, s)) to = std::max(to, b_hi);
      }
      a.from = from;
      a.to = to;
    }
  };
  const auto hs0 = hs, vs0 = vs;
  snap(hs, vs0);
  snap(vs, hs0);

  std::vector<WallSegment> out = hs;
  out.insert(out.end(), vs.begin(), vs.end());
  auto key = [](const WallSegment& a) { return std::tuple(!a.horizontal, a.offset, a.from, a.to, a.thickness); };
  std::sort(out.begin(), out.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
  out.erase(std::unique(out.begin(), out.end()), out.end());

  if (out.empty() || enclosed_regions(render_walls(out, w, h)).empty())
    fail(ErrorCode::NoClosedRegion, "walls enclose no region");
  return out;
}

Mask render_walls(const std::vector<WallSegment>& segments, int width, int height) {
  Mask out(width, height, 0);
  for (const auto& s : segments) {
    const Rect r = s.rect();
    for (int y = std::max(0, r.y); y < std::min(height, r.bottom()); ++y)
      for (int x = std::max(0, r.x); x < std::min(width, r.right()); ++x) out(x, y) = 1;
  }
  return out;
}

std::vector<Mask> enclosed_regions(const Mask& walls) {
  const int w = walls.width(), h = walls.height();
  Mask open(w, h, 0);
  for (std::size_t i = 0; i < walls.size(); ++i) open.pixels()[i] = !walls.pixels()[i];
  const Components c = label_components(open);
  std::vector<char> touches(c.count + 1, 0);
  for (int x = 0; x < w; ++x) touches[c.labels(x, 0)] = touches[c.labels(x, h - 1)] = 1;
  for (int y = 0; y < h; ++y) touches[c.labels(0, y)] = touches[c.labels(w - 1, y)] = 1;
  std::vector<int> slot(c.count + 1, -1);
  std::vector<Mask> out;
  for (int l = 1; l <= c.count; ++l)
    if (!touches[l]) {
      slot[l] = static_cast<int>(out.size());
      out.emplace_back(w, h, 0);
    }
  for (std::size_t i = 0; i < open.size(); ++i) {
    const int s = slot[c.labels.pixels()[i]];
    if (s >= 0) out[s].pixels()[i] = 1;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Polygons

namespace {

long signed_area2(const Polygon& p) {
  long a = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Point u = p[i], v = p[(i + 1) % p.size()];
    a += static_cast<long>(u.x) * v.y - static_cast<long>(v.x) * u.y;
  }
  return a;
}

Polygon simplify(const Polygon& ring) {
  Polygon out;
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point prev = ring[(i + n - 1) % n], cur = ring[i], next = ring[(i + 1) % n];
    const bool collinear = (prev.x == cur.x && cur.x == next.x) || (prev.y == cur.y && cur.y == next.y);
    if (!collinear) out.push_back(cur);
  }
  if (out.empty()) return out;
  const auto first = std::min_element(out.begin(), out.end(), yx_less);
  std::rotate(out.begin(), first, out.end());
  return out;
}

}  // namespace

Polygon trace_polygon(const Mask& region) {
  const int w = region.width(), h = region.height();
  auto in = [&](int x, int y) { return region.in_bounds(x, y) && region(x, y) != 0; };
  const int cw = w + 1;
  // Directed boundary edges with the region on the (-dy, dx) side. Each
  // corner has at most two outgoing edges.
  std::vector<std::array<int, 2>> out_dir(static_cast<std::size_t>(cw) * (h + 1), {-1, -1});
  constexpr Point kDir[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  auto add = [&](int x, int y, int d) {
    auto& slot = out_dir[static_cast<std::size_t>(y) * cw + x];
    slot[slot[0] < 0 ? 0 : 1] = d;
  };
  long edges = 0;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      if (!region(x, y)) continue;
      if (!in(x, y - 1)) add(x, y, 0), ++edges;
      if (!in(x + 1, y)) add(x + 1, y, 1), ++edges;
      if (!in(x, y + 1)) add(x + 1, y + 1, 2), ++edges;
      if (!in(x - 1, y)) add(x, y + 1, 3), ++edges;
    }
  if (edges == 0) fail(ErrorCode::EmptyShape, "empty region");

  Polygon best;
  long best_area = -1;
  for (int sy = 0; sy <= h; ++sy)
    for (int sx = 0; sx <= w; ++sx) {
      auto& start_slot = out_dir[static_cast<std::size_t>(sy) * cw + sx];
      if (start_slot[0] < 0 && start_slot[1] < 0) continue;
      Polygon ring;
      int x = sx, y = sy;
      int d = start_slot[0] >= 0 ? start_slot[0] : start_slot[1];
      while (true) {
        auto& slot = out_dir[static_cast<std::size_t>(y) * cw + x];
        int take = -1;
        if (ring.empty()) {
          take = d;
        } else {
          // Prefer turning towards the region, then straight, then away.
          for (int cand : {(d + 1) % 4, d, (d + 3) % 4})
            if (slot[0] == cand || slot[1] == cand) {
              take = cand;
              break;
            }
        }
        if (take < 0) break;
        if (slot[0] == take) slot[0] = -1;
        else slot[1] = -1;
        ring.push_back({x, y});
        d = take;
        x += kDir[d].x;
        y += kDir[d].y;
        if (x == sx && y == sy) break;
      }
      const long a = std::abs(signed_area2(ring));
      if (a > best_area) {
        best_area = a;
        best = std::move(ring);
      }
    }
  return simplify(best);
}

long polygon_area(const Polygon& p) { return std::abs(signed_area2(p)) / 2; }

bool point_in_polygon(const Polygon& p, Vec2 q) {
  bool inside = false;
  for (std::size_t i = 0, j = p.size() - 1; i < p.size(); j = i++) {
    const double xi = p[i].x, yi = p[i].y, xj = p[j].x, yj = p[j].y;
    if ((yi > q.y) != (yj > q.y) && q.x < (xj - xi) * (q.y - yi) / (yj - yi) + xi) inside = !inside;
  }
  return inside;
}

bool point_on_boundary(const Polygon& p, Vec2 q) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Point a = p[i], b = p[(i + 1) % p.size()];
    if (a.x == b.x && q.x == a.x && q.y >= std::min(a.y, b.y) && q.y <= std::max(a.y, b.y)) return true;
    if (a.y == b.y && q.y == a.y && q.x >= std::min(a.x, b.x) && q.x <= std::max(a.x, b.x)) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Rooms

std::vector<VectorRoom> assign_rooms(const std::vector<Mask>& regions, const LabelImage& category,
                                     const VectorizeOptions& opts) {
  std::vector<VectorRoom> out;
  for (const auto& region : regions) {
    require_same_size(region, category, "region and category image differ in size");
    std::array<long, kAllLabels.size()> hist{};
    long area = 0;
    for (std::size_t i = 0; i < region.size(); ++i)
      if (region.pixels()[i]) {
        ++hist[label_index(category.pixels()[i])];
        ++area;
      }
    if (area == 0) continue;
    // Ties go to the lower code, which kAllLabels order already gives.
    const auto mode = static_cast<std::size_t>(std::max_element(hist.begin(), hist.end()) - hist.begin());
    const RoomLabel type = kAllLabels[mode];
    if (type == RoomLabel::Outside) continue;
    const bool ambiguous = !is_room_type(type) || hist[mode] < opts.dominance * area;
    if (ambiguous && opts.strict)
      fail(ErrorCode::AmbiguousRoom, "region has no dominant room type (" + std::string(label_name(type)) + " " +
                                         std::to_string(100.0 * hist[mode] / area) + "%)");
    out.push_back({type, trace_polygon(region), ambiguous});
  }
  return out;
}

std::optional<int> room_across(const std::vector<VectorRoom>& rooms, Vec2 from, Point dir, double depth,
                               int exclude) {
  for (double d = 0.5; d <= depth; d += 1.0) {
    const Vec2 q{from.x + dir.x * d, from.y + dir.y * d};
    for (std::size_t i = 0; i < rooms.size(); ++i)
      if (static_cast<int>(i) != exclude && point_in_polygon(rooms[i].polygon, q)) return static_cast<int>(i);
  }
  return std::nullopt;
}

namespace {

struct EdgeCell {
  std::size_t edge;
  int k;  // cell index along the edge axis: the cell spans [k, k + 1]
  Vec2 pos;
  Point outward;
  bool horizontal;
};

std::vector<EdgeCell> edge_cells(const Polygon& poly) {
  std::vector<EdgeCell> out;
  for (std::size_t e = 0; e < poly.size(); ++e) {
    const Point a = poly[e], b = poly[(e + 1) % poly.size()];
    const bool horizontal = a.y == b.y;
    const int lo = horizontal ? std::min(a.x, b.x) : std::min(a.y, b.y);
    const int hi = horizontal ? std::max(a.x, b.x) : std::max(a.y, b.y);
    for (int k = lo; k < hi; ++k) {
      const Vec2 pos = horizontal ? Vec2{k + 0.5, static_cast<double>(a.y)} : Vec2{static_cast<double>(a.x), k + 0.5};
      Point outward = horizontal ? Point{0, -1} : Point{-1, 0};
      if (!point_in_polygon(poly, {pos.x - outward.x * 0.5, pos.y - outward.y * 0.5})) outward = {-outward.x, -outward.y};
      out.push_back({e, k, pos, outward, horizontal});
    }
  }
  return out;
}

}  // namespace

std::vector<VectorDoor> place_doors(const std::vector<VectorRoom>& rooms, const ActivityMap& activity,
                                    const VectorizeOptions& opts) {
  if (std::none_of(rooms.begin(), rooms.end(), [](const auto& r) { return r.type == RoomLabel::Living; }))
    fail(ErrorCode::NoLivingRoom, "floorplan has no living room");
  const RealImage& act = activity.density;
  std::vector<VectorDoor> doors;
  for (std::size_t i = 0; i < rooms.size(); ++i) {
    const VectorRoom& room = rooms[i];
    if (room.type == RoomLabel::Living || room.polygon.size() < 4) continue;

    // Activity peak(s) inside the room.
    int x0 = std::numeric_limits<int>::max(), y0 = x0, x1 = std::numeric_limits<int>::min(), y1 = x1;
    for (Point p : room.polygon) {
      x0 = std::min(x0, p.x);
      y0 = std::min(y0, p.y);
      x1 = std::max(x1, p.x);
      y1 = std::max(y1, p.y);
    }
    std::vector<Point> peaks;
    double peak = -1.0;
    for (int y = std::max(0, y0); y < std::min(y1, act.height()); ++y)
      for (int x = std::max(0, x0); x < std::min(x1, act.width()); ++x) {
        if (!point_in_polygon(room.polygon, {x + 0.5, y + 0.5})) continue;
        const double v = act(x, y);
        if (v > peak) {
          peak = v;
          peaks.clear();
        }
        if (v == peak) peaks.push_back({x, y});
      }
    if (peaks.empty()) continue;

    const auto cells = edge_cells(room.polygon);
    std::vector<char> living(cells.size(), 0), any_room(cells.size(), 0);
    bool has_living = false, has_room = false;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const auto across = room_across(rooms, cells[c].pos, cells[c].outward, opts.probe_depth, static_cast<int>(i));
      any_room[c] = across.has_value();
      living[c] = across && rooms[*across].type == RoomLabel::Living;
      has_living |= living[c] != 0;
      has_room |= any_room[c] != 0;
    }
    const std::vector<char>& allowed = has_living ? living : any_room;

    std::size_t best = cells.size();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if ((has_living || has_room) && !allowed[c]) continue;
      double d = std::numeric_limits<double>::infinity();
      for (Point p : peaks) d = std::min(d, std::hypot(p.x + 0.5 - cells[c].pos.x, p.y + 0.5 - cells[c].pos.y));
      const bool tie_wins = best < cells.size() && d == best_d &&
                            (cells[c].pos.y < cells[best].pos.y ||
                             (cells[c].pos.y == cells[best].pos.y && cells[c].pos.x < cells[best].pos.x));
      if (d < best_d || tie_wins) {
        best_d = d;
        best = c;
      }
    }
    if (best == cells.size()) continue;

    // Fit the door into the contiguous run of allowed cells on that edge.
    const EdgeCell& bc = cells[best];
    auto ok = [&](std::size_t c) { return (!has_living && !has_room) || allowed[c]; };
    std::size_t r0 = best, r1 = best;
    while (r0 > 0 && cells[r0 - 1].edge == bc.edge && ok(r0 - 1)) --r0;
    while (r1 + 1 < cells.size() && cells[r1 + 1].edge == bc.edge && ok(r1 + 1)) ++r1;
    const int lo = std::min(cells[r0].k, cells[r1].k), hi = std::max(cells[r0].k, cells[r1].k) + 1;
    double centre;
    if (hi - lo >= opts.door_width) {
      const int start = std::clamp(static_cast<int>(std::lround(bc.k + 0.5 - opts.door_width / 2.0)), lo,
                                   hi - opts.door_width);
      centre = start + opts.door_width / 2.0;
    } else {
      centre = (lo + hi) / 2.0;
    }
    VectorDoor door;
    door.room_index = static_cast<int>(i);
    door.position = bc.horizontal ? Vec2{centre, bc.pos.y} : Vec2{bc.pos.x, centre};
    door.width = opts.door_width;
    door.horizontal = bc.horizontal;
    door.outward = bc.outward;
    doors.push_back(door);
  }
  return doors;
}

std::optional<EntranceSegment> entrance_segment(const LabelImage& category) {
  const Mask m = label_mask(category, RoomLabel::MainEntrance);
  const Rect b = bounding_box(m);
  if (b.empty()) return std::nullopt;
  if (b.w >= b.h) {
    const double y = b.y + b.h / 2.0;
    return EntranceSegment{{static_cast<double>(b.x), y}, {static_cast<double>(b.right()), y}};
  }
  const double x = b.x + b.w / 2.0;
  return EntranceSegment{{x, static_cast<double>(b.y)}, {x, static_cast<double>(b.bottom())}};
}

// ---------------------------------------------------------------------------

namespace {

bool closed_rectilinear(const Polygon& p) {
  if (p.size() < 4 || p.size() % 2 != 0) return false;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Point a = p[i], b = p[(i + 1) % p.size()];
    if ((a.x == b.x) == (a.y == b.y)) return false;  // diagonal or zero-length
  }
  return signed_area2(p) != 0;
}

bool reaches_living(const VectorFloorplan& vf, Vec2 from, Point dir, double depth, int exclude) {
  const auto r = room_across(vf.rooms, from, dir, depth, exclude);
  return r && vf.rooms[*r].type == RoomLabel::Living;
}

}  // namespace

SuccessReport check_success(const VectorFloorplan& vf, const VectorizeOptions& opts) {
  SuccessReport rep;
  auto mark = [&](SuccessCondition c) {
    if (!rep.failed(c)) rep.failed_conditions.push_back(c);
  };

  bool closed = !vf.rooms.empty();
  for (const auto& r : vf.rooms) closed &= !r.ambiguous && is_room_type(r.type) && closed_rectilinear(r.polygon);
  if (!closed) mark(SuccessCondition::ClosedRooms);

  auto count = [&](RoomLabel t) {
    return std::count_if(vf.rooms.begin(), vf.rooms.end(), [&](const auto& r) { return !r.ambiguous && r.type == t; });
  };
  if (count(RoomLabel::Living) < 1 || count(RoomLabel::Master) < 1) mark(SuccessCondition::BalancedTypes);

  bool connected = vf.main_entrance.has_value();
  if (connected) {
    const auto& e = *vf.main_entrance;
    const Vec2 mid{(e.a.x + e.b.x) / 2.0, (e.a.y + e.b.y) / 2.0};
    const Point n = e.a.y == e.b.y ? Point{0, 1} : Point{1, 0};
    connected = reaches_living(vf, mid, n, opts.probe_depth, -1) || reaches_living(vf, mid, {-n.x, -n.y}, opts.probe_depth, -1);
  }
  for (std::size_t i = 0; i < vf.rooms.size() && connected; ++i) {
    const RoomLabel t = vf.rooms[i].type;
    if (t == RoomLabel::Living || t == RoomLabel::Bathroom || t == RoomLabel::Balcony) continue;
    bool has_door = false;
    for (const auto& d : vf.doors) {
      if (d.room_index != static_cast<int>(i)) continue;
      has_door = true;
      if (!reaches_living(vf, d.position, d.outward, opts.probe_depth, d.room_index)) connected = false;
    }
    if (!has_door) connected = false;
  }
  if (!connected) mark(SuccessCondition::LivingConnectivity);

  rep.ok = rep.failed_conditions.empty();
  return rep;
}

VectorFloorplan vectorize(const LabelImage& category, const ActivityMap& activity, const VectorizeOptions& opts) {
  require_same_size(category, activity.density, "activity map and category image differ in size");
  VectorFloorplan vf;
  vf.width = category.width();
  vf.height = category.height();
  vf.walls = regularize_walls(extract_walls(category), opts);
  vf.rooms = assign_rooms(enclosed_regions(render_walls(vf.walls, vf.width, vf.height)), category, opts);
  try {
    vf.doors = place_doors(vf.rooms, activity, opts);
  } catch (const Error& e) {
    // No living room: leave the doors out and let check_success report it.
    if (e.code() != ErrorCode::NoLivingRoom) throw;
  }
  vf.main_entrance = entrance_segment(category);
  return vf;
}

}  // namespace actfloor
