#include "actfloor/furnish.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "actfloor/grid.hpp"
#include "actfloor/rng.hpp"

namespace actfloor {

std::string_view furniture_name(FurnitureKind k) {
  switch (k) {
    case FurnitureKind::Bed: return "Bed";
    case FurnitureKind::Desk: return "Desk";
    case FurnitureKind::Toilet: return "Toilet";
    case FurnitureKind::Stove: return "Stove";
    case FurnitureKind::WashingMachine: return "WashingMachine";
  }
  return "Unknown";
}

std::optional<FurnitureKind> furniture_from_name(std::string_view name) {
  for (auto k : kAllFurnitureKinds)
    if (furniture_name(k) == name) return k;
  return std::nullopt;
}

std::optional<FurnitureKind> primary_furniture_for(RoomLabel room) {
  switch (room) {
    case RoomLabel::Master:
    case RoomLabel::Second: return FurnitureKind::Bed;
    case RoomLabel::Study: return FurnitureKind::Desk;
    case RoomLabel::Bathroom: return FurnitureKind::Toilet;
    case RoomLabel::Kitchen: return FurnitureKind::Stove;
    case RoomLabel::Balcony: return FurnitureKind::WashingMachine;
    default: return std::nullopt;
  }
}

PlacementPolicy PlacementPolicy::defaults() {
  using S = CandidateSide;
  PlacementPolicy p;
  p[FurnitureKind::Bed] = {0.30, 4.0 / 3.0, false, 0, 0, false, 8, {S::Opposite, S::DiagonallyOpposite}};
  p[FurnitureKind::Desk] = {0.15, 2.0, false, 0, 0, false, 8, {S::BesideEntrance, S::Opposite}};
  p[FurnitureKind::Toilet] = {1.0, 1.0, true, 8, 12, false, 8, {S::Opposite, S::DiagonallyOpposite}};
  p[FurnitureKind::Stove] = {1.0, 1.0, false, 0, 0, true, 8, {S::Opposite, S::DiagonallyOpposite}};
  p[FurnitureKind::WashingMachine] = {1.0, 1.0, true, 10, 10, false, 8, {S::AnySide}};
  return p;
}

void PlacementPolicy::validate() const {
  for (auto k : kAllFurnitureKinds) {
    const auto& kp = (*this)[k];
    if (!(kp.size_fraction > 0.0 && kp.size_fraction <= 1.0))
      fail(ErrorCode::InvalidArgument, std::string(furniture_name(k)) + ": size fraction outside (0,1]");
    if (kp.sides.empty()) fail(ErrorCode::InvalidArgument, std::string(furniture_name(k)) + ": no candidate sides");
    if (kp.fixed_size && (kp.fixed_along <= 0 || kp.fixed_depth <= 0))
      fail(ErrorCode::InvalidArgument, std::string(furniture_name(k)) + ": fixed size must be positive");
    if (kp.aspect < 1.0) fail(ErrorCode::InvalidArgument, std::string(furniture_name(k)) + ": aspect below 1");
  }
  if (beside_offset < 0 || clearance < 0) fail(ErrorCode::InvalidArgument, "negative offset");
}

namespace {

bool horizontal(WallSide s) { return s == WallSide::North || s == WallSide::South; }

WallSide opposite(WallSide s) {
  switch (s) {
    case WallSide::North: return WallSide::South;
    case WallSide::South: return WallSide::North;
    case WallSide::West: return WallSide::East;
    case WallSide::East: return WallSide::West;
  }
  return s;
}

/// Rectangle flush with wall `s` of bbox `b`, starting at `pos` along the wall.
Rect flush_rect(const Rect& b, WallSide s, int pos, int along, int depth) {
  switch (s) {
    case WallSide::North: return {pos, b.y, along, depth};
    case WallSide::South: return {pos, b.bottom() - depth, along, depth};
    case WallSide::West: return {b.x, pos, depth, along};
    case WallSide::East: return {b.right() - depth, pos, depth, along};
  }
  return {};
}

int wall_lo(const Rect& b, WallSide s) { return horizontal(s) ? b.x : b.y; }
int wall_len(const Rect& b, WallSide s) { return horizontal(s) ? b.w : b.h; }

struct Footprint {
  int along = 0;
  int depth = 0;
};

bool legal(const Rect& r, const RoomRegion& room, const Mask& keep_out, const Mask& doorway, Point entrance) {
  if (r.empty() || r.x < 0 || r.y < 0 || r.right() > room.pixels.width() || r.bottom() > room.pixels.height())
    return false;
  for (int y = r.y; y < r.bottom(); ++y)
    for (int x = r.x; x < r.right(); ++x)
      if (!room.pixels(x, y) || keep_out(x, y)) return false;

  Mask walkable(room.pixels.width(), room.pixels.height(), 0);
  for (std::size_t i = 0; i < walkable.size(); ++i)
    walkable.pixels()[i] = room.pixels.pixels()[i] | doorway.pixels()[i];
  for (int y = r.y; y < r.bottom(); ++y)
    for (int x = r.x; x < r.right(); ++x) walkable(x, y) = 0;
  const auto anchor = furniture_anchor(walkable, {FurnitureKind::Bed, r, room.id, entrance});
  if (!anchor) return false;
  return flood_fill(walkable, entrance)[*anchor] != 0;
}

Mask keep_out_zone(const RoomRegion& room, const Mask& doorway, int clearance) {
  Mask zone(room.pixels.width(), room.pixels.height(), 0);
  for (int y = 0; y < doorway.height(); ++y)
    for (int x = 0; x < doorway.width(); ++x) {
      if (!doorway(x, y)) continue;
      for (int dy = -clearance; dy <= clearance; ++dy)
        for (int dx = -clearance; dx <= clearance; ++dx)
          if (zone.in_bounds(x + dx, y + dy)) zone(x + dx, y + dy) = 1;
    }
  return zone;
}

bool inside_room(const Rect& r, const RoomRegion& room) {
  if (r.empty() || r.x < 0 || r.y < 0 || r.right() > room.pixels.width() || r.bottom() > room.pixels.height())
    return false;
  for (int y = r.y; y < r.bottom(); ++y)
    for (int x = r.x; x < r.right(); ++x)
      if (!room.pixels(x, y)) return false;
  return true;
}

/// Moves a bbox-flush rect away from its wall until it is inside the room,
/// so it ends up flush with the wall the room actually has there (rooms need
/// not be rectangles). Full-wall pieces are first trimmed to that wall.
Rect fit_to_room(Rect r, WallSide side, const RoomRegion& room, bool full_wall) {
  const Point step = side == WallSide::North ? Point{0, 1}
                     : side == WallSide::South ? Point{0, -1}
                     : side == WallSide::West  ? Point{1, 0}
                                               : Point{-1, 0};
  const int limit = horizontal(side) ? room.bbox.h : room.bbox.w;
  auto slide = [&](Rect c) -> std::optional<Rect> {
    for (int i = 0; i < limit; ++i, c.x += step.x, c.y += step.y)
      if (inside_room(c, room)) return c;
    return std::nullopt;
  };
  if (auto c = slide(r)) return *c;
  if (!full_wall) return r;
  // Longest run of room pixels along the first row/column next to the wall
  // that has any; the piece is trimmed to that run.
  const bool h = horizontal(side);
  const int wall_line = side == WallSide::North ? r.y : side == WallSide::South ? r.bottom() - 1
                        : side == WallSide::West ? r.x : r.right() - 1;
  const int lo = h ? room.bbox.x : room.bbox.y, hi = h ? room.bbox.right() : room.bbox.bottom();
  for (int i = 0; i < limit; ++i) {
    const int line = wall_line + (h ? step.y : step.x) * i;
    auto in = [&](int a) { return h ? room.pixels(a, line) != 0 : room.pixels(line, a) != 0; };
    int best_lo = 0, best_len = 0;
    for (int k = lo; k < hi;) {
      if (!in(k)) {
        ++k;
        continue;
      }
      int e = k;
      while (e < hi && in(e)) ++e;
      if (e - k > best_len) best_lo = k, best_len = e - k;
      k = e;
    }
    if (best_len == 0) continue;
    const int depth = h ? r.h : r.w;
    const int near = (h ? step.y : step.x) > 0 ? line : line - depth + 1;
    const Rect t = h ? Rect{best_lo, near, best_len, depth} : Rect{near, best_lo, depth, best_len};
    return inside_room(t, room) ? t : r;
  }
  return r;
}

struct Placed {
  Rect rect;
  WallSide side;
};

std::vector<Placed> raw_candidates(const RoomRegion& room, const Doorway& door, const KindPolicy& kp,
                                   Footprint fp, int beside_offset) {
  const Rect& b = room.bbox;
  const WallSide entry = door.side;
  const WallSide far = opposite(entry);
  const int e_along = horizontal(entry) ? door.entrance.x : door.entrance.y;
  const int center2 = 2 * wall_lo(b, entry) + wall_len(b, entry) - 1;  // twice the wall midpoint

  std::vector<Placed> out;
  auto centered = [&](WallSide s, int along, int depth) {
    out.push_back({flush_rect(b, s, wall_lo(b, s) + (wall_len(b, s) - along) / 2, along, depth), s});
  };

  for (auto side : kp.sides) {
    switch (side) {
      case CandidateSide::Opposite:
        centered(far, kp.full_wall ? wall_len(b, far) : fp.along, fp.depth);
        break;
      case CandidateSide::DiagonallyOpposite: {
        // The far half of the room, seen along the entrance wall.
        const bool high = 2 * e_along <= center2;
        const bool low = 2 * e_along >= center2;
        if (kp.full_wall) {
          const WallSide hi_side = horizontal(entry) ? WallSide::East : WallSide::South;
          const WallSide lo_side = horizontal(entry) ? WallSide::West : WallSide::North;
          if (high) out.push_back({flush_rect(b, hi_side, wall_lo(b, hi_side), wall_len(b, hi_side), fp.depth), hi_side});
          if (low) out.push_back({flush_rect(b, lo_side, wall_lo(b, lo_side), wall_len(b, lo_side), fp.depth), lo_side});
        } else {
          if (high)
            out.push_back({flush_rect(b, far, wall_lo(b, far) + wall_len(b, far) - fp.along, fp.along, fp.depth), far});
          if (low) out.push_back({flush_rect(b, far, wall_lo(b, far), fp.along, fp.depth), far});
        }
        break;
      }
      case CandidateSide::BesideEntrance: {
        int door_lo = 1 << 30, door_hi = -1;
        for (int y = 0; y < door.pixels.height(); ++y)
          for (int x = 0; x < door.pixels.width(); ++x)
            if (door.pixels(x, y)) {
              const int a = horizontal(entry) ? x : y;
              door_lo = std::min(door_lo, a);
              door_hi = std::max(door_hi, a);
            }
        out.push_back({flush_rect(b, entry, door_lo - beside_offset - fp.along, fp.along, fp.depth), entry});
        out.push_back({flush_rect(b, entry, door_hi + 1 + beside_offset, fp.along, fp.depth), entry});
        break;
      }
      case CandidateSide::AnySide:
        for (auto s : {WallSide::North, WallSide::South, WallSide::West, WallSide::East})
          centered(s, kp.full_wall ? wall_len(b, s) : fp.along, fp.depth);
        break;
    }
  }
  return out;
}

}  // namespace

std::optional<Doorway> find_room_doorway(const RasterFloorplan& fp, const RoomRegion& room) {
  const Mask doors = label_mask(fp.category, RoomLabel::InteriorDoor);
  const auto comps = label_components(doors);
  if (comps.count == 0) return std::nullopt;

  std::vector<char> touches_room(comps.count + 1, 0), touches_living(comps.count + 1, 0);
  for (int y = room.bbox.y - 1; y <= room.bbox.bottom(); ++y) {
    for (int x = room.bbox.x - 1; x <= room.bbox.right(); ++x) {
      if (!doors.in_bounds(x, y) || !doors(x, y)) continue;
      for (const auto& d : kNeighbors4) {
        const Point q{x + d.x, y + d.y};
        if (doors.in_bounds(q) && room.pixels[q]) touches_room[comps.labels(x, y)] = 1;
      }
    }
  }
  for (int y = 0; y < fp.height(); ++y)
    for (int x = 0; x < fp.width(); ++x) {
      const int c = comps.labels(x, y);
      if (!c || !touches_room[c]) continue;
      for (const auto& d : kNeighbors4) {
        const Point q{x + d.x, y + d.y};
        if (fp.category.in_bounds(q) && fp.category[q] == RoomLabel::Living) touches_living[c] = 1;
      }
    }

  int chosen = 0;
  for (int c = 1; c <= comps.count && !chosen; ++c)
    if (touches_room[c] && touches_living[c]) chosen = c;
  for (int c = 1; c <= comps.count && !chosen; ++c)
    if (touches_room[c]) chosen = c;
  if (!chosen) return std::nullopt;

  Doorway door;
  door.pixels = Mask(fp.width(), fp.height(), 0);
  std::vector<std::pair<Point, WallSide>> face;
  for (int y = 0; y < fp.height(); ++y) {
    for (int x = 0; x < fp.width(); ++x) {
      if (comps.labels(x, y) != chosen) continue;
      door.pixels(x, y) = 1;
      // The room lies on the far side of the wall the door is cut into.
      static constexpr std::pair<Point, WallSide> kDirs[] = {
          {{0, 1}, WallSide::North}, {{0, -1}, WallSide::South}, {{1, 0}, WallSide::West}, {{-1, 0}, WallSide::East}};
      for (const auto& [d, side] : kDirs) {
        const Point q{x + d.x, y + d.y};
        if (room.pixels.in_bounds(q) && room.pixels[q]) {
          face.push_back({{x, y}, side});
          break;
        }
      }
    }
  }
  const auto& mid = face[face.size() / 2];
  door.entrance = mid.first;
  door.side = mid.second;
  return door;
}

std::vector<Rect> candidate_rects(const RasterFloorplan& fp, const RoomRegion& room, const Doorway& door,
                                  FurnitureKind kind, const PlacementPolicy& policy) {
  (void)fp;
  const KindPolicy& kp = policy[kind];
  const Mask keep_out = keep_out_zone(room, door.pixels, policy.clearance);

  Footprint base;
  if (kp.fixed_size) {
    base = {kp.fixed_along, kp.fixed_depth};
  } else if (kp.full_wall) {
    base = {0, kp.wall_depth};
  } else {
    const double area = kp.size_fraction * static_cast<double>(room.area);
    const int along = static_cast<int>(std::lround(std::sqrt(area * kp.aspect)));
    base = {along, static_cast<int>(std::lround(area / std::max(along, 1)))};
  }

  const bool scalable = !kp.fixed_size && !kp.full_wall;
  double scale = 1.0;
  for (int attempt = 0; attempt < (scalable ? 8 : 1); ++attempt, scale *= 0.85) {
    const Footprint f{static_cast<int>(std::lround(base.along * scale)),
                      static_cast<int>(std::lround(base.depth * scale))};
    if (scalable && (f.along < 3 || f.depth < 3)) break;
    std::vector<Rect> out;
    for (const auto& [raw, side] : raw_candidates(room, door, kp, f, policy.beside_offset)) {
      const Rect r = fit_to_room(raw, side, room, kp.full_wall);
      if (std::find(out.begin(), out.end(), r) != out.end()) continue;
      if (legal(r, room, keep_out, door.pixels, door.entrance)) out.push_back(r);
    }
    if (!out.empty()) return out;
  }
  return {};
}

std::vector<FurnitureInstance> place_primary_furniture(const RasterFloorplan& fp, const PlacementPolicy& policy,
                                                       std::uint64_t seed) {
  policy.validate();
  std::vector<FurnitureInstance> out;
  for (const auto& room : room_regions(fp)) {
    const auto kind = primary_furniture_for(room.type);
    if (!kind) continue;
    const auto door = find_room_doorway(fp, room);
    if (!door) fail(ErrorCode::NoRoomEntrance, "room " + std::to_string(room.id) + " has no door");
    const auto cands = candidate_rects(fp, room, *door, *kind, policy);
    if (cands.empty())
      fail(ErrorCode::RoomTooSmall, "no legal " + std::string(furniture_name(*kind)) + " position in room " +
                                        std::to_string(room.id));
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(room.id)));
    out.push_back({*kind, cands[rng.index(cands.size())], room.id, door->entrance});
  }
  return out;
}

namespace {

/// Walks from `start` in direction `d` through structural pixels; returns the
/// first non-structural label reached within `max_steps`, or Outside.
RoomLabel label_across_wall(const RasterFloorplan& fp, Point start, Point d, int max_steps = 6) {
  Point q = start;
  for (int i = 0; i < max_steps; ++i) {
    if (!fp.category.in_bounds(q)) return RoomLabel::Outside;
    const RoomLabel l = fp.category[q];
    if (!is_structural(l)) return i == 0 ? RoomLabel::Outside : l;
    q = {q.x + d.x, q.y + d.y};
  }
  return RoomLabel::Outside;
}

}  // namespace

Point synthesize_room_entrance(int room_id, const RasterFloorplan& fp, const Rect& furniture) {
  struct Candidate {
    Point p;
    int dir;
  };
  std::map<std::pair<int, int>, int> shared;  // (x, y) -> bitmask of crossing directions
  bool any_room = false;
  for (int y = 0; y < fp.height(); ++y) {
    for (int x = 0; x < fp.width(); ++x) {
      if (fp.room_ids(x, y) != room_id) continue;
      any_room = true;
      for (int k = 0; k < 4; ++k) {
        const Point d = kNeighbors4[k];
        const Point w{x + d.x, y + d.y};
        if (label_across_wall(fp, w, d) == RoomLabel::Living) shared[{w.x, w.y}] |= 1 << k;
      }
    }
  }
  if (!any_room) fail(ErrorCode::InvalidArgument, "room id " + std::to_string(room_id) + " not present");
  if (shared.empty()) fail(ErrorCode::NoSharedWall, "room " + std::to_string(room_id) + " shares no wall with the living area");

  // Prefer positions with room for a door: three shared neighbours each way
  // along the wall, crossing in the same direction.
  std::vector<Candidate> all, wide;
  for (const auto& [xy, dirs] : shared) {
    for (int k = 0; k < 4; ++k) {
      if (!(dirs & (1 << k))) continue;
      const Point p{xy.first, xy.second};
      all.push_back({p, k});
      const Point lat = kNeighbors4[k].x != 0 ? Point{0, 1} : Point{1, 0};
      bool ok = true;
      for (int s = -3; s <= 3 && ok; ++s) {
        const auto it = shared.find({p.x + s * lat.x, p.y + s * lat.y});
        ok = it != shared.end() && (it->second & (1 << k));
      }
      if (ok) wide.push_back({p, k});
    }
  }
  const auto& pool = wide.empty() ? all : wide;

  auto clearance = [&](Point p) {
    const double dx = std::max({furniture.x - p.x, 0, p.x - (furniture.right() - 1)});
    const double dy = std::max({furniture.y - p.y, 0, p.y - (furniture.bottom() - 1)});
    return std::hypot(dx, dy);
  };
  Point best = pool.front().p;
  double best_c = -1.0;
  for (const auto& c : pool) {
    const double v = clearance(c.p);
    if (v > best_c || (v == best_c && yx_less(c.p, best))) {
      best_c = v;
      best = c.p;
    }
  }
  return best;
}

Mask doorway_pixels(const RasterFloorplan& fp, Point entrance, int door_width) {
  Mask out(fp.width(), fp.height(), 0);
  if (!fp.category.in_bounds(entrance)) return out;
  const RoomLabel l = fp.category[entrance];
  if (l == RoomLabel::InteriorDoor || l == RoomLabel::MainEntrance)
    return flood_fill(label_mask(fp.category, l), entrance);
  if (l != RoomLabel::Wall) {
    out[entrance] = 1;
    return out;
  }
  // Plain wall pixel: cut a door-width opening from the room side through to
  // whatever lies across the wall.
  for (const auto& d : kNeighbors4) {
    const Point back{entrance.x - d.x, entrance.y - d.y};
    if (!fp.category.in_bounds(back) || !is_room_type(fp.category[back])) continue;
    const RoomLabel across = label_across_wall(fp, entrance, d);
    if (!is_room_type(across)) continue;
    const Point lat = d.x != 0 ? Point{0, 1} : Point{1, 0};
    for (int s = -door_width / 2; s < door_width - door_width / 2; ++s) {
      Point c{entrance.x + s * lat.x, entrance.y + s * lat.y};
      const Point c_back{c.x - d.x, c.y - d.y};
      if (!fp.category.in_bounds(c) || !fp.category.in_bounds(c_back)) continue;
      if (!is_structural(fp.category[c]) || fp.category[c_back] != fp.category[back]) continue;
      if (label_across_wall(fp, c, d) != across) continue;
      while (fp.category.in_bounds(c) && is_structural(fp.category[c])) {
        out[c] = 1;
        c = {c.x + d.x, c.y + d.y};
      }
    }
    return out;
  }
  out[entrance] = 1;
  return out;
}

std::optional<Point> furniture_anchor(const Mask& walkable, const FurnitureInstance& f) {
  const Rect& r = f.rect;
  const Point sides[] = {{r.x + r.w / 2, r.y - 1},
                         {r.x + r.w / 2, r.bottom()},
                         {r.x - 1, r.y + r.h / 2},
                         {r.right(), r.y + r.h / 2}};
  std::optional<Point> best;
  long best_d = 0;
  for (const Point& p : sides) {
    if (!walkable.in_bounds(p) || !walkable[p]) continue;
    const long dx = p.x - f.entrance.x, dy = p.y - f.entrance.y;
    const long d = dx * dx + dy * dy;
    if (!best || d < best_d || (d == best_d && yx_less(p, *best))) {
      best = p;
      best_d = d;
    }
  }
  return best;
}

int host_room_at(const RasterFloorplan& fp, const Rect& r) {
  const Point c{r.x + r.w / 2, r.y + r.h / 2};
  if (!fp.room_ids.in_bounds(c)) return 0;
  return fp.room_ids[c];
}

}  // namespace actfloor
