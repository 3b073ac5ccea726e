#include "actfloor/procedural.hpp"

#include <string>
#include <vector>

#include "actfloor/grid.hpp"
#include "actfloor/rng.hpp"

namespace actfloor {
namespace {

void paint(LabelImage& img, Rect r, RoomLabel l) {
  for (int y = r.y; y < r.bottom(); ++y)
    for (int x = r.x; x < r.right(); ++x)
      if (img.in_bounds(x, y)) img(x, y) = l;
}

/// Splits [lo, hi) into `n` spans separated by `wall` pixels, each at least
/// `min_span` wide. Returns the span starts and ends.
std::vector<std::pair<int, int>> split_span(Rng& rng, int lo, int hi, int n, int wall, int min_span) {
  std::vector<std::pair<int, int>> spans;
  int start = lo;
  for (int i = 0; i < n; ++i) {
    const int remaining = n - i - 1;
    const int max_end = hi - remaining * (min_span + wall);
    int end = hi;
    if (remaining > 0) {
      const int even = start + (max_end - start) / (remaining + 1);
      end = std::clamp(even + rng.uniform_int(-8, 8), start + min_span, max_end);
    }
    spans.emplace_back(start, end);
    start = end + wall;
  }
  return spans;
}

RoomLabel draw_room_type(Rng& rng) {
  static constexpr RoomLabel kPool[] = {RoomLabel::Second,  RoomLabel::Study,   RoomLabel::Bathroom,
                                        RoomLabel::Kitchen, RoomLabel::Balcony, RoomLabel::Second,
                                        RoomLabel::Bathroom};
  return kPool[rng.index(std::size(kPool))];
}

}  // namespace

RasterFloorplan make_procedural_floorplan(std::uint64_t seed, const ProceduralOptions& o) {
  Rng rng(seed);
  const int w = rng.uniform_int(o.min_width, o.max_width);
  const int h = rng.uniform_int(o.min_height, o.max_height);
  const int x0 = rng.uniform_int(4, kRasterSize - w - 4);
  const int y0 = rng.uniform_int(4, kRasterSize - h - 4);
  const int x1 = x0 + w, y1 = y0 + h;
  const int t = o.wall;

  LabelImage cat(kRasterSize, kRasterSize, RoomLabel::Outside);
  paint(cat, {x0, y0, w, h}, RoomLabel::Wall);

  const bool two_bands = rng.unit() >= o.single_band_probability;
  const int inner_top = y0 + t, inner_bottom = y1 - t;
  const int top_h = rng.uniform_int(48, 64);
  const int bottom_h = two_bands ? rng.uniform_int(48, 64) : 0;
  const int top_band_end = inner_top + top_h;             // exclusive
  const int living_start = top_band_end + t;
  const int living_end = two_bands ? inner_bottom - bottom_h - t : inner_bottom;
  const int bottom_start = living_end + t;

  paint(cat, {x0 + t, living_start, w - 2 * t, living_end - living_start}, RoomLabel::Living);

  struct Slot {
    Rect rect;
    bool top;
  };
  std::vector<Slot> slots;
  const int inner_left = x0 + t, inner_right = x1 - t;
  const int n_top = rng.uniform_int(2, 3);
  for (auto [a, b] : split_span(rng, inner_left, inner_right, n_top, t, 48))
    slots.push_back({{a, inner_top, b - a, top_h}, true});
  if (two_bands) {
    const int n_bottom = rng.uniform_int(2, 3);
    for (auto [a, b] : split_span(rng, inner_left, inner_right, n_bottom, t, 48))
      slots.push_back({{a, bottom_start, b - a, bottom_h}, false});
  }

  const std::size_t master = rng.index(slots.size());
  for (std::size_t i = 0; i < slots.size(); ++i) {
    const RoomLabel type = i == master ? RoomLabel::Master : draw_room_type(rng);
    paint(cat, slots[i].rect, type);
    const Rect& r = slots[i].rect;
    const int door_x = rng.uniform_int(r.x + 4, r.right() - 4 - o.door_width);
    const int door_y = slots[i].top ? top_band_end : living_end;
    paint(cat, {door_x, door_y, o.door_width, t}, RoomLabel::InteriorDoor);
  }

  // Optional notch cut from the top-right corner; the exterior wall is then
  // re-derived from the footprint so it follows the notch.
  Mask footprint(kRasterSize, kRasterSize, 0);
  for (int y = y0; y < y1; ++y)
    for (int x = x0; x < x1; ++x) footprint(x, y) = 1;
  const Rect& corner_room = slots[n_top - 1].rect;
  if (rng.unit() < o.notch_probability && corner_room.w >= 60) {
    const int nw = rng.uniform_int(15, corner_room.w - 40);
    const int nh = rng.uniform_int(12, top_h - 28);
    for (int y = y0; y < y0 + t + nh; ++y)
      for (int x = x1 - t - nw; x < x1; ++x) footprint(x, y) = 0;
  }
  Mask core = footprint;
  for (int i = 0; i < t; ++i) core = erode3x3(core);
  for (int y = 0; y < kRasterSize; ++y) {
    for (int x = 0; x < kRasterSize; ++x) {
      if (!footprint(x, y)) cat(x, y) = RoomLabel::Outside;
      else if (!core(x, y)) cat(x, y) = RoomLabel::Wall;
    }
  }

  // Main entrance through the exterior wall into the living band.
  const int ew = o.entrance_width;
  const int pick = rng.uniform_int(0, two_bands ? 1 : 2);
  if (pick == 2) {
    const int ex = rng.uniform_int(inner_left + 4, inner_right - 4 - ew);
    paint(cat, {ex, y1 - t, ew, t}, RoomLabel::MainEntrance);
  } else {
    const int ey = rng.uniform_int(living_start + 3, living_end - 3 - ew);
    paint(cat, {pick == 0 ? x0 : x1 - t, ey, t, ew}, RoomLabel::MainEntrance);
  }

  RasterFloorplan fp = assemble_floorplan("proc_" + std::to_string(seed), cat);
  // The boundary channel marks the whole exterior wall band.
  for (std::size_t i = 0; i < fp.boundary.size(); ++i)
    fp.boundary.pixels()[i] = footprint.pixels()[i] && !core.pixels()[i];
  return fp;
}

}  // namespace actfloor
