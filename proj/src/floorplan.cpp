#include "actfloor/floorplan.hpp"

#include <algorithm>
#include <map>

#include "actfloor/grid.hpp"
#include "actfloor/rng.hpp"

namespace actfloor {

Mask label_mask(const LabelImage& category, RoomLabel label) {
  Mask m(category.width(), category.height(), 0);
  for (std::size_t i = 0; i < m.size(); ++i) m.pixels()[i] = category.pixels()[i] == label;
  return m;
}

Image<std::uint8_t> label_codes(const LabelImage& category) {
  Image<std::uint8_t> out(category.width(), category.height());
  for (std::size_t i = 0; i < out.size(); ++i) out.pixels()[i] = code(category.pixels()[i]);
  return out;
}

LabelImage labels_from_codes(const Image<std::uint8_t>& codes) {
  LabelImage out(codes.width(), codes.height(), RoomLabel::Outside);
  for (int y = 0; y < codes.height(); ++y) {
    for (int x = 0; x < codes.width(); ++x) {
      const auto l = label_from_code(codes(x, y));
      if (!l)
        fail(ErrorCode::IllegalLabel, "category code " + std::to_string(codes(x, y)) + " at (" +
                                          std::to_string(x) + "," + std::to_string(y) + ")");
      out(x, y) = *l;
    }
  }
  return out;
}

void validate(const RasterFloorplan& fp) {
  const auto& c = fp.category;
  if (c.width() != kRasterSize || c.height() != kRasterSize)
    fail(ErrorCode::SizeMismatch, "category channel must be 256x256");
  require_same_size(c, fp.inside, "inside channel size differs from category");
  require_same_size(c, fp.boundary, "boundary channel size differs from category");
  require_same_size(c, fp.room_ids, "room_ids channel size differs from category");

  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto in = fp.inside.pixels()[i];
    const auto b = fp.boundary.pixels()[i];
    const auto l = c.pixels()[i];
    if (in > 1 || b > 1) fail(ErrorCode::IllegalLabel, "mask channels must be binary");
    if (!label_from_code(code(l))) fail(ErrorCode::IllegalLabel, "unknown category code");
    if ((l == RoomLabel::Outside) != (in == 0))
      fail(ErrorCode::IllegalLabel, "category Outside must coincide with inside == 0");
    if (b && !in) fail(ErrorCode::IllegalLabel, "boundary pixel outside the inside mask");
    if (fp.room_ids.pixels()[i] != 0 && !is_room_type(l))
      fail(ErrorCode::InvalidRoomIds, "room id on a non-room pixel");
  }

  // Each positive id must be one 4-connected region with one dominant category.
  std::map<int, std::vector<Point>> by_id;
  for (int y = 0; y < c.height(); ++y)
    for (int x = 0; x < c.width(); ++x)
      if (fp.room_ids(x, y)) by_id[fp.room_ids(x, y)].push_back({x, y});
  for (const auto& [id, pixels] : by_id) {
    Mask m(c.width(), c.height(), 0);
    for (auto p : pixels) m[p] = 1;
    if (count_set(flood_fill(m, pixels.front())) != static_cast<long>(pixels.size()))
      fail(ErrorCode::InvalidRoomIds, "room id " + std::to_string(id) + " is not 4-connected");
    std::map<RoomLabel, long> hist;
    for (auto p : pixels) ++hist[c[p]];
    long best = 0;
    for (const auto& [l, n] : hist) best = std::max(best, n);
    if (2 * best <= static_cast<long>(pixels.size()))
      fail(ErrorCode::InvalidRoomIds, "room id " + std::to_string(id) + " has no dominant category");
  }
}

BoundaryImage make_boundary(const Mask& inside, const Mask& entrance) {
  require_same_size(inside, entrance, "entrance mask size differs from inside mask");
  if (count_set(entrance) == 0) fail(ErrorCode::NoEntrance, "no main entrance pixels");
  return {inside, outline(inside), entrance};
}

BoundaryImage extract_boundary(const RasterFloorplan& fp) {
  return make_boundary(fp.inside, label_mask(fp.category, RoomLabel::MainEntrance));
}

void validate_boundary(const BoundaryImage& b) {
  require_same_size(b.inside, b.boundary, "boundary ring size differs from inside");
  require_same_size(b.inside, b.entrance, "entrance size differs from inside");
  if (count_set(b.inside) == 0) fail(ErrorCode::InvalidArgument, "empty inside mask");
  if (b.boundary != outline(b.inside))
    fail(ErrorCode::InvalidArgument, "boundary is not the closed ring around the inside mask");
  if (count_set(b.entrance) == 0) fail(ErrorCode::NoEntrance, "no main entrance pixels");
  for (std::size_t i = 0; i < b.inside.size(); ++i)
    if (b.entrance.pixels()[i] && !b.inside.pixels()[i])
      fail(ErrorCode::InvalidArgument, "entrance pixel outside the inside mask");
}

RasterFloorplan assemble_floorplan(std::string id, const LabelImage& category) {
  RasterFloorplan fp;
  fp.id = std::move(id);
  fp.category = category;
  fp.inside = Mask(category.width(), category.height(), 0);
  for (std::size_t i = 0; i < fp.inside.size(); ++i)
    fp.inside.pixels()[i] = category.pixels()[i] != RoomLabel::Outside;
  fp.boundary = outline(fp.inside);
  for (std::size_t i = 0; i < fp.inside.size(); ++i)
    if (category.pixels()[i] == RoomLabel::MainEntrance) fp.boundary.pixels()[i] = 1;

  Mask rooms(category.width(), category.height(), 0);
  for (std::size_t i = 0; i < rooms.size(); ++i) rooms.pixels()[i] = is_room_type(category.pixels()[i]);
  fp.room_ids = Image<std::uint8_t>(category.width(), category.height(), 0);
  // Regions are split by category as well as by walls.
  int next = 0;
  Mask seen(category.width(), category.height(), 0);
  for (int y = 0; y < category.height(); ++y) {
    for (int x = 0; x < category.width(); ++x) {
      if (!rooms(x, y) || seen(x, y)) continue;
      Mask same(category.width(), category.height(), 0);
      const RoomLabel l = category(x, y);
      for (std::size_t i = 0; i < same.size(); ++i) same.pixels()[i] = category.pixels()[i] == l;
      const Mask region = flood_fill(same, {x, y});
      if (next == 255) fail(ErrorCode::InvalidRoomIds, "more than 255 room regions");
      ++next;
      for (std::size_t i = 0; i < region.size(); ++i)
        if (region.pixels()[i]) {
          seen.pixels()[i] = 1;
          fp.room_ids.pixels()[i] = static_cast<std::uint8_t>(next);
        }
    }
  }
  return fp;
}

std::vector<RoomRegion> room_regions(const RasterFloorplan& fp) {
  std::map<int, RoomRegion> by_id;
  for (int y = 0; y < fp.height(); ++y) {
    for (int x = 0; x < fp.width(); ++x) {
      const int id = fp.room_ids(x, y);
      if (!id) continue;
      auto [it, inserted] = by_id.try_emplace(id);
      auto& r = it->second;
      if (inserted) {
        r.id = id;
        r.type = fp.category(x, y);
        r.pixels = Mask(fp.width(), fp.height(), 0);
      }
      r.pixels(x, y) = 1;
      ++r.area;
    }
  }
  std::vector<RoomRegion> out;
  for (auto& [id, r] : by_id) {
    r.bbox = bounding_box(r.pixels);
    std::map<RoomLabel, long> hist;
    for (int y = r.bbox.y; y < r.bbox.bottom(); ++y)
      for (int x = r.bbox.x; x < r.bbox.right(); ++x)
        if (r.pixels(x, y)) ++hist[fp.category(x, y)];
    long best = -1;
    for (const auto& [l, n] : hist)
      if (n > best) {
        best = n;
        r.type = l;
      }
    out.push_back(std::move(r));
  }
  return out;
}

DatasetSplit split_dataset(const std::vector<std::string>& items, std::uint64_t seed) {
  std::vector<std::string> shuffled = items;
  Rng rng(seed);
  for (std::size_t i = shuffled.size(); i > 1; --i) std::swap(shuffled[i - 1], shuffled[rng.index(i)]);

  const std::size_t held_out = shuffled.size() / 32;
  DatasetSplit split;
  split.val.assign(shuffled.begin(), shuffled.begin() + held_out);
  split.test.assign(shuffled.begin() + held_out, shuffled.begin() + 2 * held_out);
  split.train.assign(shuffled.begin() + 2 * held_out, shuffled.end());
  return split;
}

}  // namespace actfloor
