#include <gtest/gtest.h>

#include <map>
#include <set>

#include "actfloor/furnish.hpp"
#include "actfloor/grid.hpp"
#include "actfloor/procedural.hpp"
#include "fixtures.hpp"

using namespace actfloor;

namespace {

// 24x16 plan: Master room on top, a one-pixel wall at y = 6, living area below,
// main entrance on the west wall. `lower` replaces the living label.
RasterFloorplan two_band_plan(RoomLabel lower = RoomLabel::Living) {
  LabelImage c(24, 16, RoomLabel::Wall);
  for (int y = 1; y < 15; ++y)
    for (int x = 1; x < 23; ++x) c(x, y) = y < 6 ? RoomLabel::Master : y > 6 ? lower : RoomLabel::Wall;
  c(0, 10) = c(0, 11) = RoomLabel::MainEntrance;
  return assemble_floorplan("two_band", c);
}

int room_id_of(const RasterFloorplan& fp, RoomLabel type) {
  for (const auto& r : room_regions(fp))
    if (r.type == type) return r.id;
  return -1;
}

bool touches(const Rect& r, const Mask& m, int margin) {
  for (int y = r.y - margin; y < r.bottom() + margin; ++y)
    for (int x = r.x - margin; x < r.right() + margin; ++x)
      if (m.in_bounds(x, y) && m(x, y)) return true;
  return false;
}

}  // namespace

TEST(Furnish, PrimaryKindPerRoomType) {
  EXPECT_EQ(primary_furniture_for(RoomLabel::Master), FurnitureKind::Bed);
  EXPECT_EQ(primary_furniture_for(RoomLabel::Second), FurnitureKind::Bed);
  EXPECT_EQ(primary_furniture_for(RoomLabel::Study), FurnitureKind::Desk);
  EXPECT_EQ(primary_furniture_for(RoomLabel::Bathroom), FurnitureKind::Toilet);
  EXPECT_EQ(primary_furniture_for(RoomLabel::Kitchen), FurnitureKind::Stove);
  EXPECT_EQ(primary_furniture_for(RoomLabel::Balcony), FurnitureKind::WashingMachine);
  EXPECT_FALSE(primary_furniture_for(RoomLabel::Living));
  EXPECT_FALSE(primary_furniture_for(RoomLabel::OtherRoom));
  for (auto k : kAllFurnitureKinds) EXPECT_EQ(furniture_from_name(furniture_name(k)), k);
}

TEST(Furnish, PolicyValidation) {
  EXPECT_NO_THROW(PlacementPolicy::defaults().validate());
  auto p = PlacementPolicy::defaults();
  p[FurnitureKind::Bed].size_fraction = 0.0;
  EXPECT_THROW(p.validate(), Error);
  p = PlacementPolicy::defaults();
  p[FurnitureKind::Desk].sides.clear();
  EXPECT_THROW(p.validate(), Error);
}

TEST(Furnish, OneLegalPiecePerFurnishedRoom) {
  const auto policy = PlacementPolicy::defaults();
  for (std::uint64_t s = 0; s < 60; ++s) {
    const auto fp = make_procedural_floorplan(s);
    const auto pieces = place_primary_furniture(fp, policy, s * 7 + 1);
    std::map<int, int> per_room;
    for (const auto& f : pieces) {
      ++per_room[f.room_id];
      const auto regions = room_regions(fp);
      const auto& room = *std::find_if(regions.begin(), regions.end(), [&](auto& r) { return r.id == f.room_id; });
      EXPECT_EQ(primary_furniture_for(room.type), f.kind);
      for (int y = f.rect.y; y < f.rect.bottom(); ++y)
        for (int x = f.rect.x; x < f.rect.right(); ++x) ASSERT_EQ(fp.room_ids(x, y), f.room_id) << s;
      const auto door = find_room_doorway(fp, room);
      ASSERT_TRUE(door);
      EXPECT_EQ(door->entrance, f.entrance);
      EXPECT_FALSE(touches(f.rect, door->pixels, policy.clearance)) << s;
      const auto cands = candidate_rects(fp, room, *door, f.kind, policy);
      EXPECT_NE(std::find(cands.begin(), cands.end(), f.rect), cands.end());
    }
    for (const auto& r : room_regions(fp))
      EXPECT_EQ(per_room[r.id], primary_furniture_for(r.type) ? 1 : 0) << s << " room " << r.id;
  }
}

TEST(Furnish, DeterministicAndSeedSensitive) {
  const auto fp = make_procedural_floorplan(4);
  const auto policy = PlacementPolicy::defaults();
  EXPECT_EQ(place_primary_furniture(fp, policy, 9), place_primary_furniture(fp, policy, 9));
  std::set<std::vector<int>> layouts;
  for (std::uint64_t s = 0; s < 30; ++s) {
    std::vector<int> key;
    for (const auto& f : place_primary_furniture(fp, policy, s)) key.insert(key.end(), {f.rect.x, f.rect.y});
    layouts.insert(key);
  }
  EXPECT_GT(layouts.size(), 1u);
}

TEST(Furnish, SeedsCoverEveryCandidate) {
  const auto fp = make_procedural_floorplan(8);
  const auto policy = PlacementPolicy::defaults();
  const auto regions = room_regions(fp);
  const auto room = *std::find_if(regions.begin(), regions.end(), [](auto& r) { return primary_furniture_for(r.type); });
  const auto door = *find_room_doorway(fp, room);
  const auto kind = *primary_furniture_for(room.type);
  const auto cands = candidate_rects(fp, room, door, kind, policy);
  ASSERT_FALSE(cands.empty());
  std::set<std::pair<int, int>> hit;
  for (std::uint64_t s = 0; s < 400; ++s)
    for (const auto& f : place_primary_furniture(fp, policy, s))
      if (f.room_id == room.id) hit.insert({f.rect.x, f.rect.y});
  std::set<std::pair<int, int>> all;
  for (const auto& r : cands) all.insert({r.x, r.y});
  EXPECT_EQ(hit, all);
}

TEST(Furnish, RoomWithoutDoorIsRejected) {
  // Master above living with an unbroken wall: no InteriorDoor.
  try {
    place_primary_furniture(two_band_plan(), PlacementPolicy::defaults(), 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoRoomEntrance);
  }
}

TEST(Furnish, SynthesizedEntranceMaximizesClearance) {
  const auto fp = two_band_plan();
  const int master = room_id_of(fp, RoomLabel::Master);
  // Shared wall y = 6, x in 1..22; positions with three shared neighbours each
  // way are x in 4..19. The farthest from a piece in the top-left is x = 19.
  EXPECT_EQ(synthesize_room_entrance(master, fp, {1, 1, 4, 3}), (Point{19, 6}));
  // Piece on the right: farthest wide position is x = 4.
  EXPECT_EQ(synthesize_room_entrance(master, fp, {18, 1, 4, 3}), (Point{4, 6}));
}

TEST(Furnish, SynthesizedEntranceNeedsLivingNeighbour) {
  const auto fp = two_band_plan(RoomLabel::Kitchen);
  try {
    synthesize_room_entrance(room_id_of(fp, RoomLabel::Master), fp, {1, 1, 4, 3});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoSharedWall);
  }
}

TEST(Furnish, DoorwayCutThroughPlainWall) {
  const auto fp = two_band_plan();
  const auto cut = doorway_pixels(fp, {12, 6}, 8);
  EXPECT_EQ(count_set(cut), 8);
  for (int x = 8; x < 16; ++x) EXPECT_EQ(cut(x, 6), 1);
  // A MainEntrance pixel returns its whole opening.
  EXPECT_EQ(count_set(doorway_pixels(fp, {0, 10})), 2);
}

TEST(Furnish, AnchorNearestWalkableSide) {
  Mask walk(20, 20, 1);
  const FurnitureInstance f{FurnitureKind::Bed, {5, 5, 4, 4}, 1, {7, 0}};
  EXPECT_EQ(furniture_anchor(walk, f), (Point{7, 4}));
  for (int x = 0; x < 20; ++x) walk(x, 4) = 0;
  EXPECT_EQ(furniture_anchor(walk, f), (Point{9, 7}));  // east side is nearer than west
  EXPECT_FALSE(furniture_anchor(Mask(20, 20, 0), f));
}
