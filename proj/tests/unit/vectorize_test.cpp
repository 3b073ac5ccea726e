#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "actfloor/grid.hpp"
#include "actfloor/procedural.hpp"
#include "actfloor/rng.hpp"
#include "actfloor/vectorize.hpp"
#include "fixtures.hpp"

using namespace actfloor;

namespace {

void fill(LabelImage& c, Rect r, RoomLabel l) {
  for (int y = r.y; y < r.bottom(); ++y)
    for (int x = r.x; x < r.right(); ++x) c(x, y) = l;
}

// 64x48 plan with 2 px walls: Master and Bathroom on top, Living and Kitchen
// below, doors into the living area, main entrance on the south wall.
LabelImage four_rooms() {
  LabelImage c(64, 48, RoomLabel::Outside);
  fill(c, {4, 4, 56, 40}, RoomLabel::Wall);
  fill(c, {6, 6, 24, 16}, RoomLabel::Master);
  fill(c, {32, 6, 26, 16}, RoomLabel::Bathroom);
  fill(c, {6, 24, 34, 18}, RoomLabel::Living);
  fill(c, {42, 24, 16, 18}, RoomLabel::Kitchen);
  fill(c, {12, 22, 8, 2}, RoomLabel::InteriorDoor);
  fill(c, {33, 22, 6, 2}, RoomLabel::InteriorDoor);
  fill(c, {40, 30, 2, 8}, RoomLabel::InteriorDoor);
  fill(c, {10, 42, 10, 2}, RoomLabel::MainEntrance);
  return c;
}

Mask structural(const LabelImage& c) {
  Mask m(c.width(), c.height(), 0);
  for (std::size_t i = 0; i < c.size(); ++i) m.pixels()[i] = is_structural(c.pixels()[i]);
  return m;
}

ActivityMap zero_activity(const LabelImage& c) { return {RealImage(c.width(), c.height(), 0.0)}; }

Polygon box(int x0, int y0, int x1, int y1) { return {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}; }

int count_of(const std::string& s, const std::string& needle) {
  int n = 0;
  for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
  return n;
}

}  // namespace

TEST(Walls, CleanRasterGivesStructuralMask) {
  EXPECT_EQ(extract_walls(four_rooms()), structural(four_rooms()));
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto fp = make_procedural_floorplan(s);
    EXPECT_EQ(extract_walls(fp.category), structural(fp.category)) << s;
  }
  EXPECT_EQ(count_set(extract_walls(LabelImage(32, 32, RoomLabel::Outside))), 0);
}

TEST(Walls, SaltAndPepperStaysWithinThreePercent) {
  Rng rng(5);
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto fp = make_procedural_floorplan(s);
    auto noisy = fp.category;
    for (auto& l : noisy.pixels())
      if (rng.unit() < 0.05) l = kAllLabels[rng.index(kAllLabels.size())];
    const Mask clean = structural(fp.category), got = extract_walls(noisy);
    long diff = 0;
    for (std::size_t i = 0; i < clean.size(); ++i) diff += clean.pixels()[i] != got.pixels()[i];
    EXPECT_LE(static_cast<double>(diff) / clean.size(), 0.03) << s;
  }
}

TEST(Walls, WavyWallBecomesOneSegment) {
  Mask m(60, 40, 0);
  for (int x = 0; x < 60; ++x)
    for (int y : {0, 1, 38, 39}) m(x, y) = 1;
  for (int y = 0; y < 40; ++y)
    for (int x : {0, 1, 58, 59}) m(x, y) = 1;
  for (int x = 2; x < 58; ++x) {
    const int y = 19 + (x / 5) % 2;
    m(x, y) = m(x, y + 1) = 1;
  }
  const auto segs = regularize_walls(m);
  int middle = 0;
  for (const auto& s : segs)
    if (s.horizontal && s.offset > 5 && s.offset < 35) {
      ++middle;
      EXPECT_GE(s.length(), 56);
    }
  EXPECT_EQ(middle, 1);
  EXPECT_EQ(enclosed_regions(render_walls(segs, 60, 40)).size(), 2u);
}

TEST(Walls, SharedWallEmittedOnce) {
  const auto segs = regularize_walls(structural(four_rooms()));
  std::set<std::tuple<bool, int, int, int, int>> unique;
  for (const auto& s : segs) unique.insert({s.horizontal, s.from, s.to, s.offset, s.thickness});
  EXPECT_EQ(unique.size(), segs.size());
  int shared = 0;  // the wall between Master and Bathroom at x = 30
  for (const auto& s : segs) shared += !s.horizontal && s.offset == 30;
  EXPECT_EQ(shared, 1);
  EXPECT_EQ(render_walls(segs, 64, 48), structural(four_rooms()));
}

TEST(Walls, ScribblesEncloseNothing) {
  Mask m(40, 40, 0);
  for (int x = 5; x < 20; ++x) m(x, 10) = 1;
  for (int y = 15; y < 35; ++y) m(25, y) = 1;
  for (int x = 8; x < 30; ++x) m(x, 30) = m(x, 31) = 1;
  try {
    regularize_walls(m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoClosedRegion);
  }
}

TEST(Polygons, TracedRectangleAndLShape) {
  const auto r = trace_polygon(testing_support::rect_mask(20, 20, {3, 4, 5, 6}));
  EXPECT_EQ(r.size(), 4u);
  EXPECT_EQ(r.front(), (Point{3, 4}));
  EXPECT_EQ(polygon_area(r), 30);
  auto l = testing_support::rect_mask(20, 20, {2, 2, 10, 10});
  for (int y = 2; y < 6; ++y)
    for (int x = 8; x < 12; ++x) l(x, y) = 0;
  const auto lp = trace_polygon(l);
  EXPECT_EQ(lp.size(), 6u);
  EXPECT_EQ(polygon_area(lp), count_set(l));
  EXPECT_TRUE(point_in_polygon(lp, {3.5, 3.5}));
  EXPECT_FALSE(point_in_polygon(lp, {9.5, 3.5}));
  EXPECT_TRUE(point_on_boundary(lp, {2.0, 7.0}));
  EXPECT_THROW(trace_polygon(Mask(4, 4, 0)), Error);
}

TEST(Rooms, TypesFollowDominantLabel) {
  LabelImage c(20, 10, RoomLabel::Kitchen);
  Mask region(20, 10, 1);
  for (int i = 0; i < 10; ++i) c(i, 0) = RoomLabel::Wall;  // 5% noise
  auto rooms = assign_rooms({region}, c);
  ASSERT_EQ(rooms.size(), 1u);
  EXPECT_EQ(rooms[0].type, RoomLabel::Kitchen);
  EXPECT_FALSE(rooms[0].ambiguous);

  fill(c, {0, 0, 10, 10}, RoomLabel::Master);
  fill(c, {10, 0, 10, 10}, RoomLabel::Second);
  rooms = assign_rooms({region}, c);
  EXPECT_TRUE(rooms[0].ambiguous);
  VectorizeOptions strict;
  strict.strict = true;
  try {
    assign_rooms({region}, c, strict);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::AmbiguousRoom);
  }
}

TEST(Rooms, GroundTruthTypesMatchRegionMode) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto fp = make_procedural_floorplan(s);
    const auto vf = vectorize(fp.category, zero_activity(fp.category));
    const auto regions = room_regions(fp);
    ASSERT_EQ(vf.rooms.size(), regions.size()) << s;
    for (const auto& r : regions) {
      const auto p = set_pixels(r.pixels)[0];
      int hits = 0;
      for (const auto& room : vf.rooms)
        if (point_in_polygon(room.polygon, {p.x + 0.5, p.y + 0.5})) {
          ++hits;
          EXPECT_EQ(room.type, r.type);
          EXPECT_EQ(polygon_area(room.polygon), r.area);
        }
      EXPECT_EQ(hits, 1);
    }
  }
}

namespace {

// Living below; Master and Second above, 2 px walls between everything.
std::vector<VectorRoom> stacked_rooms() {
  return {{RoomLabel::Living, box(2, 22, 40, 40), false},
          {RoomLabel::Master, box(2, 2, 20, 20), false},
          {RoomLabel::Second, box(22, 2, 40, 20), false}};
}

}  // namespace

TEST(Doors, PeakNearWallPlacesDoorThere) {
  ActivityMap act{RealImage(48, 48, 0.0)};
  act.density(15, 18) = 1.0;
  const auto doors = place_doors(stacked_rooms(), act);
  ASSERT_EQ(doors.size(), 2u);
  const auto& d = doors[0];
  EXPECT_EQ(d.room_index, 1);
  EXPECT_EQ(d.position.y, 20.0);
  EXPECT_TRUE(d.horizontal);
  EXPECT_EQ(d.outward, (Point{0, 1}));
  EXPECT_LE(std::abs(d.position.x - 15.5), d.width / 2.0);
}

TEST(Doors, UniformActivityTakesLowestCell) {
  const auto doors = place_doors(stacked_rooms(), {RealImage(48, 48, 0.5)});
  // Only the south edge faces living; its first cell is x = 2, so the door
  // is pushed to start there.
  EXPECT_EQ(doors[0].position, (Vec2{6.0, 20.0}));
}

TEST(Doors, LivingSharedWallBeatsEqualPeak) {
  ActivityMap act{RealImage(48, 48, 0.0)};
  act.density(10, 2) = 1.0;   // against the outer north wall
  act.density(10, 19) = 1.0;  // against the wall shared with living
  const auto doors = place_doors(stacked_rooms(), act);
  EXPECT_EQ(doors[0].position.y, 20.0);
  EXPECT_EQ(doors[0].outward, (Point{0, 1}));
}

TEST(Doors, NeedsLivingRoom) {
  auto rooms = stacked_rooms();
  rooms[0].type = RoomLabel::Kitchen;
  try {
    place_doors(rooms, {RealImage(48, 48, 0.5)});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoLivingRoom);
  }
}

TEST(Success, HandBuiltPlanPasses) {
  VectorFloorplan vf{48, 48, stacked_rooms(), {}, {}, EntranceSegment{{10, 41}, {18, 41}}};
  vf.doors = place_doors(vf.rooms, {RealImage(48, 48, 0.5)});
  EXPECT_TRUE(check_success(vf).ok);
  vf.main_entrance.reset();
  EXPECT_TRUE(check_success(vf).failed(SuccessCondition::LivingConnectivity));
}

TEST(Success, TwoBathroomsNoMasterFailsBalance) {
  auto rooms = stacked_rooms();
  rooms[1].type = rooms[2].type = RoomLabel::Bathroom;
  const VectorFloorplan vf{48, 48, rooms, {}, {}, EntranceSegment{{10, 41}, {18, 41}}};
  const auto rep = check_success(vf);
  EXPECT_FALSE(rep.ok);
  EXPECT_EQ(rep.failed_conditions, std::vector{SuccessCondition::BalancedTypes});
}

TEST(Success, StudyDoorIntoBedroomFailsConnectivity) {
  auto rooms = stacked_rooms();
  rooms[2].type = RoomLabel::Study;
  VectorFloorplan vf{48, 48, rooms, {}, {}, EntranceSegment{{10, 41}, {18, 41}}};
  vf.doors = {{1, {10, 20}, 8, true, {0, 1}}, {2, {22, 10}, 8, false, {-1, 0}}};
  const auto rep = check_success(vf);
  EXPECT_EQ(rep.failed_conditions, std::vector{SuccessCondition::LivingConnectivity});
  vf.doors[1] = {2, {30, 20}, 8, true, {0, 1}};
  EXPECT_TRUE(check_success(vf).ok);
}

TEST(Success, AmbiguousRoomFailsClosedRooms) {
  auto rooms = stacked_rooms();
  rooms[2].ambiguous = true;
  VectorFloorplan vf{48, 48, rooms, {}, {}, EntranceSegment{{10, 41}, {18, 41}}};
  vf.doors = place_doors(vf.rooms, {RealImage(48, 48, 0.5)});
  EXPECT_TRUE(check_success(vf).failed(SuccessCondition::ClosedRooms));
  EXPECT_FALSE(check_success(VectorFloorplan{}).ok);
}

TEST(Pipeline, FourRoomFixture) {
  const auto c = four_rooms();
  const auto vf = vectorize(c, zero_activity(c));
  EXPECT_EQ(vf.rooms.size(), 4u);
  EXPECT_EQ(vf.doors.size(), 3u);  // every room but the living room
  EXPECT_TRUE(check_success(vf).ok);
  ASSERT_TRUE(vf.main_entrance);
  EXPECT_EQ(vf.main_entrance->a, (Vec2{10, 43}));
  EXPECT_EQ(vf.main_entrance->b, (Vec2{20, 43}));
  const auto svg = export_svg(vf);
  EXPECT_EQ(count_of(svg, "class=\"room\""), 4);
  EXPECT_EQ(count_of(svg, "class=\"door\""), static_cast<int>(vf.doors.size()));
}

TEST(Pipeline, ProceduralPlansSucceedAndConserveArea) {
  for (std::uint64_t s = 0; s < 15; ++s) {
    const auto p = testing_support::simulated_plan(s);
    const auto vf = vectorize(p.plan.category, p.sim.map);
    const auto rep = check_success(vf);
    EXPECT_TRUE(rep.ok) << s;
    long area = 0;
    for (const auto& r : vf.rooms) area += polygon_area(r.polygon);
    const double ratio = static_cast<double>(area) / count_set(p.plan.inside);
    EXPECT_GE(ratio, 0.9) << s;
    EXPECT_LE(ratio, 1.0) << s;
    for (const auto& d : vf.doors) EXPECT_TRUE(point_on_boundary(vf.rooms[d.room_index].polygon, d.position)) << s;
  }
}

TEST(Export, EmptyFloorplanSvgAndJson) {
  const VectorFloorplan vf{256, 256, {}, {}, {}, std::nullopt};
  const auto svg = export_svg(vf);
  EXPECT_NE(svg.find("<svg"), std::string::npos);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_EQ(count_of(svg, "class=\"room\""), 0);
  EXPECT_EQ(vector_from_json(export_json(vf)), vf);
}

TEST(Export, JsonRoundTrip) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto p = testing_support::simulated_plan(s);
    auto vf = vectorize(p.plan.category, p.sim.map);
    if (!vf.rooms.empty()) vf.rooms[0].ambiguous = true;
    EXPECT_EQ(vector_from_json(export_json(vf)), vf);
  }
  EXPECT_THROW(vector_from_json("{\"width\": 3}"), Error);
  EXPECT_THROW(vector_from_json("[1,2"), Error);
}
