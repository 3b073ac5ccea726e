#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "actfloor/floorplan.hpp"

namespace actfloor {

enum class FurnitureKind { Bed, Desk, Toilet, Stove, WashingMachine };

inline constexpr std::array<FurnitureKind, 5> kAllFurnitureKinds = {
    FurnitureKind::Bed, FurnitureKind::Desk, FurnitureKind::Toilet, FurnitureKind::Stove,
    FurnitureKind::WashingMachine};

std::string_view furniture_name(FurnitureKind k);
std::optional<FurnitureKind> furniture_from_name(std::string_view name);

/// Primary furniture for a room category; nullopt for Living and OtherRoom.
std::optional<FurnitureKind> primary_furniture_for(RoomLabel room);

struct FurnitureInstance {
  FurnitureKind kind = FurnitureKind::Bed;
  Rect rect;
  int room_id = 0;  // 0: not hosted by a room (placed in the living area)
  Point entrance;

  friend bool operator==(const FurnitureInstance&, const FurnitureInstance&) = default;
};

enum class CandidateSide { Opposite, DiagonallyOpposite, BesideEntrance, AnySide };

struct KindPolicy {
  double size_fraction = 1.0;  // of room area; unused for fixed-size kinds
  double aspect = 1.0;         // long side / short side
  bool fixed_size = false;
  int fixed_along = 0;         // extent along the wall
  int fixed_depth = 0;         // extent away from the wall
  bool full_wall = false;      // length equals the wall it is flush with
  int wall_depth = 8;          // depth for full_wall kinds
  std::vector<CandidateSide> sides;
};

struct PlacementPolicy {
  std::array<KindPolicy, 5> kinds;
  int beside_offset = 4;  // min gap between a beside-entrance piece and the opening
  int clearance = 1;      // keep-out distance around the doorway

  const KindPolicy& operator[](FurnitureKind k) const { return kinds[static_cast<std::size_t>(k)]; }
  KindPolicy& operator[](FurnitureKind k) { return kinds[static_cast<std::size_t>(k)]; }

  static PlacementPolicy defaults();
  /// Throws InvalidArgument on fractions outside (0, 1] or empty side sets.
  void validate() const;
};

/// Wall of a room, named by compass direction in image coordinates (north = -y).
enum class WallSide { North, South, West, East };

/// A room's doorway: the opening pixels and the entrance pixel on the face
/// that looks into the room.
struct Doorway {
  Mask pixels;
  Point entrance;
  WallSide side = WallSide::North;
};

/// Finds the InteriorDoor opening of a room, preferring one that leads into
/// the living area. nullopt when the room has no door.
std::optional<Doorway> find_room_doorway(const RasterFloorplan& fp, const RoomRegion& room);

/// One primary piece per Master/Second/Study/Bathroom/Kitchen/Balcony room.
/// The location is drawn uniformly (seeded per room) from the rule-allowed
/// candidates. Throws NoRoomEntrance or RoomTooSmall.
std::vector<FurnitureInstance> place_primary_furniture(const RasterFloorplan& fp, const PlacementPolicy& policy,
                                                       std::uint64_t seed);

/// Every distinct legal rectangle the rules allow for `room`, in generation
/// order. Exposed so callers can inspect the candidate set the seed samples.
std::vector<Rect> candidate_rects(const RasterFloorplan& fp, const RoomRegion& room, const Doorway& door,
                                  FurnitureKind kind, const PlacementPolicy& policy);

/// Entrance pixel on a wall the room shares with the living area, chosen to
/// maximize the distance to `furniture`; ties go to the lowest (y, x).
/// Throws NoSharedWall.
Point synthesize_room_entrance(int room_id, const RasterFloorplan& fp, const Rect& furniture);

/// Walkable opening behind an entrance pixel: the door or main-entrance
/// component it belongs to, or for a plain wall pixel a door-width cut through
/// the wall towards the living area.
Mask doorway_pixels(const RasterFloorplan& fp, Point entrance, int door_width = 8);

/// Anchor pixel of a piece: the midpoint just outside one of its sides that is
/// walkable, nearest to the entrance. nullopt if no side is walkable.
std::optional<Point> furniture_anchor(const Mask& walkable, const FurnitureInstance& f);

/// Room id under the rectangle's center (0 for non-room pixels).
int host_room_at(const RasterFloorplan& fp, const Rect& r);

}  // namespace actfloor
