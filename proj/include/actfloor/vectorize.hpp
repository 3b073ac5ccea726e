#pragma once

#include <optional>
#include <string>
#include <vector>

#include "actfloor/actsim.hpp"
#include "actfloor/labels.hpp"

namespace actfloor {

/// Axis-aligned wall band in pixel coordinates. A horizontal segment covers
/// rows [offset, offset + thickness) and columns [from, to].
struct WallSegment {
  bool horizontal = true;
  int from = 0;
  int to = 0;
  int offset = 0;
  int thickness = 1;

  int length() const { return to - from + 1; }
  Rect rect() const {
    return horizontal ? Rect{from, offset, length(), thickness} : Rect{offset, from, thickness, length()};
  }
  friend bool operator==(const WallSegment&, const WallSegment&) = default;
};

/// Room outline as a closed rectilinear ring of pixel-corner coordinates
/// (the pixel (x, y) spans [x, x+1] x [y, y+1]); the first vertex is not
/// repeated at the end.
using Polygon = std::vector<Point>;

struct VectorRoom {
  RoomLabel type = RoomLabel::Living;
  Polygon polygon;
  bool ambiguous = false;
  friend bool operator==(const VectorRoom&, const VectorRoom&) = default;
};

/// Door centred at `position` on an edge of its room's polygon. `horizontal`
/// is the orientation of that edge; `outward` is the unit normal pointing
/// away from the room.
struct VectorDoor {
  int room_index = 0;
  Vec2 position;
  int width = 8;
  bool horizontal = true;
  Point outward;
  friend bool operator==(const VectorDoor&, const VectorDoor&) = default;
};

struct EntranceSegment {
  Vec2 a;
  Vec2 b;
  friend bool operator==(const EntranceSegment&, const EntranceSegment&) = default;
};

struct VectorFloorplan {
  int width = 0;
  int height = 0;
  std::vector<VectorRoom> rooms;
  std::vector<WallSegment> walls;
  std::vector<VectorDoor> doors;
  std::optional<EntranceSegment> main_entrance;
  friend bool operator==(const VectorFloorplan&, const VectorFloorplan&) = default;
};

enum class SuccessCondition { ClosedRooms, BalancedTypes, LivingConnectivity };
std::string_view condition_name(SuccessCondition c);

struct SuccessReport {
  bool ok = true;
  std::vector<SuccessCondition> failed_conditions;
  bool failed(SuccessCondition c) const;
};

struct VectorizeOptions {
  int min_segment = 6;       // shortest run kept as a wall
  int snap_distance = 3;     // endpoint snapping onto perpendicular walls
  double dominance = 0.8;    // share of the region a room type must hold
  int door_width = 8;
  double probe_depth = 6.5;  // wall thickness a door may see through
  bool strict = false;       // throw AmbiguousRoom instead of flagging
};

/// Wall evidence is every structural label. Evidence pixels survive with at
/// least 2 evidence 8-neighbours; other pixels are filled in with 6 or more.
Mask extract_walls(const LabelImage& category);

/// Closing, per-row/column runs grouped into bands, endpoint snapping.
/// Throws NoClosedRegion when the segments enclose nothing.
std::vector<WallSegment> regularize_walls(const Mask& walls, const VectorizeOptions& opts = {});

Mask render_walls(const std::vector<WallSegment>& segments, int width, int height);

/// 4-connected non-wall components that do not touch the image border.
std::vector<Mask> enclosed_regions(const Mask& walls);

/// Outer boundary of a region as a simplified rectilinear ring. Throws
/// EmptyShape for an empty mask.
Polygon trace_polygon(const Mask& region);
long polygon_area(const Polygon& p);
bool point_in_polygon(const Polygon& p, Vec2 q);
/// True when q lies exactly on one of the polygon's edges.
bool point_on_boundary(const Polygon& p, Vec2 q);

/// Types each region by its dominant label. Outside-dominated regions are
/// dropped. Below `dominance` the room is flagged, or AmbiguousRoom thrown in
/// strict mode.
std::vector<VectorRoom> assign_rooms(const std::vector<Mask>& regions, const LabelImage& category,
                                     const VectorizeOptions& opts = {});

/// One door per non-living room, on the edge cell closest to the room's
/// activity peak among the cells that face a living room. Falls back to edges
/// facing another room. Throws NoLivingRoom.
std::vector<VectorDoor> place_doors(const std::vector<VectorRoom>& rooms, const ActivityMap& activity,
                                    const VectorizeOptions& opts = {});

/// Segment through the middle of the MainEntrance pixels, along their long
/// axis; nullopt when there are none.
std::optional<EntranceSegment> entrance_segment(const LabelImage& category);

/// Index of the first room whose polygon contains the probes walked from
/// `from` along `dir` (0.5, 1.5, ... up to depth); nullopt if none.
std::optional<int> room_across(const std::vector<VectorRoom>& rooms, Vec2 from, Point dir, double depth,
                               int exclude = -1);

SuccessReport check_success(const VectorFloorplan& vf, const VectorizeOptions& opts = {});

/// Full pipeline: walls, regularization, rooms, doors, entrance.
VectorFloorplan vectorize(const LabelImage& category, const ActivityMap& activity, const VectorizeOptions& opts = {});

std::string export_svg(const VectorFloorplan& vf);
std::string export_json(const VectorFloorplan& vf);
/// Throws InvalidArgument on malformed documents.
VectorFloorplan vector_from_json(const std::string& text);

}  // namespace actfloor
