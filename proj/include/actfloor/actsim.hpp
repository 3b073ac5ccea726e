#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "actfloor/floorplan.hpp"
#include "actfloor/furnish.hpp"

namespace actfloor {

/// Walkable pixels plus their 4-connected components, so reachability
/// queries are O(1). Immutable after construction.
class FreeSpaceMask {
 public:
  FreeSpaceMask() = default;
  explicit FreeSpaceMask(Mask walkable);

  const Mask& mask() const { return walkable_; }
  int width() const { return walkable_.width(); }
  int height() const { return walkable_.height(); }
  const Rect& bounds() const { return bounds_; }

  bool free(Point p) const { return walkable_.in_bounds(p) && walkable_[p] != 0; }
  /// Free test for a continuous position: the pixel whose unit cell holds it.
  bool free(Vec2 v) const;
  bool connected(Point a, Point b) const;
  /// True when every pixel cell the segment passes through is free.
  bool segment_free(Vec2 a, Vec2 b) const;

 private:
  Mask walkable_;
  Image<int> component_;
  Rect bounds_;
};

/// Walkable areas for the two activity partitions. `living` covers the living
/// area, doors and main entrance; `rooms` covers every other room with its
/// doorways; `interior` is everything walkable (furniture placed outside any
/// room routes through it). Furniture rectangles are never walkable.
struct PartitionSpaces {
  FreeSpaceMask living;
  FreeSpaceMask rooms;
  FreeSpaceMask interior;
};

PartitionSpaces build_free_space(const RasterFloorplan& fp, const std::vector<FurnitureInstance>& furniture);

enum class EdgeKind { Living, Room };

struct GraphEdge {
  int a = 0;
  int b = 0;
  EdgeKind kind = EdgeKind::Living;
  bool via_interior = false;  // room edge of a piece hosted outside any room
};

struct ConnectivityGraph {
  std::vector<Point> nodes;  // deduplicated; node 0 is the main entrance
  std::vector<GraphEdge> edges;

  std::size_t count(EdgeKind kind) const;
  /// Nodes touched by living edges (main entrance and room entrances).
  std::size_t living_node_count() const;
};

Point main_entrance_point(const RasterFloorplan& fp);

/// Living edges: complete graph over the main entrance and every distinct
/// room entrance. Room edges: one per piece, entrance to anchor. Throws
/// NoEntrance when the plan has no MainEntrance pixel.
ConnectivityGraph build_connectivity_graph(const RasterFloorplan& fp, const std::vector<FurnitureInstance>& furniture);

struct BiRrtParams {
  double step_size = 4.0;
  int max_iterations = 5000;
  double goal_bias = 0.1;
  int runs_per_edge = 10;
  double splat_sigma = 3.0;

  void validate() const;
};

using Polyline = std::vector<Vec2>;

/// Bidirectional RRT (connect variant) followed by greedy shortcutting and
/// resampling. Returns nullopt when the endpoints are disconnected or the
/// iteration budget runs out. Throws InvalidArgument for non-free endpoints.
std::optional<Polyline> bi_rrt_path(const FreeSpaceMask& free, Point start, Point goal, const BiRrtParams& params,
                                    std::uint64_t seed);

/// Gaussian splats (truncated at 3 sigma) along every path, densified to unit
/// spacing, accumulated and divided by the maximum. Throws EmptyInput.
RealImage rasterize_density(const std::vector<Polyline>& paths, double sigma, int width, int height);

struct ActivityMap {
  RealImage density;

  int width() const { return density.width(); }
  int height() const { return density.height(); }

  /// Throws InvalidArgument unless every value is finite and within [0, 1].
  void validate() const;

  friend bool operator==(const ActivityMap&, const ActivityMap&) = default;
};

inline constexpr double kLivingWeight = 0.6;
inline constexpr double kRoomsWeight = 0.4;

/// clamp(0.6 living + 0.4 rooms, 0, 1), zero outside `inside`.
ActivityMap blend_activity(const RealImage& living, const RealImage& rooms, const Mask& inside);

struct ActivitySimulation {
  ActivityMap map;
  ConnectivityGraph graph;
  std::vector<Polyline> living_paths;
  std::vector<Polyline> room_paths;
  std::size_t edges_total = 0;
  std::size_t edges_solved = 0;
  std::vector<std::string> warnings;
};

/// Full synthesis with diagnostics. Unsolvable edges are skipped with a
/// warning; throws AllEdgesUnsolvable when nothing could be simulated.
/// Each edge run draws from derive_seed(seed, edge * 1024 + run), so `jobs`
/// does not change the result.
ActivitySimulation simulate_activity(const RasterFloorplan& fp, const std::vector<FurnitureInstance>& furniture,
                                     const BiRrtParams& params, std::uint64_t seed, unsigned jobs = 1);

ActivityMap synthesize_activity_map(const RasterFloorplan& fp, const std::vector<FurnitureInstance>& furniture,
                                    const BiRrtParams& params, std::uint64_t seed);

/// 8-bit grayscale, value = round(255 density).
Image<std::uint8_t> activity_to_gray(const ActivityMap& map);
ActivityMap activity_from_gray(const Image<std::uint8_t>& gray);
std::vector<std::uint8_t> encode_activity_png(const ActivityMap& map);
void save_activity_png(const ActivityMap& map, const std::filesystem::path& path);
ActivityMap load_activity_png(const std::filesystem::path& path);

/// Float32 little-endian payload behind a 16-byte header: "ACTFMAP\0",
/// uint32 width, uint32 height.
void save_activity_f32(const ActivityMap& map, const std::filesystem::path& path);
ActivityMap load_activity_f32(const std::filesystem::path& path);

}  // namespace actfloor
