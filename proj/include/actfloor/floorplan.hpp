#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "actfloor/image.hpp"
#include "actfloor/labels.hpp"

namespace actfloor {

inline constexpr int kRasterSize = 256;

/// Four-channel raster floorplan. Walls, doors and the main entrance count as
/// inside; room_ids is 0 everywhere except room interiors.
struct RasterFloorplan {
  std::string id;
  Mask inside;
  Mask boundary;
  LabelImage category;
  Image<std::uint8_t> room_ids;

  int width() const { return category.width(); }
  int height() const { return category.height(); }

  friend bool operator==(const RasterFloorplan&, const RasterFloorplan&) = default;
};

/// Throws SizeMismatch / IllegalLabel / InvalidRoomIds when an invariant of
/// RasterFloorplan does not hold.
void validate(const RasterFloorplan& fp);

struct BoundaryImage {
  Mask inside;
  Mask boundary;  // closed one-pixel ring around `inside`
  Mask entrance;  // subset of inside marking the main entrance opening

  int width() const { return inside.width(); }
  int height() const { return inside.height(); }

  friend bool operator==(const BoundaryImage&, const BoundaryImage&) = default;
};

/// Non-learning boundary extraction. Depends only on the inside mask and the
/// MainEntrance labels, never on room categories.
BoundaryImage extract_boundary(const RasterFloorplan& fp);

/// Builds a BoundaryImage from an inside mask and an entrance mask, deriving
/// the ring. Throws NoEntrance for an empty entrance.
BoundaryImage make_boundary(const Mask& inside, const Mask& entrance);

/// Throws InvalidArgument unless the ring equals the outline of `inside`,
/// `inside` is nonempty and the entrance is a nonempty subset of inside.
void validate_boundary(const BoundaryImage& b);

/// Completes a category image into a full RasterFloorplan: inside from
/// non-Outside labels, boundary from the outer ring plus entrance labels,
/// room ids from 4-connected room-labelled regions.
RasterFloorplan assemble_floorplan(std::string id, const LabelImage& category);

/// One 4-connected room region, as recorded in the room_ids channel.
struct RoomRegion {
  int id = 0;
  RoomLabel type = RoomLabel::Living;
  Mask pixels;
  Rect bbox;
  long area = 0;
};

std::vector<RoomRegion> room_regions(const RasterFloorplan& fp);

Mask label_mask(const LabelImage& category, RoomLabel label);

struct DatasetSplit {
  std::vector<std::string> train;
  std::vector<std::string> val;
  std::vector<std::string> test;
};

/// Deterministic seeded shuffle, then 30:1:1 train/val/test with the
/// remainder going to train.
DatasetSplit split_dataset(const std::vector<std::string>& items, std::uint64_t seed);

/// Manifest-based storage: a JSON manifest naming four 8-bit grayscale PNGs.
/// `path` may be a manifest file or a directory holding `manifest.json`.
RasterFloorplan load_floorplan(const std::filesystem::path& path);
void save_floorplan(const RasterFloorplan& fp, const std::filesystem::path& path);

/// Manifests found directly in `dir`, sorted by file name.
std::vector<std::filesystem::path> list_manifests(const std::filesystem::path& dir);

Image<std::uint8_t> label_codes(const LabelImage& category);
/// Throws IllegalLabel on codes outside RoomLabel.
LabelImage labels_from_codes(const Image<std::uint8_t>& codes);

}  // namespace actfloor
