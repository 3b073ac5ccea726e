#pragma once

#include <vector>

#include "actfloor/image.hpp"

namespace actfloor {

inline constexpr Point kNeighbors4[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
inline constexpr Point kNeighbors8[8] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1},
                                         {1, 1}, {-1, 1}, {1, -1}, {-1, -1}};

/// Connected components of the set pixels. Labels start at 1; 0 marks unset
/// pixels. Components are numbered in row-major order of their first pixel.
struct Components {
  Image<int> labels;
  int count = 0;
};

Components label_components(const Mask& mask, bool eight_connected = false);

/// Pixels of `mask` with at least one 8-neighbour that is unset or outside
/// the image: the one-pixel outline of the shape.
Mask outline(const Mask& mask);

Mask dilate3x3(const Mask& mask);
Mask erode3x3(const Mask& mask);
/// Morphological closing with a 3x3 square structuring element; pixels beyond
/// the image border count as unset.
Mask close3x3(const Mask& mask);

/// Breadth-first flood from `seed` over set pixels (4-connected).
Mask flood_fill(const Mask& mask, Point seed);

/// Bounding box of the set pixels; empty Rect for an empty mask.
Rect bounding_box(const Mask& mask);

std::vector<Point> set_pixels(const Mask& mask);

}  // namespace actfloor
