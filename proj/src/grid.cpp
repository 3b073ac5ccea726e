#include "actfloor/grid.hpp"

#include <deque>

namespace actfloor {

Components label_components(const Mask& mask, bool eight_connected) {
  Components out{Image<int>(mask.width(), mask.height(), 0), 0};
  std::vector<Point> stack;
  const int n_neighbors = eight_connected ? 8 : 4;
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (!mask(x, y) || out.labels(x, y)) continue;
      const int id = ++out.count;
      out.labels(x, y) = id;
      stack.push_back({x, y});
      while (!stack.empty()) {
        const Point p = stack.back();
        stack.pop_back();
        for (int k = 0; k < n_neighbors; ++k) {
          const Point q{p.x + kNeighbors8[k].x, p.y + kNeighbors8[k].y};
          if (!mask.in_bounds(q) || !mask[q] || out.labels[q]) continue;
          out.labels[q] = id;
          stack.push_back(q);
        }
      }
    }
  }
  return out;
}

Mask outline(const Mask& mask) {
  Mask out(mask.width(), mask.height(), 0);
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (!mask(x, y)) continue;
      for (const auto& d : kNeighbors8) {
        const Point q{x + d.x, y + d.y};
        if (!mask.in_bounds(q) || !mask[q]) {
          out(x, y) = 1;
          break;
        }
      }
    }
  }
  return out;
}

namespace {

Mask morph3x3(const Mask& mask, bool dilate) {
  Mask out(mask.width(), mask.height(), 0);
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      bool any = false;
      bool all = true;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const bool v = mask.in_bounds(x + dx, y + dy) && mask(x + dx, y + dy);
          any |= v;
          all &= v;
        }
      }
      out(x, y) = dilate ? any : all;
    }
  }
  return out;
}

}  // namespace

Mask dilate3x3(const Mask& mask) { return morph3x3(mask, true); }
Mask erode3x3(const Mask& mask) { return morph3x3(mask, false); }

Mask close3x3(const Mask& mask) {
  // Erosion treats the border as unset, which would eat set pixels touching
  // the edge; keep every originally set pixel so closing stays extensive.
  Mask closed = erode3x3(dilate3x3(mask));
  for (std::size_t i = 0; i < closed.size(); ++i)
    closed.pixels()[i] = closed.pixels()[i] | mask.pixels()[i];
  return closed;
}

Mask flood_fill(const Mask& mask, Point seed) {
  Mask out(mask.width(), mask.height(), 0);
  if (!mask.in_bounds(seed) || !mask[seed]) return out;
  std::deque<Point> queue{seed};
  out[seed] = 1;
  while (!queue.empty()) {
    const Point p = queue.front();
    queue.pop_front();
    for (const auto& d : kNeighbors4) {
      const Point q{p.x + d.x, p.y + d.y};
      if (!mask.in_bounds(q) || !mask[q] || out[q]) continue;
      out[q] = 1;
      queue.push_back(q);
    }
  }
  return out;
}

Rect bounding_box(const Mask& mask) {
  int x0 = mask.width(), y0 = mask.height(), x1 = -1, y1 = -1;
  for (int y = 0; y < mask.height(); ++y)
    for (int x = 0; x < mask.width(); ++x)
      if (mask(x, y)) {
        x0 = std::min(x0, x);
        y0 = std::min(y0, y);
        x1 = std::max(x1, x);
        y1 = std::max(y1, y);
      }
  if (x1 < 0) return {};
  return {x0, y0, x1 - x0 + 1, y1 - y0 + 1};
}

std::vector<Point> set_pixels(const Mask& mask) {
  std::vector<Point> out;
  for (int y = 0; y < mask.height(); ++y)
    for (int x = 0; x < mask.width(); ++x)
      if (mask(x, y)) out.push_back({x, y});
  return out;
}

}  // namespace actfloor
