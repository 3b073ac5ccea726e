#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "actfloor/error.hpp"

namespace actfloor {

struct Point {
  int x = 0;
  int y = 0;

  friend bool operator==(const Point&, const Point&) = default;
};

/// Row-major ordering: lowest y first, then lowest x. Used for every
/// deterministic tie-break in the pipeline.
inline bool yx_less(Point a, Point b) { return a.y != b.y ? a.y < b.y : a.x < b.x; }

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Vec2&, const Vec2&) = default;
};

inline Vec2 to_vec(Point p) { return {static_cast<double>(p.x), static_cast<double>(p.y)}; }

/// Half-open axis-aligned pixel rectangle [x, x+w) x [y, y+h).
struct Rect {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  int right() const { return x + w; }
  int bottom() const { return y + h; }
  long area() const { return static_cast<long>(w) * h; }
  bool empty() const { return w <= 0 || h <= 0; }
  bool contains(Point p) const { return p.x >= x && p.x < right() && p.y >= y && p.y < bottom(); }
  bool intersects(const Rect& o) const {
    return x < o.right() && o.x < right() && y < o.bottom() && o.y < bottom();
  }

  friend bool operator==(const Rect&, const Rect&) = default;
};

template <class T>
class Image {
 public:
  using value_type = T;

  Image() = default;
  Image(int width, int height, T fill = T{})
      : width_(width), height_(height),
        data_(static_cast<std::size_t>(checked_dim(width)) * checked_dim(height), fill) {}

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return data_.empty(); }
  std::size_t size() const { return data_.size(); }

  bool in_bounds(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }
  bool in_bounds(Point p) const { return in_bounds(p.x, p.y); }

  T& operator()(int x, int y) { return data_[index(x, y)]; }
  const T& operator()(int x, int y) const { return data_[index(x, y)]; }
  T& operator[](Point p) { return data_[index(p.x, p.y)]; }
  const T& operator[](Point p) const { return data_[index(p.x, p.y)]; }

  std::span<T> pixels() { return data_; }
  std::span<const T> pixels() const { return data_; }

  template <class U>
  bool same_size(const Image<U>& other) const {
    return width_ == other.width() && height_ == other.height();
  }

  void fill(T value) { std::fill(data_.begin(), data_.end(), value); }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  static int checked_dim(int d) {
    if (d < 0) fail(ErrorCode::InvalidArgument, "negative image dimension");
    return d;
  }
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

/// Binary mask, values 0 or 1.
using Mask = Image<std::uint8_t>;
using RealImage = Image<double>;

template <class A, class B>
void require_same_size(const Image<A>& a, const Image<B>& b, const char* what) {
  if (!a.same_size(b)) fail(ErrorCode::SizeMismatch, what);
}

inline long count_set(const Mask& m) {
  long n = 0;
  for (auto v : m.pixels()) n += v != 0;
  return n;
}

}  // namespace actfloor
