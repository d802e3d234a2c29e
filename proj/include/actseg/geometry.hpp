// Copyright 2026 The actseg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Polygon and raster primitives.
//
// Coordinate convention: a vertex (x, y) is a pixel *corner*. Pixel (i, j)
// covers the unit square [i, i+1] x [j, j+1] and its center sits at
// (i + 0.5, j + 0.5). A polygon owns every pixel whose center lies inside it
// or on its boundary, under the even-odd rule. With this convention the
// square (0,0)-(10,0)-(10,10)-(0,10) owns exactly 100 pixels.

#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "actseg/error.hpp"

namespace actseg {

struct Point {
  int x = 0;
  int y = 0;

  friend auto operator<=>(const Point&, const Point&) = default;
};

struct BoundingBox {
  int x_min = 0;
  int y_min = 0;
  int x_max = 0;
  int y_max = 0;

  int width() const noexcept { return x_max - x_min; }
  int height() const noexcept { return y_max - y_min; }
  std::int64_t area() const noexcept { return std::int64_t{width()} * height(); }

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

inline BoundingBox unite(const BoundingBox& a, const BoundingBox& b) {
  return {std::min(a.x_min, b.x_min), std::min(a.y_min, b.y_min), std::max(a.x_max, b.x_max),
          std::max(a.y_max, b.y_max)};
}

// Closed ring; the last vertex connects back to the first.
struct Polygon {
  std::vector<Point> vertices;

  std::size_t size() const noexcept { return vertices.size(); }
  bool empty() const noexcept { return vertices.empty(); }

  friend bool operator==(const Polygon&, const Polygon&) = default;
};

inline Polygon make_rectangle(int x_min, int y_min, int x_max, int y_max) {
  return Polygon{{{x_min, y_min}, {x_max, y_min}, {x_max, y_max}, {x_min, y_max}}};
}

inline Polygon make_rectangle(const BoundingBox& box) {
  return make_rectangle(box.x_min, box.y_min, box.x_max, box.y_max);
}

inline BoundingBox bounding_box(const Polygon& polygon) {
  if (polygon.empty()) return {};
  BoundingBox box{polygon.vertices[0].x, polygon.vertices[0].y, polygon.vertices[0].x,
                  polygon.vertices[0].y};
  for (const Point& p : polygon.vertices) {
    box.x_min = std::min(box.x_min, p.x);
    box.y_min = std::min(box.y_min, p.y);
    box.x_max = std::max(box.x_max, p.x);
    box.y_max = std::max(box.y_max, p.y);
  }
  return box;
}

// Twice the signed shoelace area.
inline std::int64_t doubled_signed_area(const Polygon& polygon) {
  std::int64_t sum = 0;
  const std::size_t n = polygon.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = polygon.vertices[i];
    const Point& b = polygon.vertices[(i + 1) % n];
    sum += std::int64_t{a.x} * b.y - std::int64_t{b.x} * a.y;
  }
  return sum;
}

// Area centroid, falling back to the vertex mean for zero-area rings.
inline std::pair<double, double> centroid(const Polygon& polygon) {
  const std::size_t n = polygon.size();
  if (n == 0) return {0.0, 0.0};
  const std::int64_t a2 = doubled_signed_area(polygon);
  if (a2 == 0) {
    double sx = 0, sy = 0;
    for (const Point& p : polygon.vertices) {
      sx += p.x;
      sy += p.y;
    }
    return {sx / static_cast<double>(n), sy / static_cast<double>(n)};
  }
  double cx = 0, cy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = polygon.vertices[i];
    const Point& b = polygon.vertices[(i + 1) % n];
    const double cross = static_cast<double>(std::int64_t{a.x} * b.y - std::int64_t{b.x} * a.y);
    cx += (a.x + b.x) * cross;
    cy += (a.y + b.y) * cross;
  }
  const double denom = 3.0 * static_cast<double>(a2);
  return {cx / denom, cy / denom};
}

// Drops consecutive duplicate vertices, including a repeated closing vertex.
inline Polygon remove_repeated_vertices(const Polygon& polygon) {
  Polygon out;
  out.vertices.reserve(polygon.size());
  for (const Point& p : polygon.vertices) {
    if (out.vertices.empty() || out.vertices.back() != p) out.vertices.push_back(p);
  }
  while (out.vertices.size() > 1 && out.vertices.front() == out.vertices.back()) {
    out.vertices.pop_back();
  }
  return out;
}

// Drops vertices lying in the middle of a straight run.
inline Polygon remove_collinear_vertices(const Polygon& polygon) {
  Polygon ring = remove_repeated_vertices(polygon);
  bool changed = true;
  while (changed && ring.size() > 3) {
    changed = false;
    const std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Point& prev = ring.vertices[(i + n - 1) % n];
      const Point& cur = ring.vertices[i];
      const Point& next = ring.vertices[(i + 1) % n];
      const std::int64_t cross = std::int64_t{cur.x - prev.x} * (next.y - cur.y) -
                                 std::int64_t{cur.y - prev.y} * (next.x - cur.x);
      const std::int64_t dot = std::int64_t{cur.x - prev.x} * (next.x - cur.x) +
                               std::int64_t{cur.y - prev.y} * (next.y - cur.y);
      if (cross == 0 && dot > 0) {
        ring.vertices.erase(ring.vertices.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
    }
  }
  return ring;
}

// Clamps every vertex to the page rectangle [0, width] x [0, height].
inline Polygon clamp_to_page(const Polygon& polygon, int width, int height) {
  Polygon out = polygon;
  for (Point& p : out.vertices) {
    p.x = std::clamp(p.x, 0, std::max(width, 0));
    p.y = std::clamp(p.y, 0, std::max(height, 0));
  }
  return out;
}

namespace detail {

inline int orientation(const Point& a, const Point& b, const Point& c) {
  const std::int64_t v =
      std::int64_t{b.x - a.x} * (c.y - a.y) - std::int64_t{b.y - a.y} * (c.x - a.x);
  return (v > 0) - (v < 0);
}

inline bool within_box(const Point& a, const Point& b, const Point& p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

// True when segments [a,b] and [c,d] share any point other than a vertex
// that is an endpoint of both.
inline bool segments_conflict(const Point& a, const Point& b, const Point& c, const Point& d) {
  const int o1 = orientation(a, b, c);
  const int o2 = orientation(a, b, d);
  const int o3 = orientation(c, d, a);
  const int o4 = orientation(c, d, b);
  if (o1 == 0 && o2 == 0) {
    // Collinear: conflict unless the overlap is a single shared endpoint.
    const bool x_axis = a.x != b.x || c.x != d.x;
    auto key = [x_axis](const Point& p) { return x_axis ? p.x : p.y; };
    const int lo = std::max(std::min(key(a), key(b)), std::min(key(c), key(d)));
    const int hi = std::min(std::max(key(a), key(b)), std::max(key(c), key(d)));
    return lo < hi;
  }
  if (o1 != o2 && o3 != o4) {
    // The segments meet; a touch at a common endpoint is allowed.
    const bool shared = a == c || a == d || b == c || b == d;
    if (!shared) return true;
    // A shared endpoint is the only contact unless some other endpoint lies on
    // the opposite segment, which the collinear branch already covers.
    return false;
  }
  // One endpoint lies on the interior of the other segment (T-junction).
  if (o1 == 0 && within_box(a, b, c) && c != a && c != b) return true;
  if (o2 == 0 && within_box(a, b, d) && d != a && d != b) return true;
  if (o3 == 0 && within_box(c, d, a) && a != c && a != d) return true;
  if (o4 == 0 && within_box(c, d, b) && b != c && b != d) return true;
  return false;
}

}  // namespace detail

// Returns a description of the first structural defect, or nullopt for a
// usable ring. Rings may touch themselves at shared vertices (pinch points
// produced by 8-connected contours) but edges may not cross or overlap.
inline std::optional<std::string> find_polygon_defect(const Polygon& polygon) {
  const Polygon ring = remove_repeated_vertices(polygon);
  if (ring.size() < 3) return "polygon needs at least 3 distinct vertices";
  const std::size_t n = ring.size();
  std::vector<BoundingBox> boxes(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = ring.vertices[i];
    const Point& b = ring.vertices[(i + 1) % n];
    boxes[i] = {std::min(a.x, b.x), std::min(a.y, b.y), std::max(a.x, b.x), std::max(a.y, b.y)};
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = ring.vertices[i];
    const Point& b = ring.vertices[(i + 1) % n];
    for (std::size_t j = i + 1; j < n; ++j) {
      if (boxes[j].x_min > boxes[i].x_max || boxes[j].x_max < boxes[i].x_min ||
          boxes[j].y_min > boxes[i].y_max || boxes[j].y_max < boxes[i].y_min) {
        continue;
      }
      const Point& c = ring.vertices[j];
      const Point& d = ring.vertices[(j + 1) % n];
      const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
      if (adjacent) {
        // Neighbouring edges share one vertex; they conflict only by folding back.
        const Point& shared = (j == i + 1) ? b : a;
        const Point& p = (j == i + 1) ? a : b;
        const Point& q = (j == i + 1) ? d : c;
        if (detail::orientation(p, shared, q) == 0) {
          const std::int64_t dot = std::int64_t{p.x - shared.x} * (q.x - shared.x) +
                                   std::int64_t{p.y - shared.y} * (q.y - shared.y);
          if (dot > 0) return "polygon folds back on itself";
        }
        continue;
      }
      if (detail::segments_conflict(a, b, c, d)) return "polygon is self-intersecting";
    }
  }
  if (doubled_signed_area(ring) == 0 && n == 3) return "polygon has zero area";
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Dense rasters.

template <class T>
class Grid {
 public:
  using value_type = T;

  Grid() = default;
  Grid(int width, int height, T fill = T{})
      : width_(width), height_(height),
        data_(static_cast<std::size_t>(std::max(width, 0)) * static_cast<std::size_t>(std::max(height, 0)),
              fill) {
    if (width < 0 || height < 0) throw Error("grid dimensions must be non-negative");
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  bool empty() const noexcept { return data_.empty(); }

  T& operator()(int x, int y) { return data_[index(x, y)]; }
  const T& operator()(int x, int y) const { return data_[index(x, y)]; }

  std::span<T> row(int y) { return {data_.data() + index(0, y), static_cast<std::size_t>(width_)}; }
  std::span<const T> row(int y) const {
    return {data_.data() + index(0, y), static_cast<std::size_t>(width_)};
  }

  std::span<T> data() noexcept { return data_; }
  std::span<const T> data() const noexcept { return data_; }

  bool contains(int x, int y) const noexcept { return x >= 0 && y >= 0 && x < width_ && y < height_; }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

// Class labels (0 = background) or a binary mask (0/1).
using PixelGrid = Grid<std::uint8_t>;
// Per-pixel class probability in [0, 1].
using ProbabilityPlane = Grid<float>;

// ---------------------------------------------------------------------------
// Scanline fill.

// Horizontal run [x_begin, x_end) on row y.
struct Span {
  int y = 0;
  int x_begin = 0;
  int x_end = 0;

  friend bool operator==(const Span&, const Span&) = default;
};

namespace detail {

// Exact rational num / den with den > 0.
struct Crossing {
  std::int64_t num;
  std::int64_t den;
};

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

}  // namespace detail

// Calls `emit(Span)` for each maximal run of owned pixels, rows ascending and
// runs left to right. Vertices are clamped to the page first.
template <class Emit>
void scan_polygon(const Polygon& polygon, int width, int height, Emit&& emit) {
  if (polygon.size() < 3 || width <= 0 || height <= 0) return;
  const Polygon ring = clamp_to_page(polygon, width, height);
  const BoundingBox box = bounding_box(ring);
  const std::size_t n = ring.size();
  std::vector<detail::Crossing> crossings;
  std::vector<std::pair<int, int>> runs;
  for (int y = std::max(box.y_min, 0); y < std::min(box.y_max, height); ++y) {
    crossings.clear();
    // Scanline through pixel centers: y + 0.5. Vertices have integral y, so
    // no vertex ever lies on it.
    for (std::size_t i = 0; i < n; ++i) {
      const Point& a = ring.vertices[i];
      const Point& b = ring.vertices[(i + 1) % n];
      const int lo = std::min(a.y, b.y);
      const int hi = std::max(a.y, b.y);
      if (!(lo <= y && y < hi)) continue;
      const std::int64_t dy = b.y - a.y;
      const std::int64_t dx = b.x - a.x;
      std::int64_t num = 2 * std::int64_t{a.x} * dy + (2 * std::int64_t{y} + 1 - 2 * std::int64_t{a.y}) * dx;
      std::int64_t den = 2 * dy;
      if (den < 0) {
        num = -num;
        den = -den;
      }
      crossings.push_back({num, den});
    }
    std::sort(crossings.begin(), crossings.end(),
              [](const detail::Crossing& l, const detail::Crossing& r) {
                return l.num * r.den < r.num * l.den;
              });
    runs.clear();
    for (std::size_t k = 0; k + 1 < crossings.size(); k += 2) {
      const auto& left = crossings[k];
      const auto& right = crossings[k + 1];
      // Pixel i is owned when left <= i + 0.5 <= right.
      const std::int64_t first = detail::ceil_div(2 * left.num - left.den, 2 * left.den);
      const std::int64_t last = detail::floor_div(2 * right.num - right.den, 2 * right.den);
      const std::int64_t b = std::max<std::int64_t>(first, 0);
      const std::int64_t e = std::min<std::int64_t>(last, width - 1);
      if (b > e) continue;
      if (!runs.empty() && runs.back().second >= b) {
        runs.back().second = std::max<int>(runs.back().second, static_cast<int>(e + 1));
      } else {
        runs.emplace_back(static_cast<int>(b), static_cast<int>(e + 1));
      }
    }
    for (const auto& [b, e] : runs) emit(Span{y, b, e});
  }
}

template <class T>
void fill_polygon(Grid<T>& grid, const Polygon& polygon, T value) {
  scan_polygon(polygon, grid.width(), grid.height(), [&](const Span& s) {
    auto row = grid.row(s.y);
    std::fill(row.begin() + s.x_begin, row.begin() + s.x_end, value);
  });
}

// Binary mask (0/1) of the pixels owned by `polygon`. Degenerate or
// off-page polygons give an all-zero mask.
inline PixelGrid rasterize(const Polygon& polygon, int width, int height) {
  PixelGrid grid(width, height, 0);
  fill_polygon<std::uint8_t>(grid, polygon, 1);
  return grid;
}

inline std::vector<Span> polygon_spans(const Polygon& polygon, int width, int height) {
  std::vector<Span> spans;
  scan_polygon(polygon, width, height, [&](const Span& s) { spans.push_back(s); });
  return spans;
}

inline std::int64_t spans_area(std::span<const Span> spans) {
  std::int64_t total = 0;
  for (const Span& s : spans) total += s.x_end - s.x_begin;
  return total;
}

// Overlap of two span lists sorted by (y, x_begin) with disjoint runs per row.
inline std::int64_t spans_intersection(std::span<const Span> a, std::span<const Span> b) {
  std::int64_t total = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].y != b[j].y) {
      (a[i].y < b[j].y) ? ++i : ++j;
      continue;
    }
    const int lo = std::max(a[i].x_begin, b[j].x_begin);
    const int hi = std::min(a[i].x_end, b[j].x_end);
    if (lo < hi) total += hi - lo;
    (a[i].x_end < b[j].x_end) ? ++i : ++j;
  }
  return total;
}

// Pixel counts backing an IoU value.
struct Overlap {
  std::int64_t intersection = 0;
  std::int64_t union_ = 0;

  // 1 for two empty masks.
  double iou() const noexcept {
    return union_ == 0 ? 1.0 : static_cast<double>(intersection) / static_cast<double>(union_);
  }

  Overlap& operator+=(const Overlap& o) noexcept {
    intersection += o.intersection;
    union_ += o.union_;
    return *this;
  }
};

template <class T>
std::int64_t count_nonzero(const Grid<T>& grid) {
  return std::count_if(grid.data().begin(), grid.data().end(), [](T v) { return v != T{}; });
}

// Overlap counts of two binary masks (any non-zero value is "set").
inline Overlap mask_overlap(const PixelGrid& a, const PixelGrid& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw Error("mask dimensions differ: " + std::to_string(a.width()) + "x" +
                std::to_string(a.height()) + " vs " + std::to_string(b.width()) + "x" +
                std::to_string(b.height()));
  }
  Overlap o;
  const auto da = a.data();
  const auto db = b.data();
  for (std::size_t i = 0; i < da.size(); ++i) {
    const bool sa = da[i] != 0;
    const bool sb = db[i] != 0;
    o.intersection += sa && sb;
    o.union_ += sa || sb;
  }
  return o;
}

// |a and b| / |a or b|; 1 when both masks are empty, 0 when exactly one is.
inline double pixel_iou(const PixelGrid& a, const PixelGrid& b) { return mask_overlap(a, b).iou(); }

// IoU of two polygons rasterized on a width x height page.
inline double polygon_iou(const Polygon& a, const Polygon& b, int width, int height) {
  const auto sa = polygon_spans(a, width, height);
  const auto sb = polygon_spans(b, width, height);
  const std::int64_t inter = spans_intersection(sa, sb);
  return Overlap{inter, spans_area(sa) + spans_area(sb) - inter}.iou();
}

}  // namespace actseg
