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

// Label / probability maps to typed act objects.

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "actseg/document.hpp"
#include "actseg/error.hpp"
#include "actseg/geometry.hpp"

namespace actseg {

struct Component {
  std::vector<Point> pixels;  // pixel coordinates
  std::int64_t area = 0;
  BoundingBox box;  // corner coordinates, max exclusive
};

// Maximal 8-connected components of pixels equal to `class_id`, ordered by
// their first pixel in raster order.
inline std::vector<Component> connected_components(const PixelGrid& grid, std::uint8_t class_id) {
  std::vector<Component> components;
  std::vector<std::uint8_t> seen(grid.data().size(), 0);
  const int w = grid.width();
  auto at = [w](int x, int y) { return static_cast<std::size_t>(y) * static_cast<std::size_t>(w) + static_cast<std::size_t>(x); };
  std::vector<Point> stack;
  for (int y = 0; y < grid.height(); ++y) {
    for (int x = 0; x < w; ++x) {
      if (grid(x, y) != class_id || seen[at(x, y)]) continue;
      Component comp;
      comp.box = {x, y, x + 1, y + 1};
      seen[at(x, y)] = 1;
      stack.push_back({x, y});
      while (!stack.empty()) {
        const Point p = stack.back();
        stack.pop_back();
        comp.pixels.push_back(p);
        comp.box = unite(comp.box, {p.x, p.y, p.x + 1, p.y + 1});
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = p.x + dx, ny = p.y + dy;
            if ((dx || dy) && grid.contains(nx, ny) && grid(nx, ny) == class_id && !seen[at(nx, ny)]) {
              seen[at(nx, ny)] = 1;
              stack.push_back({nx, ny});
            }
          }
        }
      }
      comp.area = static_cast<std::int64_t>(comp.pixels.size());
      components.push_back(std::move(comp));
    }
  }
  return components;
}

// Outer boundary of an 8-connected pixel set, traced along pixel edges with
// the set kept on the right-hand side. Vertices are pixel corners, so the
// ring rasterizes back to the set with its holes filled. Diagonal contacts
// appear as pinch vertices.
inline Polygon trace_outer_contour(const Component& comp) {
  if (comp.pixels.empty()) return {};
  const BoundingBox& box = comp.box;
  const int w = box.width(), h = box.height();
  std::vector<std::uint8_t> local(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), 0);
  Point start = comp.pixels.front();
  for (const Point& p : comp.pixels) {
    local[static_cast<std::size_t>(p.y - box.y_min) * static_cast<std::size_t>(w) + static_cast<std::size_t>(p.x - box.x_min)] = 1;
    if (std::pair(p.y, p.x) < std::pair(start.y, start.x)) start = p;
  }
  auto fg = [&](int x, int y) {
    x -= box.x_min;
    y -= box.y_min;
    return x >= 0 && y >= 0 && x < w && y < h && local[static_cast<std::size_t>(y) * static_cast<std::size_t>(w) + static_cast<std::size_t>(x)];
  };

  enum { E, S, W, N };
  static constexpr std::array<Point, 4> step{{{1, 0}, {0, 1}, {-1, 0}, {0, -1}}};
  // Pixels ahead-left and ahead-right of a corner for each heading.
  static constexpr std::array<Point, 4> ahead_left{{{0, -1}, {0, 0}, {-1, 0}, {-1, -1}}};
  static constexpr std::array<Point, 4> ahead_right{{{0, 0}, {-1, 0}, {-1, -1}, {0, -1}}};

  Polygon ring;
  Point corner = start;
  int heading = N;
  const std::size_t max_steps = 4 * comp.pixels.size() + 8;
  for (std::size_t steps = 0;; ++steps) {
    if (steps > max_steps) throw Error("contour tracing did not close");
    int next;
    if (fg(corner.x + ahead_left[heading].x, corner.y + ahead_left[heading].y)) {
      next = (heading + 3) % 4;
    } else if (fg(corner.x + ahead_right[heading].x, corner.y + ahead_right[heading].y)) {
      next = heading;
    } else {
      next = (heading + 1) % 4;
    }
    if (next != heading) ring.vertices.push_back(corner);
    corner = {corner.x + step[next].x, corner.y + step[next].y};
    heading = next;
    if (corner == start && heading == N) break;
  }
  return ring;
}

enum class ScoreSource { MeanProbability, AreaFraction };

struct PostprocessConfig {
  // Defaults to 0.1% of the page area.
  std::optional<std::int64_t> min_area;
  // Used only when the label map is derived from probability planes: a pixel
  // takes its arg-max class when that probability reaches the threshold.
  // Unset means plain arg-max against the implicit background (1 - sum).
  std::optional<double> prob_threshold;
  // Defaults to MeanProbability when planes exist, else AreaFraction.
  std::optional<ScoreSource> score_source;
};

inline std::int64_t default_min_area(const PageDocument& page) {
  return (std::int64_t{page.width} * page.height + 999) / 1000;
}

// Per-pixel arg-max over the class planes.
inline PixelGrid labels_from_probabilities(const PageDocument& page, std::optional<double> threshold) {
  PixelGrid labels(page.width, page.height, 0);
  for (int y = 0; y < page.height; ++y) {
    for (int x = 0; x < page.width; ++x) {
      double best = -1.0, total = 0.0;
      std::uint8_t best_label = 0;
      for (const auto& [cls, plane] : page.prob_maps) {
        const double p = plane(x, y);
        total += p;
        if (p > best) {
          best = p;
          best_label = label_of(cls);
        }
      }
      const bool keep = threshold ? best >= *threshold : best > std::max(0.0, 1.0 - total);
      labels(x, y) = keep ? best_label : 0;
    }
  }
  return labels;
}

inline std::vector<Act> components_to_acts(const PageDocument& page, const PostprocessConfig& config = {}) {
  PixelGrid derived;
  const PixelGrid* labels = nullptr;
  if (page.label_map) {
    labels = &*page.label_map;
  } else if (!page.prob_maps.empty()) {
    derived = labels_from_probabilities(page, config.prob_threshold);
    labels = &derived;
  } else {
    throw ValidationError(page.page_id, "post-processing needs a label map or probability maps");
  }
  if (labels->width() != page.width || labels->height() != page.height) {
    throw ValidationError(page.page_id, "label map does not match page dimensions");
  }
  const ScoreSource source =
      config.score_source.value_or(page.prob_maps.empty() ? ScoreSource::AreaFraction : ScoreSource::MeanProbability);
  const std::int64_t min_area = config.min_area.value_or(default_min_area(page));
  if (min_area < 0) throw ValidationError("postprocess config", "min_area must be >= 0");
  const double page_area = static_cast<double>(page.width) * page.height;

  std::vector<Act> acts;
  for (ActClass cls : kActClasses) {
    const ProbabilityPlane* plane = nullptr;
    if (source == ScoreSource::MeanProbability) {
      auto it = page.prob_maps.find(cls);
      if (it == page.prob_maps.end()) {
        throw ValidationError(page.page_id, "missing probability map for class " + std::string(to_string(cls)));
      }
      plane = &it->second;
    }
    int index = 0;
    for (const Component& comp : connected_components(*labels, label_of(cls))) {
      if (comp.area < min_area) continue;
      double score;
      if (plane) {
        double sum = 0.0;
        for (const Point& p : comp.pixels) sum += (*plane)(p.x, p.y);
        score = sum / static_cast<double>(comp.area);
      } else {
        score = static_cast<double>(comp.area) / page_area;
      }
      acts.push_back({std::string(to_string(cls)) + "-" + std::to_string(index++), cls,
                      trace_outer_contour(comp), std::clamp(score, 0.0, 1.0)});
    }
  }
  return acts;
}

}  // namespace actseg
