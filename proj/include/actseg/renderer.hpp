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

// Enriched input images: text-line polygons drawn onto the page image,
// lines flagged as act-initial in a distinct color.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "actseg/document.hpp"
#include "actseg/error.hpp"
#include "actseg/geometry.hpp"
#include "actseg/image_io.hpp"

namespace actseg {

enum class FusionVariant {
  KeyLinesOnly,     // only flagged lines, in key_color
  TextMaskChannel,  // image untouched plus a 4th binary channel of all lines
  TwoColorLines,    // flagged lines in key_color, the rest in other_color
};

inline std::optional<FusionVariant> parse_fusion_variant(std::string_view s) {
  if (s == "keyonly") return FusionVariant::KeyLinesOnly;
  if (s == "ch4") return FusionVariant::TextMaskChannel;
  if (s == "twocolor") return FusionVariant::TwoColorLines;
  return std::nullopt;
}

struct RenderConfig {
  FusionVariant variant = FusionVariant::TwoColorLines;
  Rgb key_color{0, 255, 0};
  Rgb other_color{0, 0, 255};
  bool fill = true;  // false draws one-pixel outlines
  std::optional<int> resize_longest_side = 768;
};

struct EnrichedImage {
  RgbImage rgb;
  // TextMaskChannel only: 1 inside any line polygon, 0 elsewhere.
  std::optional<PixelGrid> text_mask;
};

namespace render_detail {

// Pixels owned by `polygon`, reduced to its border when outlining.
inline PixelGrid line_mask(const Polygon& polygon, int width, int height, bool fill) {
  PixelGrid mask = rasterize(polygon, width, height);
  if (fill) return mask;
  PixelGrid border(width, height, 0);
  const BoundingBox box = bounding_box(clamp_to_page(polygon, width, height));
  for (int y = std::max(box.y_min, 0); y < std::min(box.y_max, height); ++y) {
    for (int x = std::max(box.x_min, 0); x < std::min(box.x_max, width); ++x) {
      if (!mask(x, y)) continue;
      const bool edge = x == 0 || y == 0 || x == width - 1 || y == height - 1 || !mask(x - 1, y) ||
                        !mask(x + 1, y) || !mask(x, y - 1) || !mask(x, y + 1);
      if (edge) border(x, y) = 1;
    }
  }
  return border;
}

inline void paint(RgbImage& image, const Polygon& polygon, Rgb color, bool fill) {
  if (fill) {
    fill_polygon(image, polygon, color);
    return;
  }
  const PixelGrid mask = line_mask(polygon, image.width(), image.height(), false);
  for (std::size_t i = 0; i < mask.data().size(); ++i) {
    if (mask.data()[i]) image.data()[i] = color;
  }
}

}  // namespace render_detail

// Draws the page's lines onto `image` per `config.variant`. Flagged lines
// are drawn last, so they win where polygons overlap. Pixels outside every
// line polygon keep their source value.
inline EnrichedImage render_enriched(const PageDocument& page, const RgbImage& image, const RenderConfig& config) {
  if (image.width() != page.width || image.height() != page.height) {
    throw ValidationError(page.page_id, "image is " + std::to_string(image.width()) + "x" +
                                            std::to_string(image.height()) + ", page is " +
                                            std::to_string(page.width) + "x" + std::to_string(page.height));
  }
  if (config.key_color == config.other_color) {
    throw ValidationError("render config", "key_color and other_color must differ");
  }
  for (const auto& line : page.lines) {
    if (!line.is_first_line) throw ValidationError(page.page_id + "/" + line.id, "line is not classified");
  }

  EnrichedImage out{image, std::nullopt};
  switch (config.variant) {
    case FusionVariant::TextMaskChannel: {
      PixelGrid mask(page.width, page.height, 0);
      for (const auto& line : page.lines) {
        const PixelGrid m = render_detail::line_mask(line.polygon, page.width, page.height, config.fill);
        for (std::size_t i = 0; i < m.data().size(); ++i) mask.data()[i] |= m.data()[i];
      }
      out.text_mask = std::move(mask);
      break;
    }
    case FusionVariant::TwoColorLines:
      for (const auto& line : page.lines) {
        if (!*line.is_first_line) render_detail::paint(out.rgb, line.polygon, config.other_color, config.fill);
      }
      [[fallthrough]];
    case FusionVariant::KeyLinesOnly:
      for (const auto& line : page.lines) {
        if (*line.is_first_line) render_detail::paint(out.rgb, line.polygon, config.key_color, config.fill);
      }
      break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Resizing.

namespace scale_detail {

// round_half_up(value * num / den) for non-negative integers.
inline int scale_round(std::int64_t value, std::int64_t num, std::int64_t den) {
  return static_cast<int>((2 * value * num + den) / (2 * den));
}

template <class T, class Blend>
Grid<T> resample(const Grid<T>& src, int width, int height, bool bilinear, Blend&& blend) {
  Grid<T> dst(width, height);
  if (src.empty() || width == 0 || height == 0) return dst;
  if (src.width() == width && src.height() == height) return src;
  const double sx = static_cast<double>(src.width()) / width;
  const double sy = static_cast<double>(src.height()) / height;
  for (int y = 0; y < height; ++y) {
    const double fy = (y + 0.5) * sy - 0.5;
    for (int x = 0; x < width; ++x) {
      const double fx = (x + 0.5) * sx - 0.5;
      if (!bilinear) {
        const int nx = std::clamp(static_cast<int>(std::floor((x + 0.5) * sx)), 0, src.width() - 1);
        const int ny = std::clamp(static_cast<int>(std::floor((y + 0.5) * sy)), 0, src.height() - 1);
        dst(x, y) = src(nx, ny);
        continue;
      }
      const int x0 = std::clamp(static_cast<int>(std::floor(fx)), 0, src.width() - 1);
      const int y0 = std::clamp(static_cast<int>(std::floor(fy)), 0, src.height() - 1);
      const int x1 = std::min(x0 + 1, src.width() - 1);
      const int y1 = std::min(y0 + 1, src.height() - 1);
      const double ax = std::clamp(fx - x0, 0.0, 1.0);
      const double ay = std::clamp(fy - y0, 0.0, 1.0);
      dst(x, y) = blend(src(x0, y0), src(x1, y0), src(x0, y1), src(x1, y1), ax, ay);
    }
  }
  return dst;
}

inline double lerp2(double a, double b, double c, double d, double ax, double ay) {
  return (a * (1 - ax) + b * ax) * (1 - ay) + (c * (1 - ax) + d * ax) * ay;
}

}  // namespace scale_detail

// Bilinear, for photographs.
inline RgbImage resize_image(const RgbImage& src, int width, int height) {
  return scale_detail::resample(src, width, height, true,
                                [](Rgb a, Rgb b, Rgb c, Rgb d, double ax, double ay) {
                                  auto ch = [&](auto member) {
                                    const double v = scale_detail::lerp2(a.*member, b.*member, c.*member,
                                                                         d.*member, ax, ay);
                                    return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
                                  };
                                  return Rgb{ch(&Rgb::r), ch(&Rgb::g), ch(&Rgb::b)};
                                });
}

// Nearest neighbour, for label maps.
inline PixelGrid resize_labels(const PixelGrid& src, int width, int height) {
  return scale_detail::resample(src, width, height, false,
                                [](std::uint8_t a, std::uint8_t, std::uint8_t, std::uint8_t, double, double) { return a; });
}

inline ProbabilityPlane resize_plane(const ProbabilityPlane& src, int width, int height) {
  return scale_detail::resample(src, width, height, true, [](float a, float b, float c, float d, double ax, double ay) {
    return static_cast<float>(scale_detail::lerp2(a, b, c, d, ax, ay));
  });
}

inline Polygon scale_polygon(const Polygon& polygon, std::int64_t num, std::int64_t den, int width, int height) {
  Polygon out;
  out.vertices.reserve(polygon.size());
  for (const Point& p : polygon.vertices) {
    out.vertices.push_back({std::clamp(scale_detail::scale_round(p.x, num, den), 0, width),
                            std::clamp(scale_detail::scale_round(p.y, num, den), 0, height)});
  }
  return out;
}

// Rescales page geometry, maps and image so the longest side equals
// `longest_side`, keeping the aspect ratio. Coordinates round half up and are
// clipped to the new page.
inline std::pair<PageDocument, RgbImage> scale_page(const PageDocument& page, const RgbImage& image, int longest_side) {
  if (longest_side < 1) throw ValidationError(page.page_id, "longest side must be >= 1");
  const std::int64_t current = std::max(page.width, page.height);
  if (current == longest_side) return {page, image};
  PageDocument out = page;
  out.width = std::max(1, scale_detail::scale_round(page.width, longest_side, current));
  out.height = std::max(1, scale_detail::scale_round(page.height, longest_side, current));
  for (auto& line : out.lines) line.polygon = scale_polygon(line.polygon, longest_side, current, out.width, out.height);
  for (auto& act : out.gt_acts) act.polygon = scale_polygon(act.polygon, longest_side, current, out.width, out.height);
  for (auto& act : out.pred_acts) act.polygon = scale_polygon(act.polygon, longest_side, current, out.width, out.height);
  if (out.split_x) *out.split_x = std::clamp(scale_detail::scale_round(*out.split_x, longest_side, current), 0, out.width);
  if (out.label_map) out.label_map = resize_labels(*out.label_map, out.width, out.height);
  for (auto& [cls, plane] : out.prob_maps) plane = resize_plane(plane, out.width, out.height);
  RgbImage resized = resize_image(image, out.width, out.height);
  return {std::move(out), std::move(resized)};
}

// Optional resize followed by rendering.
inline EnrichedImage enrich_page(const PageDocument& page, const RgbImage& image, const RenderConfig& config) {
  if (!config.resize_longest_side) return render_enriched(page, image, config);
  auto [scaled, scaled_image] = scale_page(page, image, *config.resize_longest_side);
  return render_enriched(scaled, scaled_image, config);
}

}  // namespace actseg
