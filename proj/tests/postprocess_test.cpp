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

#include <gtest/gtest.h>

#include <queue>
#include <random>

#include "actseg/document.hpp"
#include "actseg/postprocess.hpp"
#include "oracles.hpp"

namespace actseg {
namespace {

// The component's pixels plus every background pixel it encloses: whatever
// the outside cannot reach through 4-connected background.
PixelGrid filled(const Component& comp, int width, int height) {
  PixelGrid in(width, height, 0);
  for (const Point& p : comp.pixels) in(p.x, p.y) = 1;
  PixelGrid outside(width, height, 0);
  std::queue<Point> q;
  auto push = [&](int x, int y) {
    if (x < 0 || y < 0 || x >= width || y >= height || in(x, y) || outside(x, y)) return;
    outside(x, y) = 1;
    q.push({x, y});
  };
  for (int x = 0; x < width; ++x) {
    push(x, 0);
    push(x, height - 1);
  }
  for (int y = 0; y < height; ++y) {
    push(0, y);
    push(width - 1, y);
  }
  while (!q.empty()) {
    const Point p = q.front();
    q.pop();
    push(p.x + 1, p.y);
    push(p.x - 1, p.y);
    push(p.x, p.y + 1);
    push(p.x, p.y - 1);
  }
  PixelGrid out(width, height, 0);
  for (std::size_t i = 0; i < out.data().size(); ++i) out.data()[i] = !outside.data()[i];
  return out;
}

PixelGrid random_blobs(std::mt19937& rng, int w, int h, double density) {
  std::bernoulli_distribution bit(density);
  PixelGrid g(w, h, 0);
  for (auto& v : g.data()) v = bit(rng);
  return g;
}

TEST(Components, CountsMatchUnionFind) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const PixelGrid g = random_blobs(rng, 17, 13, 0.45);
    const auto comps = connected_components(g, 1);
    ASSERT_EQ(comps.size(), oracle::union_find_components(g, 1));
    std::int64_t total = 0;
    for (const auto& c : comps) total += c.area;
    EXPECT_EQ(total, count_nonzero(g));
  }
}

TEST(Components, DiagonalPixelsAreConnected) {
  PixelGrid g(4, 4, 0);
  g(0, 0) = g(1, 1) = g(2, 2) = 2;
  g(3, 0) = 2;
  const auto comps = connected_components(g, 2);
  ASSERT_EQ(comps.size(), 2u);
  EXPECT_EQ(comps[0].area, 3);
  EXPECT_EQ(comps[0].box.x_max, 3);
}

TEST(Contour, RectangleGivesFourCorners) {
  PixelGrid g(10, 10, 0);
  for (int y = 2; y < 5; ++y) {
    for (int x = 3; x < 8; ++x) g(x, y) = 1;
  }
  const auto comps = connected_components(g, 1);
  ASSERT_EQ(comps.size(), 1u);
  const Polygon ring = trace_outer_contour(comps[0]);
  ASSERT_EQ(ring.vertices.size(), 4u);
  EXPECT_EQ(bounding_box(ring).x_min, 3);
  EXPECT_EQ(bounding_box(ring).x_max, 8);
  EXPECT_EQ(bounding_box(ring).y_max, 5);
}

TEST(Contour, SinglePixel) {
  PixelGrid g(3, 3, 0);
  g(1, 1) = 1;
  const Polygon ring = trace_outer_contour(connected_components(g, 1)[0]);
  EXPECT_EQ(ring.vertices.size(), 4u);
  EXPECT_EQ(rasterize(ring, 3, 3), g);
}

TEST(Contour, RasterizesBackToTheFilledComponent) {
  std::mt19937 rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    const PixelGrid g = random_blobs(rng, 15, 12, trial % 2 ? 0.55 : 0.35);
    for (const Component& comp : connected_components(g, 1)) {
      const Polygon ring = trace_outer_contour(comp);
      ASSERT_FALSE(find_polygon_defect(ring)) << "trial " << trial;
      ASSERT_EQ(rasterize(ring, 15, 12), filled(comp, 15, 12)) << "trial " << trial;
    }
  }
}

TEST(Contour, HolesAreFilled) {
  PixelGrid g(7, 7, 0);
  for (int y = 1; y < 6; ++y) {
    for (int x = 1; x < 6; ++x) g(x, y) = (x == 3 && y == 3) ? 0 : 1;
  }
  const Polygon ring = trace_outer_contour(connected_components(g, 1)[0]);
  EXPECT_EQ(count_nonzero(rasterize(ring, 7, 7)), 25);
}

PageDocument page_with_labels(PixelGrid labels) {
  PageDocument page;
  page.page_id = "p";
  page.width = labels.width();
  page.height = labels.height();
  page.label_map = std::move(labels);
  return page;
}

TEST(ComponentsToActs, OnePerComponentAboveMinArea) {
  PixelGrid labels(40, 30, 0);
  fill_polygon(labels, make_rectangle(0, 0, 20, 10), std::uint8_t{1});
  fill_polygon(labels, make_rectangle(0, 15, 20, 30), std::uint8_t{4});
  labels(35, 2) = 1;
  PostprocessConfig config;
  config.min_area = 2;
  const auto acts = components_to_acts(page_with_labels(labels), config);
  ASSERT_EQ(acts.size(), 2u);
  EXPECT_EQ(acts[0].cls, ActClass::Full);
  EXPECT_EQ(acts[0].id, "full-0");
  EXPECT_EQ(acts[1].cls, ActClass::End);
  EXPECT_DOUBLE_EQ(*acts[0].score, 200.0 / 1200.0);
  EXPECT_EQ(rasterize(acts[1].polygon, 40, 30), rasterize(make_rectangle(0, 15, 20, 30), 40, 30));
  config.min_area = 0;
  EXPECT_EQ(components_to_acts(page_with_labels(labels), config).size(), 3u);
}

TEST(ComponentsToActs, DefaultMinAreaIsATenthOfAPercent) {
  PageDocument page;
  page.width = 1000;
  page.height = 1401;
  EXPECT_EQ(default_min_area(page), 1401);
}

TEST(ComponentsToActs, MeanProbabilityScores) {
  PageDocument page;
  page.page_id = "p";
  page.width = 10;
  page.height = 10;
  for (ActClass c : kActClasses) page.prob_maps[c] = ProbabilityPlane(10, 10, 0.0f);
  for (int y = 0; y < 4; ++y) {
    for (int x = 0; x < 5; ++x) page.prob_maps[ActClass::Start](x, y) = x < 2 ? 0.9f : 0.7f;
  }
  PostprocessConfig config;
  config.min_area = 1;
  const auto acts = components_to_acts(page, config);
  ASSERT_EQ(acts.size(), 1u);
  EXPECT_EQ(acts[0].cls, ActClass::Start);
  EXPECT_NEAR(*acts[0].score, (8 * 0.9 + 12 * 0.7) / 20.0, 1e-6);

  config.prob_threshold = 0.8;
  const auto strict = components_to_acts(page, config);
  ASSERT_EQ(strict.size(), 1u);
  EXPECT_EQ(bounding_box(strict[0].polygon).x_max, 2);
}

TEST(ComponentsToActs, NeedsMaps) {
  PageDocument page;
  page.page_id = "p";
  page.width = 3;
  page.height = 3;
  EXPECT_THROW(components_to_acts(page), ValidationError);
  page.label_map = PixelGrid(4, 3, 0);
  EXPECT_THROW(components_to_acts(page), ValidationError);
}

}  // namespace
}  // namespace actseg
