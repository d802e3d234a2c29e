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

#include "actseg/line_classifier.hpp"
#include "actseg/renderer.hpp"
#include "actseg/synthetic.hpp"
#include "oracles.hpp"

namespace actseg {
namespace {

constexpr Rgb kKey{0, 255, 0};
constexpr Rgb kOther{0, 0, 255};

RgbImage noise_image(int w, int h, unsigned seed) {
  RgbImage img(w, h);
  std::mt19937 rng(seed);
  for (Rgb& p : img.data()) {
    p = {static_cast<std::uint8_t>(rng()), static_cast<std::uint8_t>(rng()), static_cast<std::uint8_t>(rng())};
  }
  return img;
}

TextLine flagged_line(std::string id, Polygon polygon, bool flag) {
  TextLine l;
  l.id = std::move(id);
  l.polygon = std::move(polygon);
  l.is_first_line = flag;
  return l;
}

PageDocument overlapping_page() {
  PageDocument page;
  page.page_id = "p";
  page.width = 40;
  page.height = 30;
  page.lines = {flagged_line("a", make_rectangle(2, 2, 20, 10), false),
                flagged_line("b", Polygon{{{10, 5}, {30, 5}, {20, 25}}}, true),
                flagged_line("c", make_rectangle(15, 20, 38, 28), false)};
  return page;
}

RenderConfig config_for(FusionVariant v) {
  RenderConfig c;
  c.variant = v;
  c.resize_longest_side.reset();
  return c;
}

// Expected colour per pixel from independent rasterizations.
void expect_two_color(const PageDocument& page, const RgbImage& source, const RgbImage& rendered) {
  PixelGrid key(page.width, page.height, 0), other(page.width, page.height, 0);
  for (const auto& l : page.lines) {
    const PixelGrid m = oracle::brute_force_mask(l.polygon, page.width, page.height);
    PixelGrid& target = *l.is_first_line ? key : other;
    for (std::size_t i = 0; i < m.data().size(); ++i) target.data()[i] |= m.data()[i];
  }
  for (int y = 0; y < page.height; ++y) {
    for (int x = 0; x < page.width; ++x) {
      const Rgb want = key(x, y) ? kKey : other(x, y) ? kOther : source(x, y);
      ASSERT_EQ(rendered(x, y), want) << page.page_id << " at " << x << "," << y;
    }
  }
}

TEST(Render, TwoColorLinesOnOverlappingPolygons) {
  const PageDocument page = overlapping_page();
  const RgbImage src = noise_image(40, 30, 1);
  const EnrichedImage out = render_enriched(page, src, config_for(FusionVariant::TwoColorLines));
  EXPECT_FALSE(out.text_mask);
  expect_two_color(page, src, out.rgb);
}

TEST(Render, TwoColorLinesOnSyntheticPages) {
  SynthConfig config;
  config.pages = 6;
  config.page_width = 300;
  config.page_height = 800;
  config.acts_per_page = {1, 2};
  config.noise.flag_flip_prob = 0.2;
  config.noise.polygon_jitter = 6;
  const SyntheticDataset data = generate_dataset(config);
  const LineClassifier classifier(default_date_config());
  for (std::size_t i = 0; i < data.split.pages.size(); ++i) {
    const PageDocument page = classify_page(data.split.pages[i], classifier);
    const EnrichedImage out = render_enriched(page, data.images[i], config_for(FusionVariant::TwoColorLines));
    expect_two_color(page, data.images[i], out.rgb);
  }
}

TEST(Render, KeyLinesOnlyLeavesOtherLinesAlone) {
  const PageDocument page = overlapping_page();
  const RgbImage src = noise_image(40, 30, 2);
  const RgbImage out = render_enriched(page, src, config_for(FusionVariant::KeyLinesOnly)).rgb;
  const PixelGrid key = oracle::brute_force_mask(page.lines[1].polygon, 40, 30);
  for (int y = 0; y < 30; ++y) {
    for (int x = 0; x < 40; ++x) EXPECT_EQ(out(x, y), key(x, y) ? kKey : src(x, y));
  }
}

TEST(Render, TextMaskChannelIsTheUnionOfLines) {
  const PageDocument page = overlapping_page();
  const RgbImage src = noise_image(40, 30, 3);
  const EnrichedImage out = render_enriched(page, src, config_for(FusionVariant::TextMaskChannel));
  EXPECT_EQ(out.rgb, src);
  ASSERT_TRUE(out.text_mask);
  PixelGrid expected(40, 30, 0);
  for (const auto& l : page.lines) {
    const PixelGrid m = oracle::brute_force_mask(l.polygon, 40, 30);
    for (std::size_t i = 0; i < m.data().size(); ++i) expected.data()[i] |= m.data()[i];
  }
  EXPECT_EQ(*out.text_mask, expected);
}

TEST(Render, OutlinesStayWithinTheFill) {
  PageDocument page = overlapping_page();
  page.lines.resize(1);
  page.lines[0].is_first_line = true;
  RenderConfig c = config_for(FusionVariant::KeyLinesOnly);
  c.fill = false;
  const RgbImage src(40, 30, Rgb{1, 2, 3});
  const RgbImage out = render_enriched(page, src, c).rgb;
  int painted = 0;
  for (int y = 0; y < 30; ++y) {
    for (int x = 0; x < 40; ++x) painted += out(x, y) == kKey;
  }
  // 18 x 8 rectangle: its one-pixel border.
  EXPECT_EQ(painted, 2 * 18 + 2 * 6);
  EXPECT_EQ(out(10, 6), src(10, 6));
}

TEST(Render, RejectsBadInput) {
  PageDocument page = overlapping_page();
  const RgbImage src(40, 30);
  EXPECT_THROW(render_enriched(page, RgbImage(41, 30), config_for(FusionVariant::TwoColorLines)), ValidationError);
  RenderConfig same = config_for(FusionVariant::TwoColorLines);
  same.other_color = same.key_color;
  EXPECT_THROW(render_enriched(page, src, same), ValidationError);
  page.lines[0].is_first_line.reset();
  EXPECT_THROW(render_enriched(page, src, config_for(FusionVariant::TwoColorLines)), ValidationError);
}

TEST(Render, ParsesVariantNames) {
  EXPECT_EQ(parse_fusion_variant("keyonly"), FusionVariant::KeyLinesOnly);
  EXPECT_EQ(parse_fusion_variant("ch4"), FusionVariant::TextMaskChannel);
  EXPECT_EQ(parse_fusion_variant("twocolor"), FusionVariant::TwoColorLines);
  EXPECT_FALSE(parse_fusion_variant("rgb"));
}

TEST(Resize, RoundsHalfUp) {
  EXPECT_EQ(scale_detail::scale_round(1, 1, 2), 1);
  EXPECT_EQ(scale_detail::scale_round(3, 1, 4), 1);
  EXPECT_EQ(scale_detail::scale_round(1, 1, 4), 0);
  EXPECT_EQ(scale_detail::scale_round(1400, 768, 1400), 768);
}

TEST(Resize, ScalesPageToTheLongestSide) {
  PageDocument page = overlapping_page();
  page.width = 1000;
  page.height = 1400;
  page.lines[0].polygon = make_rectangle(100, 700, 1000, 1400);
  const auto [scaled, image] = scale_page(page, RgbImage(1000, 1400, Rgb{9, 9, 9}), 700);
  EXPECT_EQ(scaled.width, 500);
  EXPECT_EQ(scaled.height, 700);
  EXPECT_EQ(image.width(), 500);
  EXPECT_EQ(image(250, 350), (Rgb{9, 9, 9}));
  EXPECT_EQ(bounding_box(scaled.lines[0].polygon).x_min, 50);
  EXPECT_EQ(bounding_box(scaled.lines[0].polygon).y_max, 700);
}

TEST(Resize, IdentityWhenAlreadyTheRightSize) {
  const PageDocument page = overlapping_page();
  const RgbImage src = noise_image(40, 30, 4);
  const auto [scaled, image] = scale_page(page, src, 40);
  EXPECT_EQ(image, src);
  EXPECT_EQ(scaled.lines[1].polygon.vertices, page.lines[1].polygon.vertices);
}

TEST(Resize, LabelsStayDiscrete) {
  PixelGrid g(10, 10, 0);
  for (int y = 0; y < 10; ++y) {
    for (int x = 5; x < 10; ++x) g(x, y) = 3;
  }
  const PixelGrid r = resize_labels(g, 4, 4);
  for (auto v : r.data()) EXPECT_TRUE(v == 0 || v == 3);
  EXPECT_EQ(r(0, 0), 0);
  EXPECT_EQ(r(3, 3), 3);
}

}  // namespace
}  // namespace actseg
