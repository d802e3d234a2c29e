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

#include "actseg/document.hpp"
#include "actseg/line_classifier.hpp"
#include "actseg/synthetic.hpp"
#include "actseg/text_baseline.hpp"

namespace actseg {
namespace {

// Lines 20 px tall, 40 px apart, starting at y = 10.
PageDocument page_with_flags(std::string id, std::vector<bool> flags) {
  PageDocument page;
  page.page_id = std::move(id);
  page.width = 200;
  page.height = 400;
  for (std::size_t i = 0; i < flags.size(); ++i) {
    TextLine l;
    l.id = "l" + std::to_string(i + 1);
    const int y = 10 + 40 * static_cast<int>(i);
    l.polygon = make_rectangle(10, y, 150, y + 20);
    l.is_first_line = flags[i];
    page.lines.push_back(std::move(l));
  }
  return page;
}

BoundingBox box_of(const Act& a) { return bounding_box(a.polygon); }

TEST(ReadingOrder, SortsByCentroidThenX) {
  PageDocument page = page_with_flags("p", {false, false, false});
  page.lines[0].polygon = make_rectangle(0, 0, 10, 20);    // y 10
  page.lines[1].polygon = make_rectangle(0, 40, 10, 60);   // y 50
  page.lines[2].polygon = make_rectangle(0, 20, 10, 40);   // y 30
  EXPECT_EQ(reading_order_indices(page, ReadingOrderConfig::top_to_bottom()), (std::vector<std::size_t>{0, 2, 1}));
  page.lines[0].polygon = make_rectangle(100, 0, 110, 20);
  page.lines[1].polygon = make_rectangle(40, 0, 50, 20);
  EXPECT_EQ(reading_order_indices(page, ReadingOrderConfig::top_to_bottom()), (std::vector<std::size_t>{1, 0, 2}));
}

TEST(ReadingOrder, TwoColumnsReadLeftFirst) {
  PageDocument page = page_with_flags("p", {false, false});
  page.lines[0].polygon = make_rectangle(120, 0, 190, 20);
  page.lines[1].polygon = make_rectangle(10, 100, 90, 120);
  EXPECT_EQ(reading_order_indices(page, ReadingOrderConfig::two_columns(100)), (std::vector<std::size_t>{1, 0}));
  EXPECT_EQ(reading_order_indices(page, ReadingOrderConfig::top_to_bottom()), (std::vector<std::size_t>{0, 1}));
  EXPECT_THROW(reading_order_indices(page, ReadingOrderConfig::two_columns(201)), ValidationError);
}

TEST(ReadingOrder, Parsing) {
  EXPECT_EQ(parse_reading_order("top")->kind, ReadingOrderConfig::Kind::TopToBottom);
  EXPECT_EQ(parse_reading_order("twocol:512")->split_x, 512);
  EXPECT_FALSE(parse_reading_order("twocol:"));
  EXPECT_FALSE(parse_reading_order("twocol:-3"));
  EXPECT_FALSE(parse_reading_order("columns"));
}

TEST(Segment, SinglePageTwoFullActs) {
  const std::vector<PageDocument> pages{page_with_flags("p", {true, false, false, true, false})};
  const auto out = segment_by_keyphrases(pages, ReadingOrderConfig::top_to_bottom());
  const auto& acts = out[0].pred_acts;
  ASSERT_EQ(acts.size(), 2u);
  EXPECT_EQ(acts[0].cls, ActClass::Full);
  EXPECT_EQ(acts[1].cls, ActClass::Full);
  EXPECT_EQ(box_of(acts[0]).y_min, 10);
  EXPECT_EQ(box_of(acts[0]).y_max, 110);
  EXPECT_EQ(box_of(acts[1]).y_min, 130);
  EXPECT_EQ(box_of(acts[1]).y_max, 190);
  EXPECT_EQ(acts[0].score, 1.0);
}

TEST(Segment, ActsCrossingAPageBreak) {
  const std::vector<PageDocument> pages{page_with_flags("a", {true, false}), page_with_flags("b", {false, true, false})};
  const auto out = segment_by_keyphrases(pages, ReadingOrderConfig::top_to_bottom());
  ASSERT_EQ(out[0].pred_acts.size(), 1u);
  EXPECT_EQ(out[0].pred_acts[0].cls, ActClass::Start);
  ASSERT_EQ(out[1].pred_acts.size(), 2u);
  EXPECT_EQ(out[1].pred_acts[0].cls, ActClass::End);
  EXPECT_EQ(box_of(out[1].pred_acts[0]).y_max, 30);
  EXPECT_EQ(out[1].pred_acts[1].cls, ActClass::Full);
  EXPECT_EQ(box_of(out[1].pred_acts[1]).y_min, 50);
}

TEST(Segment, PageWithoutFlagsIsOneCenterAct) {
  const std::vector<PageDocument> pages{page_with_flags("a", {true}), page_with_flags("b", {false, false, false}),
                                        page_with_flags("c", {false, true})};
  const auto out = segment_by_keyphrases(pages, ReadingOrderConfig::top_to_bottom());
  EXPECT_EQ(out[0].pred_acts[0].cls, ActClass::Start);
  ASSERT_EQ(out[1].pred_acts.size(), 1u);
  EXPECT_EQ(out[1].pred_acts[0].cls, ActClass::Center);
  EXPECT_EQ(box_of(out[1].pred_acts[0]).y_max, 110);
  EXPECT_EQ(out[2].pred_acts[0].cls, ActClass::End);
}

TEST(Segment, MarginIsClampedToThePage) {
  const std::vector<PageDocument> pages{page_with_flags("a", {true, false})};
  const auto out = segment_by_keyphrases(pages, ReadingOrderConfig::top_to_bottom(), 15);
  const BoundingBox b = box_of(out[0].pred_acts[0]);
  EXPECT_EQ(b.x_min, 0);
  EXPECT_EQ(b.y_min, 0);
  EXPECT_EQ(b.x_max, 165);
  EXPECT_EQ(b.y_max, 85);
}

TEST(Segment, EveryLineBelongsToExactlyOneAct) {
  std::mt19937 rng(21);
  std::bernoulli_distribution flag(0.3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<bool> flags(1 + trial % 9);
    for (std::size_t i = 0; i < flags.size(); ++i) flags[i] = flag(rng);
    const std::vector<PageDocument> pages{page_with_flags("p", flags)};
    const auto out = segment_by_keyphrases(pages, ReadingOrderConfig::top_to_bottom());
    for (const auto& line : pages[0].lines) {
      const auto [cx, cy] = centroid(line.polygon);
      int owners = 0;
      for (const auto& act : out[0].pred_acts) {
        const BoundingBox b = box_of(act);
        owners += cy > b.y_min && cy < b.y_max;
      }
      EXPECT_EQ(owners, 1);
    }
  }
}

TEST(Segment, UnclassifiedLinesAreRejected) {
  std::vector<PageDocument> pages{page_with_flags("a", {true, false})};
  pages[0].lines[1].is_first_line.reset();
  EXPECT_THROW(segment_by_keyphrases(pages, ReadingOrderConfig::top_to_bottom()), ValidationError);
}

TEST(Segment, EmptyPagesGetNoActs) {
  const std::vector<PageDocument> pages{page_with_flags("a", {})};
  EXPECT_TRUE(segment_by_keyphrases(pages, ReadingOrderConfig::top_to_bottom())[0].pred_acts.empty());
}

TEST(Segment, RecoversNoiseFreeSyntheticActs) {
  for (bool two_columns : {false, true}) {
    SynthConfig config;
    config.pages = 20;
    config.two_columns = two_columns;
    config.render_images = false;
    config.seed = 4;
    const SyntheticDataset data = generate_dataset(config);
    std::vector<PageDocument> pages;
    for (const auto& p : data.split.pages) pages.push_back(classify_page(p, default_date_config()));
    const ReadingOrderConfig order = two_columns ? ReadingOrderConfig::two_columns(config.page_width / 2)
                                                 : ReadingOrderConfig::top_to_bottom();
    const auto out = segment_by_keyphrases(pages, order);
    for (const auto& page : out) {
      ASSERT_EQ(page.pred_acts.size(), page.gt_acts.size()) << page.page_id;
      for (std::size_t i = 0; i < page.gt_acts.size(); ++i) {
        EXPECT_EQ(page.pred_acts[i].cls, page.gt_acts[i].cls) << page.page_id;
        EXPECT_EQ(box_of(page.pred_acts[i]), box_of(page.gt_acts[i])) << page.page_id;
      }
    }
  }
}

}  // namespace
}  // namespace actseg
