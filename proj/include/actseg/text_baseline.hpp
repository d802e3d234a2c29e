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

// Act segmentation from classified lines alone: every flagged line opens a
// new act, and acts are typed from how they meet the page boundaries.

#pragma once

#include <algorithm>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "actseg/document.hpp"
#include "actseg/error.hpp"
#include "actseg/geometry.hpp"

namespace actseg {

struct ReadingOrderConfig {
  enum class Kind { TopToBottom, TwoColumns };
  Kind kind = Kind::TopToBottom;
  int split_x = 0;  // TwoColumns only

  static ReadingOrderConfig top_to_bottom() { return {}; }
  static ReadingOrderConfig two_columns(int split_x) { return {Kind::TwoColumns, split_x}; }
};

// Parses "top" or "twocol:<x>".
inline std::optional<ReadingOrderConfig> parse_reading_order(std::string_view s) {
  if (s == "top") return ReadingOrderConfig::top_to_bottom();
  constexpr std::string_view prefix = "twocol:";
  if (s.starts_with(prefix)) {
    const std::string digits(s.substr(prefix.size()));
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      return std::nullopt;
    }
    return ReadingOrderConfig::two_columns(std::stoi(digits));
  }
  return std::nullopt;
}

// Indices of page.lines in reading order: by centroid y, ties by centroid x.
// TwoColumns reads every line left of split_x before the others.
inline std::vector<std::size_t> reading_order_indices(const PageDocument& page, const ReadingOrderConfig& config) {
  if (config.kind == ReadingOrderConfig::Kind::TwoColumns && (config.split_x < 0 || config.split_x > page.width)) {
    throw ValidationError(page.page_id, "split_x " + std::to_string(config.split_x) + " outside page width");
  }
  struct Key {
    int column;
    double y, x;
  };
  std::vector<Key> keys;
  keys.reserve(page.lines.size());
  for (const auto& line : page.lines) {
    const auto [cx, cy] = centroid(line.polygon);
    const int column = config.kind == ReadingOrderConfig::Kind::TwoColumns && cx >= config.split_x ? 1 : 0;
    keys.push_back({column, cy, cx});
  }
  std::vector<std::size_t> order(page.lines.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Key& ka = keys[a];
    const Key& kb = keys[b];
    if (ka.column != kb.column) return ka.column < kb.column;
    if (ka.y != kb.y) return ka.y < kb.y;
    return ka.x < kb.x;
  });
  return order;
}

inline std::vector<TextLine> reading_order(const PageDocument& page, const ReadingOrderConfig& config) {
  std::vector<TextLine> lines;
  for (std::size_t i : reading_order_indices(page, config)) lines.push_back(page.lines[i]);
  return lines;
}

namespace text_segment_detail {

inline void require_classified(const PageDocument& page) {
  for (const auto& line : page.lines) {
    if (!line.is_first_line) throw ValidationError(page.page_id + "/" + line.id, "line is not classified");
  }
}

inline Act make_act(const PageDocument& page, std::span<const std::size_t> members, ActClass cls, int index, int margin) {
  BoundingBox box = bounding_box(page.lines[members.front()].polygon);
  for (std::size_t i : members) box = unite(box, bounding_box(page.lines[i].polygon));
  box = {std::max(box.x_min - margin, 0), std::max(box.y_min - margin, 0), std::min(box.x_max + margin, page.width),
         std::min(box.y_max + margin, page.height)};
  return {"act-" + std::to_string(index), cls, make_rectangle(box), 1.0};
}

}  // namespace text_segment_detail

// Replaces pred_acts on each page of a register given in document order.
// Lines before the first flagged line form an End act; each flagged line
// opens an act that is Full, or Start when the next page begins with
// unflagged lines. A page with no flagged line is a single Center act. Act
// polygons are the line boxes' union box grown by `margin`.
inline std::vector<PageDocument> segment_by_keyphrases(std::span<const PageDocument> pages,
                                                       const ReadingOrderConfig& config, int margin = 0) {
  using namespace text_segment_detail;
  for (const auto& page : pages) require_classified(page);

  std::vector<std::vector<std::size_t>> orders;
  orders.reserve(pages.size());
  for (const auto& page : pages) orders.push_back(reading_order_indices(page, config));

  std::vector<PageDocument> out(pages.begin(), pages.end());
  for (std::size_t p = 0; p < pages.size(); ++p) {
    const PageDocument& page = pages[p];
    const auto& order = orders[p];
    PageDocument& result = out[p];
    result.pred_acts.clear();
    if (order.empty()) continue;

    std::vector<std::vector<std::size_t>> groups(1);
    for (std::size_t i : order) {
      if (*page.lines[i].is_first_line) groups.emplace_back();
      groups.back().push_back(i);
    }
    const std::size_t flagged = groups.size() - 1;
    int index = 0;
    if (flagged == 0) {
      result.pred_acts.push_back(make_act(page, groups[0], ActClass::Center, index++, margin));
      continue;
    }
    const bool continues = p + 1 < pages.size() && !orders[p + 1].empty() &&
                           !*pages[p + 1].lines[orders[p + 1].front()].is_first_line;
    if (!groups[0].empty()) result.pred_acts.push_back(make_act(page, groups[0], ActClass::End, index++, margin));
    for (std::size_t g = 1; g <= flagged; ++g) {
      const ActClass cls = (g == flagged && continues) ? ActClass::Start : ActClass::Full;
      result.pred_acts.push_back(make_act(page, groups[g], cls, index++, margin));
    }
  }
  return out;
}

}  // namespace actseg
