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

#include <filesystem>

#include "actseg/document.hpp"

namespace actseg {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

json minimal_page() {
  return json::parse(R"({
    "page_id": "p1", "width": 100, "height": 80,
    "lines": [{"id": "l1", "polygon": [[0,0],[50,0],[50,10],[0,10]], "transcription": "Le deux mars"}],
    "gt_acts": [{"id": "a1", "class": "full", "polygon": [[0,0],[60,0],[60,30],[0,30]]}],
    "pred_acts": [{"id": "p1", "class": "end", "polygon": [[0,0],[60,0],[60,30],[0,30]], "score": 0.5}]
  })");
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("actseg-doc-" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                        "-" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

TEST(ActClass, LabelsAndNames) {
  EXPECT_EQ(label_of(ActClass::Full), 1);
  EXPECT_EQ(label_of(ActClass::End), 4);
  EXPECT_EQ(to_string(ActClass::Center), "center");
  EXPECT_EQ(parse_act_class("start"), ActClass::Start);
  EXPECT_FALSE(parse_act_class("Start"));
}

TEST(PageJson, ParsesAndRoundTrips) {
  const PageDocument page = page_from_json(minimal_page());
  EXPECT_EQ(page.page_id, "p1");
  ASSERT_EQ(page.lines.size(), 1u);
  EXPECT_EQ(page.lines[0].transcription_lower, "le deux mars");
  ASSERT_EQ(page.pred_acts.size(), 1u);
  EXPECT_EQ(page.pred_acts[0].cls, ActClass::End);
  EXPECT_EQ(page.pred_acts[0].score, 0.5);
  const std::string once = serialize_page(page);
  EXPECT_EQ(serialize_page(page_from_json(json::parse(once))), once);
}

TEST(PageJson, TranscriptionIsStoredInNfc) {
  json j = minimal_page();
  j["lines"][0]["transcription"] = "fe\xCC\x81vrier";  // e + combining acute
  const PageDocument page = page_from_json(j);
  EXPECT_EQ(page.lines[0].transcription, "f\xC3\xA9vrier");
}

TEST(PageJson, ClampsPolygonsToThePage) {
  json j = minimal_page();
  j["gt_acts"][0]["polygon"] = json::parse("[[-10,-10],[500,-10],[500,500],[-10,500]]");
  const PageDocument page = page_from_json(j);
  EXPECT_EQ(bounding_box(page.gt_acts[0].polygon).area(), 100 * 80);
}

TEST(PageJson, RejectsInvalidDocuments) {
  auto rejects = [](auto&& edit) {
    json j = minimal_page();
    edit(j);
    EXPECT_THROW(page_from_json(j), ValidationError) << j.dump();
  };
  rejects([](json& j) { j["extra"] = 1; });
  rejects([](json& j) { j.erase("gt_acts"); });
  rejects([](json& j) { j["width"] = 0; });
  rejects([](json& j) { j["gt_acts"][0]["class"] = "middle"; });
  rejects([](json& j) { j["gt_acts"][0]["score"] = 0.3; });
  rejects([](json& j) { j["pred_acts"][0]["score"] = 1.5; });
  rejects([](json& j) { j["lines"][0]["polygon"] = json::parse("[[0,0],[4,4],[4,0],[0,4]]"); });
  rejects([](json& j) { j["lines"][0]["polygon"] = json::parse("[[0,0],[4,4]]"); });
  rejects([](json& j) { j["lines"].push_back(j["lines"][0]); });
  rejects([](json& j) { j["lines"][0]["transcription"] = std::string("bad \xFF byte"); });
  rejects([](json& j) { j["split_x"] = 101; });
}

TEST(PageJson, ErrorsNameTheOffendingObject) {
  json j = minimal_page();
  j["gt_acts"][0]["class"] = "middle";
  try {
    page_from_json(j, "file.json");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.subject(), "file.json/a1");
  }
}

TEST(Maps, LabelMapRoundTrip) {
  TempDir dir;
  PixelGrid g(7, 5, 0);
  g(1, 1) = 1;
  g(6, 4) = 4;
  save_label_map(dir.path / "m.png", g);
  EXPECT_EQ(load_label_map(dir.path / "m.png"), g);
  g(0, 0) = 9;
  save_label_map(dir.path / "bad.png", g);
  EXPECT_THROW(load_label_map(dir.path / "bad.png"), ValidationError);
}

TEST(Maps, ProbabilityMapIsQuantizedTo16Bits) {
  TempDir dir;
  ProbabilityPlane p(4, 3, 0.0f);
  p(0, 0) = 1.0f;
  p(1, 0) = 0.25f;
  p(2, 2) = 0.7f;
  save_probability_map(dir.path / "p.png", p);
  const ProbabilityPlane q = load_probability_map(dir.path / "p.png");
  for (int y = 0; y < 3; ++y) {
    for (int x = 0; x < 4; ++x) EXPECT_NEAR(q(x, y), p(x, y), 1.0 / 65535.0);
  }
}

TEST(LoadPage, LoadsReferencedMapsAndChecksSizes) {
  TempDir dir;
  json j = minimal_page();
  j["label_map"] = "maps/p1.png";
  fs::create_directories(dir.path / "maps");
  save_label_map(dir.path / "maps" / "p1.png", PixelGrid(100, 80, 1));
  write_text_file(dir.path / "p1.json", j.dump());
  const PageDocument page = load_page(dir.path / "p1.json");
  ASSERT_TRUE(page.label_map);
  EXPECT_EQ(count_nonzero(*page.label_map), 8000);

  save_label_map(dir.path / "maps" / "p1.png", PixelGrid(99, 80, 1));
  EXPECT_THROW(load_page(dir.path / "p1.json"), ValidationError);
}

TEST(LoadPage, MissingFileIsAnIoError) {
  EXPECT_THROW(load_page("/nonexistent/page.json"), IoError);
}

TEST(Files, ListingAndManifest) {
  TempDir dir;
  write_text_file(dir.path / "b.json", "{}");
  write_text_file(dir.path / "a.json", "{}");
  write_text_file(dir.path / "notes.txt", "");
  const auto files = list_page_files(dir.path);
  ASSERT_EQ(files.size(), 2u);
  EXPECT_EQ(files[0].filename(), "a.json");
  write_text_file(dir.path / "manifest.txt", "b.json\n\n  a.json \n");
  const auto listed = read_manifest(dir.path / "manifest.txt");
  ASSERT_EQ(listed.size(), 2u);
  EXPECT_EQ(listed[0], dir.path / "b.json");
  EXPECT_EQ(listed[1], dir.path / "a.json");
}

TEST(Split, DuplicatePageIdsAreRejected) {
  DatasetSplit split;
  split.pages.resize(2);
  split.pages[0].page_id = split.pages[1].page_id = "same";
  EXPECT_THROW(check_unique_page_ids(split), ValidationError);
  split.pages[1].page_id = "other";
  EXPECT_NO_THROW(check_unique_page_ids(split));
}

}  // namespace
}  // namespace actseg
