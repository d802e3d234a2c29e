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
#include <fstream>
#include <sstream>

#include "actseg/cli.hpp"

namespace actseg {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "actseg");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("actseg-cli-" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  void synth(int pages, const std::string& extra_config = "{}") {
    nlohmann::json config = nlohmann::json::parse(extra_config);
    config["pages"] = pages;
    write_text_file(dir_ / "synth.json", config.dump());
    const Result r = run({"synth", "--config", (dir_ / "synth.json").string(), "--out", (dir_ / "data").string()});
    ASSERT_EQ(r.code, 0) << r.err;
  }

  nlohmann::json evaluate_json() {
    const Result r = run({"evaluate", "--pages", pages().string(), "--format", "json", "--out", "-"});
    EXPECT_EQ(r.code, 0) << r.err;
    return nlohmann::json::parse(r.out);
  }

  fs::path pages() const { return dir_ / "data" / "pages"; }

  fs::path dir_;
};

TEST_F(CliTest, HelpAndUsageErrors) {
  EXPECT_EQ(run({"--help"}).code, 0);
  const Result unknown = run({"frobnicate"});
  EXPECT_EQ(unknown.code, 2);
  EXPECT_NE(unknown.err.find("Usage"), std::string::npos);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"evaluate", "--pages", "x"}).code, 2);
  EXPECT_EQ(run({"evaluate", "--pages", "x", "--out", "-", "--format", "xml"}).code, 2);
  EXPECT_EQ(run({"enrich", "--variant", "sepia", "--pages", "p", "--images", "i", "--out", "o"}).code, 2);
}

TEST_F(CliTest, ValidationErrorsNameTheFile) {
  fs::create_directories(dir_ / "bad");
  write_text_file(dir_ / "bad" / "p.json",
                  R"({"page_id": "p", "width": 10, "height": 10, "lines": [],
                      "gt_acts": [{"id": "a7", "class": "middle", "polygon": [[0,0],[5,0],[5,5]]}]})");
  const Result r = run({"evaluate", "--pages", (dir_ / "bad").string(), "--out", "-"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("p.json/a7"), std::string::npos) << r.err;
}

TEST_F(CliTest, TextPipelineIsPerfectWithoutNoise) {
  synth(12);
  ASSERT_EQ(run({"classify", "--config", "builtin:date", "--pages", pages().string()}).code, 0);
  const Result seg = run({"segment-text", "--manifest", (dir_ / "data" / "manifest.txt").string(), "--order", "top"});
  ASSERT_EQ(seg.code, 0) << seg.err;
  const nlohmann::json report = evaluate_json();
  ASSERT_FALSE(report["classes"].empty());
  for (const auto& [name, c] : report["classes"].items()) {
    EXPECT_EQ(c["pixel_iou"], 1.0) << name;
    EXPECT_EQ(c["ap50"], 1.0) << name;
    EXPECT_EQ(c["ap75"], 1.0) << name;
    EXPECT_EQ(c["map"], 1.0) << name;
  }
  EXPECT_EQ(report["line_classification"]["f1"], 1.0);
  EXPECT_EQ(report["end_line"]["f1"], 1.0);
  EXPECT_EQ(report["act_typing"]["accuracy"], 1.0);
  EXPECT_EQ(report["text"]["cer"], 0.0);
  EXPECT_EQ(report["text"]["wer"], 0.0);
}

TEST_F(CliTest, ClassifyIsIdempotent) {
  synth(3);
  const std::string config = (fs::path(ACTSEG_CONFIG_DIR) / "date_rule.json").string();
  ASSERT_EQ(run({"classify", "--config", config, "--pages", pages().string()}).code, 0);
  const std::string once = slurp(pages() / "page-0001.json");
  ASSERT_EQ(run({"classify", "--config", config, "--pages", pages().string()}).code, 0);
  EXPECT_EQ(slurp(pages() / "page-0001.json"), once);
}

TEST_F(CliTest, PostprocessFromGroundTruthMaps) {
  synth(6);
  const Result r = run({"postprocess", "--pages", pages().string(), "--maps", (dir_ / "data" / "maps").string(),
                        "--min-area", "100"});
  ASSERT_EQ(r.code, 0) << r.err;
  const nlohmann::json page = read_json_file(pages() / "page-0001.json");
  EXPECT_EQ(page["label_map"], "../maps/page-0001.png");
  const nlohmann::json report = evaluate_json();
  for (const auto& [name, c] : report["classes"].items()) {
    EXPECT_EQ(c["map"], 1.0) << name;
    EXPECT_EQ(c["pixel_iou"], 1.0) << name;
  }
}

TEST_F(CliTest, PostprocessNeedsMaps) {
  synth(1);
  const Result r = run({"postprocess", "--pages", pages().string(), "--maps", (dir_ / "nowhere").string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("page-0001"), std::string::npos);
}

TEST_F(CliTest, EnrichWritesImages) {
  synth(2, R"({"page_width": 600, "page_height": 1300})");
  ASSERT_EQ(run({"classify", "--config", "builtin:date", "--pages", pages().string()}).code, 0);
  const fs::path out = dir_ / "enriched";
  Result r = run({"enrich", "--variant", "ch4", "--pages", pages().string(), "--images",
                  (dir_ / "data" / "images").string(), "--out", out.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const RgbImage rgb = read_png_rgb(out / "page-0001.png");
  EXPECT_EQ(std::max(rgb.width(), rgb.height()), 768);
  const GrayPng mask = read_png_gray(out / "page-0001.ch4.png");
  EXPECT_EQ(mask.values.width(), rgb.width());

  r = run({"enrich", "--variant", "twocolor", "--resize", "0", "--pages", pages().string(), "--images",
           (dir_ / "data" / "images").string(), "--out", out.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(read_png_rgb(out / "page-0002.png").width(), 600);
}

TEST_F(CliTest, EvaluateWritesAReportFile) {
  synth(2);
  const fs::path report = dir_ / "report.txt";
  ASSERT_EQ(run({"-j", "2", "evaluate", "--pages", pages().string(), "--out", report.string()}).code, 0);
  EXPECT_NE(slurp(report).find("pages"), std::string::npos);
}

TEST_F(CliTest, SynthIsDeterministic) {
  synth(3);
  const std::string first = slurp(pages() / "page-0003.json");
  fs::remove_all(dir_ / "data");
  synth(3);
  EXPECT_EQ(slurp(pages() / "page-0003.json"), first);
}

}  // namespace
}  // namespace actseg
