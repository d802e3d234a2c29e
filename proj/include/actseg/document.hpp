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

// Canonical page model and its JSON / PNG interchange.
//
// One annotation file per page:
//
//   {"page_id": str, "width": int, "height": int,
//    "lines": [{"id", "polygon": [[x,y],...], "transcription",
//               "is_first_line"?, "reference_first_line"?, "reference_transcription"?}],
//    "gt_acts": [{"id", "class": "full|start|center|end", "polygon"}],
//    "pred_acts": [{... , "score"?}],
//    "image"?: str, "label_map"?: str, "prob_maps"?: {class: str}, "split_x"?: int}
//
// Asset paths are relative to the assets directory passed to load_page.

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "actseg/error.hpp"
#include "actseg/geometry.hpp"
#include "actseg/image_io.hpp"
#include "actseg/unicode.hpp"

namespace actseg {

// Values double as label-map pixel values.
enum class ActClass : std::uint8_t { Full = 1, Start = 2, Center = 3, End = 4 };

inline constexpr std::array<ActClass, 4> kActClasses{ActClass::Full, ActClass::Start,
                                                     ActClass::Center, ActClass::End};
inline constexpr int kClassCount = 4;

constexpr std::uint8_t label_of(ActClass c) noexcept { return static_cast<std::uint8_t>(c); }

constexpr std::string_view to_string(ActClass c) noexcept {
  switch (c) {
    case ActClass::Full: return "full";
    case ActClass::Start: return "start";
    case ActClass::Center: return "center";
    case ActClass::End: return "end";
  }
  return "?";
}

inline std::optional<ActClass> parse_act_class(std::string_view s) noexcept {
  for (ActClass c : kActClasses) {
    if (to_string(c) == s) return c;
  }
  return std::nullopt;
}

struct TextLine {
  std::string id;
  Polygon polygon;
  std::string transcription;        // NFC
  std::string transcription_lower;  // lowercase copy of `transcription`
  std::optional<bool> is_first_line;
  // Ground truth used by the evaluators; absent on pure model output.
  std::optional<bool> reference_first_line;
  std::optional<std::string> reference_transcription;

  void set_transcription(std::string_view text) {
    transcription = text::nfc(text);
    icu::UnicodeString u = text::detail::from_utf8(transcription);
    u.toLower(icu::Locale::getRoot());
    transcription_lower = text::detail::to_utf8(u);
  }

  friend bool operator==(const TextLine&, const TextLine&) = default;
};

struct Act {
  std::string id;
  ActClass cls = ActClass::Full;
  Polygon polygon;
  std::optional<double> score;

  friend bool operator==(const Act&, const Act&) = default;
};

struct PageDocument {
  std::string page_id;
  int width = 0;
  int height = 0;
  std::vector<TextLine> lines;
  std::vector<Act> gt_acts;
  std::vector<Act> pred_acts;
  // Asset references as written in the annotation file.
  std::optional<std::string> image;
  std::optional<std::string> label_map_file;
  std::map<ActClass, std::string> prob_map_files;
  // Loaded assets.
  std::optional<PixelGrid> label_map;
  std::map<ActClass, ProbabilityPlane> prob_maps;
  // Reserved for double pages; nothing consumes it.
  std::optional<int> split_x;

  friend bool operator==(const PageDocument&, const PageDocument&) = default;
};

enum class SplitName { Train, Dev, Test };

constexpr std::string_view to_string(SplitName s) noexcept {
  switch (s) {
    case SplitName::Train: return "train";
    case SplitName::Dev: return "dev";
    case SplitName::Test: return "test";
  }
  return "?";
}

struct DatasetSplit {
  SplitName name = SplitName::Test;
  std::vector<PageDocument> pages;
};

inline void check_unique_page_ids(std::span<const PageDocument> pages) {
  std::set<std::string> seen;
  for (const auto& page : pages) {
    if (!seen.insert(page.page_id).second) throw ValidationError(page.page_id, "duplicate page_id in split");
  }
}

inline void check_unique_page_ids(const DatasetSplit& split) { check_unique_page_ids(split.pages); }

// ---------------------------------------------------------------------------
// Label and probability maps.

inline PixelGrid load_label_map(const std::filesystem::path& image_file, int class_count = kClassCount) {
  const GrayPng png = read_png_gray(image_file);
  PixelGrid grid(png.values.width(), png.values.height());
  for (int y = 0; y < grid.height(); ++y) {
    for (int x = 0; x < grid.width(); ++x) {
      const std::uint16_t v = png.values(x, y);
      if (v > class_count) {
        throw ValidationError(image_file.string(), "label " + std::to_string(v) + " at (" +
                                                       std::to_string(x) + "," + std::to_string(y) +
                                                       ") exceeds class count " + std::to_string(class_count));
      }
      grid(x, y) = static_cast<std::uint8_t>(v);
    }
  }
  return grid;
}

inline void save_label_map(const std::filesystem::path& image_file, const PixelGrid& grid) {
  write_png(image_file, grid);
}

// 16-bit planes are scaled by 65535, 8-bit planes by 255.
inline ProbabilityPlane load_probability_map(const std::filesystem::path& image_file) {
  const GrayPng png = read_png_gray(image_file);
  const float scale = png.bit_depth == 16 ? 65535.0f : 255.0f;
  ProbabilityPlane plane(png.values.width(), png.values.height());
  for (std::size_t i = 0; i < plane.data().size(); ++i) {
    plane.data()[i] = static_cast<float>(png.values.data()[i]) / scale;
  }
  return plane;
}

inline std::uint16_t quantize_probability(float p) {
  return static_cast<std::uint16_t>(std::clamp(p, 0.0f, 1.0f) * 65535.0f + 0.5f);
}

inline void save_probability_map(const std::filesystem::path& image_file, const ProbabilityPlane& plane) {
  Gray16Image out(plane.width(), plane.height());
  for (std::size_t i = 0; i < plane.data().size(); ++i) out.data()[i] = quantize_probability(plane.data()[i]);
  write_png(image_file, out);
}

// ---------------------------------------------------------------------------
// JSON <-> model.

namespace doc_detail {

using nlohmann::json;

inline const json& require(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError(where, std::string("missing key \"") + key + "\"");
  return *it;
}

inline void check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* k) { return it.key() == k; })) {
      throw ValidationError(where, "unknown key \"" + it.key() + "\"");
    }
  }
}

inline std::string get_string(const json& v, const std::string& where, const char* what) {
  if (!v.is_string()) throw ValidationError(where, std::string(what) + " must be a string");
  const std::string s = v.get<std::string>();
  if (!text::is_valid_utf8(s)) throw ValidationError(where, std::string(what) + " is not valid UTF-8");
  return s;
}

inline int get_int(const json& v, const std::string& where, const char* what) {
  if (!v.is_number_integer()) throw ValidationError(where, std::string(what) + " must be an integer");
  const auto i = v.get<std::int64_t>();
  if (i < std::numeric_limits<int>::min() || i > std::numeric_limits<int>::max()) {
    throw ValidationError(where, std::string(what) + " out of range");
  }
  return static_cast<int>(i);
}

inline bool get_bool(const json& v, const std::string& where, const char* what) {
  if (!v.is_boolean()) throw ValidationError(where, std::string(what) + " must be a boolean");
  return v.get<bool>();
}

// Validates the ring as written, then clamps it to the page.
inline Polygon parse_polygon(const json& v, const std::string& where, int width, int height) {
  if (!v.is_array()) throw ValidationError(where, "polygon must be an array of [x, y] pairs");
  Polygon polygon;
  polygon.vertices.reserve(v.size());
  for (const json& pt : v) {
    if (!pt.is_array() || pt.size() != 2) throw ValidationError(where, "polygon vertex must be [x, y]");
    polygon.vertices.push_back({get_int(pt[0], where, "x"), get_int(pt[1], where, "y")});
  }
  polygon = remove_repeated_vertices(polygon);
  if (auto defect = find_polygon_defect(polygon)) throw ValidationError(where, *defect);
  return clamp_to_page(polygon, width, height);
}

inline json polygon_to_json(const Polygon& polygon) {
  json out = json::array();
  for (const Point& p : polygon.vertices) out.push_back(json::array({p.x, p.y}));
  return out;
}

inline Act parse_act(const json& v, bool predicted, int width, int height, const std::string& page) {
  if (!v.is_object()) throw ValidationError(page, "act must be an object");
  Act act;
  act.id = get_string(require(v, "id", page), page, "act id");
  const std::string where = page + "/" + act.id;
  if (predicted) {
    check_keys(v, {"id", "class", "polygon", "score"}, where);
  } else {
    check_keys(v, {"id", "class", "polygon"}, where);
  }
  const std::string cls = get_string(require(v, "class", where), where, "class");
  const auto parsed = parse_act_class(cls);
  if (!parsed) throw ValidationError(where, "unknown act class \"" + cls + "\"");
  act.cls = *parsed;
  act.polygon = parse_polygon(require(v, "polygon", where), where, width, height);
  if (auto it = v.find("score"); it != v.end()) {
    if (!it->is_number()) throw ValidationError(where, "score must be a number");
    const double s = it->get<double>();
    if (!(s >= 0.0 && s <= 1.0)) throw ValidationError(where, "score outside [0, 1]");
    act.score = s;
  }
  return act;
}

inline json act_to_json(const Act& act) {
  json out{{"id", act.id}, {"class", std::string(to_string(act.cls))}, {"polygon", polygon_to_json(act.polygon)}};
  if (act.score) out["score"] = *act.score;
  return out;
}

inline TextLine parse_line(const json& v, int width, int height, const std::string& page) {
  if (!v.is_object()) throw ValidationError(page, "line must be an object");
  TextLine line;
  line.id = get_string(require(v, "id", page), page, "line id");
  const std::string where = page + "/" + line.id;
  check_keys(v,
             {"id", "polygon", "transcription", "is_first_line", "reference_first_line",
              "reference_transcription"},
             where);
  line.polygon = parse_polygon(require(v, "polygon", where), where, width, height);
  line.set_transcription(get_string(require(v, "transcription", where), where, "transcription"));
  if (auto it = v.find("is_first_line"); it != v.end()) line.is_first_line = get_bool(*it, where, "is_first_line");
  if (auto it = v.find("reference_first_line"); it != v.end()) {
    line.reference_first_line = get_bool(*it, where, "reference_first_line");
  }
  if (auto it = v.find("reference_transcription"); it != v.end()) {
    line.reference_transcription = text::nfc(get_string(*it, where, "reference_transcription"));
  }
  return line;
}

inline json line_to_json(const TextLine& line) {
  json out{{"id", line.id}, {"polygon", polygon_to_json(line.polygon)}, {"transcription", line.transcription}};
  if (line.is_first_line) out["is_first_line"] = *line.is_first_line;
  if (line.reference_first_line) out["reference_first_line"] = *line.reference_first_line;
  if (line.reference_transcription) out["reference_transcription"] = *line.reference_transcription;
  return out;
}

template <class T>
void check_unique_ids(const std::vector<T>& items, const std::string& page, const char* what) {
  std::set<std::string> seen;
  for (const auto& item : items) {
    if (!seen.insert(item.id).second) throw ValidationError(page + "/" + item.id, std::string("duplicate ") + what + " id");
  }
}

}  // namespace doc_detail

// Parses and validates an annotation document. Asset references are recorded
// but not loaded; see load_page.
inline PageDocument page_from_json(const nlohmann::json& v, const std::string& origin = {}) {
  using namespace doc_detail;
  if (!v.is_object()) throw ValidationError(origin, "annotation must be a JSON object");
  PageDocument page;
  page.page_id = get_string(require(v, "page_id", origin), origin, "page_id");
  const std::string where = origin.empty() ? page.page_id : origin;
  check_keys(v,
             {"page_id", "width", "height", "lines", "gt_acts", "pred_acts", "image", "label_map", "prob_maps",
              "split_x"},
             where);
  page.width = get_int(require(v, "width", where), where, "width");
  page.height = get_int(require(v, "height", where), where, "height");
  if (page.width <= 0 || page.height <= 0) throw ValidationError(where, "page dimensions must be positive");

  auto array_of = [&](const char* key) -> const json& {
    const json& arr = require(v, key, where);
    if (!arr.is_array()) throw ValidationError(where, std::string(key) + " must be an array");
    return arr;
  };
  for (const json& l : array_of("lines")) page.lines.push_back(parse_line(l, page.width, page.height, where));
  for (const json& a : array_of("gt_acts")) page.gt_acts.push_back(parse_act(a, false, page.width, page.height, where));
  if (v.contains("pred_acts")) {
    for (const json& a : array_of("pred_acts")) {
      page.pred_acts.push_back(parse_act(a, true, page.width, page.height, where));
    }
  }
  check_unique_ids(page.lines, where, "line");
  check_unique_ids(page.gt_acts, where, "gt act");
  check_unique_ids(page.pred_acts, where, "pred act");

  if (auto it = v.find("image"); it != v.end()) page.image = get_string(*it, where, "image");
  if (auto it = v.find("label_map"); it != v.end()) page.label_map_file = get_string(*it, where, "label_map");
  if (auto it = v.find("prob_maps"); it != v.end()) {
    if (!it->is_object()) throw ValidationError(where, "prob_maps must be an object");
    for (auto p = it->begin(); p != it->end(); ++p) {
      const auto cls = parse_act_class(p.key());
      if (!cls) throw ValidationError(where, "prob_maps: unknown act class \"" + p.key() + "\"");
      page.prob_map_files[*cls] = get_string(p.value(), where, "prob_maps entry");
    }
  }
  if (auto it = v.find("split_x"); it != v.end()) {
    page.split_x = get_int(*it, where, "split_x");
    if (*page.split_x < 0 || *page.split_x > page.width) throw ValidationError(where, "split_x outside the page");
  }
  return page;
}

inline nlohmann::json page_to_json(const PageDocument& page) {
  using namespace doc_detail;
  json out{{"page_id", page.page_id}, {"width", page.width}, {"height", page.height}};
  out["lines"] = json::array();
  for (const auto& l : page.lines) out["lines"].push_back(line_to_json(l));
  out["gt_acts"] = json::array();
  for (const auto& a : page.gt_acts) out["gt_acts"].push_back(act_to_json(a));
  out["pred_acts"] = json::array();
  for (const auto& a : page.pred_acts) out["pred_acts"].push_back(act_to_json(a));
  if (page.image) out["image"] = *page.image;
  if (page.label_map_file) out["label_map"] = *page.label_map_file;
  if (!page.prob_map_files.empty()) {
    json maps = json::object();
    for (const auto& [cls, file] : page.prob_map_files) maps[std::string(to_string(cls))] = file;
    out["prob_maps"] = maps;
  }
  if (page.split_x) out["split_x"] = *page.split_x;
  return out;
}

// Sorted keys, two-space indent, trailing newline.
inline std::string serialize_page(const PageDocument& page) { return page_to_json(page).dump(2) + "\n"; }

// Loads label / probability maps referenced by `page`, resolving paths
// against `assets_dir`.
inline void load_page_assets(PageDocument& page, const std::filesystem::path& assets_dir) {
  const std::string& where = page.page_id;
  if (page.label_map_file) {
    PixelGrid grid = load_label_map(assets_dir / *page.label_map_file, kClassCount);
    if (grid.width() != page.width || grid.height() != page.height) {
      throw ValidationError(where, "label map " + *page.label_map_file + " is " + std::to_string(grid.width()) +
                                       "x" + std::to_string(grid.height()) + ", page is " +
                                       std::to_string(page.width) + "x" + std::to_string(page.height));
    }
    page.label_map = std::move(grid);
  }
  for (const auto& [cls, file] : page.prob_map_files) {
    ProbabilityPlane plane = load_probability_map(assets_dir / file);
    if (plane.width() != page.width || plane.height() != page.height) {
      throw ValidationError(where, "probability map " + file + " does not match page dimensions");
    }
    page.prob_maps[cls] = std::move(plane);
  }
}

inline nlohmann::json read_json_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError(file.string() + ": cannot open");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(file.string(), std::string("invalid JSON: ") + e.what());
  }
}

inline PageDocument load_page(const std::filesystem::path& annotation_file,
                              const std::filesystem::path& assets_dir) {
  PageDocument page = page_from_json(read_json_file(annotation_file), annotation_file.string());
  load_page_assets(page, assets_dir);
  return page;
}

// Asset paths resolve against the annotation file's directory.
inline PageDocument load_page(const std::filesystem::path& annotation_file) {
  return load_page(annotation_file, annotation_file.parent_path());
}

inline void write_text_file(const std::filesystem::path& file, std::string_view content) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(file.string() + ": cannot open for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError(file.string() + ": write failed");
}

// Writes the annotation JSON only; referenced map files are left untouched.
inline void save_page(const PageDocument& page, const std::filesystem::path& out_file) {
  write_text_file(out_file, serialize_page(page));
}

// Annotation files in `dir`, sorted by name.
inline std::vector<std::filesystem::path> list_page_files(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw IoError(dir.string() + ": not a directory");
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

// Newline-separated page paths, relative to the manifest's directory.
inline std::vector<std::filesystem::path> read_manifest(const std::filesystem::path& manifest) {
  std::ifstream in(manifest);
  if (!in) throw IoError(manifest.string() + ": cannot open");
  std::vector<std::filesystem::path> pages;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const std::string trimmed = line.substr(first, line.find_last_not_of(" \t\r") - first + 1);
    std::filesystem::path p(trimmed);
    pages.push_back(p.is_absolute() ? p : manifest.parent_path() / p);
  }
  return pages;
}

}  // namespace actseg
