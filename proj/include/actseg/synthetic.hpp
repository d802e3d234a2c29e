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

// Synthetic registers with known act structure, for testing at scale.

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "actseg/document.hpp"
#include "actseg/error.hpp"
#include "actseg/geometry.hpp"
#include "actseg/image_io.hpp"
#include "actseg/unicode.hpp"

namespace actseg {

struct IntRange {
  int min = 0;
  int max = 0;

  friend bool operator==(const IntRange&, const IntRange&) = default;
};

struct SynthNoise {
  double flag_flip_prob = 0.0;
  int polygon_jitter = 0;  // pixels, applied to line polygons
  double char_error_rate = 0.0;

  friend bool operator==(const SynthNoise&, const SynthNoise&) = default;
};

struct SynthConfig {
  int pages = 50;
  IntRange acts_per_page{1, 4};
  IntRange lines_per_act{2, 5};
  int page_width = 1000;
  int page_height = 1400;
  SynthNoise noise;
  double cross_page_act_prob = 0.3;
  // Chance that a continuing act fills the whole next page (a Center page).
  double center_page_prob = 0.1;
  bool two_columns = false;
  std::uint64_t seed = 1;
  SplitName split = SplitName::Test;
  bool render_images = true;

  friend bool operator==(const SynthConfig&, const SynthConfig&) = default;
};

namespace synth_detail {

inline constexpr int kMargin = 40;
inline constexpr int kGutter = 40;
inline constexpr int kLineHeight = 30;
inline constexpr int kLineGap = 14;
inline constexpr int kActGap = 30;

// Height of a block of `lines` lines.
inline int block_height(int lines) { return lines * kLineHeight + std::max(lines - 1, 0) * kLineGap; }

inline std::uint64_t mix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t a = 0, std::uint64_t b = 0) {
  return mix(mix(mix(seed ^ mix(stream)) ^ a) ^ (b * 0x632BE59BD9B4E019ull));
}

// mt19937_64 output is fixed by the standard; distributions are not, so
// values are mapped by hand to keep output identical across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  int uniform_int(int lo, int hi) {
    if (hi <= lo) return lo;
    return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  double symmetric() { return 2.0 * uniform() - 1.0; }
  template <class C>
  const auto& pick(const C& c) {
    return c[static_cast<std::size_t>(uniform_int(0, static_cast<int>(c.size()) - 1))];
  }

 private:
  std::mt19937_64 engine_;
};

inline const std::vector<std::string>& day_words() {
  static const std::vector<std::string> words{
      "premier", "deux", "trois", "quatre", "cinq", "six", "sept", "huit", "neuf", "dix", "onze", "douze",
      "treize", "quatorze", "quinze", "seize", "dix-sept", "dix-huit", "dix-neuf", "vingt", "vingt-deux",
      "vingt-trois", "vingt-quatre", "vingt-cinq", "vingt-six", "vingt-sept", "vingt-huit", "vingt-neuf", "trente"};
  return words;
}

inline const std::vector<std::string>& month_words() {
  static const std::vector<std::string> words{"janvier", "février", "mars", "avril", "mai", "juin", "juillet",
                                              "août", "septembre", "octobre", "novembre", "décembre"};
  return words;
}

inline const std::vector<std::string>& year_words() {
  static const std::vector<std::string> words{"dix", "onze", "douze", "treize", "quatorze", "quinze", "seize",
                                              "vingt", "trente", "quarante", "cinquante", "soixante"};
  return words;
}

// No number or month words, so filler never looks like a date.
inline const std::vector<std::string>& filler_words() {
  static const std::vector<std::string> words{
      "baptisé", "par", "nous", "prêtre", "soussigné", "fils", "fille", "légitime", "de", "et", "la", "le",
      "paroisse", "parrain", "marraine", "lesquels", "ont", "signé", "avec", "père", "mère", "curé", "né",
      "hier", "mariage", "cette", "église", "présent", "sépulture", "inhumé", "cimetière", "époux", "épouse",
      "demeurant", "en", "ce", "lieu", "témoins", "agé", "ans", "ou", "environ", "feu", "veuve"};
  return words;
}

inline std::string date_text(Rng& rng) {
  return "Le " + rng.pick(day_words()) + " " + rng.pick(month_words()) + ", mil " +
         rng.pick(std::vector<std::string>{"sept", "huit", "neuf"}) + " cent " + rng.pick(year_words());
}

inline std::string filler_text(Rng& rng) {
  const int n = rng.uniform_int(5, 9);
  std::string s;
  for (int i = 0; i < n; ++i) {
    if (i) s += ' ';
    s += rng.pick(filler_words());
  }
  return s;
}

// Independent substitution / deletion / insertion, each at rate / 3. The
// same random draws are consumed whatever the rate, so a lower rate's edits
// are a subset of a higher rate's.
inline std::string add_char_noise(const std::string& clean, double rate, Rng& rng) {
  static const std::u32string letters = U"abcdefghijklmnopqrstuvwxyz";
  std::u32string out;
  for (char32_t c : text::code_points(clean)) {
    const double u = rng.uniform();
    const int op = rng.uniform_int(0, 2);
    char32_t r = letters[static_cast<std::size_t>(rng.uniform_int(0, 25))];
    if (u >= rate) {
      out.push_back(c);
      continue;
    }
    if (op == 0) {
      if (r == c) r = r == U'z' ? U'a' : r + 1;
      out.push_back(r);
    } else if (op == 2) {
      out.push_back(c);
      out.push_back(r);
    }
  }
  return text::from_code_points(out);
}

inline BoundingBox jitter_box(const BoundingBox& box, int jitter, Rng& rng, int width, int height) {
  const std::array<double, 4> u{rng.symmetric(), rng.symmetric(), rng.symmetric(), rng.symmetric()};
  auto offset = [jitter](double v) { return static_cast<int>(std::lround(v * jitter)); };
  BoundingBox out{std::clamp(box.x_min + offset(u[0]), 0, width), std::clamp(box.y_min + offset(u[1]), 0, height),
                  std::clamp(box.x_max + offset(u[2]), 0, width), std::clamp(box.y_max + offset(u[3]), 0, height)};
  if (out.x_max <= out.x_min) {
    out.x_max = std::min(out.x_min + 1, width);
    out.x_min = out.x_max - 1;
  }
  if (out.y_max <= out.y_min) {
    out.y_max = std::min(out.y_min + 1, height);
    out.y_min = out.y_max - 1;
  }
  return out;
}

struct Piece {
  ActClass cls;
  int lines;
};

}  // namespace synth_detail

inline void validate(const SynthConfig& c) {
  using namespace synth_detail;
  const std::string where = "synth config";
  auto probability = [&](double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) throw ValidationError(where, std::string(name) + " must be in [0, 1]");
  };
  probability(c.noise.flag_flip_prob, "flag_flip_prob");
  probability(c.noise.char_error_rate, "char_error_rate");
  probability(c.cross_page_act_prob, "cross_page_act_prob");
  probability(c.center_page_prob, "center_page_prob");
  if (c.pages < 1) throw ValidationError(where, "pages must be >= 1");
  if (c.noise.polygon_jitter < 0) throw ValidationError(where, "polygon_jitter must be >= 0");
  if (c.acts_per_page.min < 0 || c.acts_per_page.min > c.acts_per_page.max) {
    throw ValidationError(where, "acts_per_page must be a non-empty range of non-negative counts");
  }
  if (c.lines_per_act.min < 1 || c.lines_per_act.min > c.lines_per_act.max) {
    throw ValidationError(where, "lines_per_act must be a non-empty range starting at >= 1");
  }
  const int columns = c.two_columns ? 2 : 1;
  const int column_width = (c.page_width - 2 * kMargin - (columns - 1) * kGutter) / columns;
  if (column_width < 200) throw ValidationError(where, "page_width too small for the column layout");
  // Worst case: a continuation piece plus the most acts, all at the most lines.
  const int pieces = c.acts_per_page.max + 1;
  const int per_column = (pieces + columns - 1) / columns;
  const int needed = 2 * kMargin + per_column * block_height(c.lines_per_act.max) + (per_column - 1) * kActGap;
  if (needed > c.page_height) {
    throw ValidationError(where, "ranges infeasible: up to " + std::to_string(needed) + " px of text per column, page height " +
                                     std::to_string(c.page_height));
  }
}

inline nlohmann::json to_json(const SynthConfig& c) {
  return {{"pages", c.pages},
          {"acts_per_page", {c.acts_per_page.min, c.acts_per_page.max}},
          {"lines_per_act", {c.lines_per_act.min, c.lines_per_act.max}},
          {"page_width", c.page_width},
          {"page_height", c.page_height},
          {"noise",
           {{"flag_flip_prob", c.noise.flag_flip_prob},
            {"polygon_jitter", c.noise.polygon_jitter},
            {"char_error_rate", c.noise.char_error_rate}}},
          {"cross_page_act_prob", c.cross_page_act_prob},
          {"center_page_prob", c.center_page_prob},
          {"two_columns", c.two_columns},
          {"seed", c.seed},
          {"split", std::string(to_string(c.split))},
          {"render_images", c.render_images}};
}

// Missing fields keep their defaults.
inline SynthConfig synth_config_from_json(const nlohmann::json& v) {
  const std::string where = "synth config";
  if (!v.is_object()) throw ValidationError(where, "must be a JSON object");
  SynthConfig c;
  auto range = [&](const nlohmann::json& r, const char* name) {
    if (!r.is_array() || r.size() != 2) throw ValidationError(where, std::string(name) + " must be [min, max]");
    return IntRange{r[0].get<int>(), r[1].get<int>()};
  };
  try {
    for (auto it = v.begin(); it != v.end(); ++it) {
      const std::string& k = it.key();
      if (k == "pages") c.pages = it->get<int>();
      else if (k == "acts_per_page") c.acts_per_page = range(*it, "acts_per_page");
      else if (k == "lines_per_act") c.lines_per_act = range(*it, "lines_per_act");
      else if (k == "page_width") c.page_width = it->get<int>();
      else if (k == "page_height") c.page_height = it->get<int>();
      else if (k == "cross_page_act_prob") c.cross_page_act_prob = it->get<double>();
      else if (k == "center_page_prob") c.center_page_prob = it->get<double>();
      else if (k == "two_columns") c.two_columns = it->get<bool>();
      else if (k == "seed") c.seed = it->get<std::uint64_t>();
      else if (k == "render_images") c.render_images = it->get<bool>();
      else if (k == "split") {
        const auto s = it->get<std::string>();
        if (s == "train") c.split = SplitName::Train;
        else if (s == "dev") c.split = SplitName::Dev;
        else if (s == "test") c.split = SplitName::Test;
        else throw ValidationError(where, "unknown split \"" + s + "\"");
      } else if (k == "noise") {
        for (auto n = it->begin(); n != it->end(); ++n) {
          if (n.key() == "flag_flip_prob") c.noise.flag_flip_prob = n->get<double>();
          else if (n.key() == "polygon_jitter") c.noise.polygon_jitter = n->get<int>();
          else if (n.key() == "char_error_rate") c.noise.char_error_rate = n->get<double>();
          else throw ValidationError(where, "unknown noise key \"" + n.key() + "\"");
        }
      } else {
        throw ValidationError(where, "unknown key \"" + k + "\"");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(where, e.what());
  }
  validate(c);
  return c;
}

struct SyntheticDataset {
  DatasetSplit split;
  std::vector<PixelGrid> label_maps;  // exact rasterization of each page's gt_acts
  std::vector<RgbImage> images;       // empty unless render_images
};

namespace synth_detail {

inline Rgb parchment(std::uint64_t seed, int x, int y) {
  const std::uint64_t h = mix(seed ^ (static_cast<std::uint64_t>(x) << 32) ^ static_cast<std::uint64_t>(y));
  const int d = static_cast<int>(h % 17) - 8;
  return {static_cast<std::uint8_t>(236 + d / 2), static_cast<std::uint8_t>(226 + d / 2),
          static_cast<std::uint8_t>(198 + d)};
}

// Dark word blocks along each clean line box, sized by the reference words.
inline RgbImage render_page_image(const PageDocument& page, const std::vector<BoundingBox>& clean_boxes,
                                  std::uint64_t seed) {
  RgbImage image(page.width, page.height);
  for (int y = 0; y < page.height; ++y) {
    for (int x = 0; x < page.width; ++x) image(x, y) = parchment(seed, x, y);
  }
  const Rgb ink{58, 44, 30};
  for (std::size_t i = 0; i < page.lines.size(); ++i) {
    const BoundingBox& box = clean_boxes[i];
    const auto words = text::split_whitespace(text::code_points(page.lines[i].reference_transcription.value_or("")));
    std::size_t chars = 0;
    for (const auto& w : words) chars += w.size() + 1;
    if (chars == 0) continue;
    const double per_char = static_cast<double>(box.width()) / static_cast<double>(chars);
    double cursor = box.x_min;
    for (const auto& w : words) {
      const int x0 = static_cast<int>(cursor);
      const int x1 = static_cast<int>(cursor + per_char * static_cast<double>(w.size()));
      cursor += per_char * static_cast<double>(w.size() + 1);
      for (int y = box.y_min + 6; y < box.y_max - 6; ++y) {
        for (int x = x0; x < x1 && x < page.width; ++x) {
          if ((x + y) % 3 != 0) image(x, y) = ink;
        }
      }
    }
  }
  return image;
}

}  // namespace synth_detail

// Deterministic in `config.seed`. Each noise source draws from its own
// per-line stream, so raising one noise level never changes what another
// produces.
inline SyntheticDataset generate_dataset(const SynthConfig& config) {
  using namespace synth_detail;
  validate(config);
  SyntheticDataset out;
  out.split.name = config.split;
  Rng layout(stream_seed(config.seed, 1));

  const int columns = config.two_columns ? 2 : 1;
  const int column_width = (config.page_width - 2 * kMargin - (columns - 1) * kGutter) / columns;
  bool carry = false;
  for (int page_index = 0; page_index < config.pages; ++page_index) {
    const bool last_page = page_index + 1 == config.pages;
    std::vector<Piece> pieces;
    bool center_page = false;
    if (carry) {
      if (!last_page && layout.uniform() < config.center_page_prob) {
        pieces.push_back({ActClass::Center, layout.uniform_int(config.lines_per_act.min, config.lines_per_act.max)});
        center_page = true;
      } else {
        pieces.push_back({ActClass::End, layout.uniform_int(config.lines_per_act.min, config.lines_per_act.max)});
        carry = false;
      }
    }
    if (!center_page) {
      const int acts = layout.uniform_int(config.acts_per_page.min, config.acts_per_page.max);
      for (int a = 0; a < acts; ++a) {
        pieces.push_back({ActClass::Full, layout.uniform_int(config.lines_per_act.min, config.lines_per_act.max)});
      }
      if (acts > 0 && !last_page && layout.uniform() < config.cross_page_act_prob) {
        pieces.back().cls = ActClass::Start;
        carry = true;
      }
    }

    PageDocument page;
    char id[32];
    std::snprintf(id, sizeof id, "page-%04d", page_index + 1);
    page.page_id = id;
    page.width = config.page_width;
    page.height = config.page_height;
    page.image = "../images/" + page.page_id + ".png";
    if (config.two_columns) page.split_x = config.page_width / 2;

    const std::size_t left_count = (pieces.size() + static_cast<std::size_t>(columns) - 1) / static_cast<std::size_t>(columns);
    std::vector<BoundingBox> clean_boxes;
    int y = kMargin;
    int column = 0;
    for (std::size_t k = 0; k < pieces.size(); ++k) {
      if (columns == 2 && k == left_count) {
        column = 1;
        y = kMargin;
      }
      const int col_x0 = kMargin + column * (column_width + kGutter);
      const int col_x1 = col_x0 + column_width;
      const Piece& piece = pieces[k];
      const bool opens = piece.cls == ActClass::Full || piece.cls == ActClass::Start;
      BoundingBox act_box{};
      for (int l = 0; l < piece.lines; ++l) {
        const int line_no = static_cast<int>(page.lines.size());
        const bool first = opens && l == 0;
        const int x0 = col_x0 + (first ? layout.uniform_int(10, 40) : layout.uniform_int(0, 15));
        int x1 = col_x1 - layout.uniform_int(0, 60);
        if (l + 1 == piece.lines && piece.cls != ActClass::Start && piece.cls != ActClass::Center) {
          x1 = x0 + (x1 - x0) * layout.uniform_int(30, 70) / 100;
        }
        const BoundingBox box{x0, y, x1, y + kLineHeight};
        act_box = l == 0 ? box : unite(act_box, box);
        y += kLineHeight + kLineGap;

        Rng text_rng(stream_seed(config.seed, 2, static_cast<std::uint64_t>(page_index), static_cast<std::uint64_t>(line_no)));
        const std::string clean = first ? date_text(text_rng) : filler_text(text_rng);
        std::string hypothesis = clean;
        Rng flip_rng(stream_seed(config.seed, 3, static_cast<std::uint64_t>(page_index), static_cast<std::uint64_t>(line_no)));
        const double flip_u = flip_rng.uniform();
        const std::string flipped = first ? filler_text(flip_rng) : date_text(flip_rng);
        if (flip_u < config.noise.flag_flip_prob) hypothesis = flipped;
        Rng char_rng(stream_seed(config.seed, 4, static_cast<std::uint64_t>(page_index), static_cast<std::uint64_t>(line_no)));
        hypothesis = add_char_noise(hypothesis, config.noise.char_error_rate, char_rng);
        Rng jitter_rng(stream_seed(config.seed, 5, static_cast<std::uint64_t>(page_index), static_cast<std::uint64_t>(line_no)));
        const BoundingBox seen_box = config.noise.polygon_jitter > 0
                                         ? jitter_box(box, config.noise.polygon_jitter, jitter_rng, page.width, page.height)
                                         : box;

        TextLine line;
        line.id = "l" + std::to_string(line_no + 1);
        line.polygon = make_rectangle(seen_box);
        line.set_transcription(hypothesis);
        line.reference_first_line = first;
        line.reference_transcription = text::nfc(clean);
        page.lines.push_back(std::move(line));
        clean_boxes.push_back(box);
      }
      y += kActGap - kLineGap;
      page.gt_acts.push_back({"a" + std::to_string(k + 1), piece.cls, make_rectangle(act_box), std::nullopt});
    }

    PixelGrid labels(page.width, page.height, 0);
    for (const Act& act : page.gt_acts) fill_polygon(labels, act.polygon, label_of(act.cls));
    if (config.render_images) out.images.push_back(render_page_image(page, clean_boxes, stream_seed(config.seed, 6, static_cast<std::uint64_t>(page_index))));
    out.label_maps.push_back(std::move(labels));
    out.split.pages.push_back(std::move(page));
  }
  return out;
}

// Writes pages/<id>.json, maps/<id>.png (ground-truth label maps),
// images/<id>.png and manifest.txt under `out_dir`.
inline void write_dataset(const SyntheticDataset& data, const std::filesystem::path& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir / "pages");
  fs::create_directories(out_dir / "maps");
  if (!data.images.empty()) fs::create_directories(out_dir / "images");
  std::string manifest;
  for (std::size_t i = 0; i < data.split.pages.size(); ++i) {
    const PageDocument& page = data.split.pages[i];
    PageDocument stored = page;
    if (data.images.empty()) stored.image.reset();
    save_page(stored, out_dir / "pages" / (page.page_id + ".json"));
    save_label_map(out_dir / "maps" / (page.page_id + ".png"), data.label_maps[i]);
    if (!data.images.empty()) write_png(out_dir / "images" / (page.page_id + ".png"), data.images[i]);
    manifest += "pages/" + page.page_id + ".json\n";
  }
  write_text_file(out_dir / "manifest.txt", manifest);
}

// Copies ground-truth acts as predictions with every box edge moved by
// round(u * jitter), u uniform in [-1, 1] and fixed per edge by `seed`;
// scores are drawn from [0.5, 1]. Larger jitter only scales the same offsets.
inline std::vector<Act> jitter_acts(std::span<const Act> acts, int jitter, std::uint64_t seed, int width, int height) {
  using namespace synth_detail;
  std::vector<Act> out;
  for (std::size_t i = 0; i < acts.size(); ++i) {
    Rng rng(stream_seed(seed, 7, i));
    const double score = 0.5 + 0.5 * rng.uniform();
    const BoundingBox box = jitter_box(bounding_box(acts[i].polygon), jitter, rng, width, height);
    out.push_back({acts[i].id, acts[i].cls, make_rectangle(box), score});
  }
  return out;
}

}  // namespace actseg
