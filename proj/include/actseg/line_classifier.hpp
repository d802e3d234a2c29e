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

// Rule-based first-line classification from transcriptions.
//
// Two rules are supported. The date rule flags a line when at least
// `date_threshold` of its words are numbers or month names. The key-phrase
// rule flags a line containing any configured phrase.

#pragma once

#include <algorithm>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "actseg/document.hpp"
#include "actseg/error.hpp"
#include "actseg/unicode.hpp"

namespace actseg {

enum class ClassifierMode { DateRule, KeyPhraseRule };

struct ClassifierConfig {
  ClassifierMode mode = ClassifierMode::DateRule;
  int date_threshold = 3;
  std::set<std::string> number_lexicon;
  std::set<std::string> month_lexicon;
  std::vector<std::string> key_phrases;
  bool normalize = true;
  // Allowed edit distance between a key phrase and a stretch of the line.
  int max_edit_distance = 0;

  friend bool operator==(const ClassifierConfig&, const ClassifierConfig&) = default;
};

inline void validate(const ClassifierConfig& config) {
  if (config.date_threshold < 1) throw ValidationError("classifier config", "date_threshold must be >= 1");
  if (config.max_edit_distance < 0) throw ValidationError("classifier config", "max_edit_distance must be >= 0");
  if (config.mode == ClassifierMode::DateRule && (config.number_lexicon.empty() || config.month_lexicon.empty())) {
    throw ValidationError("classifier config", "date rule needs non-empty number and month lexicons");
  }
  if (config.mode == ClassifierMode::KeyPhraseRule && config.key_phrases.empty()) {
    throw ValidationError("classifier config", "key-phrase rule needs at least one phrase");
  }
}

// French number words. "un"/"une" are left out: as articles they occur in
// nearly every line. Hyphenated compounds ("dix-sept") are matched part-wise.
inline std::set<std::string> french_number_words() {
  return {"premier", "1er",     "deux",      "trois",    "quatre",  "cinq",   "six",     "sept",
          "huit",    "neuf",    "dix",       "onze",     "douze",   "treize", "quatorze", "quinze",
          "seize",   "vingt",   "vingts",    "trente",   "quarante", "cinquante", "soixante",
          "septante", "octante", "nonante",  "cent",     "cents",   "mil",    "mille"};
}

inline std::set<std::string> french_month_words() {
  return {"janvier", "février", "mars",     "avril",   "mai",      "juin",  "juillet", "août",
          "septembre", "octobre", "novembre", "décembre", "7bre",   "8bre",  "9bre",    "10bre", "xbre"};
}

inline ClassifierConfig default_date_config() {
  ClassifierConfig c;
  c.mode = ClassifierMode::DateRule;
  c.number_lexicon = french_number_words();
  c.month_lexicon = french_month_words();
  return c;
}

inline ClassifierConfig default_keyphrase_config() {
  ClassifierConfig c;
  c.mode = ClassifierMode::KeyPhraseRule;
  c.key_phrases = {"dei gratia francorum rex", "par la grace de dieu roys de france"};
  return c;
}

inline nlohmann::json to_json(const ClassifierConfig& c) {
  return {{"mode", c.mode == ClassifierMode::DateRule ? "date" : "keyphrase"},
          {"date_threshold", c.date_threshold},
          {"number_lexicon", std::vector<std::string>(c.number_lexicon.begin(), c.number_lexicon.end())},
          {"month_lexicon", std::vector<std::string>(c.month_lexicon.begin(), c.month_lexicon.end())},
          {"key_phrases", c.key_phrases},
          {"normalize", c.normalize},
          {"max_edit_distance", c.max_edit_distance}};
}

// Missing fields keep their defaults.
inline ClassifierConfig classifier_config_from_json(const nlohmann::json& v) {
  const std::string where = "classifier config";
  if (!v.is_object()) throw ValidationError(where, "must be a JSON object");
  ClassifierConfig c;
  try {
    for (auto it = v.begin(); it != v.end(); ++it) {
      const std::string& key = it.key();
      if (key == "mode") {
        const auto mode = it->get<std::string>();
        if (mode == "date") {
          c.mode = ClassifierMode::DateRule;
        } else if (mode == "keyphrase") {
          c.mode = ClassifierMode::KeyPhraseRule;
        } else {
          throw ValidationError(where, "unknown mode \"" + mode + "\"");
        }
      } else if (key == "date_threshold") {
        c.date_threshold = it->get<int>();
      } else if (key == "number_lexicon") {
        c.number_lexicon = it->get<std::set<std::string>>();
      } else if (key == "month_lexicon") {
        c.month_lexicon = it->get<std::set<std::string>>();
      } else if (key == "key_phrases") {
        c.key_phrases = it->get<std::vector<std::string>>();
      } else if (key == "normalize") {
        c.normalize = it->get<bool>();
      } else if (key == "max_edit_distance") {
        c.max_edit_distance = it->get<int>();
      } else {
        throw ValidationError(where, "unknown key \"" + key + "\"");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(where, e.what());
  }
  validate(c);
  return c;
}

inline ClassifierConfig load_classifier_config(const std::filesystem::path& file) {
  try {
    return classifier_config_from_json(read_json_file(file));
  } catch (const ValidationError& e) {
    throw ValidationError(file.string(), e.what());
  }
}

// Splits on whitespace, trims leading and trailing punctuation from each
// token and drops empty ones. With `normalize`, tokens are lowercased and
// accent-stripped.
inline std::vector<std::string> tokenize(std::string_view transcription, bool normalize = true) {
  std::vector<std::string> tokens;
  for (std::u32string token : text::split_whitespace(text::code_points(transcription))) {
    auto first = std::find_if_not(token.begin(), token.end(), text::is_punct);
    auto last = std::find_if_not(token.rbegin(), std::make_reverse_iterator(first), text::is_punct).base();
    if (first >= last) continue;
    const std::string word = text::from_code_points(std::u32string(first, last));
    tokens.push_back(normalize ? text::fold(word) : text::nfc(word));
  }
  return tokens;
}

namespace classifier_detail {

// Smallest edit distance between `pattern` and any substring of `text`.
inline int best_substring_distance(std::u32string_view pattern, std::u32string_view text) {
  std::vector<int> prev(pattern.size() + 1), cur(pattern.size() + 1);
  for (std::size_t i = 0; i <= pattern.size(); ++i) prev[i] = static_cast<int>(i);
  int best = prev[pattern.size()];
  for (char32_t c : text) {
    cur[0] = 0;
    for (std::size_t i = 1; i <= pattern.size(); ++i) {
      const int sub = prev[i - 1] + (pattern[i - 1] == c ? 0 : 1);
      cur[i] = std::min({sub, prev[i] + 1, cur[i - 1] + 1});
    }
    best = std::min(best, cur[pattern.size()]);
    std::swap(prev, cur);
  }
  return best;
}

}  // namespace classifier_detail

// A config with its lexicons and phrases pre-normalized.
class LineClassifier {
 public:
  explicit LineClassifier(ClassifierConfig config) : config_(std::move(config)) {
    validate(config_);
    for (const auto& w : config_.number_lexicon) numbers_.insert(prepare_word(w));
    for (const auto& w : config_.month_lexicon) months_.insert(prepare_word(w));
    for (const auto& p : config_.key_phrases) {
      phrases_.push_back(text::code_points(prepare_text(p)));
    }
  }

  const ClassifierConfig& config() const noexcept { return config_; }

  // Lexicon hits among the tokens of `transcription`.
  int date_word_count(std::string_view transcription) const {
    int hits = 0;
    for (const std::string& token : tokenize(transcription, config_.normalize)) {
      if (is_date_word(token)) ++hits;
    }
    return hits;
  }

  bool contains_key_phrase(std::string_view transcription) const {
    const std::u32string line = text::code_points(prepare_text(transcription));
    for (const auto& phrase : phrases_) {
      if (phrase.empty()) continue;
      if (config_.max_edit_distance == 0) {
        if (line.find(phrase) != std::u32string::npos) return true;
      } else if (classifier_detail::best_substring_distance(phrase, line) <= config_.max_edit_distance) {
        return true;
      }
    }
    return false;
  }

  bool classify(std::string_view transcription) const {
    if (transcription.empty()) return false;
    if (config_.mode == ClassifierMode::DateRule) return date_word_count(transcription) >= config_.date_threshold;
    return contains_key_phrase(transcription);
  }

  bool operator()(const TextLine& line) const { return classify(line.transcription); }

 private:
  std::string prepare_word(std::string_view w) const { return config_.normalize ? text::fold(w) : text::nfc(w); }

  std::string prepare_text(std::string_view t) const {
    return text::collapse_whitespace(config_.normalize ? text::fold(t) : text::nfc(t));
  }

  bool is_number_part(const std::string& part) const {
    if (part.empty()) return false;
    const std::u32string cps = text::code_points(part);
    return numbers_.contains(part) || std::all_of(cps.begin(), cps.end(), text::is_digit);
  }

  bool is_date_word(const std::string& token) const {
    if (months_.contains(token) || is_number_part(token)) return true;
    // Hyphenated number compounds: every part must be a number word.
    if (token.find('-') == std::string::npos) return false;
    std::size_t start = 0;
    while (true) {
      const std::size_t dash = token.find('-', start);
      if (!is_number_part(token.substr(start, dash - start))) return false;
      if (dash == std::string::npos) return true;
      start = dash + 1;
    }
  }

  ClassifierConfig config_;
  std::set<std::string> numbers_;
  std::set<std::string> months_;
  std::vector<std::u32string> phrases_;
};

// Empty transcriptions are never first lines.
inline bool classify_line(const TextLine& line, const ClassifierConfig& config) {
  return LineClassifier(config)(line);
}

inline PageDocument classify_page(const PageDocument& page, const LineClassifier& classifier) {
  PageDocument out = page;
  for (TextLine& line : out.lines) line.is_first_line = classifier(line);
  return out;
}

inline PageDocument classify_page(const PageDocument& page, const ClassifierConfig& config) {
  return classify_page(page, LineClassifier(config));
}

// Precision / recall / F1 for one positive class.
struct BinaryScores {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  std::int64_t tn = 0;

  // With no predicted positives, 1 if nothing was missed as well.
  double precision() const noexcept {
    if (tp + fp == 0) return fn == 0 ? 1.0 : 0.0;
    return static_cast<double>(tp) / static_cast<double>(tp + fp);
  }
  double recall() const noexcept {
    if (tp + fn == 0) return fp == 0 ? 1.0 : 0.0;
    return static_cast<double>(tp) / static_cast<double>(tp + fn);
  }
  double f1() const noexcept {
    const double p = precision(), r = recall();
    return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
  }

  void add(bool predicted, bool reference) noexcept {
    if (predicted && reference) ++tp;
    else if (predicted) ++fp;
    else if (reference) ++fn;
    else ++tn;
  }
};

// Scores class "first line" over every line of `pages`. Each line needs both
// a predicted and a reference flag.
inline BinaryScores evaluate_classification(std::span<const PageDocument> pages) {
  BinaryScores scores;
  std::vector<std::string> missing;
  for (const auto& page : pages) {
    for (const auto& line : page.lines) {
      if (!line.is_first_line || !line.reference_first_line) {
        missing.push_back(page.page_id + "/" + line.id);
        continue;
      }
      scores.add(*line.is_first_line, *line.reference_first_line);
    }
  }
  if (!missing.empty()) {
    std::string ids;
    for (std::size_t i = 0; i < missing.size() && i < 20; ++i) ids += (i ? ", " : "") + missing[i];
    if (missing.size() > 20) ids += ", ...";
    throw ValidationError("line classification", std::to_string(missing.size()) + " line(s) lack a predicted or reference flag: " + ids);
  }
  return scores;
}

inline BinaryScores evaluate_classification(const DatasetSplit& split) { return evaluate_classification(split.pages); }

}  // namespace actseg
