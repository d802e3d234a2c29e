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

// Evaluation: pixel IoU, object AP / mAP with one-to-one pairing, first-line
// classification scores, CER / WER and the end-of-act line metric.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "actseg/document.hpp"
#include "actseg/error.hpp"
#include "actseg/geometry.hpp"
#include "actseg/line_classifier.hpp"
#include "actseg/parallel.hpp"
#include "actseg/unicode.hpp"

namespace actseg {

// ---------------------------------------------------------------------------
// Object matching.

// Predictions and ground truth of one page, reduced to what matching needs.
// IoU entries below zero mark incompatible pairs (different classes).
struct MatchProblem {
  std::vector<double> pred_scores;
  std::vector<std::int64_t> pred_areas;
  std::vector<std::string> pred_ids;
  std::size_t gt_count = 0;
  std::vector<double> iou;  // row-major, pred x gt

  std::size_t pred_count() const noexcept { return pred_scores.size(); }
  double at(std::size_t pred, std::size_t gt) const { return iou[pred * gt_count + gt]; }
};

// Prediction indices by score descending, then area descending, then id.
inline std::vector<std::size_t> priority_order(const MatchProblem& problem) {
  std::vector<std::size_t> order(problem.pred_count());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (problem.pred_scores[a] != problem.pred_scores[b]) return problem.pred_scores[a] > problem.pred_scores[b];
    if (problem.pred_areas[a] != problem.pred_areas[b]) return problem.pred_areas[a] > problem.pred_areas[b];
    return problem.pred_ids[a] < problem.pred_ids[b];
  });
  return order;
}

// In priority order, each prediction claims the free ground-truth object
// with the highest IoU (lowest index on ties), provided IoU >= threshold.
// Result is indexed by prediction.
inline std::vector<std::optional<std::size_t>> greedy_match(const MatchProblem& problem, double threshold) {
  std::vector<std::optional<std::size_t>> assigned(problem.pred_count());
  std::vector<bool> taken(problem.gt_count, false);
  for (std::size_t p : priority_order(problem)) {
    std::optional<std::size_t> best;
    double best_iou = -1.0;
    for (std::size_t g = 0; g < problem.gt_count; ++g) {
      const double v = problem.at(p, g);
      if (taken[g] || v < 0.0 || v < threshold) continue;
      if (v > best_iou) {
        best_iou = v;
        best = g;
      }
    }
    if (best) {
      taken[*best] = true;
      assigned[p] = best;
    }
  }
  return assigned;
}

inline void require_scores(std::span<const Act> preds, const std::string& where) {
  for (const Act& a : preds) {
    if (!a.score) throw ValidationError(where + "/" + a.id, "predicted act has no score");
  }
}

// Builds the problem for `preds` against `gts` on a width x height page.
// Cross-class pairs are incompatible.
inline MatchProblem build_match_problem(std::span<const Act> preds, std::span<const Act> gts, int width, int height) {
  MatchProblem problem;
  problem.gt_count = gts.size();
  std::vector<std::vector<Span>> pred_spans, gt_spans;
  std::vector<BoundingBox> pred_boxes, gt_boxes;
  for (const Act& a : preds) {
    pred_spans.push_back(polygon_spans(a.polygon, width, height));
    pred_boxes.push_back(bounding_box(clamp_to_page(a.polygon, width, height)));
    problem.pred_scores.push_back(a.score.value_or(0.0));
    problem.pred_areas.push_back(spans_area(pred_spans.back()));
    problem.pred_ids.push_back(a.id);
  }
  for (const Act& a : gts) {
    gt_spans.push_back(polygon_spans(a.polygon, width, height));
    gt_boxes.push_back(bounding_box(clamp_to_page(a.polygon, width, height)));
  }
  problem.iou.assign(preds.size() * gts.size(), 0.0);
  for (std::size_t p = 0; p < preds.size(); ++p) {
    for (std::size_t g = 0; g < gts.size(); ++g) {
      double& v = problem.iou[p * gts.size() + g];
      if (preds[p].cls != gts[g].cls) {
        v = -1.0;
        continue;
      }
      const BoundingBox& a = pred_boxes[p];
      const BoundingBox& b = gt_boxes[g];
      const bool disjoint = a.x_max <= b.x_min || b.x_max <= a.x_min || a.y_max <= b.y_min || b.y_max <= a.y_min;
      const std::int64_t inter = disjoint ? 0 : spans_intersection(pred_spans[p], gt_spans[g]);
      const std::int64_t area_g = spans_area(gt_spans[g]);
      v = Overlap{inter, problem.pred_areas[p] + area_g - inter}.iou();
    }
  }
  return problem;
}

struct MatchPair {
  std::string pred_id;
  std::string gt_id;
  double iou = 0.0;
};

struct MatchResult {
  std::vector<MatchPair> pairs;  // in prediction priority order
  std::vector<std::string> unmatched_preds;
  std::vector<std::string> unmatched_gts;
};

// One-to-one, class-aware pairing of predicted and ground-truth acts.
inline MatchResult match_objects(std::span<const Act> preds, std::span<const Act> gts, double iou_threshold,
                                 int width, int height) {
  const MatchProblem problem = build_match_problem(preds, gts, width, height);
  const auto assigned = greedy_match(problem, iou_threshold);
  MatchResult result;
  std::vector<bool> gt_used(gts.size(), false);
  for (std::size_t p : priority_order(problem)) {
    if (assigned[p]) {
      result.pairs.push_back({preds[p].id, gts[*assigned[p]].id, problem.at(p, *assigned[p])});
      gt_used[*assigned[p]] = true;
    } else {
      result.unmatched_preds.push_back(preds[p].id);
    }
  }
  for (std::size_t g = 0; g < gts.size(); ++g) {
    if (!gt_used[g]) result.unmatched_gts.push_back(gts[g].id);
  }
  return result;
}

// ---------------------------------------------------------------------------
// Average precision.

// Area under the all-point interpolated precision-recall curve. Detections
// from every problem are swept together by descending score. Both sides
// empty gives 1; predictions without ground truth (or the reverse) give 0.
inline double average_precision(std::span<const MatchProblem> problems, double iou_threshold) {
  struct Detection {
    double score;
    std::int64_t area;
    std::size_t problem;
    const std::string* id;
    bool tp;
  };
  std::vector<Detection> detections;
  std::size_t gt_total = 0;
  for (std::size_t k = 0; k < problems.size(); ++k) {
    const MatchProblem& pr = problems[k];
    gt_total += pr.gt_count;
    const auto assigned = greedy_match(pr, iou_threshold);
    for (std::size_t p = 0; p < pr.pred_count(); ++p) {
      detections.push_back({pr.pred_scores[p], pr.pred_areas[p], k, &pr.pred_ids[p], assigned[p].has_value()});
    }
  }
  if (gt_total == 0) return detections.empty() ? 1.0 : 0.0;
  if (detections.empty()) return 0.0;
  std::sort(detections.begin(), detections.end(), [](const Detection& a, const Detection& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.area != b.area) return a.area > b.area;
    if (a.problem != b.problem) return a.problem < b.problem;
    return *a.id < *b.id;
  });
  const std::size_t n = detections.size();
  std::vector<double> precision(n), recall(n);
  std::size_t tp = 0;
  for (std::size_t i = 0; i < n; ++i) {
    tp += detections[i].tp;
    precision[i] = static_cast<double>(tp) / static_cast<double>(i + 1);
    recall[i] = static_cast<double>(tp) / static_cast<double>(gt_total);
  }
  for (std::size_t i = n - 1; i-- > 0;) precision[i] = std::max(precision[i], precision[i + 1]);
  double ap = 0.0, previous_recall = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ap += (recall[i] - previous_recall) * precision[i];
    previous_recall = recall[i];
  }
  return ap;
}

// IoU thresholds 0.50, 0.55, ..., 0.95.
inline std::vector<double> map_thresholds() {
  std::vector<double> t;
  for (int pct = 50; pct <= 95; pct += 5) t.push_back(pct / 100.0);
  return t;
}

inline double mean_ap(std::span<const MatchProblem> problems) {
  double sum = 0.0;
  const auto thresholds = map_thresholds();
  for (double t : thresholds) sum += average_precision(problems, t);
  return sum / static_cast<double>(thresholds.size());
}

inline std::vector<Act> acts_of_class(std::span<const Act> acts, ActClass cls) {
  std::vector<Act> out;
  std::copy_if(acts.begin(), acts.end(), std::back_inserter(out), [cls](const Act& a) { return a.cls == cls; });
  return out;
}

// One problem per page for class `cls`.
inline std::vector<MatchProblem> class_problems(std::span<const PageDocument> pages, ActClass cls, unsigned jobs = 1) {
  std::vector<MatchProblem> problems(pages.size());
  parallel_for(pages.size(), jobs, [&](std::size_t i) {
    const PageDocument& page = pages[i];
    require_scores(page.pred_acts, page.page_id);
    problems[i] = build_match_problem(acts_of_class(page.pred_acts, cls), acts_of_class(page.gt_acts, cls), page.width,
                                      page.height);
  });
  return problems;
}

inline double average_precision(std::span<const PageDocument> pages, ActClass cls, double iou_threshold) {
  return average_precision(class_problems(pages, cls), iou_threshold);
}

inline double mean_ap(std::span<const PageDocument> pages, ActClass cls) { return mean_ap(class_problems(pages, cls)); }

// ---------------------------------------------------------------------------
// Pixel IoU.

namespace eval_detail {

// Sorts and merges runs into disjoint per-row spans.
inline std::vector<Span> normalize_spans(std::vector<Span> spans) {
  std::sort(spans.begin(), spans.end(), [](const Span& a, const Span& b) {
    return a.y != b.y ? a.y < b.y : a.x_begin < b.x_begin;
  });
  std::vector<Span> out;
  for (const Span& s : spans) {
    if (!out.empty() && out.back().y == s.y && out.back().x_end >= s.x_begin) {
      out.back().x_end = std::max(out.back().x_end, s.x_end);
    } else {
      out.push_back(s);
    }
  }
  return out;
}

inline std::vector<Span> acts_spans(std::span<const Act> acts, ActClass cls, int width, int height) {
  std::vector<Span> spans;
  for (const Act& a : acts) {
    if (a.cls != cls) continue;
    scan_polygon(a.polygon, width, height, [&](const Span& s) { spans.push_back(s); });
  }
  return normalize_spans(std::move(spans));
}

inline std::vector<Span> label_spans(const PixelGrid& labels, std::uint8_t value) {
  std::vector<Span> spans;
  for (int y = 0; y < labels.height(); ++y) {
    const auto row = labels.row(y);
    for (int x = 0; x < labels.width();) {
      if (row[static_cast<std::size_t>(x)] != value) {
        ++x;
        continue;
      }
      const int begin = x;
      while (x < labels.width() && row[static_cast<std::size_t>(x)] == value) ++x;
      spans.push_back({y, begin, x});
    }
  }
  return spans;
}

}  // namespace eval_detail

// Pixel overlap of one class on one page. Predictions come from the label
// map when the page carries one, else from the predicted act polygons.
inline Overlap page_class_overlap(const PageDocument& page, ActClass cls) {
  const auto gt = eval_detail::acts_spans(page.gt_acts, cls, page.width, page.height);
  const auto pred = page.label_map ? eval_detail::label_spans(*page.label_map, label_of(cls))
                                   : eval_detail::acts_spans(page.pred_acts, cls, page.width, page.height);
  const std::int64_t inter = spans_intersection(pred, gt);
  return {inter, spans_area(pred) + spans_area(gt) - inter};
}

struct PixelIouResult {
  double aggregate = 1.0;  // sum of intersections / sum of unions
  double page_mean = 1.0;  // mean over pages where the class appears on either side
  Overlap total;
};

inline PixelIouResult dataset_pixel_iou(std::span<const PageDocument> pages, ActClass cls, unsigned jobs = 1) {
  std::vector<Overlap> per_page(pages.size());
  parallel_for(pages.size(), jobs, [&](std::size_t i) { per_page[i] = page_class_overlap(pages[i], cls); });
  PixelIouResult result;
  double sum = 0.0;
  std::size_t counted = 0;
  for (const Overlap& o : per_page) {
    result.total += o;
    if (o.union_ > 0) {
      sum += o.iou();
      ++counted;
    }
  }
  result.aggregate = result.total.iou();
  result.page_mean = counted ? sum / static_cast<double>(counted) : 1.0;
  return result;
}

// ---------------------------------------------------------------------------
// Text error rates.

// Unit-cost Levenshtein distance.
template <class Seq>
std::size_t edit_distance(const Seq& a, const Seq& b) {
  std::vector<std::size_t> row(b.size() + 1);
  std::iota(row.begin(), row.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diagonal = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({up + 1, row[j - 1] + 1, diagonal + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diagonal = up;
    }
  }
  return row[b.size()];
}

struct TextErrorRates {
  std::size_t char_edits = 0;
  std::size_t char_reference = 0;
  std::size_t word_edits = 0;
  std::size_t word_reference = 0;

  // Edits over reference length; with an empty reference, 1 if anything was
  // inserted. Not capped at 1.
  static double rate(std::size_t edits, std::size_t reference) {
    if (reference == 0) return edits == 0 ? 0.0 : 1.0;
    return static_cast<double>(edits) / static_cast<double>(reference);
  }
  double cer() const { return rate(char_edits, char_reference); }
  double wer() const { return rate(word_edits, word_reference); }
};

inline std::vector<std::u32string> whitespace_words(std::string_view s) {
  return text::split_whitespace(text::code_points(s));
}

// Characters are code points (spaces included); words split on whitespace.
inline TextErrorRates cer_wer(std::span<const std::string> references, std::span<const std::string> hypotheses) {
  if (references.size() != hypotheses.size()) {
    throw ValidationError("cer_wer", std::to_string(references.size()) + " references vs " +
                                         std::to_string(hypotheses.size()) + " hypotheses");
  }
  TextErrorRates rates;
  for (std::size_t i = 0; i < references.size(); ++i) {
    const auto ref = text::code_points(references[i]);
    const auto hyp = text::code_points(hypotheses[i]);
    rates.char_edits += edit_distance(ref, hyp);
    rates.char_reference += ref.size();
    const auto ref_words = whitespace_words(references[i]);
    const auto hyp_words = whitespace_words(hypotheses[i]);
    rates.word_edits += edit_distance(ref_words, hyp_words);
    rates.word_reference += ref_words.size();
  }
  return rates;
}

// ---------------------------------------------------------------------------
// End-of-act lines.

struct EndLine {
  int y = 0;
  int x_min = 0;
  int x_max = 0;

  friend bool operator==(const EndLine&, const EndLine&) = default;
};

// The horizontal line closing each Full or End act: the bottom of its
// bounding box, spanning its horizontal extent.
inline std::vector<EndLine> end_lines(std::span<const Act> acts) {
  std::vector<EndLine> out;
  for (const Act& a : acts) {
    if (a.cls != ActClass::Full && a.cls != ActClass::End) continue;
    const BoundingBox box = bounding_box(a.polygon);
    out.push_back({box.y_max, box.x_min, box.x_max});
  }
  return out;
}

inline constexpr int kDefaultEndLineTolerance = 128;

// Greedy one-to-one matching of end lines from one page: candidate pairs
// have |dy| <= tolerance and overlapping x spans, and are taken in
// ascending |dy|.
inline std::size_t match_end_lines(std::span<const EndLine> preds, std::span<const EndLine> gts, int tolerance) {
  struct Candidate {
    int dy;
    std::size_t pred, gt;
  };
  std::vector<Candidate> candidates;
  for (std::size_t p = 0; p < preds.size(); ++p) {
    for (std::size_t g = 0; g < gts.size(); ++g) {
      const int dy = std::abs(preds[p].y - gts[g].y);
      const bool overlap = std::max(preds[p].x_min, gts[g].x_min) <= std::min(preds[p].x_max, gts[g].x_max);
      if (dy <= tolerance && overlap) candidates.push_back({dy, p, g});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.dy != b.dy) return a.dy < b.dy;
    return a.pred != b.pred ? a.pred < b.pred : a.gt < b.gt;
  });
  std::vector<bool> pred_used(preds.size()), gt_used(gts.size());
  std::size_t matched = 0;
  for (const Candidate& c : candidates) {
    if (pred_used[c.pred] || gt_used[c.gt]) continue;
    pred_used[c.pred] = gt_used[c.gt] = true;
    ++matched;
  }
  return matched;
}

struct EndLineScores {
  std::size_t matched = 0;
  std::size_t predicted = 0;
  std::size_t reference = 0;

  double precision() const noexcept {
    if (predicted == 0) return reference == 0 ? 1.0 : 0.0;
    return static_cast<double>(matched) / static_cast<double>(predicted);
  }
  double recall() const noexcept {
    if (reference == 0) return predicted == 0 ? 1.0 : 0.0;
    return static_cast<double>(matched) / static_cast<double>(reference);
  }
  double f1() const noexcept {
    const double p = precision(), r = recall();
    return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
  }

  EndLineScores& operator+=(const EndLineScores& o) noexcept {
    matched += o.matched;
    predicted += o.predicted;
    reference += o.reference;
    return *this;
  }
};

inline EndLineScores end_line_metric(std::span<const EndLine> preds, std::span<const EndLine> gts,
                                     int tolerance = kDefaultEndLineTolerance) {
  return {match_end_lines(preds, gts, tolerance), preds.size(), gts.size()};
}

inline EndLineScores end_line_metric(std::span<const PageDocument> pages, int tolerance = kDefaultEndLineTolerance) {
  EndLineScores total;
  for (const auto& page : pages) {
    total += end_line_metric(end_lines(page.pred_acts), end_lines(page.gt_acts), tolerance);
  }
  return total;
}

// ---------------------------------------------------------------------------
// Act typing: class-agnostic pairing at IoU 0.5, then class agreement.

struct ActTypingScores {
  std::size_t reference_acts = 0;
  std::size_t predicted_acts = 0;
  std::size_t detected_acts = 0;        // reference acts paired with some prediction
  std::size_t correctly_typed = 0;      // ... whose class also agrees
  std::size_t pages_with_acts = 0;
  std::size_t pages_detected = 0;       // pages with at least one detected act

  double accuracy() const noexcept {
    if (reference_acts == 0) return predicted_acts == 0 ? 1.0 : 0.0;
    return static_cast<double>(correctly_typed) / static_cast<double>(reference_acts);
  }
  double act_detection() const noexcept {
    return reference_acts == 0 ? 1.0 : static_cast<double>(detected_acts) / static_cast<double>(reference_acts);
  }
  double page_detection() const noexcept {
    return pages_with_acts == 0 ? 1.0 : static_cast<double>(pages_detected) / static_cast<double>(pages_with_acts);
  }
};

inline ActTypingScores act_typing(std::span<const PageDocument> pages, double iou_threshold = 0.5) {
  ActTypingScores s;
  for (const auto& page : pages) {
    require_scores(page.pred_acts, page.page_id);
    std::vector<Act> preds = page.pred_acts, gts = page.gt_acts;
    for (Act& a : preds) a.cls = ActClass::Full;
    for (Act& a : gts) a.cls = ActClass::Full;
    const MatchProblem problem = build_match_problem(preds, gts, page.width, page.height);
    const auto assigned = greedy_match(problem, iou_threshold);
    std::size_t detected_here = 0;
    for (std::size_t p = 0; p < assigned.size(); ++p) {
      if (!assigned[p]) continue;
      ++detected_here;
      if (page.pred_acts[p].cls == page.gt_acts[*assigned[p]].cls) ++s.correctly_typed;
    }
    s.reference_acts += gts.size();
    s.predicted_acts += preds.size();
    s.detected_acts += detected_here;
    if (!gts.empty()) {
      ++s.pages_with_acts;
      if (detected_here > 0) ++s.pages_detected;
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// Report.

struct ClassReport {
  ActClass cls = ActClass::Full;
  PixelIouResult pixel;
  double ap50 = 0.0;
  double ap75 = 0.0;
  double map = 0.0;
  std::size_t reference_objects = 0;
  std::size_t predicted_objects = 0;
};

struct EvalReport {
  std::size_t page_count = 0;
  std::vector<ClassReport> classes;  // classes present in references or predictions
  std::optional<BinaryScores> line_classification;
  std::optional<TextErrorRates> text;
  EndLineScores end_line;
  int tolerance = kDefaultEndLineTolerance;
  ActTypingScores act_typing;
};

struct EvalOptions {
  int tolerance = kDefaultEndLineTolerance;
  unsigned jobs = 1;
};

inline EvalReport evaluate(std::span<const PageDocument> pages, const EvalOptions& options = {}) {
  EvalReport report;
  report.page_count = pages.size();
  report.tolerance = options.tolerance;
  for (const auto& page : pages) require_scores(page.pred_acts, page.page_id);

  for (ActClass cls : kActClasses) {
    ClassReport cr;
    cr.cls = cls;
    bool in_maps = false;
    for (const auto& page : pages) {
      cr.reference_objects += static_cast<std::size_t>(
          std::count_if(page.gt_acts.begin(), page.gt_acts.end(), [cls](const Act& a) { return a.cls == cls; }));
      cr.predicted_objects += static_cast<std::size_t>(
          std::count_if(page.pred_acts.begin(), page.pred_acts.end(), [cls](const Act& a) { return a.cls == cls; }));
      if (page.label_map && !in_maps) {
        const auto data = page.label_map->data();
        in_maps = std::find(data.begin(), data.end(), label_of(cls)) != data.end();
      }
    }
    if (cr.reference_objects == 0 && cr.predicted_objects == 0 && !in_maps) continue;
    const auto problems = class_problems(pages, cls, options.jobs);
    cr.pixel = dataset_pixel_iou(pages, cls, options.jobs);
    cr.ap50 = average_precision(problems, 0.50);
    cr.ap75 = average_precision(problems, 0.75);
    cr.map = mean_ap(problems);
    report.classes.push_back(cr);
  }

  // Scored when both sides exist somewhere; a partial labelling is an error
  // reported by evaluate_classification.
  auto any_line = [&](auto&& pred) {
    return std::any_of(pages.begin(), pages.end(),
                       [&](const PageDocument& p) { return std::any_of(p.lines.begin(), p.lines.end(), pred); });
  };
  if (any_line([](const TextLine& l) { return l.reference_first_line.has_value(); }) &&
      any_line([](const TextLine& l) { return l.is_first_line.has_value(); })) {
    report.line_classification = evaluate_classification(pages);
  }

  std::vector<std::string> refs, hyps;
  for (const auto& page : pages) {
    for (const auto& line : page.lines) {
      if (!line.reference_transcription) continue;
      refs.push_back(*line.reference_transcription);
      hyps.push_back(line.transcription);
    }
  }
  if (!refs.empty()) report.text = cer_wer(refs, hyps);

  report.end_line = end_line_metric(pages, options.tolerance);
  report.act_typing = act_typing(pages);
  return report;
}

inline nlohmann::json to_json(const EvalReport& r) {
  using nlohmann::json;
  json classes = json::object();
  for (const auto& c : r.classes) {
    classes[std::string(to_string(c.cls))] = {{"pixel_iou", c.pixel.aggregate},
                                               {"pixel_iou_page_mean", c.pixel.page_mean},
                                               {"ap50", c.ap50},
                                               {"ap75", c.ap75},
                                               {"map", c.map},
                                               {"reference_objects", c.reference_objects},
                                               {"predicted_objects", c.predicted_objects}};
  }
  json out{{"page_count", r.page_count}, {"classes", classes}};
  if (r.line_classification) {
    const auto& s = *r.line_classification;
    out["line_classification"] = {{"precision", s.precision()}, {"recall", s.recall()}, {"f1", s.f1()},
                                  {"tp", s.tp},                 {"fp", s.fp},         {"fn", s.fn}};
  } else {
    out["line_classification"] = nullptr;
  }
  if (r.text) {
    out["text"] = {{"cer", r.text->cer()}, {"wer", r.text->wer()}, {"reference_chars", r.text->char_reference},
                   {"reference_words", r.text->word_reference}};
  } else {
    out["text"] = nullptr;
  }
  out["end_line"] = {{"precision", r.end_line.precision()}, {"recall", r.end_line.recall()},
                     {"f1", r.end_line.f1()},               {"tolerance", r.tolerance},
                     {"matched", r.end_line.matched},       {"predicted", r.end_line.predicted},
                     {"reference", r.end_line.reference}};
  out["act_typing"] = {{"accuracy", r.act_typing.accuracy()},
                       {"act_level_detection", r.act_typing.act_detection()},
                       {"page_level_detection", r.act_typing.page_detection()},
                       {"reference_acts", r.act_typing.reference_acts},
                       {"predicted_acts", r.act_typing.predicted_acts}};
  return out;
}

// Class rows x IoU / AP50 / AP75 / mAP columns, then the other metrics.
inline std::string to_table(const EvalReport& r) {
  std::ostringstream os;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-8s %8s %8s %8s %8s\n", "Class", "IoU", "AP50", "AP75", "mAP");
  os << buf;
  for (const auto& c : r.classes) {
    std::snprintf(buf, sizeof buf, "%-8s %8.4f %8.4f %8.4f %8.4f\n", std::string(to_string(c.cls)).c_str(),
                  c.pixel.aggregate, c.ap50, c.ap75, c.map);
    os << buf;
  }
  os << "\n";
  if (r.line_classification) {
    const auto& s = *r.line_classification;
    std::snprintf(buf, sizeof buf, "first line      P %.4f  R %.4f  F1 %.4f\n", s.precision(), s.recall(), s.f1());
    os << buf;
  }
  if (r.text) {
    std::snprintf(buf, sizeof buf, "text            CER %.4f  WER %.4f\n", r.text->cer(), r.text->wer());
    os << buf;
  }
  std::snprintf(buf, sizeof buf, "end of act      P %.4f  R %.4f  F1 %.4f  (tolerance %d px)\n",
                r.end_line.precision(), r.end_line.recall(), r.end_line.f1(), r.tolerance);
  os << buf;
  std::snprintf(buf, sizeof buf, "act typing      accuracy %.4f  detected acts %.4f  detected pages %.4f\n",
                r.act_typing.accuracy(), r.act_typing.act_detection(), r.act_typing.page_detection());
  os << buf;
  std::snprintf(buf, sizeof buf, "pages           %zu\n", r.page_count);
  os << buf;
  return os.str();
}

}  // namespace actseg
