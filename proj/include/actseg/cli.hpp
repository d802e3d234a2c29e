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

// Command-line front end. Exit codes: 0 success, 1 invalid input (the
// message names the file or id), 2 usage error.

#pragma once

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "actseg/document.hpp"
#include "actseg/evaluation.hpp"
#include "actseg/line_classifier.hpp"
#include "actseg/parallel.hpp"
#include "actseg/postprocess.hpp"
#include "actseg/renderer.hpp"
#include "actseg/synthetic.hpp"
#include "actseg/text_baseline.hpp"

namespace actseg::cli {

namespace fs = std::filesystem;

inline ClassifierConfig resolve_classifier_config(const std::string& source) {
  if (source == "builtin:date") return default_date_config();
  if (source == "builtin:keyphrase") return default_keyphrase_config();
  return load_classifier_config(source);
}

inline PageDocument read_page(const fs::path& file) { return page_from_json(read_json_file(file), file.string()); }

inline int cmd_classify(const std::string& config_source, const fs::path& pages_dir, unsigned jobs, std::ostream& log) {
  const LineClassifier classifier(resolve_classifier_config(config_source));
  const auto files = list_page_files(pages_dir);
  parallel_for(files.size(), jobs, [&](std::size_t i) {
    const PageDocument page = read_page(files[i]);
    save_page(classify_page(page, classifier), files[i]);
  });
  log << "classified " << files.size() << " page(s)\n";
  return 0;
}

inline int cmd_enrich(const std::string& variant_name, const fs::path& pages_dir, const fs::path& images_dir,
                      const fs::path& out_dir, int resize, bool outline, unsigned jobs, std::ostream& log) {
  RenderConfig config;
  const auto variant = parse_fusion_variant(variant_name);
  if (!variant) throw CLI::ValidationError("--variant", "expected keyonly, ch4 or twocolor");
  config.variant = *variant;
  config.fill = !outline;
  config.resize_longest_side = resize > 0 ? std::optional<int>(resize) : std::nullopt;
  fs::create_directories(out_dir);
  const auto files = list_page_files(pages_dir);
  parallel_for(files.size(), jobs, [&](std::size_t i) {
    const PageDocument page = read_page(files[i]);
    const RgbImage image = read_png_rgb(images_dir / (page.page_id + ".png"));
    const EnrichedImage enriched = enrich_page(page, image, config);
    write_png(out_dir / (page.page_id + ".png"), enriched.rgb);
    if (enriched.text_mask) {
      PixelGrid channel = *enriched.text_mask;
      for (auto& v : channel.data()) v = v ? 255 : 0;
      write_png(out_dir / (page.page_id + ".ch4.png"), channel);
    }
  });
  log << "enriched " << files.size() << " page(s)\n";
  return 0;
}

inline int cmd_postprocess(const fs::path& pages_dir, const fs::path& maps_dir, const std::string& prob_dir,
                           std::optional<std::int64_t> min_area, const std::string& score,
                           std::optional<double> prob_threshold, unsigned jobs, std::ostream& log) {
  PostprocessConfig config;
  config.min_area = min_area;
  config.prob_threshold = prob_threshold;
  if (score == "mean") config.score_source = ScoreSource::MeanProbability;
  else if (score == "area") config.score_source = ScoreSource::AreaFraction;
  else if (!score.empty()) throw CLI::ValidationError("--score", "expected mean or area");
  const auto files = list_page_files(pages_dir);
  parallel_for(files.size(), jobs, [&](std::size_t i) {
    PageDocument page = read_page(files[i]);
    const fs::path page_dir = files[i].parent_path();
    const fs::path map_file = maps_dir / (page.page_id + ".png");
    page.label_map.reset();
    page.label_map_file.reset();
    page.prob_maps.clear();
    page.prob_map_files.clear();
    if (fs::exists(map_file)) {
      page.label_map_file = fs::relative(map_file, page_dir).generic_string();
    }
    if (!prob_dir.empty()) {
      for (ActClass cls : kActClasses) {
        const fs::path f = fs::path(prob_dir) / (page.page_id + "." + std::string(to_string(cls)) + ".png");
        if (fs::exists(f)) page.prob_map_files[cls] = fs::relative(f, page_dir).generic_string();
      }
    }
    if (!page.label_map_file && page.prob_map_files.empty()) {
      throw ValidationError(page.page_id, "no label map at " + map_file.string());
    }
    load_page_assets(page, page_dir);
    page.pred_acts = components_to_acts(page, config);
    save_page(page, files[i]);
  });
  log << "post-processed " << files.size() << " page(s)\n";
  return 0;
}

inline int cmd_segment_text(const fs::path& manifest, const std::string& order_name, int margin,
                            const std::string& out_dir, std::ostream& log) {
  const auto order = parse_reading_order(order_name);
  if (!order) throw CLI::ValidationError("--order", "expected top or twocol:<x>");
  const auto files = read_manifest(manifest);
  std::vector<PageDocument> pages;
  for (const auto& f : files) pages.push_back(read_page(f));
  const auto segmented = segment_by_keyphrases(pages, *order, margin);
  if (!out_dir.empty()) fs::create_directories(out_dir);
  for (std::size_t i = 0; i < files.size(); ++i) {
    save_page(segmented[i], out_dir.empty() ? files[i] : fs::path(out_dir) / files[i].filename());
  }
  log << "segmented " << files.size() << " page(s)\n";
  return 0;
}

inline int cmd_evaluate(const fs::path& pages_dir, int tolerance, const std::string& format, const std::string& out,
                        unsigned jobs, std::ostream& stdout_stream, std::ostream& log) {
  const auto files = list_page_files(pages_dir);
  std::vector<PageDocument> pages(files.size());
  parallel_for(files.size(), jobs, [&](std::size_t i) { pages[i] = load_page(files[i]); });
  check_unique_page_ids(pages);
  const EvalReport report = evaluate(pages, {tolerance, jobs});
  const std::string body = format == "json" ? to_json(report).dump(2) + "\n" : to_table(report);
  if (out == "-") {
    stdout_stream << body;
  } else {
    write_text_file(out, body);
  }
  log << "evaluated " << pages.size() << " page(s)\n";
  return 0;
}

inline int cmd_synth(const std::string& config_file, const fs::path& out_dir, std::optional<std::uint64_t> seed,
                     std::optional<int> pages, std::ostream& log) {
  SynthConfig config = config_file.empty() ? SynthConfig{} : synth_config_from_json(read_json_file(config_file));
  if (seed) config.seed = *seed;
  if (pages) config.pages = *pages;
  const SyntheticDataset data = generate_dataset(config);
  write_dataset(data, out_dir);
  log << "wrote " << data.split.pages.size() << " synthetic page(s) to " << out_dir.string() << "\n";
  return 0;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Act segmentation toolkit for register pages"};
  app.name("actseg");
  app.require_subcommand(1);
  unsigned jobs = default_jobs();
  app.add_option("--jobs,-j", jobs, "Worker threads (results do not depend on it)")->check(CLI::PositiveNumber);

  std::string config, pages, images, out_dir, maps, prob_maps, variant, manifest, order = "top", format = "table",
                                                                               report_out, score;
  int resize = 768, tolerance = kDefaultEndLineTolerance, margin = 0;
  bool outline = false;
  std::optional<std::int64_t> min_area;
  std::optional<double> prob_threshold;
  std::optional<std::uint64_t> seed;
  std::optional<int> synth_pages;

  auto* classify = app.add_subcommand("classify", "Flag act-initial lines in every page JSON");
  classify->add_option("--config", config, "Classifier config JSON, or builtin:date / builtin:keyphrase")->required();
  classify->add_option("--pages", pages, "Directory of page JSON files")->required();

  auto* enrich = app.add_subcommand("enrich", "Draw classified lines onto page images");
  enrich->add_option("--variant", variant, "keyonly | ch4 | twocolor")->required();
  enrich->add_option("--pages", pages, "Directory of page JSON files")->required();
  enrich->add_option("--images", images, "Directory of <page_id>.png images")->required();
  enrich->add_option("--out", out_dir, "Output directory")->required();
  enrich->add_option("--resize", resize, "Longest side after resizing, 0 to keep")->capture_default_str();
  enrich->add_flag("--outline", outline, "Draw polygon outlines instead of filled regions");

  auto* postprocess = app.add_subcommand("postprocess", "Turn label / probability maps into predicted acts");
  postprocess->add_option("--pages", pages, "Directory of page JSON files")->required();
  postprocess->add_option("--maps", maps, "Directory of <page_id>.png label maps")->required();
  postprocess->add_option("--prob-maps", prob_maps, "Directory of <page_id>.<class>.png probability planes");
  postprocess->add_option("--min-area", min_area, "Smallest kept component in pixels (default 0.1% of the page)");
  postprocess->add_option("--score", score, "mean | area (default mean when planes exist)");
  postprocess->add_option("--prob-threshold", prob_threshold, "Probability needed to label a pixel");

  auto* segment = app.add_subcommand("segment-text", "Segment acts from classified lines alone");
  segment->add_option("--manifest", manifest, "Ordered list of page JSON paths")->required();
  segment->add_option("--order", order, "top | twocol:<x>")->capture_default_str();
  segment->add_option("--margin", margin, "Padding added around each act box")->capture_default_str();
  segment->add_option("--out", out_dir, "Write pages here instead of in place");

  auto* evaluate_cmd = app.add_subcommand("evaluate", "Score predictions against ground truth");
  evaluate_cmd->add_option("--pages", pages, "Directory of page JSON files")->required();
  evaluate_cmd->add_option("--tolerance", tolerance, "End-of-act tolerance in pixels")->capture_default_str();
  evaluate_cmd->add_option("--format", format, "json | table")
      ->check(CLI::IsMember({"json", "table"}))
      ->capture_default_str();
  evaluate_cmd->add_option("--out", report_out, "Report file, - for standard output")->required();

  auto* synth = app.add_subcommand("synth", "Generate a synthetic register");
  synth->add_option("--config", config, "Generator config JSON");
  synth->add_option("--out", out_dir, "Output directory")->required();
  synth->add_option("--seed", seed, "Overrides the config seed");
  synth->add_option("--pages", synth_pages, "Overrides the config page count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "actseg: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (*classify) return cmd_classify(config, pages, jobs, err);
    if (*enrich) return cmd_enrich(variant, pages, images, out_dir, resize, outline, jobs, err);
    if (*postprocess) return cmd_postprocess(pages, maps, prob_maps, min_area, score, prob_threshold, jobs, err);
    if (*segment) return cmd_segment_text(manifest, order, margin, out_dir, err);
    if (*evaluate_cmd) return cmd_evaluate(pages, tolerance, format, report_out, jobs, out, err);
    if (*synth) return cmd_synth(config, out_dir, seed, synth_pages, err);
  } catch (const CLI::ParseError& e) {
    err << "actseg: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "actseg: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace actseg::cli
