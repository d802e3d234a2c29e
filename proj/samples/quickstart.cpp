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

// Builds a two-page register in memory, classifies its lines with the date
// rule, segments acts from the flags and prints the evaluation table.

#include <iostream>

#include "actseg.hpp"

namespace {

actseg::TextLine make_line(const std::string& id, int y, const std::string& text, bool reference) {
  actseg::TextLine line;
  line.id = id;
  line.polygon = actseg::make_rectangle(50, y, 550, y + 30);
  line.set_transcription(text);
  line.reference_first_line = reference;
  return line;
}

}  // namespace

int main() {
  using namespace actseg;
  PageDocument first;
  first.page_id = "p1";
  first.width = 600;
  first.height = 400;
  first.lines = {make_line("l1", 20, "Le trente janvier, mil neuf cent douze", true),
                 make_line("l2", 60, "a été baptisé par nous prêtre soussigné", false),
                 make_line("l3", 140, "Le deux février, mil neuf cent douze", true),
                 make_line("l4", 180, "fils légitime de la paroisse", false)};
  first.gt_acts = {{"a1", ActClass::Full, make_rectangle(50, 20, 550, 90), {}},
                   {"a2", ActClass::Start, make_rectangle(50, 140, 550, 210), {}}};
  PageDocument second;
  second.page_id = "p2";
  second.width = 600;
  second.height = 400;
  second.lines = {make_line("l1", 20, "parrain et marraine ont signé avec nous", false),
                  make_line("l2", 100, "Le cinq mars, mil neuf cent douze", true)};
  second.gt_acts = {{"a1", ActClass::End, make_rectangle(50, 20, 550, 50), {}},
                    {"a2", ActClass::Full, make_rectangle(50, 100, 550, 130), {}}};

  const LineClassifier classifier(default_date_config());
  std::vector<PageDocument> pages{classify_page(first, classifier), classify_page(second, classifier)};
  pages = segment_by_keyphrases(pages, ReadingOrderConfig::top_to_bottom());

  std::cout << to_table(evaluate(pages));
  return 0;
}
