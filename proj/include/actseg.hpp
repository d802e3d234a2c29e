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

#pragma once

#include "actseg/document.hpp"
#include "actseg/error.hpp"
#include "actseg/evaluation.hpp"
#include "actseg/geometry.hpp"
#include "actseg/image_io.hpp"
#include "actseg/line_classifier.hpp"
#include "actseg/parallel.hpp"
#include "actseg/postprocess.hpp"
#include "actseg/renderer.hpp"
#include "actseg/synthetic.hpp"
#include "actseg/text_baseline.hpp"
#include "actseg/unicode.hpp"
