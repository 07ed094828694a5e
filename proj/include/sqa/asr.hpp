// Copyright 2026 the sqabench authors
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

#include <map>
#include <string>
#include <vector>

#include "sqa/audio.hpp"

namespace sqa {

class AsrBackend;

struct Transcript {
  std::string item_id;
  std::string text;
  std::string source;  // "oracle" or the backend id
};

struct WERReport {
  std::map<std::string, double> per_task;
  double average = 0.0;  // unweighted mean over tasks
};

Transcript transcribe(const AudioPrompt& prompt, AsrBackend& backend);

// Lowercase, strip punctuation except intra-word apostrophes and hyphens,
// split on whitespace.
std::vector<std::string> normalize_text(const std::string& text);

// (S + D + I) / |reference tokens| over normalized tokens; may exceed 1
// when insertions dominate. Throws if the reference normalizes to nothing.
double wer(const std::string& reference, const std::string& hypothesis);

WERReport make_wer_report(const std::map<std::string, double>& per_task);

}  // namespace sqa
