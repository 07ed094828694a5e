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

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "sqa/audio.hpp"
#include "sqa/corpus.hpp"

namespace sqa {

class TtsBackend;

struct ManifestEntry {
  std::string item_id;
  std::string task;
  int voice = 0;
  double duration = 0.0;
  char answer = 'A';
  std::string audio_path;
};

struct LabelTotal {
  std::size_t count = 0;
  double duration = 0.0;
};

struct SynthesisManifest {
  std::vector<ManifestEntry> entries;
  std::map<char, LabelTotal> per_label;
  std::map<std::string, LabelTotal> per_task;
  LabelTotal total;
};

// Voice rotation is per-task by item ordinal: index mod n_voices.
int assign_voice(std::size_t item_index, int n_voices);

// include_answer selects between the answer-bearing rendering (probe
// training corpora) and the prompt-only rendering (evaluation corpora).
AudioPrompt synthesize_item(const MCQAItem& item, TtsBackend& backend, int voice,
                            bool include_answer = false);

SynthesisManifest build_manifest(const std::vector<AudioPrompt>& prompts,
                                 const std::vector<TaskSpec>& tasks,
                                 const std::map<std::string, std::string>& audio_paths = {});

void write_manifest(const std::filesystem::path& path, const SynthesisManifest& manifest);
SynthesisManifest read_manifest(const std::filesystem::path& path,
                                const std::vector<TaskSpec>& tasks);

// Table of per-label document counts and duration sums by task.
std::string render_duration_report(const SynthesisManifest& manifest);

}  // namespace sqa
