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

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "sqa/answer_select.hpp"
#include "sqa/audio.hpp"
#include "sqa/backends.hpp"
#include "sqa/cascade.hpp"
#include "sqa/corpus.hpp"
#include "sqa/report.hpp"

namespace sqa {

// Target rendered per letter for audio-conditioned scoring. The start
// marker is forced and unscored; the letter token and end marker are scored.
struct EntailmentTemplate {
  std::string start_marker = "<|startoftranscript|>";
  std::string letter_pattern = "[{L}]";  // {L} replaced by the option letter
  std::string end_marker = "<|endoftext|>";

  std::vector<std::string> render(char letter) const;
  // Indices into render() output that enter the mean.
  std::vector<std::size_t> scored_indices() const;
};

struct SpeechUnits {
  std::vector<int> ids;
  int codebook_size = 0;
};

struct Codebook {
  std::size_t dim = 0;
  std::vector<std::vector<double>> centroids;
};

enum class E2eMethod { kSeq2Seq, kUnitLm, kPrefixLm, kDualEncoder };

E2eMethod e2e_method_from_string(const std::string& s);
std::string to_string(E2eMethod method);

struct E2eConfig {
  std::string backend_id;
  std::string encoder_id;  // layered encoder feeding the unit-LM path
  EntailmentTemplate seq2seq_template;
  std::string class_text_template = "The correct answer is Option {L}";
  std::string unit_prompt_template = "{units} The correct answer is Option";
  int codebook_k = 16;
  std::uint64_t codebook_seed = 0;
  double audio_limit_s = 30.0;
  bool strict = true;
};

// Keeps the first limit * sample_rate samples; shorter audio is unchanged.
AudioPrompt truncate_audio(const AudioPrompt& prompt, double limit_s);

// Mean per-token log-probability of each letter's rendered template,
// conditioned on the audio; argmax with tie-break toward A.
ScoreVector seq2seq_entail(const AudioPrompt& prompt, Seq2SeqScorerBackend& backend,
                           const EntailmentTemplate& tmpl);

// Nearest centroid by squared Euclidean distance; ties go to the lowest
// centroid index.
SpeechUnits quantize_units(const std::vector<std::vector<double>>& frames,
                           const Codebook& codebook);

// Lloyd iterations from a seeded sample of distinct frames. Desk-scale
// only; production codebooks are supplied externally.
Codebook fit_toy_codebook(const std::vector<std::vector<double>>& frames, std::size_t k,
                          std::uint64_t seed, int max_iterations = 100,
                          std::vector<double>* distortion_trace = nullptr);

// Renders prompt_template ({units} -> space-joined unit ids), requests one
// next token and selects over the letter map.
ScoreVector unit_lm_entail(const SpeechUnits& units, UnitLmBackend& backend,
                           const LetterTokenMap& letter_map, const std::string& prompt_template,
                           bool allow_empty_units = false);

// score(L) = cosine similarity between the audio embedding and the class
// text embedding (max similarity = min cosine distance).
ScoreVector dual_encoder_match(const AudioPrompt& prompt,
                               const std::map<char, std::string>& class_texts,
                               DualEncoderBackend& backend);

std::string render_class_text(const std::string& text_template, char letter);

EvalOutcome evaluate_e2e(const TaskSpec& task, const std::vector<AudioPrompt>& prompts,
                         E2eMethod method, const E2eConfig& config, BackendRegistry& registry);

void write_codebook(const std::filesystem::path& path, const Codebook& codebook);
Codebook read_codebook(const std::filesystem::path& path);

// Converts a LayerStack's final layer to the frame vectors the quantizer
// consumes.
std::vector<std::vector<double>> stack_to_frames(const LayerStack& stack);

}  // namespace sqa
