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

#include <string>
#include <vector>

#include "sqa/answer_select.hpp"
#include "sqa/asr.hpp"
#include "sqa/backends.hpp"
#include "sqa/corpus.hpp"
#include "sqa/report.hpp"

namespace sqa {

inline constexpr const char* kElicitationSuffix = "The correct answer is Option";

struct CascadeConfig {
  std::string transcript_source = "oracle";  // "oracle" or an ASR backend id
  std::string lm_backend;
  // When strict is false, items whose backend call fails are recorded as
  // errored and dropped from the accuracy denominator; when true, the run
  // aborts on the first failure.
  bool strict = true;
};

struct EvalOutcome {
  EvalResult result;
  std::vector<PredictionRecord> predictions;
};

// Guarantees the elicitation suffix: transcripts already ending with it pass
// through unchanged, anything else gets it appended (ASR deletions there
// would silently change the LM task).
std::string assemble_cascade_prompt(const Transcript& transcript);

EvalOutcome evaluate_cascade(const TaskSpec& task, const std::vector<AudioPrompt>& prompts,
                             const CascadeConfig& config, BackendRegistry& registry);

}  // namespace sqa
