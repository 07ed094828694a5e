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

#include "sqa/cascade.hpp"

#include <map>
#include <stdexcept>

namespace sqa {

std::string assemble_cascade_prompt(const Transcript& transcript) {
  if (transcript.text.empty())
    throw std::invalid_argument("empty transcript for item " + transcript.item_id);
  const std::string suffix = kElicitationSuffix;
  const std::string& text = transcript.text;
  if (text.size() >= suffix.size() &&
      text.compare(text.size() - suffix.size(), suffix.size(), suffix) == 0)
    return text;
  return text + " " + suffix;
}

EvalOutcome evaluate_cascade(const TaskSpec& task, const std::vector<AudioPrompt>& prompts,
                             const CascadeConfig& config, BackendRegistry& registry) {
  auto lm = registry.lookup<CausalLmBackend>(config.lm_backend);
  LetterTokenMap letter_map = lm->letter_map();
  letter_map.validate();

  const bool oracle = config.transcript_source == "oracle";
  std::shared_ptr<AsrBackend> asr;
  std::map<std::string, const AudioPrompt*> prompt_by_id;
  if (!oracle) {
    asr = registry.lookup<AsrBackend>(config.transcript_source);
    for (const AudioPrompt& p : prompts) prompt_by_id[p.item_id] = &p;
  }

  const std::string method = "cascade/" + config.transcript_source + "+" + config.lm_backend;
  EvalOutcome outcome;
  outcome.result.task = task.name;
  outcome.result.method = method;

  for (const MCQAItem& item : task.items) {
    PredictionRecord record;
    record.item_id = item.id;
    record.task = task.name;
    record.method = method;
    record.answer = item.answer;
    outcome.result.n_items += 1;
    try {
      Transcript transcript;
      transcript.item_id = item.id;
      if (oracle) {
        transcript.text = render_prompt_text(item);
        transcript.source = "oracle";
      } else {
        auto it = prompt_by_id.find(item.id);
        if (it == prompt_by_id.end())
          throw std::runtime_error("no audio prompt for item " + item.id);
        transcript = transcribe(*it->second, *asr);
      }
      std::string lm_prompt = assemble_cascade_prompt(transcript);
      ScoreVector scores = constrained_select(lm->next_token_logprobs(lm_prompt), letter_map);
      record.scores = scores.scores;
      record.selected = scores.selected;
      record.correct = scores.selected == item.answer;
      if (record.correct) outcome.result.n_correct += 1;
    } catch (const std::exception&) {
      if (config.strict) throw;
      record.errored = true;
      outcome.result.n_errored += 1;
    }
    outcome.predictions.push_back(std::move(record));
  }
  return outcome;
}

}  // namespace sqa
