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

#include "sqa/synthesis.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "sqa/backends.hpp"

namespace sqa {

using nlohmann::json;

int assign_voice(std::size_t item_index, int n_voices) {
  if (n_voices < 1) throw std::invalid_argument("n_voices must be positive");
  return static_cast<int>(item_index % static_cast<std::size_t>(n_voices));
}

AudioPrompt synthesize_item(const MCQAItem& item, TtsBackend& backend, int voice,
                            bool include_answer) {
  validate_item(item);
  std::string text = include_answer ? render_answer_text(item) : render_prompt_text(item);
  AudioPrompt prompt;
  prompt.item_id = item.id;
  prompt.task = item.task;
  prompt.voice = voice;
  prompt.sample_rate = kSampleRate;
  prompt.samples = backend.synthesize(text, voice);
  return prompt;
}

namespace {

void accumulate_totals(SynthesisManifest& manifest) {
  for (char letter : kLetters) manifest.per_label[letter] = {};
  for (const ManifestEntry& entry : manifest.entries) {
    auto& label = manifest.per_label[entry.answer];
    label.count += 1;
    label.duration += entry.duration;
    auto& task = manifest.per_task[entry.task];
    task.count += 1;
    task.duration += entry.duration;
    manifest.total.count += 1;
    manifest.total.duration += entry.duration;
  }
}

}  // namespace

SynthesisManifest build_manifest(const std::vector<AudioPrompt>& prompts,
                                 const std::vector<TaskSpec>& tasks,
                                 const std::map<std::string, std::string>& audio_paths) {
  std::map<std::pair<std::string, std::string>, const MCQAItem*> by_key;
  for (const TaskSpec& spec : tasks)
    for (const MCQAItem& item : spec.items) by_key[{item.task, item.id}] = &item;

  SynthesisManifest manifest;
  for (const AudioPrompt& prompt : prompts) {
    auto it = by_key.find({prompt.task, prompt.item_id});
    if (it == by_key.end())
      throw std::invalid_argument("prompt references unknown item " + prompt.task + "/" +
                                  prompt.item_id);
    ManifestEntry entry;
    entry.item_id = prompt.item_id;
    entry.task = prompt.task;
    entry.voice = prompt.voice;
    entry.duration = prompt.duration();
    entry.answer = it->second->answer;
    if (auto path = audio_paths.find(prompt.item_id); path != audio_paths.end())
      entry.audio_path = path->second;
    manifest.entries.push_back(std::move(entry));
  }
  accumulate_totals(manifest);
  return manifest;
}

void write_manifest(const std::filesystem::path& path, const SynthesisManifest& manifest) {
  json entries = json::array();
  for (const ManifestEntry& e : manifest.entries) {
    // millisecond precision
    double ms_duration = std::round(e.duration * 1000.0) / 1000.0;
    entries.push_back({{"item_id", e.item_id},
                       {"task", e.task},
                       {"voice", e.voice},
                       {"duration", ms_duration},
                       {"answer", std::string(1, e.answer)},
                       {"audio_path", e.audio_path}});
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << json{{"entries", entries}}.dump(2) << '\n';
}

SynthesisManifest read_manifest(const std::filesystem::path& path,
                                const std::vector<TaskSpec>& tasks) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  json j = json::parse(in);

  std::map<std::pair<std::string, std::string>, const MCQAItem*> by_key;
  for (const TaskSpec& spec : tasks)
    for (const MCQAItem& item : spec.items) by_key[{item.task, item.id}] = &item;

  SynthesisManifest manifest;
  for (const json& rec : j.at("entries")) {
    ManifestEntry entry;
    entry.item_id = rec.at("item_id").get<std::string>();
    entry.task = rec.at("task").get<std::string>();
    entry.voice = rec.at("voice").get<int>();
    entry.duration = rec.at("duration").get<double>();
    entry.answer = rec.at("answer").get<std::string>().at(0);
    entry.audio_path = rec.at("audio_path").get<std::string>();
    if (!by_key.count({entry.task, entry.item_id}))
      throw std::runtime_error("manifest entry references unknown item " + entry.task + "/" +
                               entry.item_id);
    manifest.entries.push_back(std::move(entry));
  }
  accumulate_totals(manifest);
  return manifest;
}

std::string render_duration_report(const SynthesisManifest& manifest) {
  std::ostringstream out;
  out << "label";
  for (const auto& [task, _] : manifest.per_task) out << '\t' << task;
  out << "\ttotal_s\tdocs\n";

  std::map<std::string, std::map<char, LabelTotal>> per_task_label;
  for (const ManifestEntry& e : manifest.entries) {
    auto& cell = per_task_label[e.task][e.answer];
    cell.count += 1;
    cell.duration += e.duration;
  }
  out.setf(std::ios::fixed);
  out.precision(3);
  for (char letter : kLetters) {
    out << letter;
    for (const auto& [task, _] : manifest.per_task)
      out << '\t' << per_task_label[task][letter].duration;
    const auto& label = manifest.per_label.at(letter);
    out << '\t' << label.duration << '\t' << label.count << '\n';
  }
  out << "Total";
  for (const auto& [task, totals] : manifest.per_task) out << '\t' << totals.duration;
  out << '\t' << manifest.total.duration << '\t' << manifest.total.count << '\n';
  return out.str();
}

}  // namespace sqa
