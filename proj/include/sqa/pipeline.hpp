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
#include <optional>
#include <string>
#include <vector>

#include "sqa/backends.hpp"
#include "sqa/corpus.hpp"
#include "sqa/entailment.hpp"
#include "sqa/report.hpp"

namespace sqa {

struct TaskConfig {
  std::string name;
  std::filesystem::path path;
};

struct BackendConfig {
  std::string id;
  std::string kind;
  std::string mode = "hash";  // hash | oracle | uniform
  std::uint64_t seed = 0;
  int drop_period = 0;           // asr
  double chars_per_second = 15;  // tts
  double audio_limit_s = 30.0;   // seq2seq scorers
};

struct MethodConfig {
  std::string type;  // cascade | seq2seq | unit_lm | prefix_lm | dual_encoder
  std::string backend;
  std::string transcript_source = "oracle";  // cascade only
  std::string lm;                            // cascade only
  std::string encoder;                       // unit_lm only
};

struct ProbeRunConfig {
  std::filesystem::path stacks_dir;
  double ratio = 0.8;
  double learning_rate = 0.5;
  int epochs = 200;
  std::optional<double> max_duration = 30.0;
};

struct RunConfig {
  std::vector<TaskConfig> tasks;
  std::vector<BackendConfig> backends;
  std::vector<MethodConfig> methods;
  std::vector<std::string> wer_backends;
  std::string tts_backend = "mock-tts";
  ProbeRunConfig probe;
  std::filesystem::path output_dir;
  std::uint64_t seed = 0;
  bool strict = true;
  bool include_answer_audio = false;
};

RunConfig load_run_config(const std::filesystem::path& path);

// Instantiates every configured backend; oracle mocks receive the answer
// key derived from the loaded tasks.
BackendRegistry build_registry(const RunConfig& config, const std::vector<TaskSpec>& tasks);

std::vector<TaskSpec> load_tasks(const RunConfig& config);

struct SynthesizeStats {
  std::size_t items = 0;
  std::size_t tts_calls = 0;
  std::size_t cache_hits = 0;
};

// Writes audio/, manifest.json and duration_report.tsv under output_dir.
// Unchanged items are served from the content-hash cache on rerun.
SynthesizeStats run_synthesize(const RunConfig& config);

// Runs every configured method over every task; writes results.tsv,
// results.md and predictions.jsonl.
std::vector<EvalResult> run_evaluate(const RunConfig& config);

// Per-task corpus-level WER per configured ASR backend; writes wer.tsv and
// wer.md.
ResultTable run_wer(const RunConfig& config);

// Loads layer stacks, applies the duration filter and train/valid split,
// trains the probe and writes probe_report.json + probe_curve.tsv.
ProbeReport run_probe(const RunConfig& config);

// In-memory prompts for a task (used by evaluate and the tests).
std::vector<AudioPrompt> synthesize_task(const TaskSpec& task, TtsBackend& tts,
                                         bool include_answer);

}  // namespace sqa
