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

#include "fixtures.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "sqa/hash.hpp"

namespace sqa::testing {

TaskSpec make_fixture_task(const std::string& name, std::size_t n_items, std::uint64_t seed) {
  TaskSpec spec;
  spec.name = name;
  for (std::size_t i = 0; i < n_items; ++i) {
    MCQAItem item;
    item.id = name + "-" + std::to_string(i);
    item.task = name;
    std::uint64_t h = fnv1a(item.id, seed ^ kFnvOffset);
    item.question = "What is entry " + std::to_string(hash_to_unit(h) * 1000.0) + " of " + name + "?";
    for (char letter : kLetters)
      item.options[letter_index(letter)] =
          std::string("choice ") + letter + " " + std::to_string(i);
    item.answer = kLetters[i % 4];
    spec.items.push_back(std::move(item));
  }
  return spec;
}

void write_jsonl(const std::filesystem::path& path, const TaskSpec& spec) {
  std::ofstream out(path);
  for (const MCQAItem& item : spec.items) {
    nlohmann::json j{{"id", item.id},
                     {"task", item.task},
                     {"question", item.question},
                     {"options",
                      {{"A", item.options[0]},
                       {"B", item.options[1]},
                       {"C", item.options[2]},
                       {"D", item.options[3]}}},
                     {"answer", std::string(1, item.answer)}};
    out << j.dump() << '\n';
  }
}

std::filesystem::path temp_dir(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() / ("sqabench_test_" + tag);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

RunConfig make_mock_config(const std::filesystem::path& dir,
                           const std::vector<TaskSpec>& tasks, const std::string& mode,
                           std::uint64_t seed) {
  RunConfig config;
  config.seed = seed;
  config.strict = true;
  config.output_dir = dir / "out";
  config.tts_backend = "mock-tts";
  for (const TaskSpec& spec : tasks) {
    auto path = dir / (spec.name + ".jsonl");
    write_jsonl(path, spec);
    config.tasks.push_back({spec.name, path});
  }
  config.backends = {
      {"mock-tts", "tts", "hash", seed, 0, 15.0, 30.0},
      {"mock-asr", "asr", "hash", seed, 0, 15.0, 30.0},
      {"mock-lm", "causal_lm", mode, seed, 0, 15.0, 30.0},
      {"mock-s2s", "seq2seq_scorer", mode, seed, 0, 15.0, 30.0},
      {"mock-dual", "dual_encoder", mode, seed, 0, 15.0, 30.0},
      {"mock-enc", "layered_encoder", "hash", seed, 0, 15.0, 30.0},
      {"mock-unitlm", "unit_lm", mode, seed, 0, 15.0, 30.0},
      {"mock-prefixlm", "prefix_lm", mode, seed, 0, 15.0, 30.0},
  };
  config.methods = {
      {"cascade", "", "oracle", "mock-lm", ""},
      {"seq2seq", "mock-s2s", "oracle", "", ""},
      {"unit_lm", "mock-unitlm", "oracle", "", "mock-enc"},
      {"prefix_lm", "mock-prefixlm", "oracle", "", ""},
      {"dual_encoder", "mock-dual", "oracle", "", ""},
  };
  config.wer_backends = {"mock-asr"};
  return config;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace sqa::testing
