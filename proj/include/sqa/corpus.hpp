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

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sqa {

inline constexpr std::array<char, 4> kLetters{'A', 'B', 'C', 'D'};

inline int letter_index(char letter) { return letter - 'A'; }
inline bool is_letter(char c) { return c >= 'A' && c <= 'D'; }

// One multiple-choice question: question text, four options keyed A-D and
// the correct option letter.
struct MCQAItem {
  std::string id;
  std::string task;
  std::string question;
  std::array<std::string, 4> options;  // indexed by letter - 'A'
  char answer = 'A';

  const std::string& option(char letter) const { return options[letter_index(letter)]; }
};

// Throws std::invalid_argument on any violated field constraint.
void validate_item(const MCQAItem& item);

struct TaskSpec {
  std::string name;
  std::vector<MCQAItem> items;  // order is load order and must stay stable
};

struct SplitAssignment {
  std::vector<std::string> train_ids;
  std::vector<std::string> valid_ids;
  std::uint64_t seed = 0;
  double ratio = 0.0;
  std::optional<double> max_duration;
};

// Reads one JSON record per line (fields: id, task, question, options,
// answer). Errors name the offending line number.
TaskSpec load_mcqa(const std::filesystem::path& path, const std::string& task);

// "{q} Option A: {oA} ... Option D: {oD} The correct answer is Option"
std::string render_prompt_text(const MCQAItem& item);

// render_prompt_text + " " + answer letter.
std::string render_answer_text(const MCQAItem& item);

// Drops items with duration >= max_duration (when set), then shuffles the
// survivors with the given seed and takes a prefix of round(ratio * n) as
// the training set.
SplitAssignment split_train_valid(const TaskSpec& spec, double ratio, std::uint64_t seed,
                                  std::optional<double> max_duration,
                                  const std::map<std::string, double>& durations);

void write_split(const std::filesystem::path& path, const SplitAssignment& split);
SplitAssignment read_split(const std::filesystem::path& path);

}  // namespace sqa
