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

#include "sqa/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <stdexcept>

#include "json.hpp"

namespace sqa {

using nlohmann::json;

void validate_item(const MCQAItem& item) {
  if (item.id.empty()) throw std::invalid_argument("item id must be nonempty");
  if (item.question.empty())
    throw std::invalid_argument("item " + item.id + ": question must be nonempty");
  if (!is_letter(item.answer))
    throw std::invalid_argument("item " + item.id + ": answer must be one of A-D");
  for (char letter : kLetters) {
    if (item.option(letter).empty())
      throw std::invalid_argument("item " + item.id + ": option " + std::string(1, letter) +
                                  " must be nonempty");
  }
}

TaskSpec load_mcqa(const std::filesystem::path& path, const std::string& task) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());

  TaskSpec spec;
  spec.name = task;
  std::set<std::string> seen_ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::exception& e) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": malformed record: " + e.what());
    }
    auto fail = [&](const std::string& msg) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": " + msg);
    };
    for (const char* field : {"id", "task", "question", "options", "answer"})
      if (!rec.contains(field)) fail(std::string("missing field '") + field + "'");

    MCQAItem item;
    item.id = rec.at("id").get<std::string>();
    item.task = rec.at("task").get<std::string>();
    item.question = rec.at("question").get<std::string>();

    const json& opts = rec.at("options");
    if (!opts.is_object()) fail("options must be an object keyed A-D");
    if (opts.size() != 4)
      fail("expected 4 options, found " + std::to_string(opts.size()));
    for (char letter : kLetters) {
      std::string key(1, letter);
      if (!opts.contains(key)) fail("missing option " + key);
      item.options[letter_index(letter)] = opts.at(key).get<std::string>();
    }
    std::string ans = rec.at("answer").get<std::string>();
    if (ans.size() != 1 || !is_letter(ans[0]))
      fail("unknown answer letter '" + ans + "'");
    item.answer = ans[0];

    try {
      validate_item(item);
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
    if (!seen_ids.insert(item.id).second) fail("duplicate id '" + item.id + "'");
    spec.items.push_back(std::move(item));
  }
  return spec;
}

std::string render_prompt_text(const MCQAItem& item) {
  std::string out = item.question;
  for (char letter : kLetters) {
    out += " Option ";
    out += letter;
    out += ": ";
    out += item.option(letter);
  }
  out += " The correct answer is Option";
  return out;
}

std::string render_answer_text(const MCQAItem& item) {
  std::string out = render_prompt_text(item);
  out += ' ';
  out += item.answer;
  return out;
}

SplitAssignment split_train_valid(const TaskSpec& spec, double ratio, std::uint64_t seed,
                                  std::optional<double> max_duration,
                                  const std::map<std::string, double>& durations) {
  if (!(ratio > 0.0 && ratio < 1.0))
    throw std::invalid_argument("split ratio must lie in (0, 1)");

  std::vector<std::string> ids;
  for (const MCQAItem& item : spec.items) {
    if (max_duration) {
      auto it = durations.find(item.id);
      if (it == durations.end())
        throw std::invalid_argument("missing duration for item " + item.id);
      if (it->second >= *max_duration) continue;
    }
    ids.push_back(item.id);
  }

  std::mt19937_64 rng(seed);
  std::shuffle(ids.begin(), ids.end(), rng);

  auto n_train = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(ids.size())));
  n_train = std::min(n_train, ids.size());

  SplitAssignment split;
  split.seed = seed;
  split.ratio = ratio;
  split.max_duration = max_duration;
  split.train_ids.assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n_train));
  split.valid_ids.assign(ids.begin() + static_cast<std::ptrdiff_t>(n_train), ids.end());
  return split;
}

void write_split(const std::filesystem::path& path, const SplitAssignment& split) {
  json j;
  j["seed"] = split.seed;
  j["ratio"] = split.ratio;
  if (split.max_duration)
    j["max_duration"] = *split.max_duration;
  else
    j["max_duration"] = nullptr;
  j["train_ids"] = split.train_ids;
  j["valid_ids"] = split.valid_ids;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

SplitAssignment read_split(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  json j = json::parse(in);
  SplitAssignment split;
  split.seed = j.at("seed").get<std::uint64_t>();
  split.ratio = j.at("ratio").get<double>();
  if (!j.at("max_duration").is_null()) split.max_duration = j.at("max_duration").get<double>();
  split.train_ids = j.at("train_ids").get<std::vector<std::string>>();
  split.valid_ids = j.at("valid_ids").get<std::vector<std::string>>();
  return split;
}

}  // namespace sqa
