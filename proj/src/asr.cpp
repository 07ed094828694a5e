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

#include "sqa/asr.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <stdexcept>

#include "sqa/backends.hpp"

namespace sqa {

Transcript transcribe(const AudioPrompt& prompt, AsrBackend& backend) {
  Transcript t;
  t.item_id = prompt.item_id;
  t.text = backend.transcribe(prompt);
  t.source = backend.id();
  return t;
}

std::vector<std::string> normalize_text(const std::string& text) {
  std::string mapped;
  mapped.reserve(text.size());
  auto alnum = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; };
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (alnum(c)) {
      mapped.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    } else if ((c == '\'' || c == '-') && i > 0 && i + 1 < text.size() && alnum(text[i - 1]) &&
               alnum(text[i + 1])) {
      mapped.push_back(c);  // intra-word mark
    } else {
      mapped.push_back(' ');
    }
  }
  std::vector<std::string> tokens;
  std::size_t pos = 0;
  while (pos < mapped.size()) {
    while (pos < mapped.size() && mapped[pos] == ' ') ++pos;
    std::size_t start = pos;
    while (pos < mapped.size() && mapped[pos] != ' ') ++pos;
    if (pos > start) tokens.push_back(mapped.substr(start, pos - start));
  }
  return tokens;
}

double wer(const std::string& reference, const std::string& hypothesis) {
  std::vector<std::string> ref = normalize_text(reference);
  std::vector<std::string> hyp = normalize_text(hypothesis);
  if (ref.empty()) throw std::invalid_argument("reference normalizes to an empty token list");

  // Token-level Levenshtein, unit costs, two rolling rows.
  const std::size_t n = ref.size(), m = hyp.size();
  std::vector<std::size_t> prev(m + 1), cur(m + 1);
  std::iota(prev.begin(), prev.end(), std::size_t{0});
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= m; ++j) {
      std::size_t sub = prev[j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return static_cast<double>(prev[m]) / static_cast<double>(n);
}

WERReport make_wer_report(const std::map<std::string, double>& per_task) {
  if (per_task.empty()) throw std::invalid_argument("WER report needs at least one task");
  WERReport report;
  report.per_task = per_task;
  double sum = 0.0;
  for (const auto& [task, value] : per_task) sum += value;
  report.average = sum / static_cast<double>(per_task.size());
  return report;
}

}  // namespace sqa
