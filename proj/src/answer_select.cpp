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

#include "sqa/answer_select.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <stdexcept>

namespace sqa {

void LetterTokenMap::validate() const {
  std::set<int> seen;
  for (char letter : kLetters) {
    const auto& ids = for_letter(letter);
    if (ids.empty())
      throw std::invalid_argument(std::string("letter ") + letter + " has no token variants");
    for (int id : ids)
      if (!seen.insert(id).second)
        throw std::invalid_argument("token id " + std::to_string(id) +
                                    " mapped to more than one letter");
  }
}

char argmax_tiebreak(const std::array<double, 4>& scores) {
  int best = 0;
  for (int i = 1; i < 4; ++i)
    if (scores[i] > scores[best]) best = i;
  return static_cast<char>('A' + best);
}

char argmax_tiebreak(const std::map<char, double>& scores) {
  if (scores.empty()) throw std::invalid_argument("argmax over an empty score map");
  char best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (char letter : kLetters) {
    auto it = scores.find(letter);
    if (it == scores.end()) continue;
    if (best == 0 || it->second > best_score) {
      best = letter;
      best_score = it->second;
    }
  }
  if (best == 0) throw std::invalid_argument("score map contains no A-D keys");
  return best;
}

ScoreVector constrained_select(const std::unordered_map<int, double>& logprobs,
                               const LetterTokenMap& letter_map) {
  ScoreVector out;
  out.method = "constrained_select";
  for (char letter : kLetters) {
    double best = -std::numeric_limits<double>::infinity();
    for (int id : letter_map.for_letter(letter)) {
      auto it = logprobs.find(id);
      if (it == logprobs.end())
        throw std::invalid_argument(std::string("letter ") + letter + ": token id " +
                                    std::to_string(id) + " missing from log-probs");
      best = std::max(best, it->second);
    }
    out.scores[letter_index(letter)] = best;
  }
  out.selected = argmax_tiebreak(out.scores);
  return out;
}

}  // namespace sqa
