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
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "sqa/corpus.hpp"

namespace sqa {

// Token-id surface variants per option letter (e.g. "A" and " A").
// Lists must be pairwise disjoint across letters.
struct LetterTokenMap {
  std::array<std::vector<int>, 4> variants;  // indexed by letter - 'A'

  const std::vector<int>& for_letter(char letter) const { return variants[letter_index(letter)]; }
  void validate() const;
};

struct ScoreVector {
  std::array<double, 4> scores{};  // indexed by letter - 'A', higher is better
  char selected = 'A';
  std::string method;

  double score(char letter) const { return scores[letter_index(letter)]; }
};

// Deterministic argmax; ties break toward the earliest letter in A-D order.
// Throws on an empty map.
char argmax_tiebreak(const std::map<char, double>& scores);
char argmax_tiebreak(const std::array<double, 4>& scores);

// score(letter) = max over that letter's token-id variants of the given
// log-probs; every other token id is ignored. Throws (naming the letter)
// when a mapped token id is absent from logprobs.
ScoreVector constrained_select(const std::unordered_map<int, double>& logprobs,
                               const LetterTokenMap& letter_map);

}  // namespace sqa
