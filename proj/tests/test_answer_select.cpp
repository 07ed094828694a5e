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

#include <random>

#include "doctest.h"
#include "sqa/answer_select.hpp"
#include "sqa/backends.hpp"

using namespace sqa;

namespace {

LetterTokenMap single_variant_map() {
  LetterTokenMap map;
  for (int i = 0; i < 4; ++i) map.variants[i] = {i};
  return map;
}

// Brute-force filtered argmax: scan every (letter, variant) pair.
char brute_force_select(const std::unordered_map<int, double>& logprobs,
                        const LetterTokenMap& map) {
  char best = 0;
  double best_score = 0;
  for (char letter : kLetters) {
    double score = -1e300;
    for (int id : map.for_letter(letter)) score = std::max(score, logprobs.at(id));
    if (best == 0 || score > best_score) {
      best = letter;
      best_score = score;
    }
  }
  return best;
}

}  // namespace

TEST_CASE("constrained_select picks the best letter and ignores other tokens") {
  LetterTokenMap map = single_variant_map();
  std::unordered_map<int, double> logprobs{{0, -1.0}, {1, -0.5}, {2, -2.0}, {3, -3.0}};
  ScoreVector s = constrained_select(logprobs, map);
  CHECK(s.selected == 'B');

  logprobs[9] = -0.1;  // non-letter token, better than everything
  CHECK(constrained_select(logprobs, map).selected == 'B');
}

TEST_CASE("constrained_select ties break to A") {
  LetterTokenMap map = single_variant_map();
  std::unordered_map<int, double> logprobs{{0, -1.0}, {1, -1.0}, {2, -1.0}, {3, -1.0}};
  CHECK(constrained_select(logprobs, map).selected == 'A');

  // Exhaustive pairwise-tie oracle: for every pair tied at the top, the
  // earlier letter wins.
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      std::unordered_map<int, double> lp{{0, -9.0}, {1, -9.0}, {2, -9.0}, {3, -9.0}};
      lp[i] = -1.0;
      lp[j] = -1.0;
      CHECK(constrained_select(lp, map).selected == static_cast<char>('A' + i));
    }
}

TEST_CASE("constrained_select reports the letter of a missing token id") {
  LetterTokenMap map = single_variant_map();
  std::unordered_map<int, double> logprobs{{0, -1.0}, {1, -0.5}, {3, -3.0}};
  CHECK_THROWS_WITH_AS(constrained_select(logprobs, map), doctest::Contains("letter C"),
                       std::invalid_argument);
}

TEST_CASE("constrained_select combines variants by max") {
  LetterTokenMap map = default_letter_map();
  std::unordered_map<int, double> logprobs;
  for (int i = 0; i < kMockVocabSize; ++i) logprobs[i] = -10.0;
  logprobs[2] = -5.0;      // "C"
  logprobs[2 + 4] = -0.5;  // " C" variant dominates
  ScoreVector s = constrained_select(logprobs, map);
  CHECK(s.selected == 'C');
  CHECK(s.score('C') == -0.5);
}

TEST_CASE("constrained_select agrees with brute force on random maps") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> dist(-10.0, 0.0);
  std::uniform_int_distribution<int> quantized(0, 4);
  LetterTokenMap map = default_letter_map();
  for (int trial = 0; trial < 1000; ++trial) {
    std::unordered_map<int, double> logprobs;
    // Quantized scores every few trials to force ties.
    bool force_ties = trial % 3 == 0;
    for (int i = 0; i < kMockVocabSize; ++i)
      logprobs[i] = force_ties ? -static_cast<double>(quantized(rng)) : dist(rng);
    CHECK(constrained_select(logprobs, map).selected == brute_force_select(logprobs, map));
  }
}

TEST_CASE("selection is invariant under constant shifts and non-letter noise") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> dist(-10.0, 0.0);
  LetterTokenMap map = default_letter_map();
  for (int trial = 0; trial < 100; ++trial) {
    std::unordered_map<int, double> logprobs;
    for (int i = 0; i < kMockVocabSize; ++i) logprobs[i] = dist(rng);
    char base = constrained_select(logprobs, map).selected;

    std::unordered_map<int, double> shifted = logprobs;
    for (auto& [id, v] : shifted) v += 123.5;
    CHECK(constrained_select(shifted, map).selected == base);

    std::unordered_map<int, double> noisy = logprobs;
    for (int i = 8; i < kMockVocabSize; ++i) noisy[i] = dist(rng) * 100.0;
    CHECK(constrained_select(noisy, map).selected == base);
  }
}

TEST_CASE("argmax_tiebreak over letter maps") {
  CHECK(argmax_tiebreak(std::map<char, double>{{'A', 0.0}, {'B', 1.0}, {'C', 1.0}, {'D', 0.0}}) ==
        'B');
  CHECK(argmax_tiebreak(std::map<char, double>{{'A', -123.0}}) == 'A');
  CHECK_THROWS_AS(argmax_tiebreak(std::map<char, double>{}), std::invalid_argument);

  // Brute-force scan oracle on random maps.
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> score(0, 3);
  for (int trial = 0; trial < 200; ++trial) {
    std::map<char, double> scores;
    for (char letter : kLetters) scores[letter] = score(rng);
    char expected = 0;
    for (char letter : kLetters)
      if (expected == 0 || scores[letter] > scores[expected]) expected = letter;
    CHECK(argmax_tiebreak(scores) == expected);
  }
}

TEST_CASE("letter map validation rejects overlaps and empties") {
  LetterTokenMap overlapping;
  overlapping.variants = {{std::vector<int>{0}, {0}, {2}, {3}}};
  CHECK_THROWS_AS(overlapping.validate(), std::invalid_argument);

  LetterTokenMap empty;
  empty.variants = {{std::vector<int>{0}, {}, {2}, {3}}};
  CHECK_THROWS_AS(empty.validate(), std::invalid_argument);

  CHECK_NOTHROW(default_letter_map().validate());
}
