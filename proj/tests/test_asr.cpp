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
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "sqa/asr.hpp"
#include "sqa/backends.hpp"

using namespace sqa;

namespace {

// Independent full-matrix Levenshtein oracle over normalized tokens. Kept
// separate from the rolling-row implementation in wer().
double wer_oracle(const std::string& reference, const std::string& hypothesis) {
  auto ref = normalize_text(reference);
  auto hyp = normalize_text(hypothesis);
  std::vector<std::vector<std::size_t>> d(ref.size() + 1,
                                          std::vector<std::size_t>(hyp.size() + 1, 0));
  for (std::size_t i = 0; i <= ref.size(); ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= hyp.size(); ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= ref.size(); ++i)
    for (std::size_t j = 1; j <= hyp.size(); ++j) {
      std::size_t best = d[i - 1][j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      if (d[i - 1][j] + 1 < best) best = d[i - 1][j] + 1;
      if (d[i][j - 1] + 1 < best) best = d[i][j - 1] + 1;
      d[i][j] = best;
    }
  return static_cast<double>(d[ref.size()][hyp.size()]) / static_cast<double>(ref.size());
}

std::string random_sentence(std::mt19937_64& rng, int max_words) {
  static const std::vector<std::string> vocab = {"the",  "cat",    "sat",  "on",   "a",
                                                 "mat",  "doctor", "gave", "dose", "of",
                                                 "drug", "it's",   "state-of-the-art"};
  std::uniform_int_distribution<int> n_words(1, max_words);
  std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1);
  std::string out;
  int n = n_words(rng);
  for (int i = 0; i < n; ++i) {
    if (i) out += ' ';
    out += vocab[pick(rng)];
  }
  return out;
}

}  // namespace

TEST_CASE("normalize_text strips punctuation and case") {
  CHECK(normalize_text("The cat, sat.") == std::vector<std::string>{"the", "cat", "sat"});
  CHECK(normalize_text("it's state-of-the-art") ==
        std::vector<std::string>{"it's", "state-of-the-art"});
  CHECK(normalize_text("  spaced   out  ") == std::vector<std::string>{"spaced", "out"});
  CHECK(normalize_text("- leading and trailing -") ==
        std::vector<std::string>{"leading", "and", "trailing"});
}

TEST_CASE("normalize_text is idempotent on random strings") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    std::string text = random_sentence(rng, 20) + (trial % 2 ? "!" : ", OK.");
    auto once = normalize_text(text);
    std::string joined;
    for (std::size_t i = 0; i < once.size(); ++i) {
      if (i) joined += ' ';
      joined += once[i];
    }
    CHECK(normalize_text(joined) == once);
  }
}

TEST_CASE("wer basics") {
  CHECK(wer("the cat sat", "the cat sat") == 0.0);
  CHECK(wer("the cat sat", "the cat") == doctest::Approx(1.0 / 3.0));
  CHECK(wer("the cat sat", "") == 1.0);
  CHECK(wer("The CAT, sat!", "the cat sat") == 0.0);  // normalization invariance
  CHECK_THROWS_AS(wer("...", "anything"), std::invalid_argument);
  // insertions can push WER over 1
  CHECK(wer("one", "one two three") == doctest::Approx(2.0));
}

TEST_CASE("wer matches the independent DP oracle on random pairs") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    std::string ref = random_sentence(rng, 15);
    std::string hyp = random_sentence(rng, 15);
    CHECK(wer(ref, hyp) == doctest::Approx(wer_oracle(ref, hyp)));
  }
}

TEST_CASE("mock ASR with drop period 10 yields 10 percent WER") {
  std::ostringstream ref;
  for (int i = 0; i < 100; ++i) ref << (i ? " " : "") << "word" << i;
  MockAsr asr("mock-asr", {{"item0", ref.str()}}, 10);
  AudioPrompt prompt;
  prompt.item_id = "item0";
  Transcript t = transcribe(prompt, asr);
  CHECK(normalize_text(t.text).size() == 90);
  CHECK(wer(ref.str(), t.text) == doctest::Approx(0.10));
}

TEST_CASE("mock ASR with no noise is the identity") {
  MockAsr asr("mock-asr", {{"a", "some reference text"}}, 0);
  AudioPrompt prompt;
  prompt.item_id = "a";
  CHECK(transcribe(prompt, asr).text == "some reference text");
  CHECK(transcribe(prompt, asr).source == "mock-asr");

  MockAsr degenerate("mock-asr2", {{"a", "some reference text"}}, 1000000);
  CHECK(degenerate.transcribe(prompt) == "some reference text");
}

TEST_CASE("WER report average reproduces the reference fixture") {
  // Per-task WER values whose unweighted mean is 8.53125.
  std::map<std::string, double> per_task{
      {"mmlu_clinical_kg", 5.45},     {"mmlu_medical_genetics", 6.19},
      {"mmlu_anatomy", 4.90},         {"mmlu_pro_medicine", 5.66},
      {"mmlu_college_biology", 4.54}, {"mmlu_college_medicine", 26.02},
      {"medqa", 7.50},                {"medmcqa", 7.99}};
  WERReport report = make_wer_report(per_task);
  CHECK(report.average == doctest::Approx(8.53125));
}
