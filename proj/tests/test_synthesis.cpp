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

#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "sqa/backends.hpp"
#include "sqa/synthesis.hpp"

using namespace sqa;

TEST_CASE("assign_voice is modular rotation") {
  CHECK(assign_voice(0, 6) == 0);
  CHECK(assign_voice(6, 6) == 0);
  CHECK(assign_voice(7, 6) == 1);
  CHECK_THROWS_AS(assign_voice(0, 0), std::invalid_argument);
}

TEST_CASE("voice rotation over 6545 items balances within one") {
  // Counting oracle: 6,545 items over 6 voices -> counts in {1090, 1091}.
  std::array<std::size_t, 6> counts{};
  for (std::size_t i = 0; i < 6545; ++i) counts[static_cast<std::size_t>(assign_voice(i, 6))]++;
  for (std::size_t c : counts) CHECK((c == 1090 || c == 1091));
}

TEST_CASE("mock TTS duration is length proportional") {
  MockTts tts("mock-tts", 1, 15.0);
  MCQAItem item;
  item.id = "x";
  item.task = "t";
  // render_prompt_text output of exactly 300 chars -> 20 s.
  item.options = {"a", "b", "c", "d"};
  item.answer = 'A';
  item.question = "X";
  std::size_t overhead = render_prompt_text(item).size() - 1;
  item.question = std::string(300 - overhead - 1, 'q') + "?";
  REQUIRE(render_prompt_text(item).size() == 300);
  AudioPrompt prompt = synthesize_item(item, tts, 2);
  CHECK(prompt.duration() == doctest::Approx(20.0));
  CHECK(prompt.voice == 2);
  CHECK(prompt.sample_rate == 16000);
}

TEST_CASE("mock TTS is deterministic and floors at half a second") {
  MockTts tts("mock-tts", 1);
  auto a = tts.synthesize("z", 0);
  auto b = tts.synthesize("z", 0);
  CHECK(a == b);
  CHECK(a.size() == 8000);  // 0.5 s floor
  CHECK_THROWS_AS(tts.synthesize("", 0), std::invalid_argument);
  // Different voice gives a different waveform.
  CHECK(tts.synthesize("z", 1) != a);
}

TEST_CASE("build_manifest totals the Table-1-style label counts") {
  // Label counts A:1936 B:1648 C:1519 D:1442 must total 6,545 documents.
  const std::map<char, std::size_t> label_counts{
      {'A', 1936}, {'B', 1648}, {'C', 1519}, {'D', 1442}};
  TaskSpec spec;
  spec.name = "t";
  std::vector<AudioPrompt> prompts;
  std::size_t i = 0;
  for (const auto& [letter, count] : label_counts) {
    for (std::size_t j = 0; j < count; ++j, ++i) {
      MCQAItem item;
      item.id = "i" + std::to_string(i);
      item.task = "t";
      item.question = "q?";
      item.options = {"a", "b", "c", "d"};
      item.answer = letter;
      spec.items.push_back(item);
      AudioPrompt p;
      p.item_id = item.id;
      p.task = "t";
      p.samples.assign(16000, 0.0f);
      prompts.push_back(std::move(p));
    }
  }
  SynthesisManifest manifest = build_manifest(prompts, {spec});
  CHECK(manifest.total.count == 6545);
  for (const auto& [letter, count] : label_counts)
    CHECK(manifest.per_label.at(letter).count == count);
}

TEST_CASE("build_manifest single prompt per-label durations") {
  TaskSpec spec = testing::make_fixture_task("t", 1);  // answer A
  AudioPrompt p;
  p.item_id = spec.items[0].id;
  p.task = "t";
  p.samples.assign(160000, 0.0f);  // 10 s
  SynthesisManifest manifest = build_manifest({p}, {spec});
  CHECK(manifest.per_label.at('A').duration == doctest::Approx(10.0));
  CHECK(manifest.per_label.at('B').duration == 0.0);
  CHECK(manifest.per_label.at('C').count == 0);
}

TEST_CASE("build_manifest rejects prompts for unknown items") {
  TaskSpec spec = testing::make_fixture_task("t", 1);
  AudioPrompt p;
  p.item_id = "nope";
  p.task = "t";
  p.samples.assign(100, 0.0f);
  CHECK_THROWS_WITH_AS(build_manifest({p}, {spec}), doctest::Contains("unknown item"),
                       std::invalid_argument);
}

TEST_CASE("manifest totals equal per-task and per-label sums on random fixtures") {
  MockTts tts("mock-tts", 3);
  std::vector<TaskSpec> tasks{testing::make_fixture_task("t1", 9),
                              testing::make_fixture_task("t2", 14)};
  std::vector<AudioPrompt> prompts;
  for (const TaskSpec& spec : tasks)
    for (std::size_t i = 0; i < spec.items.size(); ++i)
      prompts.push_back(synthesize_item(spec.items[i], tts, assign_voice(i, 6)));

  SynthesisManifest manifest = build_manifest(prompts, tasks);
  CHECK(manifest.total.count == 23);

  double label_sum = 0.0, task_sum = 0.0, entry_sum = 0.0;
  std::size_t label_count = 0, task_count = 0;
  for (const auto& [_, t] : manifest.per_label) {
    label_sum += t.duration;
    label_count += t.count;
  }
  for (const auto& [_, t] : manifest.per_task) {
    task_sum += t.duration;
    task_count += t.count;
  }
  for (const ManifestEntry& e : manifest.entries) entry_sum += e.duration;
  CHECK(label_count == manifest.total.count);
  CHECK(task_count == manifest.total.count);
  CHECK(label_sum == doctest::Approx(manifest.total.duration));
  CHECK(task_sum == doctest::Approx(manifest.total.duration));
  CHECK(entry_sum == doctest::Approx(manifest.total.duration));
}

TEST_CASE("wav round trip preserves sample count and format") {
  auto dir = testing::temp_dir("wav");
  MockTts tts("mock-tts", 1);
  auto samples = tts.synthesize("some words to speak", 3);
  write_wav(dir / "x.wav", samples, 16000);
  int rate = 0;
  auto loaded = read_wav(dir / "x.wav", &rate);
  CHECK(rate == 16000);
  REQUIRE(loaded.size() == samples.size());
  for (std::size_t i = 0; i < samples.size(); i += 997)
    CHECK(loaded[i] == doctest::Approx(samples[i]).epsilon(1e-3));
}

TEST_CASE("manifest file round trip") {
  auto dir = testing::temp_dir("manifest");
  MockTts tts("mock-tts", 1);
  std::vector<TaskSpec> tasks{testing::make_fixture_task("t", 5)};
  std::vector<AudioPrompt> prompts;
  for (std::size_t i = 0; i < tasks[0].items.size(); ++i)
    prompts.push_back(synthesize_item(tasks[0].items[i], tts, assign_voice(i, 6)));
  SynthesisManifest manifest = build_manifest(prompts, tasks);
  write_manifest(dir / "manifest.json", manifest);
  SynthesisManifest loaded = read_manifest(dir / "manifest.json", tasks);
  CHECK(loaded.entries.size() == manifest.entries.size());
  CHECK(loaded.total.count == manifest.total.count);
  // millisecond precision on durations
  CHECK(loaded.total.duration == doctest::Approx(manifest.total.duration).epsilon(1e-3));
}
