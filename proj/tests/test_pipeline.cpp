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

#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "sqa/asr.hpp"
#include "sqa/pipeline.hpp"
#include "sqa/synthesis.hpp"

using namespace sqa;

TEST_CASE("load_run_config parses the JSON schema with defaults") {
  auto dir = testing::temp_dir("config");
  {
    std::ofstream out(dir / "run.json");
    out << R"({
      "seed": 9,
      "output_dir": ")" << (dir / "out").string() << R"(",
      "tasks": [{"name": "t1", "path": "t1.jsonl"}],
      "backends": [
        {"id": "mock-tts", "kind": "tts"},
        {"id": "mock-lm", "kind": "causal_lm", "mode": "uniform", "seed": 3}
      ],
      "methods": [{"type": "cascade", "lm": "mock-lm"}],
      "wer_backends": ["mock-asr"],
      "probe": {"stacks_dir": "stacks", "epochs": 50, "max_duration": null}
    })";
  }
  RunConfig config = load_run_config(dir / "run.json");
  CHECK(config.seed == 9);
  CHECK(config.strict);
  CHECK(config.tasks.size() == 1);
  CHECK(config.tasks[0].name == "t1");
  CHECK(config.backends.size() == 2);
  CHECK(config.backends[0].mode == "hash");
  CHECK(config.backends[1].mode == "uniform");
  CHECK(config.backends[1].seed == 3);
  CHECK(config.backends[0].seed == 9);  // inherits the run seed
  CHECK(config.methods.at(0).transcript_source == "oracle");
  CHECK(config.wer_backends == std::vector<std::string>{"mock-asr"});
  CHECK(config.probe.epochs == 50);
  CHECK_FALSE(config.probe.max_duration.has_value());

  CHECK_THROWS_AS(load_run_config(dir / "missing.json"), std::runtime_error);
}

TEST_CASE("run_synthesize writes audio, manifest and cache") {
  auto dir = testing::temp_dir("synth_run");
  std::vector<TaskSpec> tasks{testing::make_fixture_task("t1", 6),
                              testing::make_fixture_task("t2", 3)};
  RunConfig config = testing::make_mock_config(dir, tasks, "hash");

  SynthesizeStats stats = run_synthesize(config);
  CHECK(stats.items == 9);
  CHECK(stats.tts_calls == 9);
  CHECK(stats.cache_hits == 0);

  CHECK(std::filesystem::exists(config.output_dir / "audio" / "t1__t1-0.wav"));
  CHECK(std::filesystem::exists(config.output_dir / "manifest.json"));
  CHECK(std::filesystem::exists(config.output_dir / "duration_report.tsv"));

  SynthesisManifest manifest = read_manifest(config.output_dir / "manifest.json", tasks);
  CHECK(manifest.entries.size() == 9);
  CHECK(manifest.per_task.at("t1").count == 6);
  CHECK(manifest.per_task.at("t2").count == 3);

  // Second run is served from the cache.
  SynthesizeStats rerun = run_synthesize(config);
  CHECK(rerun.items == 9);
  CHECK(rerun.tts_calls == 0);
  CHECK(rerun.cache_hits == 9);
}

TEST_CASE("run_evaluate with oracle mocks is perfect on every method") {
  auto dir = testing::temp_dir("eval_oracle");
  std::vector<TaskSpec> tasks{testing::make_fixture_task("t1", 8),
                              testing::make_fixture_task("t2", 4)};
  RunConfig config = testing::make_mock_config(dir, tasks, "oracle");

  std::vector<EvalResult> results = run_evaluate(config);
  CHECK(results.size() == 2 * config.methods.size());
  for (const EvalResult& r : results) {
    CHECK(r.n_errored == 0);
    CHECK(r.accuracy_value() == doctest::Approx(1.0));
  }

  CHECK(std::filesystem::exists(config.output_dir / "results.tsv"));
  CHECK(std::filesystem::exists(config.output_dir / "results.md"));
  CHECK(std::filesystem::exists(config.output_dir / "predictions.jsonl"));

  ResultTable table = parse_table(testing::slurp(config.output_dir / "results.tsv"));
  for (const std::string& method : table.method_order)
    CHECK(table.row_average(method) == doctest::Approx(1.0));
}

TEST_CASE("run_evaluate with uniform mocks always selects A") {
  auto dir = testing::temp_dir("eval_uniform");
  TaskSpec task = testing::make_fixture_task("t1", 12);  // answers rotate, 3 are A
  RunConfig config = testing::make_mock_config(dir, {task}, "uniform");

  std::vector<EvalResult> results = run_evaluate(config);
  for (const EvalResult& r : results) {
    CHECK(r.n_items == 12);
    CHECK(r.n_correct == 3);
  }
}

TEST_CASE("run_evaluate reruns are byte identical") {
  auto dir_a = testing::temp_dir("eval_det_a");
  auto dir_b = testing::temp_dir("eval_det_b");
  std::vector<TaskSpec> tasks{testing::make_fixture_task("t1", 6)};
  RunConfig a = testing::make_mock_config(dir_a, tasks, "hash");
  RunConfig b = testing::make_mock_config(dir_b, tasks, "hash");

  run_evaluate(a);
  run_evaluate(b);
  for (const char* name : {"results.tsv", "results.md", "predictions.jsonl"})
    CHECK(testing::slurp(a.output_dir / name) == testing::slurp(b.output_dir / name));
}

TEST_CASE("run_wer reports zero for an exact mock and the drop rate otherwise") {
  auto dir = testing::temp_dir("wer_run");
  std::vector<TaskSpec> tasks{testing::make_fixture_task("t1", 5)};
  RunConfig config = testing::make_mock_config(dir, tasks, "hash");
  config.backends.push_back({"droppy-asr", "asr", "hash", 1, 10, 15.0, 30.0});
  config.wer_backends.push_back("droppy-asr");

  ResultTable table = run_wer(config);
  CHECK(table.rows.at("mock-asr").at("t1") == doctest::Approx(0.0));
  // Pure deletions: the corpus WER is the normalized-token mass of every
  // 10th raw word over the total normalized-token mass.
  std::size_t total = 0, dropped = 0;
  for (const MCQAItem& item : tasks[0].items) {
    std::string reference = render_prompt_text(item);
    total += normalize_text(reference).size();
    std::istringstream words(reference);
    std::string word;
    int index = 0;
    while (words >> word) {
      ++index;
      if (index % 10 == 0) dropped += normalize_text(word).size();
    }
  }
  CHECK(table.rows.at("droppy-asr").at("t1") ==
        doctest::Approx(static_cast<double>(dropped) / static_cast<double>(total)));

  CHECK(std::filesystem::exists(config.output_dir / "wer.tsv"));
  CHECK(std::filesystem::exists(config.output_dir / "wer.md"));

  RunConfig empty = config;
  empty.wer_backends.clear();
  CHECK_THROWS_AS(run_wer(empty), std::invalid_argument);
}

TEST_CASE("run_probe trains from stack files and writes its reports") {
  auto dir = testing::temp_dir("probe_run");
  auto stacks_dir = dir / "stacks";
  std::filesystem::create_directories(stacks_dir);

  // Layer 1 of 3 carries the label; other layers are mild noise.
  std::mt19937_64 rng(77);
  std::normal_distribution<double> noise(0.0, 0.05);
  for (int i = 0; i < 40; ++i) {
    LayerStack stack;
    stack.item_id = "s" + std::to_string(100 + i);
    stack.label = i % 4;
    stack.duration = (i % 8 == 7) ? 40.0 : 2.0;  // a few over the 30 s filter
    stack.layers = 3;
    stack.frames = 4;
    stack.dims = 4;
    stack.values.assign(3 * 4 * 4, 0.0);
    for (std::size_t t = 0; t < 4; ++t)
      for (std::size_t d = 0; d < 4; ++d) {
        stack.at(0, t, d) = noise(rng);
        stack.at(1, t, d) = (static_cast<int>(d) == stack.label ? 1.0 : -1.0) + noise(rng);
        stack.at(2, t, d) = noise(rng);
      }
    write_layer_stack(stacks_dir / (stack.item_id + ".stack"), stack);
  }

  RunConfig config = testing::make_mock_config(dir, {}, "hash");
  config.probe.stacks_dir = stacks_dir;
  config.probe.epochs = 300;
  config.probe.learning_rate = 0.5;
  config.probe.max_duration = 30.0;

  ProbeReport report = run_probe(config);
  CHECK(report.weights.size() == 3);
  CHECK(report.weights[1] > 0.5);
  CHECK(report.valid_accuracy == doctest::Approx(1.0));
  CHECK(report.cumulative.back() == doctest::Approx(1.0));

  CHECK(std::filesystem::exists(config.output_dir / "probe_split.json"));
  CHECK(std::filesystem::exists(config.output_dir / "probe_curve.tsv"));
  CHECK(std::filesystem::exists(config.output_dir / "probe_report.json"));

  SplitAssignment split = read_split(config.output_dir / "probe_split.json");
  CHECK(split.train_ids.size() + split.valid_ids.size() == 35);  // 5 filtered by duration

  RunConfig missing = config;
  missing.probe.stacks_dir = dir / "nope";
  CHECK_THROWS_AS(run_probe(missing), std::runtime_error);
}
