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

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "sqa/pipeline.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::optional<std::string> output_dir;
  std::optional<std::uint64_t> seed;
  std::optional<bool> strict;
  std::vector<std::string> tasks;

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "run configuration file (JSON)")->required();
    app->add_option("--output-dir", output_dir, "override the configured output directory");
    app->add_option("--seed", seed, "override the configured seed");
    app->add_flag("--strict,!--no-strict", strict,
                  "abort on backend failure instead of excluding errored items");
    app->add_option("--task", tasks, "restrict the run to the named tasks");
  }

  sqa::RunConfig load() const {
    sqa::RunConfig config = sqa::load_run_config(config_path);
    if (output_dir) config.output_dir = *output_dir;
    if (seed) config.seed = *seed;
    if (strict) config.strict = *strict;
    if (!tasks.empty()) {
      std::vector<sqa::TaskConfig> kept;
      for (const sqa::TaskConfig& tc : config.tasks)
        if (std::find(tasks.begin(), tasks.end(), tc.name) != tasks.end()) kept.push_back(tc);
      config.tasks = std::move(kept);
    }
    return config;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spoken MCQA benchmark harness"};
  app.require_subcommand(1);

  CommonFlags synth_flags, eval_flags, wer_flags, probe_flags;
  auto* synth = app.add_subcommand("synthesize", "render task text to audio and write a manifest");
  synth_flags.attach(synth);
  auto* eval = app.add_subcommand("evaluate", "run the configured methods and emit result tables");
  eval_flags.attach(eval);
  auto* wer_cmd = app.add_subcommand("wer", "score ASR backends against reference prompts");
  wer_flags.attach(wer_cmd);
  auto* probe = app.add_subcommand("probe", "train the layer probe on stored layer stacks");
  probe_flags.attach(probe);

  CLI11_PARSE(app, argc, argv);

  try {
    nlohmann::json summary;
    if (synth->parsed()) {
      sqa::RunConfig config = synth_flags.load();
      sqa::SynthesizeStats stats = sqa::run_synthesize(config);
      summary = {{"command", "synthesize"},
                 {"items", stats.items},
                 {"tts_calls", stats.tts_calls},
                 {"cache_hits", stats.cache_hits},
                 {"output_dir", config.output_dir.string()}};
    } else if (eval->parsed()) {
      sqa::RunConfig config = eval_flags.load();
      std::vector<sqa::EvalResult> results = sqa::run_evaluate(config);
      std::size_t errored = 0;
      nlohmann::json rows = nlohmann::json::array();
      for (const sqa::EvalResult& r : results) {
        errored += r.n_errored;
        rows.push_back({{"task", r.task},
                        {"method", r.method},
                        {"n_items", r.n_items},
                        {"n_correct", r.n_correct},
                        {"n_errored", r.n_errored},
                        {"accuracy", r.accuracy_value()}});
      }
      summary = {{"command", "evaluate"},
                 {"results", rows},
                 {"output_dir", config.output_dir.string()}};
      if (config.strict && errored > 0) {
        std::cout << summary.dump(2) << std::endl;
        return 1;
      }
    } else if (wer_cmd->parsed()) {
      sqa::RunConfig config = wer_flags.load();
      sqa::ResultTable table = sqa::run_wer(config);
      nlohmann::json rows = nlohmann::json::object();
      for (const std::string& method : table.method_order) {
        rows[method] = table.rows.at(method);
        rows[method]["avg"] = table.row_average(method);
      }
      summary = {{"command", "wer"}, {"wer", rows}, {"output_dir", config.output_dir.string()}};
    } else if (probe->parsed()) {
      sqa::RunConfig config = probe_flags.load();
      sqa::ProbeReport report = sqa::run_probe(config);
      summary = {{"command", "probe"},
                 {"valid_accuracy", report.valid_accuracy},
                 {"weights", report.weights},
                 {"output_dir", config.output_dir.string()}};
    }
    std::cout << summary.dump(2) << std::endl;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
  return 0;
}
