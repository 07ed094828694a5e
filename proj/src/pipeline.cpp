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

#include "sqa/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <stdexcept>

#include "json.hpp"
#include "sqa/asr.hpp"
#include "sqa/cascade.hpp"
#include "sqa/hash.hpp"
#include "sqa/layer_probe.hpp"
#include "sqa/synthesis.hpp"

namespace sqa {

using nlohmann::json;

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  json j = json::parse(in);

  RunConfig config;
  config.seed = j.value("seed", std::uint64_t{0});
  config.strict = j.value("strict", true);
  config.include_answer_audio = j.value("include_answer_audio", false);
  config.output_dir = j.value("output_dir", std::string("out"));
  config.tts_backend = j.value("tts_backend", std::string("mock-tts"));

  for (const json& t : j.value("tasks", json::array()))
    config.tasks.push_back({t.at("name").get<std::string>(), t.at("path").get<std::string>()});

  for (const json& b : j.value("backends", json::array())) {
    BackendConfig bc;
    bc.id = b.at("id").get<std::string>();
    bc.kind = b.at("kind").get<std::string>();
    bc.mode = b.value("mode", "hash");
    bc.seed = b.value("seed", config.seed);
    bc.drop_period = b.value("drop_period", 0);
    bc.chars_per_second = b.value("chars_per_second", 15.0);
    bc.audio_limit_s = b.value("audio_limit_s", 30.0);
    config.backends.push_back(std::move(bc));
  }

  for (const json& m : j.value("methods", json::array())) {
    MethodConfig mc;
    mc.type = m.at("type").get<std::string>();
    mc.backend = m.value("backend", "");
    mc.transcript_source = m.value("transcript_source", "oracle");
    mc.lm = m.value("lm", "");
    mc.encoder = m.value("encoder", "");
    config.methods.push_back(std::move(mc));
  }

  config.wer_backends = j.value("wer_backends", std::vector<std::string>{});

  if (j.contains("probe")) {
    const json& p = j.at("probe");
    config.probe.stacks_dir = p.at("stacks_dir").get<std::string>();
    config.probe.ratio = p.value("ratio", 0.8);
    config.probe.learning_rate = p.value("learning_rate", 0.5);
    config.probe.epochs = p.value("epochs", 200);
    if (p.contains("max_duration") && !p.at("max_duration").is_null())
      config.probe.max_duration = p.at("max_duration").get<double>();
    else
      config.probe.max_duration.reset();
  }
  return config;
}

std::vector<TaskSpec> load_tasks(const RunConfig& config) {
  std::vector<TaskSpec> tasks;
  for (const TaskConfig& tc : config.tasks) tasks.push_back(load_mcqa(tc.path, tc.name));
  return tasks;
}

std::vector<AudioPrompt> synthesize_task(const TaskSpec& task, TtsBackend& tts,
                                         bool include_answer) {
  std::vector<AudioPrompt> prompts;
  prompts.reserve(task.items.size());
  for (std::size_t i = 0; i < task.items.size(); ++i) {
    int voice = assign_voice(i, tts.n_voices());
    prompts.push_back(synthesize_item(task.items[i], tts, voice, include_answer));
  }
  return prompts;
}

namespace {

// Mirrors evaluate_e2e's unit-LM path to key the oracle mock on exactly the
// prompts that path will render.
std::map<std::uint64_t, char> build_unit_lm_oracle(const std::vector<TaskSpec>& tasks,
                                                   const RunConfig& config,
                                                   TtsBackend& tts,
                                                   LayeredEncoderBackend& encoder) {
  E2eConfig defaults;
  std::map<std::uint64_t, char> oracle;
  for (const TaskSpec& task : tasks) {
    std::vector<AudioPrompt> prompts = synthesize_task(task, tts, config.include_answer_audio);
    std::vector<std::vector<double>> all_frames;
    std::vector<std::vector<std::vector<double>>> frames_per_item;
    for (const AudioPrompt& p : prompts) {
      auto frames = stack_to_frames(encoder.encode(truncate_audio(p, defaults.audio_limit_s)));
      all_frames.insert(all_frames.end(), frames.begin(), frames.end());
      frames_per_item.push_back(std::move(frames));
    }
    std::size_t k = std::min<std::size_t>(defaults.codebook_k, all_frames.size());
    Codebook codebook = fit_toy_codebook(all_frames, k, config.seed);
    for (std::size_t i = 0; i < prompts.size(); ++i) {
      SpeechUnits units = quantize_units(frames_per_item[i], codebook);
      std::string joined;
      for (std::size_t u = 0; u < units.ids.size(); ++u) {
        if (u > 0) joined += ' ';
        joined += std::to_string(units.ids[u]);
      }
      std::string prompt = defaults.unit_prompt_template;
      prompt.replace(prompt.find("{units}"), 7, joined);
      oracle[fnv1a(prompt)] = task.items[i].answer;
    }
  }
  return oracle;
}

}  // namespace

BackendRegistry build_registry(const RunConfig& config, const std::vector<TaskSpec>& tasks) {
  BackendRegistry registry;

  std::map<std::string, std::string> reference_by_item;
  std::map<std::string, char> answer_by_item;
  for (const TaskSpec& task : tasks)
    for (const MCQAItem& item : task.items) {
      reference_by_item[item.id] = render_prompt_text(item);
      answer_by_item[item.id] = item.answer;
    }

  // Oracle causal LMs are keyed by the exact LM prompt, including prompts
  // assembled from noisy ASR transcripts.
  auto causal_oracle = [&]() {
    std::map<std::string, char> oracle;
    for (const TaskSpec& task : tasks)
      for (const MCQAItem& item : task.items)
        oracle[render_prompt_text(item)] = item.answer;
    for (const BackendConfig& bc : config.backends) {
      if (bc.kind != "asr") continue;
      MockAsr asr(bc.id, reference_by_item, bc.drop_period);
      for (const TaskSpec& task : tasks)
        for (const MCQAItem& item : task.items) {
          AudioPrompt key;
          key.item_id = item.id;
          Transcript t{item.id, asr.transcribe(key), bc.id};
          oracle[assemble_cascade_prompt(t)] = item.answer;
        }
    }
    return oracle;
  };

  E2eConfig e2e_defaults;
  for (const BackendConfig& bc : config.backends) {
    if (bc.kind == "tts") {
      registry.add(std::make_shared<MockTts>(bc.id, bc.seed, bc.chars_per_second));
    } else if (bc.kind == "asr") {
      registry.add(std::make_shared<MockAsr>(bc.id, reference_by_item, bc.drop_period));
    } else if (bc.kind == "causal_lm") {
      MockMode mode = mock_mode_from_string(bc.mode);
      std::map<std::string, char> oracle;
      if (mode == MockMode::kOracle) oracle = causal_oracle();
      registry.add(std::make_shared<MockCausalLm>(bc.id, mode, bc.seed, std::move(oracle)));
    } else if (bc.kind == "seq2seq_scorer") {
      registry.add(std::make_shared<MockSeq2SeqScorer>(bc.id, mock_mode_from_string(bc.mode),
                                                       bc.seed, bc.audio_limit_s,
                                                       answer_by_item));
    } else if (bc.kind == "dual_encoder") {
      std::map<std::string, std::string> answer_texts;
      for (const auto& [id, answer] : answer_by_item)
        answer_texts[id] = render_class_text(e2e_defaults.class_text_template, answer);
      registry.add(std::make_shared<MockDualEncoder>(bc.id, mock_mode_from_string(bc.mode),
                                                     bc.seed, std::move(answer_texts)));
    } else if (bc.kind == "layered_encoder") {
      registry.add(std::make_shared<MockLayeredEncoder>(bc.id, bc.seed));
    } else if (bc.kind == "prefix_lm") {
      registry.add(std::make_shared<MockPrefixLm>(bc.id, mock_mode_from_string(bc.mode), bc.seed,
                                                  answer_by_item));
    } else if (bc.kind != "unit_lm") {
      throw std::invalid_argument("unknown backend kind '" + bc.kind + "'");
    }
  }

  // Unit LMs last: their oracle key needs the TTS and encoder instances.
  for (const BackendConfig& bc : config.backends) {
    if (bc.kind != "unit_lm") continue;
    MockMode mode = mock_mode_from_string(bc.mode);
    std::map<std::uint64_t, char> oracle;
    if (mode == MockMode::kOracle) {
      std::string encoder_id;
      for (const MethodConfig& mc : config.methods)
        if (mc.type == "unit_lm" && mc.backend == bc.id) encoder_id = mc.encoder;
      if (encoder_id.empty())
        throw std::invalid_argument("oracle unit LM '" + bc.id +
                                    "' needs a unit_lm method naming its encoder");
      auto tts = registry.lookup<TtsBackend>(config.tts_backend);
      auto encoder = registry.lookup<LayeredEncoderBackend>(encoder_id);
      oracle = build_unit_lm_oracle(tasks, config, *tts, *encoder);
    }
    registry.add(std::make_shared<MockUnitLm>(bc.id, mode, bc.seed, 1000, std::move(oracle)));
  }
  return registry;
}

SynthesizeStats run_synthesize(const RunConfig& config) {
  std::vector<TaskSpec> tasks = load_tasks(config);
  BackendRegistry registry = build_registry(config, tasks);
  auto tts = registry.lookup<TtsBackend>(config.tts_backend);

  std::filesystem::create_directories(config.output_dir / "audio");

  // Content-hash cache: unchanged (text, voice, backend) pairs skip the
  // TTS call on rerun.
  std::map<std::string, std::uint64_t> cache;
  auto cache_path = config.output_dir / "tts_cache.json";
  if (std::filesystem::exists(cache_path)) {
    std::ifstream in(cache_path);
    json j = json::parse(in);
    for (auto& [key, value] : j.items()) cache[key] = value.get<std::uint64_t>();
  }

  SynthesizeStats stats;
  std::vector<AudioPrompt> prompts;
  std::map<std::string, std::string> audio_paths;
  for (const TaskSpec& task : tasks) {
    for (std::size_t i = 0; i < task.items.size(); ++i) {
      const MCQAItem& item = task.items[i];
      int voice = assign_voice(i, tts->n_voices());
      std::string text =
          config.include_answer_audio ? render_answer_text(item) : render_prompt_text(item);
      std::uint64_t key =
          fnv1a(config.tts_backend, fnv1a_u64(static_cast<std::uint64_t>(voice), fnv1a(text)));
      std::string rel_path = "audio/" + task.name + "__" + item.id + ".wav";
      std::filesystem::path wav_path = config.output_dir / rel_path;

      AudioPrompt prompt;
      prompt.item_id = item.id;
      prompt.task = task.name;
      prompt.voice = voice;
      auto cached = cache.find(rel_path);
      if (cached != cache.end() && cached->second == key && std::filesystem::exists(wav_path)) {
        prompt.samples = read_wav(wav_path, &prompt.sample_rate);
        ++stats.cache_hits;
      } else {
        prompt.samples = tts->synthesize(text, voice);
        write_wav(wav_path, prompt.samples, prompt.sample_rate);
        // Re-read so cached and fresh runs carry identical quantized audio.
        prompt.samples = read_wav(wav_path, &prompt.sample_rate);
        cache[rel_path] = key;
        ++stats.tts_calls;
      }
      ++stats.items;
      audio_paths[item.id] = rel_path;
      prompts.push_back(std::move(prompt));
    }
  }

  SynthesisManifest manifest = build_manifest(prompts, tasks, audio_paths);
  write_manifest(config.output_dir / "manifest.json", manifest);
  std::ofstream report(config.output_dir / "duration_report.tsv");
  report << render_duration_report(manifest);

  json cache_json = json::object();
  for (const auto& [key, value] : cache) cache_json[key] = value;
  std::ofstream cache_out(cache_path);
  cache_out << cache_json.dump(2) << '\n';
  return stats;
}

namespace {

void write_predictions(const std::filesystem::path& path,
                       std::vector<PredictionRecord> predictions) {
  std::sort(predictions.begin(), predictions.end(),
            [](const PredictionRecord& a, const PredictionRecord& b) {
              return std::tie(a.method, a.task, a.item_id) < std::tie(b.method, b.task, b.item_id);
            });
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (const PredictionRecord& p : predictions) {
    json j{{"item_id", p.item_id},
           {"task", p.task},
           {"method", p.method},
           {"scores",
            {{"A", p.scores[0]}, {"B", p.scores[1]}, {"C", p.scores[2]}, {"D", p.scores[3]}}},
           {"selected", std::string(1, p.selected)},
           {"answer", std::string(1, p.answer)},
           {"correct", p.correct},
           {"errored", p.errored}};
    out << j.dump() << '\n';
  }
}

}  // namespace

std::vector<EvalResult> run_evaluate(const RunConfig& config) {
  std::vector<TaskSpec> tasks = load_tasks(config);
  BackendRegistry registry = build_registry(config, tasks);
  auto tts = registry.lookup<TtsBackend>(config.tts_backend);

  std::filesystem::create_directories(config.output_dir);

  std::vector<EvalResult> results;
  std::vector<PredictionRecord> all_predictions;
  std::vector<std::string> task_order;
  for (const TaskSpec& task : tasks) {
    task_order.push_back(task.name);
    std::vector<AudioPrompt> prompts =
        synthesize_task(task, *tts, config.include_answer_audio);
    for (const MethodConfig& mc : config.methods) {
      EvalOutcome outcome;
      if (mc.type == "cascade") {
        CascadeConfig cc;
        cc.transcript_source = mc.transcript_source;
        cc.lm_backend = mc.lm;
        cc.strict = config.strict;
        outcome = evaluate_cascade(task, prompts, cc, registry);
      } else {
        E2eConfig ec;
        ec.backend_id = mc.backend;
        ec.encoder_id = mc.encoder;
        ec.codebook_seed = config.seed;
        ec.strict = config.strict;
        outcome = evaluate_e2e(task, prompts, e2e_method_from_string(mc.type), ec, registry);
      }
      results.push_back(outcome.result);
      all_predictions.insert(all_predictions.end(), outcome.predictions.begin(),
                             outcome.predictions.end());
    }
  }

  ResultTable table = aggregate_table(results, task_order);
  std::ofstream tsv(config.output_dir / "results.tsv");
  tsv << render_table(table, TableFormat::kDelimited);
  std::ofstream md(config.output_dir / "results.md");
  md << render_table(table, TableFormat::kMarkdown, 1);
  write_predictions(config.output_dir / "predictions.jsonl", std::move(all_predictions));
  return results;
}

ResultTable run_wer(const RunConfig& config) {
  std::vector<TaskSpec> tasks = load_tasks(config);
  BackendRegistry registry = build_registry(config, tasks);
  if (config.wer_backends.empty())
    throw std::invalid_argument("wer_backends is empty; nothing to evaluate");

  ResultTable table;
  for (const TaskSpec& task : tasks) table.task_order.push_back(task.name);
  for (const std::string& backend_id : config.wer_backends) {
    auto asr = registry.lookup<AsrBackend>(backend_id);
    table.method_order.push_back(backend_id);
    for (const TaskSpec& task : tasks) {
      // Corpus-level WER: total edit operations over total reference tokens.
      double total_ops = 0.0;
      std::size_t total_ref = 0;
      for (const MCQAItem& item : task.items) {
        std::string reference = render_prompt_text(item);
        AudioPrompt key;
        key.item_id = item.id;
        key.task = task.name;
        Transcript hyp = transcribe(key, *asr);
        std::size_t ref_tokens = normalize_text(reference).size();
        total_ops += wer(reference, hyp.text) * static_cast<double>(ref_tokens);
        total_ref += ref_tokens;
      }
      table.rows[backend_id][task.name] =
          total_ref == 0 ? 0.0 : total_ops / static_cast<double>(total_ref);
    }
  }

  std::filesystem::create_directories(config.output_dir);
  std::ofstream tsv(config.output_dir / "wer.tsv");
  tsv << render_table(table, TableFormat::kDelimited);
  std::ofstream md(config.output_dir / "wer.md");
  md << render_table(table, TableFormat::kMarkdown, 2);
  return table;
}

ProbeReport run_probe(const RunConfig& config) {
  if (!std::filesystem::is_directory(config.probe.stacks_dir))
    throw std::runtime_error("missing stacks directory " + config.probe.stacks_dir.string());

  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(config.probe.stacks_dir))
    if (entry.path().extension() == ".stack") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  if (files.empty())
    throw std::runtime_error("no .stack files in " + config.probe.stacks_dir.string());

  std::vector<LayerStack> stacks;
  for (const auto& file : files) stacks.push_back(read_layer_stack(file));

  TaskSpec ids;
  ids.name = "probe";
  std::map<std::string, double> durations;
  for (const LayerStack& stack : stacks) {
    MCQAItem item;
    item.id = stack.item_id;
    ids.items.push_back(std::move(item));
    durations[stack.item_id] = stack.duration;
  }
  SplitAssignment split =
      split_train_valid(ids, config.probe.ratio, config.seed, config.probe.max_duration, durations);

  std::map<std::string, const LayerStack*> by_id;
  for (const LayerStack& stack : stacks) by_id[stack.item_id] = &stack;
  std::vector<LayerStack> train, valid;
  for (const std::string& id : split.train_ids) train.push_back(*by_id.at(id));
  for (const std::string& id : split.valid_ids) valid.push_back(*by_id.at(id));

  ProbeConfig pc{config.probe.learning_rate, config.probe.epochs, config.seed};
  auto [params, report] = train_probe(train, valid, pc);

  std::filesystem::create_directories(config.output_dir);
  write_split(config.output_dir / "probe_split.json", split);

  std::ofstream curve(config.output_dir / "probe_curve.tsv");
  curve << "layer\tweight\tcumulative\n";
  curve.precision(17);
  for (std::size_t l = 0; l < report.weights.size(); ++l)
    curve << l << '\t' << report.weights[l] << '\t' << report.cumulative[l] << '\n';

  json j{{"valid_accuracy", report.valid_accuracy},
         {"weights", report.weights},
         {"cumulative", report.cumulative},
         {"n_train", train.size()},
         {"n_valid", valid.size()}};
  std::ofstream out(config.output_dir / "probe_report.json");
  out << j.dump(2) << '\n';
  return report;
}

}  // namespace sqa
