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

#include "sqa/entailment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace sqa {

std::vector<std::string> EntailmentTemplate::render(char letter) const {
  std::string letter_token = letter_pattern;
  std::size_t pos = letter_token.find("{L}");
  if (pos == std::string::npos)
    throw std::invalid_argument("letter pattern must contain {L}");
  letter_token.replace(pos, 3, std::string(1, letter));
  if (letter_token.find("{L}") != std::string::npos)
    throw std::invalid_argument("letter pattern must contain exactly one {L}");

  std::vector<std::string> tokens;
  if (!start_marker.empty()) tokens.push_back(start_marker);
  tokens.push_back(letter_token);
  if (!end_marker.empty()) tokens.push_back(end_marker);
  return tokens;
}

std::vector<std::size_t> EntailmentTemplate::scored_indices() const {
  std::vector<std::size_t> indices;
  std::size_t base = start_marker.empty() ? 0 : 1;
  indices.push_back(base);                        // the letter token
  if (!end_marker.empty()) indices.push_back(base + 1);
  return indices;
}

E2eMethod e2e_method_from_string(const std::string& s) {
  if (s == "seq2seq") return E2eMethod::kSeq2Seq;
  if (s == "unit_lm") return E2eMethod::kUnitLm;
  if (s == "prefix_lm") return E2eMethod::kPrefixLm;
  if (s == "dual_encoder") return E2eMethod::kDualEncoder;
  throw std::invalid_argument("unknown e2e method '" + s + "'");
}

std::string to_string(E2eMethod method) {
  switch (method) {
    case E2eMethod::kSeq2Seq: return "seq2seq";
    case E2eMethod::kUnitLm: return "unit_lm";
    case E2eMethod::kPrefixLm: return "prefix_lm";
    case E2eMethod::kDualEncoder: return "dual_encoder";
  }
  return "unknown";
}

AudioPrompt truncate_audio(const AudioPrompt& prompt, double limit_s) {
  if (limit_s <= 0) throw std::invalid_argument("truncation limit must be positive");
  auto max_samples = static_cast<std::size_t>(limit_s * prompt.sample_rate);
  if (prompt.samples.size() <= max_samples) return prompt;
  AudioPrompt out = prompt;
  out.samples.resize(max_samples);
  return out;
}

ScoreVector seq2seq_entail(const AudioPrompt& prompt, Seq2SeqScorerBackend& backend,
                           const EntailmentTemplate& tmpl) {
  ScoreVector out;
  out.method = "seq2seq";
  std::vector<std::size_t> scored = tmpl.scored_indices();
  for (char letter : kLetters) {
    std::vector<std::string> tokens = tmpl.render(letter);
    std::vector<double> logprobs = backend.score_tokens(prompt, tokens);
    if (logprobs.size() != tokens.size())
      throw std::runtime_error("scorer returned " + std::to_string(logprobs.size()) +
                               " log-probs for " + std::to_string(tokens.size()) + " tokens");
    double sum = 0.0;
    for (std::size_t i : scored) sum += logprobs[i];
    out.scores[letter_index(letter)] = sum / static_cast<double>(scored.size());
  }
  out.selected = argmax_tiebreak(out.scores);
  return out;
}

SpeechUnits quantize_units(const std::vector<std::vector<double>>& frames,
                           const Codebook& codebook) {
  if (codebook.centroids.empty()) throw std::invalid_argument("empty codebook");
  SpeechUnits units;
  units.codebook_size = static_cast<int>(codebook.centroids.size());
  units.ids.reserve(frames.size());
  for (const auto& frame : frames) {
    if (frame.size() != codebook.dim)
      throw std::invalid_argument("frame dimension " + std::to_string(frame.size()) +
                                  " does not match codebook dimension " +
                                  std::to_string(codebook.dim));
    int best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < codebook.centroids.size(); ++c) {
      double dist = 0.0;
      for (std::size_t d = 0; d < codebook.dim; ++d) {
        double diff = frame[d] - codebook.centroids[c][d];
        dist += diff * diff;
      }
      if (dist < best_dist) {  // strict: ties keep the lowest index
        best_dist = dist;
        best = static_cast<int>(c);
      }
    }
    units.ids.push_back(best);
  }
  return units;
}

Codebook fit_toy_codebook(const std::vector<std::vector<double>>& frames, std::size_t k,
                          std::uint64_t seed, int max_iterations,
                          std::vector<double>* distortion_trace) {
  if (k == 0) throw std::invalid_argument("k must be positive");
  if (k > frames.size())
    throw std::invalid_argument("k = " + std::to_string(k) + " exceeds frame count " +
                                std::to_string(frames.size()));
  const std::size_t dim = frames.front().size();

  Codebook codebook;
  codebook.dim = dim;

  // Seeded sampling of k distinct frames as the initial centroids.
  std::vector<std::size_t> order(frames.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  for (std::size_t i = 0; i < frames.size() && codebook.centroids.size() < k; ++i) {
    const auto& candidate = frames[order[i]];
    bool duplicate = false;
    for (const auto& existing : codebook.centroids)
      if (existing == candidate) duplicate = true;
    if (!duplicate) codebook.centroids.push_back(candidate);
  }
  if (codebook.centroids.size() < k)
    throw std::invalid_argument("fewer than k distinct frames available");

  std::vector<int> assignment(frames.size(), -1);
  for (int iter = 0; iter < max_iterations; ++iter) {
    SpeechUnits units = quantize_units(frames, codebook);
    if (distortion_trace) {
      double distortion = 0.0;
      for (std::size_t i = 0; i < frames.size(); ++i) {
        const auto& c = codebook.centroids[static_cast<std::size_t>(units.ids[i])];
        for (std::size_t d = 0; d < dim; ++d) {
          double diff = frames[i][d] - c[d];
          distortion += diff * diff;
        }
      }
      distortion_trace->push_back(distortion);
    }
    bool changed = false;
    for (std::size_t i = 0; i < frames.size(); ++i)
      if (units.ids[i] != assignment[i]) {
        assignment[i] = units.ids[i];
        changed = true;
      }
    if (!changed && iter > 0) break;

    std::vector<std::vector<double>> sums(k, std::vector<double>(dim, 0.0));
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < frames.size(); ++i) {
      auto c = static_cast<std::size_t>(assignment[i]);
      counts[c] += 1;
      for (std::size_t d = 0; d < dim; ++d) sums[c][d] += frames[i][d];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) continue;  // empty cluster keeps its centroid
      for (std::size_t d = 0; d < dim; ++d)
        codebook.centroids[c][d] = sums[c][d] / static_cast<double>(counts[c]);
    }
  }
  return codebook;
}

ScoreVector unit_lm_entail(const SpeechUnits& units, UnitLmBackend& backend,
                           const LetterTokenMap& letter_map, const std::string& prompt_template,
                           bool allow_empty_units) {
  if (units.ids.empty() && !allow_empty_units)
    throw std::invalid_argument("empty unit sequence");
  for (int id : units.ids)
    if (id < 0 || id >= backend.unit_vocab_size())
      throw std::invalid_argument("unit id " + std::to_string(id) +
                                  " outside the backend's unit vocabulary of " +
                                  std::to_string(backend.unit_vocab_size()));

  std::string joined;
  for (std::size_t i = 0; i < units.ids.size(); ++i) {
    if (i > 0) joined += ' ';
    joined += std::to_string(units.ids[i]);
  }
  std::string prompt = prompt_template;
  std::size_t pos = prompt.find("{units}");
  if (pos == std::string::npos)
    throw std::invalid_argument("unit prompt template must contain {units}");
  prompt.replace(pos, 7, joined);

  ScoreVector out = constrained_select(backend.next_token_logprobs(prompt), letter_map);
  out.method = "unit_lm";
  return out;
}

namespace {

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("embedding dimension mismatch");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) throw std::invalid_argument("zero-norm embedding");
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace

std::string render_class_text(const std::string& text_template, char letter) {
  std::string out = text_template;
  std::size_t pos = out.find("{L}");
  if (pos == std::string::npos)
    throw std::invalid_argument("class text template must contain {L}");
  out.replace(pos, 3, std::string(1, letter));
  return out;
}

ScoreVector dual_encoder_match(const AudioPrompt& prompt,
                               const std::map<char, std::string>& class_texts,
                               DualEncoderBackend& backend) {
  ScoreVector out;
  out.method = "dual_encoder";
  std::vector<double> audio = backend.embed_audio(prompt);
  for (char letter : kLetters) {
    auto it = class_texts.find(letter);
    if (it == class_texts.end())
      throw std::invalid_argument(std::string("missing class text for letter ") + letter);
    out.scores[letter_index(letter)] = cosine_similarity(audio, backend.embed_text(it->second));
  }
  out.selected = argmax_tiebreak(out.scores);
  return out;
}

EvalOutcome evaluate_e2e(const TaskSpec& task, const std::vector<AudioPrompt>& prompts,
                         E2eMethod method, const E2eConfig& config, BackendRegistry& registry) {
  std::map<std::string, const AudioPrompt*> prompt_by_id;
  for (const AudioPrompt& p : prompts) prompt_by_id[p.item_id] = &p;

  const std::string method_name = to_string(method) + "/" + config.backend_id;
  EvalOutcome outcome;
  outcome.result.task = task.name;
  outcome.result.method = method_name;

  // Method-specific setup, resolved once.
  std::shared_ptr<Seq2SeqScorerBackend> scorer;
  std::shared_ptr<UnitLmBackend> unit_lm;
  std::shared_ptr<PrefixLmBackend> prefix_lm;
  std::shared_ptr<DualEncoderBackend> dual;
  std::shared_ptr<LayeredEncoderBackend> encoder;
  Codebook codebook;
  std::map<char, std::string> class_texts;

  switch (method) {
    case E2eMethod::kSeq2Seq:
      scorer = registry.lookup<Seq2SeqScorerBackend>(config.backend_id);
      break;
    case E2eMethod::kUnitLm: {
      unit_lm = registry.lookup<UnitLmBackend>(config.backend_id);
      encoder = registry.lookup<LayeredEncoderBackend>(config.encoder_id);
      // Toy codebook fitted on this task's own frames with a fixed seed.
      std::vector<std::vector<double>> all_frames;
      for (const AudioPrompt& p : prompts) {
        auto frames = stack_to_frames(encoder->encode(truncate_audio(p, config.audio_limit_s)));
        all_frames.insert(all_frames.end(), frames.begin(), frames.end());
      }
      std::size_t k = std::min<std::size_t>(config.codebook_k, all_frames.size());
      codebook = fit_toy_codebook(all_frames, k, config.codebook_seed);
      break;
    }
    case E2eMethod::kPrefixLm:
      prefix_lm = registry.lookup<PrefixLmBackend>(config.backend_id);
      break;
    case E2eMethod::kDualEncoder:
      dual = registry.lookup<DualEncoderBackend>(config.backend_id);
      for (char letter : kLetters)
        class_texts[letter] = render_class_text(config.class_text_template, letter);
      break;
  }

  for (const MCQAItem& item : task.items) {
    PredictionRecord record;
    record.item_id = item.id;
    record.task = task.name;
    record.method = method_name;
    record.answer = item.answer;
    outcome.result.n_items += 1;
    try {
      auto it = prompt_by_id.find(item.id);
      if (it == prompt_by_id.end())
        throw std::runtime_error("no audio prompt for item " + item.id);
      AudioPrompt audio = truncate_audio(*it->second, config.audio_limit_s);

      ScoreVector scores;
      switch (method) {
        case E2eMethod::kSeq2Seq:
          scores = seq2seq_entail(audio, *scorer, config.seq2seq_template);
          break;
        case E2eMethod::kUnitLm: {
          SpeechUnits units = quantize_units(stack_to_frames(encoder->encode(audio)), codebook);
          scores = unit_lm_entail(units, *unit_lm, unit_lm->letter_map(),
                                  config.unit_prompt_template);
          break;
        }
        case E2eMethod::kPrefixLm: {
          scores = constrained_select(
              prefix_lm->next_token_logprobs(audio, config.unit_prompt_template),
              prefix_lm->letter_map());
          scores.method = "prefix_lm";
          break;
        }
        case E2eMethod::kDualEncoder:
          scores = dual_encoder_match(audio, class_texts, *dual);
          break;
      }
      record.scores = scores.scores;
      record.selected = scores.selected;
      record.correct = scores.selected == item.answer;
      if (record.correct) outcome.result.n_correct += 1;
    } catch (const std::exception&) {
      if (config.strict) throw;
      record.errored = true;
      outcome.result.n_errored += 1;
    }
    outcome.predictions.push_back(std::move(record));
  }
  return outcome;
}

std::vector<std::vector<double>> stack_to_frames(const LayerStack& stack) {
  std::vector<std::vector<double>> frames(stack.frames, std::vector<double>(stack.dims));
  const std::size_t last = stack.layers - 1;
  for (std::size_t t = 0; t < stack.frames; ++t)
    for (std::size_t d = 0; d < stack.dims; ++d) frames[t][d] = stack.at(last, t, d);
  return frames;
}

void write_codebook(const std::filesystem::path& path, const Codebook& codebook) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << codebook.centroids.size() << ' ' << codebook.dim << '\n';
  out.precision(17);
  for (const auto& centroid : codebook.centroids) {
    for (std::size_t d = 0; d < codebook.dim; ++d) {
      if (d) out << ' ';
      out << centroid[d];
    }
    out << '\n';
  }
}

Codebook read_codebook(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::size_t k = 0;
  Codebook codebook;
  in >> k >> codebook.dim;
  codebook.centroids.assign(k, std::vector<double>(codebook.dim));
  for (auto& centroid : codebook.centroids)
    for (double& v : centroid) in >> v;
  if (!in) throw std::runtime_error(path.string() + ": truncated codebook file");
  return codebook;
}

}  // namespace sqa
