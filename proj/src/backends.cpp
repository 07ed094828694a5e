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

#include "sqa/backends.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

#include "sqa/hash.hpp"

namespace sqa {

std::string to_string(BackendKind kind) {
  switch (kind) {
    case BackendKind::kTts: return "tts";
    case BackendKind::kAsr: return "asr";
    case BackendKind::kCausalLm: return "causal_lm";
    case BackendKind::kSeq2SeqScorer: return "seq2seq_scorer";
    case BackendKind::kDualEncoder: return "dual_encoder";
    case BackendKind::kLayeredEncoder: return "layered_encoder";
    case BackendKind::kUnitLm: return "unit_lm";
    case BackendKind::kPrefixLm: return "prefix_lm";
  }
  return "unknown";
}

MockMode mock_mode_from_string(const std::string& s) {
  if (s == "hash") return MockMode::kHash;
  if (s == "oracle") return MockMode::kOracle;
  if (s == "uniform") return MockMode::kUniform;
  throw std::invalid_argument("unknown mock mode '" + s + "' (expected hash|oracle|uniform)");
}

LetterTokenMap default_letter_map() {
  LetterTokenMap map;
  for (int i = 0; i < 4; ++i) map.variants[i] = {i, i + 4};
  return map;
}

// --- MockTts ---------------------------------------------------------------

MockTts::MockTts(std::string id, std::uint64_t seed, double chars_per_second)
    : TtsBackend({std::move(id), BackendKind::kTts, 4, std::nullopt}),
      seed_(seed),
      chars_per_second_(chars_per_second) {}

std::vector<float> MockTts::synthesize(const std::string& text, int voice) {
  if (text.empty()) throw std::invalid_argument("cannot synthesize empty text");
  ++calls_;
  double duration = std::max(0.5, static_cast<double>(text.size()) / chars_per_second_);
  auto n = static_cast<std::size_t>(std::llround(duration * kSampleRate));
  std::uint64_t h = fnv1a_u64(static_cast<std::uint64_t>(voice), fnv1a(text, seed_ ^ kFnvOffset));
  std::vector<float> samples(n);
  for (std::size_t i = 0; i < n; ++i) {
    h = fnv1a_u64(i, h);
    samples[i] = static_cast<float>(hash_to_unit(h) * 2.0 - 1.0) * 0.5f;
  }
  return samples;
}

// --- MockAsr ---------------------------------------------------------------

MockAsr::MockAsr(std::string id, std::map<std::string, std::string> reference_by_item,
                 int drop_period)
    : AsrBackend({std::move(id), BackendKind::kAsr, 4, std::nullopt}),
      reference_by_item_(std::move(reference_by_item)),
      drop_period_(drop_period) {}

std::string MockAsr::transcribe(const AudioPrompt& prompt) {
  auto it = reference_by_item_.find(prompt.item_id);
  if (it == reference_by_item_.end())
    throw std::runtime_error("mock ASR has no reference for item " + prompt.item_id);
  if (drop_period_ <= 0) return it->second;

  std::istringstream words(it->second);
  std::string word, out;
  int index = 0;
  while (words >> word) {
    ++index;
    if (index % drop_period_ == 0) continue;
    if (!out.empty()) out += ' ';
    out += word;
  }
  return out;
}

// --- Mock causal LM ----------------------------------------------------------

std::unordered_map<int, double> mock_causal_lm_score(const std::string& prompt,
                                                     const std::map<char, double>& bias,
                                                     std::uint64_t seed) {
  std::vector<double> logits(kMockVocabSize);
  std::uint64_t h = fnv1a(prompt, seed ^ kFnvOffset);
  for (int i = 0; i < kMockVocabSize; ++i) {
    h = fnv1a_u64(static_cast<std::uint64_t>(i), h);
    logits[i] = hash_to_unit(h);  // noise in [0, 1)
  }
  for (const auto& [letter, b] : bias) {
    if (!is_letter(letter)) throw std::invalid_argument("bias key outside A-D");
    logits[letter_index(letter)] += b;
    logits[letter_index(letter) + 4] += b;
  }
  // log-softmax so exp(values) sums to 1
  double max_logit = *std::max_element(logits.begin(), logits.end());
  double z = 0.0;
  for (double v : logits) z += std::exp(v - max_logit);
  double log_z = max_logit + std::log(z);
  std::unordered_map<int, double> out;
  for (int i = 0; i < kMockVocabSize; ++i) out[i] = logits[i] - log_z;
  return out;
}

MockCausalLm::MockCausalLm(std::string id, MockMode mode, std::uint64_t seed,
                           std::map<std::string, char> answer_by_prompt,
                           std::map<char, double> bias)
    : CausalLmBackend({std::move(id), BackendKind::kCausalLm, 4, std::nullopt}),
      mode_(mode),
      seed_(seed),
      answer_by_prompt_(std::move(answer_by_prompt)),
      bias_(std::move(bias)) {}

std::unordered_map<int, double> MockCausalLm::next_token_logprobs(const std::string& prompt) {
  switch (mode_) {
    case MockMode::kHash:
      return mock_causal_lm_score(prompt, bias_, seed_);
    case MockMode::kUniform: {
      std::unordered_map<int, double> out;
      for (int i = 0; i < kMockVocabSize; ++i)
        out[i] = -std::log(static_cast<double>(kMockVocabSize));
      return out;
    }
    case MockMode::kOracle: {
      auto it = answer_by_prompt_.find(prompt);
      if (it == answer_by_prompt_.end())
        throw std::runtime_error("oracle mock LM has no answer for the given prompt");
      return mock_causal_lm_score(prompt, {{it->second, 10.0}}, seed_);
    }
  }
  throw std::logic_error("unreachable");
}

// --- MockSeq2SeqScorer -------------------------------------------------------

MockSeq2SeqScorer::MockSeq2SeqScorer(std::string id, MockMode mode, std::uint64_t seed,
                                     double audio_limit_s,
                                     std::map<std::string, char> answer_by_item)
    : Seq2SeqScorerBackend({std::move(id), BackendKind::kSeq2SeqScorer, 4, audio_limit_s}),
      mode_(mode),
      seed_(seed),
      answer_by_item_(std::move(answer_by_item)) {}

std::vector<double> MockSeq2SeqScorer::score_tokens(const AudioPrompt& prompt,
                                                    const std::vector<std::string>& tokens) {
  const auto& limit = descriptor().audio_limit_s;
  if (limit && prompt.duration() > *limit + 1e-9)
    throw std::invalid_argument("audio exceeds the scorer's " + std::to_string(*limit) +
                                " s limit; truncate before scoring");
  std::vector<double> out;
  out.reserve(tokens.size());
  for (const std::string& token : tokens) {
    switch (mode_) {
      case MockMode::kUniform:
        out.push_back(-1.0);
        break;
      case MockMode::kHash: {
        std::uint64_t h = fnv1a(token, fnv1a(prompt.item_id, seed_ ^ kFnvOffset));
        out.push_back(-5.0 * hash_to_unit(h));
        break;
      }
      case MockMode::kOracle: {
        auto it = answer_by_item_.find(prompt.item_id);
        if (it == answer_by_item_.end())
          throw std::runtime_error("oracle scorer has no answer for item " + prompt.item_id);
        bool bears_letter = token.find(it->second) != std::string::npos &&
                            token.find('<') == std::string::npos;
        out.push_back(bears_letter ? -0.1 : -5.0);
        break;
      }
    }
  }
  return out;
}

// --- MockDualEncoder ---------------------------------------------------------

namespace {
constexpr std::size_t kEmbedDim = 8;

std::vector<double> hash_embedding(std::uint64_t h) {
  std::vector<double> v(kEmbedDim);
  for (std::size_t i = 0; i < kEmbedDim; ++i) {
    h = fnv1a_u64(i, h);
    v[i] = hash_to_unit(h) * 2.0 - 1.0;
  }
  return v;
}
}  // namespace

MockDualEncoder::MockDualEncoder(std::string id, MockMode mode, std::uint64_t seed,
                                 std::map<std::string, std::string> answer_text_by_item)
    : DualEncoderBackend({std::move(id), BackendKind::kDualEncoder, 4, std::nullopt}),
      mode_(mode),
      seed_(seed),
      answer_text_by_item_(std::move(answer_text_by_item)) {}

std::vector<double> MockDualEncoder::embed_text(const std::string& text) {
  if (mode_ == MockMode::kUniform) return std::vector<double>(kEmbedDim, 1.0);
  return hash_embedding(fnv1a(text, seed_ ^ kFnvOffset));
}

std::vector<double> MockDualEncoder::embed_audio(const AudioPrompt& prompt) {
  switch (mode_) {
    case MockMode::kUniform:
      return std::vector<double>(kEmbedDim, 1.0);
    case MockMode::kHash:
      return hash_embedding(fnv1a(prompt.item_id, seed_ ^ kFnvPrime));
    case MockMode::kOracle: {
      auto it = answer_text_by_item_.find(prompt.item_id);
      if (it == answer_text_by_item_.end())
        throw std::runtime_error("oracle dual encoder has no answer text for item " +
                                 prompt.item_id);
      return embed_text(it->second);
    }
  }
  throw std::logic_error("unreachable");
}

// --- MockLayeredEncoder ------------------------------------------------------

MockLayeredEncoder::MockLayeredEncoder(std::string id, std::uint64_t seed, std::size_t layers,
                                       std::size_t dims)
    : LayeredEncoderBackend({std::move(id), BackendKind::kLayeredEncoder, 4, std::nullopt}),
      seed_(seed),
      layers_(layers),
      dims_(dims) {}

LayerStack MockLayeredEncoder::encode(const AudioPrompt& prompt) {
  LayerStack stack;
  stack.item_id = prompt.item_id;
  stack.duration = prompt.duration();
  stack.layers = layers_;
  // 50 frames per second of audio, capped to keep desk-scale toys small.
  stack.frames = std::min<std::size_t>(std::max<std::size_t>(
      1, static_cast<std::size_t>(prompt.duration() * 50.0)), 64);
  stack.dims = dims_;
  stack.values.resize(stack.layers * stack.frames * stack.dims);
  std::uint64_t h = fnv1a(prompt.item_id, seed_ ^ kFnvOffset);
  for (double& v : stack.values) {
    h = fnv1a_u64(1, h);
    v = hash_to_unit(h) * 2.0 - 1.0;
  }
  return stack;
}

// --- MockUnitLm ----------------------------------------------------------------

MockUnitLm::MockUnitLm(std::string id, MockMode mode, std::uint64_t seed, int unit_vocab_size,
                       std::map<std::uint64_t, char> answer_by_prompt_hash)
    : UnitLmBackend({std::move(id), BackendKind::kUnitLm, 4, std::nullopt}),
      mode_(mode),
      seed_(seed),
      unit_vocab_size_(unit_vocab_size),
      answer_by_prompt_hash_(std::move(answer_by_prompt_hash)) {}

std::unordered_map<int, double> MockUnitLm::next_token_logprobs(const std::string& prompt) {
  switch (mode_) {
    case MockMode::kHash:
      return mock_causal_lm_score(prompt, {}, seed_);
    case MockMode::kUniform: {
      std::unordered_map<int, double> out;
      for (int i = 0; i < kMockVocabSize; ++i)
        out[i] = -std::log(static_cast<double>(kMockVocabSize));
      return out;
    }
    case MockMode::kOracle: {
      auto it = answer_by_prompt_hash_.find(fnv1a(prompt));
      if (it == answer_by_prompt_hash_.end())
        throw std::runtime_error("oracle unit LM has no answer for the given prompt");
      return mock_causal_lm_score(prompt, {{it->second, 10.0}}, seed_);
    }
  }
  throw std::logic_error("unreachable");
}

// --- MockPrefixLm ----------------------------------------------------------------

MockPrefixLm::MockPrefixLm(std::string id, MockMode mode, std::uint64_t seed,
                           std::map<std::string, char> answer_by_item)
    : PrefixLmBackend({std::move(id), BackendKind::kPrefixLm, 4, std::nullopt}),
      mode_(mode),
      seed_(seed),
      answer_by_item_(std::move(answer_by_item)) {}

std::unordered_map<int, double> MockPrefixLm::next_token_logprobs(const AudioPrompt& prompt,
                                                                  const std::string& prompt_text) {
  std::string key = prompt.item_id + "\x1f" + prompt_text;
  switch (mode_) {
    case MockMode::kHash:
      return mock_causal_lm_score(key, {}, seed_);
    case MockMode::kUniform: {
      std::unordered_map<int, double> out;
      for (int i = 0; i < kMockVocabSize; ++i)
        out[i] = -std::log(static_cast<double>(kMockVocabSize));
      return out;
    }
    case MockMode::kOracle: {
      auto it = answer_by_item_.find(prompt.item_id);
      if (it == answer_by_item_.end())
        throw std::runtime_error("oracle prefix LM has no answer for item " + prompt.item_id);
      return mock_causal_lm_score(key, {{it->second, 10.0}}, seed_);
    }
  }
  throw std::logic_error("unreachable");
}

// --- Registry --------------------------------------------------------------

void BackendRegistry::add(std::shared_ptr<Backend> backend) {
  const std::string& id = backend->id();
  if (!backends_.emplace(id, std::move(backend)).second)
    throw std::invalid_argument("duplicate backend id '" + id + "'");
}

std::vector<std::string> BackendRegistry::known_ids() const {
  std::vector<std::string> ids;
  ids.reserve(backends_.size());
  for (const auto& [id, _] : backends_) ids.push_back(id);
  return ids;
}

std::shared_ptr<Backend> BackendRegistry::lookup_base(const std::string& id) const {
  auto it = backends_.find(id);
  if (it == backends_.end()) {
    std::string known;
    for (const auto& [known_id, _] : backends_) {
      if (!known.empty()) known += ", ";
      known += known_id;
    }
    throw std::invalid_argument("unknown backend '" + id + "' (known: " +
                                (known.empty() ? "<none>" : known) + ")");
  }
  return it->second;
}

// --- HTTP TTS adapter --------------------------------------------------------

void validate_adapter_config(const AdapterConfig& config) {
  if (config.id.empty()) throw std::invalid_argument("adapter id must be nonempty");
  if (config.endpoint.empty())
    throw std::invalid_argument("adapter '" + config.id + "': endpoint must be nonempty");
  if (config.credential_env.empty())
    throw std::invalid_argument("adapter '" + config.id + "': credential_env must be nonempty");
  if (std::getenv(config.credential_env.c_str()) == nullptr)
    throw std::invalid_argument("adapter '" + config.id + "': environment variable " +
                                config.credential_env + " is not set");
  if (config.timeout_s <= 0)
    throw std::invalid_argument("adapter '" + config.id + "': timeout must be positive");
}

}  // namespace sqa
