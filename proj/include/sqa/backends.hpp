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

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "sqa/answer_select.hpp"
#include "sqa/audio.hpp"
#include "sqa/layer_probe.hpp"

namespace sqa {

enum class BackendKind {
  kTts,
  kAsr,
  kCausalLm,
  kSeq2SeqScorer,
  kDualEncoder,
  kLayeredEncoder,
  kUnitLm,
  kPrefixLm,
};

std::string to_string(BackendKind kind);

struct BackendDescriptor {
  std::string id;
  BackendKind kind = BackendKind::kTts;
  int max_concurrency = 1;
  std::optional<double> audio_limit_s;  // required for seq2seq scorers
};

class Backend {
 public:
  explicit Backend(BackendDescriptor desc) : desc_(std::move(desc)) {}
  virtual ~Backend() = default;
  const BackendDescriptor& descriptor() const { return desc_; }
  const std::string& id() const { return desc_.id; }

 private:
  BackendDescriptor desc_;
};

class TtsBackend : public Backend {
 public:
  using Backend::Backend;
  virtual std::vector<float> synthesize(const std::string& text, int voice) = 0;
  virtual int n_voices() const = 0;
};

class AsrBackend : public Backend {
 public:
  using Backend::Backend;
  virtual std::string transcribe(const AudioPrompt& prompt) = 0;
};

class CausalLmBackend : public Backend {
 public:
  using Backend::Backend;
  virtual std::unordered_map<int, double> next_token_logprobs(const std::string& prompt) = 0;
  virtual LetterTokenMap letter_map() const = 0;
};

// Scores a target token sequence conditioned on audio; one log-prob per
// token. Rejects audio longer than the declared limit.
class Seq2SeqScorerBackend : public Backend {
 public:
  using Backend::Backend;
  virtual std::vector<double> score_tokens(const AudioPrompt& prompt,
                                           const std::vector<std::string>& tokens) = 0;
};

class DualEncoderBackend : public Backend {
 public:
  using Backend::Backend;
  virtual std::vector<double> embed_audio(const AudioPrompt& prompt) = 0;
  virtual std::vector<double> embed_text(const std::string& text) = 0;
};

class LayeredEncoderBackend : public Backend {
 public:
  using Backend::Backend;
  virtual LayerStack encode(const AudioPrompt& prompt) = 0;
};

class UnitLmBackend : public Backend {
 public:
  using Backend::Backend;
  virtual std::unordered_map<int, double> next_token_logprobs(const std::string& prompt) = 0;
  virtual LetterTokenMap letter_map() const = 0;
  virtual int unit_vocab_size() const = 0;
};

// Same selection contract as the unit LM but conditioned on the audio
// directly (learned prefix instead of discrete units).
class PrefixLmBackend : public Backend {
 public:
  using Backend::Backend;
  virtual std::unordered_map<int, double> next_token_logprobs(const AudioPrompt& prompt,
                                                              const std::string& prompt_text) = 0;
  virtual LetterTokenMap letter_map() const = 0;
};

// ---------------------------------------------------------------------------
// Mocks. All are pure functions of their inputs and the declared seed.
// ---------------------------------------------------------------------------

// hash: deterministic pseudo-random behavior; oracle: favors the correct
// letter (mocks are constructed with the answer key); uniform: identical
// scores for all letters, so selection always tie-breaks to A.
enum class MockMode { kHash, kOracle, kUniform };

MockMode mock_mode_from_string(const std::string& s);

// Shared token vocabulary for the mock LMs: ids 0-3 are "A".."D", 4-7 are
// " A".." D", 8-15 are filler tokens.
LetterTokenMap default_letter_map();
inline constexpr int kMockVocabSize = 16;

// Deterministic waveform from a hash of (text, voice);
// duration = max(0.5 s, chars / 15 s).
class MockTts final : public TtsBackend {
 public:
  MockTts(std::string id, std::uint64_t seed, double chars_per_second = 15.0);
  std::vector<float> synthesize(const std::string& text, int voice) override;
  int n_voices() const override { return 6; }
  int call_count() const { return calls_; }

 private:
  std::uint64_t seed_;
  double chars_per_second_;
  int calls_ = 0;
};

// Returns the stored reference text; with drop_period = k > 0, every k-th
// word is deleted.
class MockAsr final : public AsrBackend {
 public:
  MockAsr(std::string id, std::map<std::string, std::string> reference_by_item,
          int drop_period = 0);
  std::string transcribe(const AudioPrompt& prompt) override;

 private:
  std::map<std::string, std::string> reference_by_item_;
  int drop_period_;
};

// Log-softmax over the fixed mock vocabulary; letter token scores are
// hash(prompt, seed) noise plus a per-letter bias.
std::unordered_map<int, double> mock_causal_lm_score(const std::string& prompt,
                                                     const std::map<char, double>& bias,
                                                     std::uint64_t seed);

class MockCausalLm final : public CausalLmBackend {
 public:
  MockCausalLm(std::string id, MockMode mode, std::uint64_t seed,
               std::map<std::string, char> answer_by_prompt = {},
               std::map<char, double> bias = {});
  std::unordered_map<int, double> next_token_logprobs(const std::string& prompt) override;
  LetterTokenMap letter_map() const override { return default_letter_map(); }

 private:
  MockMode mode_;
  std::uint64_t seed_;
  std::map<std::string, char> answer_by_prompt_;
  std::map<char, double> bias_;
};

class MockSeq2SeqScorer final : public Seq2SeqScorerBackend {
 public:
  MockSeq2SeqScorer(std::string id, MockMode mode, std::uint64_t seed, double audio_limit_s,
                    std::map<std::string, char> answer_by_item = {});
  std::vector<double> score_tokens(const AudioPrompt& prompt,
                                   const std::vector<std::string>& tokens) override;

 private:
  MockMode mode_;
  std::uint64_t seed_;
  std::map<std::string, char> answer_by_item_;
};

class MockDualEncoder final : public DualEncoderBackend {
 public:
  MockDualEncoder(std::string id, MockMode mode, std::uint64_t seed,
                  std::map<std::string, std::string> answer_text_by_item = {});
  std::vector<double> embed_audio(const AudioPrompt& prompt) override;
  std::vector<double> embed_text(const std::string& text) override;

 private:
  MockMode mode_;
  std::uint64_t seed_;
  std::map<std::string, std::string> answer_text_by_item_;
};

class MockLayeredEncoder final : public LayeredEncoderBackend {
 public:
  MockLayeredEncoder(std::string id, std::uint64_t seed, std::size_t layers = 4,
                     std::size_t dims = 8);
  LayerStack encode(const AudioPrompt& prompt) override;

 private:
  std::uint64_t seed_;
  std::size_t layers_, dims_;
};

class MockUnitLm final : public UnitLmBackend {
 public:
  MockUnitLm(std::string id, MockMode mode, std::uint64_t seed, int unit_vocab_size,
             std::map<std::uint64_t, char> answer_by_prompt_hash = {});
  std::unordered_map<int, double> next_token_logprobs(const std::string& prompt) override;
  LetterTokenMap letter_map() const override { return default_letter_map(); }
  int unit_vocab_size() const override { return unit_vocab_size_; }

 private:
  MockMode mode_;
  std::uint64_t seed_;
  int unit_vocab_size_;
  std::map<std::uint64_t, char> answer_by_prompt_hash_;
};

class MockPrefixLm final : public PrefixLmBackend {
 public:
  MockPrefixLm(std::string id, MockMode mode, std::uint64_t seed,
               std::map<std::string, char> answer_by_item = {});
  std::unordered_map<int, double> next_token_logprobs(const AudioPrompt& prompt,
                                                      const std::string& prompt_text) override;
  LetterTokenMap letter_map() const override { return default_letter_map(); }

 private:
  MockMode mode_;
  std::uint64_t seed_;
  std::map<std::string, char> answer_by_item_;
};

// ---------------------------------------------------------------------------
// Registry
// ---------------------------------------------------------------------------

class BackendRegistry {
 public:
  void add(std::shared_ptr<Backend> backend);

  // Throws, listing the known ids, when the id is unknown or the kind does
  // not match T.
  template <class T>
  std::shared_ptr<T> lookup(const std::string& id) const {
    auto base = lookup_base(id);
    auto typed = std::dynamic_pointer_cast<T>(base);
    if (!typed)
      throw std::invalid_argument("backend '" + id + "' has kind " +
                                  to_string(base->descriptor().kind) +
                                  ", which does not satisfy the requested contract");
    return typed;
  }

  bool contains(const std::string& id) const { return backends_.count(id) > 0; }
  std::vector<std::string> known_ids() const;

 private:
  std::shared_ptr<Backend> lookup_base(const std::string& id) const;
  std::map<std::string, std::shared_ptr<Backend>> backends_;
};

// ---------------------------------------------------------------------------
// Real-service adapter configuration (out of the acceptance path).
// Credentials come from the named environment variable, never from files.
// ---------------------------------------------------------------------------

struct AdapterConfig {
  std::string id;
  std::string endpoint;
  std::string credential_env;
  double timeout_s = 30.0;
  int retries = 3;
};

// Validates the configuration (endpoint set, credential env var present)
// before any network activity.
void validate_adapter_config(const AdapterConfig& config);

// HTTP TTS client: POST {"text","voice"} -> PCM-16 WAV body. Responses are
// cached by (text, voice); transient failures retry with exponential
// backoff up to config.retries.
std::shared_ptr<TtsBackend> make_http_tts_adapter(const AdapterConfig& config);

}  // namespace sqa
