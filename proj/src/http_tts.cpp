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

// HTTP adapter for a real TTS service. Not exercised by the test suite;
// it shares the TtsBackend contract with the mocks, so swapping it in is a
// configuration change only.

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <stdexcept>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "sqa/backends.hpp"
#include "sqa/hash.hpp"

namespace sqa {
namespace {

class HttpTts final : public TtsBackend {
 public:
  explicit HttpTts(AdapterConfig config)
      : TtsBackend({config.id, BackendKind::kTts, 2, std::nullopt}), config_(std::move(config)) {
    validate_adapter_config(config_);
    api_key_ = std::getenv(config_.credential_env.c_str());
  }

  std::vector<float> synthesize(const std::string& text, int voice) override {
    if (text.empty()) throw std::invalid_argument("cannot synthesize empty text");
    std::uint64_t key = fnv1a_u64(static_cast<std::uint64_t>(voice), fnv1a(text));
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;

    httplib::Client client(config_.endpoint);
    client.set_read_timeout(std::chrono::duration<double>(config_.timeout_s));
    client.set_connection_timeout(std::chrono::duration<double>(config_.timeout_s));

    nlohmann::json body{{"text", text}, {"voice", voice}};
    httplib::Headers headers{{"Authorization", "Bearer " + api_key_}};

    std::string last_error;
    for (int attempt = 0; attempt <= config_.retries; ++attempt) {
      if (attempt > 0)
        std::this_thread::sleep_for(std::chrono::milliseconds(200 << (attempt - 1)));
      auto res = client.Post("/synthesize", headers, body.dump(), "application/json");
      if (!res) {
        last_error = "transport error: " + httplib::to_string(res.error());
        continue;
      }
      if (res->status >= 500) {
        last_error = "server error: HTTP " + std::to_string(res->status);
        continue;
      }
      if (res->status != 200)
        throw std::runtime_error("tts adapter '" + id() + "': HTTP " +
                                 std::to_string(res->status));
      std::vector<float> samples = decode_pcm16(res->body);
      cache_.emplace(key, samples);
      return samples;
    }
    throw std::runtime_error("tts adapter '" + id() + "': retries exhausted (" + last_error + ")");
  }

  int n_voices() const override { return 6; }

 private:
  static std::vector<float> decode_pcm16(const std::string& body) {
    // Response body is a PCM-16 mono WAV; skip the 44-byte canonical header.
    if (body.size() < 44) throw std::runtime_error("tts adapter: response too short for WAV");
    std::vector<float> samples((body.size() - 44) / 2);
    for (std::size_t i = 0; i < samples.size(); ++i) {
      auto lo = static_cast<unsigned char>(body[44 + 2 * i]);
      auto hi = static_cast<unsigned char>(body[44 + 2 * i + 1]);
      auto q = static_cast<std::int16_t>(lo | (hi << 8));
      samples[i] = static_cast<float>(q) / 32767.0f;
    }
    return samples;
  }

  AdapterConfig config_;
  std::string api_key_;
  std::map<std::uint64_t, std::vector<float>> cache_;
};

}  // namespace

std::shared_ptr<TtsBackend> make_http_tts_adapter(const AdapterConfig& config) {
  return std::make_shared<HttpTts>(config);
}

}  // namespace sqa
