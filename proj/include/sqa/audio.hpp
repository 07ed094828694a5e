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

#include <filesystem>
#include <string>
#include <vector>

namespace sqa {

inline constexpr int kSampleRate = 16000;

// A synthesized prompt: 16 kHz mono waveform plus origin metadata.
struct AudioPrompt {
  std::string item_id;
  std::string task;
  std::vector<float> samples;
  int sample_rate = kSampleRate;
  int voice = 0;

  double duration() const {
    return static_cast<double>(samples.size()) / static_cast<double>(sample_rate);
  }
};

// PCM-16 mono WAV. Amplitudes are clipped to [-1, 1] before quantization.
void write_wav(const std::filesystem::path& path, const std::vector<float>& samples,
               int sample_rate);
std::vector<float> read_wav(const std::filesystem::path& path, int* sample_rate = nullptr);

}  // namespace sqa
