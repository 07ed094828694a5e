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

#include "sqa/audio.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace sqa {
namespace {

void put_u32(std::ofstream& out, std::uint32_t v) {
  char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
               static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
  out.write(b, 4);
}

void put_u16(std::ofstream& out, std::uint16_t v) {
  char b[2] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff)};
  out.write(b, 2);
}

std::uint32_t get_u32(std::ifstream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  return b[0] | (b[1] << 8) | (b[2] << 16) | (std::uint32_t(b[3]) << 24);
}

std::uint16_t get_u16(std::ifstream& in) {
  unsigned char b[2];
  in.read(reinterpret_cast<char*>(b), 2);
  return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
}

}  // namespace

void write_wav(const std::filesystem::path& path, const std::vector<float>& samples,
               int sample_rate) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());

  const std::uint32_t data_bytes = static_cast<std::uint32_t>(samples.size() * 2);
  out.write("RIFF", 4);
  put_u32(out, 36 + data_bytes);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  put_u32(out, 16);
  put_u16(out, 1);  // PCM
  put_u16(out, 1);  // mono
  put_u32(out, static_cast<std::uint32_t>(sample_rate));
  put_u32(out, static_cast<std::uint32_t>(sample_rate * 2));
  put_u16(out, 2);
  put_u16(out, 16);
  out.write("data", 4);
  put_u32(out, data_bytes);
  for (float s : samples) {
    float clipped = std::clamp(s, -1.0f, 1.0f);
    auto q = static_cast<std::int16_t>(std::lround(clipped * 32767.0f));
    char b[2] = {static_cast<char>(q & 0xff), static_cast<char>((q >> 8) & 0xff)};
    out.write(b, 2);
  }
}

std::vector<float> read_wav(const std::filesystem::path& path, int* sample_rate) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());

  char tag[4];
  in.read(tag, 4);
  if (std::memcmp(tag, "RIFF", 4) != 0) throw std::runtime_error(path.string() + ": not RIFF");
  get_u32(in);
  in.read(tag, 4);
  if (std::memcmp(tag, "WAVE", 4) != 0) throw std::runtime_error(path.string() + ": not WAVE");

  int rate = 0;
  std::vector<float> samples;
  while (in.read(tag, 4)) {
    std::uint32_t size = get_u32(in);
    if (std::memcmp(tag, "fmt ", 4) == 0) {
      std::uint16_t fmt = get_u16(in);
      std::uint16_t channels = get_u16(in);
      rate = static_cast<int>(get_u32(in));
      get_u32(in);
      get_u16(in);
      std::uint16_t bits = get_u16(in);
      if (fmt != 1 || channels != 1 || bits != 16)
        throw std::runtime_error(path.string() + ": expected PCM-16 mono");
      in.ignore(size - 16);
    } else if (std::memcmp(tag, "data", 4) == 0) {
      samples.resize(size / 2);
      for (auto& s : samples) {
        std::int16_t q = static_cast<std::int16_t>(get_u16(in));
        s = static_cast<float>(q) / 32767.0f;
      }
      break;
    } else {
      in.ignore(size);
    }
  }
  if (sample_rate) *sample_rate = rate;
  return samples;
}

}  // namespace sqa
