/*
Copyright 2026 The Foakit Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS-IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include "foa/wav.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>

#include "foa/error.hpp"

namespace foa {

namespace {

static_assert(std::endian::native == std::endian::little,
              "wav i/o assumes a little-endian host");

constexpr uint16_t kFormatPcm = 1;
constexpr uint16_t kFormatFloat = 3;
constexpr uint16_t kFormatExtensible = 0xFFFE;

struct FmtChunk {
  uint16_t format = 0;
  uint16_t channels = 0;
  uint32_t sample_rate = 0;
  uint16_t bits = 0;
};

template <typename T>
T ReadLE(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  return v;
}

template <typename T>
void WriteLE(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

}  // namespace

WavData ReadWav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open wav file: " + path.string());

  char riff[4], wave[4];
  in.read(riff, 4);
  ReadLE<uint32_t>(in);  // riff size
  in.read(wave, 4);
  if (!in || std::memcmp(riff, "RIFF", 4) != 0 ||
      std::memcmp(wave, "WAVE", 4) != 0) {
    throw DataError("not a RIFF/WAVE file: " + path.string());
  }

  FmtChunk fmt;
  std::vector<char> payload;
  bool have_fmt = false, have_data = false;
  while (in && !(have_fmt && have_data)) {
    char id[4];
    in.read(id, 4);
    const uint32_t size = ReadLE<uint32_t>(in);
    if (!in) break;
    if (std::memcmp(id, "fmt ", 4) == 0) {
      fmt.format = ReadLE<uint16_t>(in);
      fmt.channels = ReadLE<uint16_t>(in);
      fmt.sample_rate = ReadLE<uint32_t>(in);
      ReadLE<uint32_t>(in);  // byte rate
      ReadLE<uint16_t>(in);  // block align
      fmt.bits = ReadLE<uint16_t>(in);
      uint32_t consumed = 16;
      if (fmt.format == kFormatExtensible && size >= 26) {
        ReadLE<uint16_t>(in);                      // cbSize
        ReadLE<uint16_t>(in);                      // valid bits
        ReadLE<uint32_t>(in);                      // channel mask
        fmt.format = ReadLE<uint16_t>(in);         // sub-format GUID head
        char guid_tail[14];
        in.read(guid_tail, 14);
        consumed = 26 + 14;
      }
      if (size > consumed) in.ignore(size - consumed);
      have_fmt = true;
    } else if (std::memcmp(id, "data", 4) == 0) {
      payload.resize(size);
      in.read(payload.data(), size);
      if (static_cast<uint32_t>(in.gcount()) != size) {
        throw DataError("truncated wav data chunk: " + path.string());
      }
      have_data = true;
    } else {
      in.ignore(size + (size & 1));  // chunks are word-aligned
    }
  }
  if (!have_fmt || !have_data) {
    throw DataError("missing fmt/data chunk: " + path.string());
  }
  if (fmt.channels == 0) throw DataError("wav with zero channels");

  const size_t bytes_per_sample = fmt.bits / 8;
  if (bytes_per_sample == 0 ||
      payload.size() % (bytes_per_sample * fmt.channels) != 0) {
    throw DataError("wav data size mismatch: " + path.string());
  }
  const size_t frames = payload.size() / (bytes_per_sample * fmt.channels);

  WavData out;
  out.sample_rate = fmt.sample_rate;
  out.channels.assign(fmt.channels, std::vector<double>(frames));

  const char* p = payload.data();
  auto fail_format = [&]() -> double {
    throw DataError("unsupported wav sample format (tag " +
                    std::to_string(fmt.format) + ", " +
                    std::to_string(fmt.bits) + " bits): " + path.string());
  };
  for (size_t i = 0; i < frames; ++i) {
    for (uint16_t c = 0; c < fmt.channels; ++c) {
      double v = 0.0;
      if (fmt.format == kFormatPcm && fmt.bits == 16) {
        int16_t s;
        std::memcpy(&s, p, 2);
        v = static_cast<double>(s) / 32768.0;
      } else if (fmt.format == kFormatPcm && fmt.bits == 32) {
        int32_t s;
        std::memcpy(&s, p, 4);
        v = static_cast<double>(s) / 2147483648.0;
      } else if (fmt.format == kFormatFloat && fmt.bits == 32) {
        float s;
        std::memcpy(&s, p, 4);
        v = s;
      } else if (fmt.format == kFormatFloat && fmt.bits == 64) {
        double s;
        std::memcpy(&s, p, 8);
        v = s;
      } else {
        v = fail_format();
      }
      out.channels[c][i] = v;
      p += bytes_per_sample;
    }
  }
  return out;
}

void WriteWavFloat32(const std::filesystem::path& path, const WavData& data) {
  if (data.channels.empty()) throw ConfigError("WriteWavFloat32: no channels");
  const size_t frames = data.frames();
  for (const auto& c : data.channels) {
    if (c.size() != frames) {
      throw ConfigError("WriteWavFloat32: channel length mismatch");
    }
  }
  const uint16_t channels = static_cast<uint16_t>(data.channels.size());
  const uint32_t data_bytes = static_cast<uint32_t>(frames * channels * 4);

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot create wav file: " + path.string());

  out.write("RIFF", 4);
  WriteLE<uint32_t>(out, 36 + data_bytes);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  WriteLE<uint32_t>(out, 16);
  WriteLE<uint16_t>(out, kFormatFloat);
  WriteLE<uint16_t>(out, channels);
  WriteLE<uint32_t>(out, static_cast<uint32_t>(data.sample_rate));
  WriteLE<uint32_t>(out, static_cast<uint32_t>(data.sample_rate) * channels * 4);
  WriteLE<uint16_t>(out, channels * 4);
  WriteLE<uint16_t>(out, 32);
  out.write("data", 4);
  WriteLE<uint32_t>(out, data_bytes);

  std::vector<float> frame(channels);
  for (size_t i = 0; i < frames; ++i) {
    for (uint16_t c = 0; c < channels; ++c) {
      frame[c] = static_cast<float>(data.channels[c][i]);
    }
    out.write(reinterpret_cast<const char*>(frame.data()), channels * 4);
  }
  if (!out) throw IoError("short write: " + path.string());
}

FoaSignal ReadFoaWav(const std::filesystem::path& path) {
  WavData w = ReadWav(path);
  if (w.channels.size() != 4) {
    throw DataError("expected a 4-channel wav, got " +
                    std::to_string(w.channels.size()) + ": " + path.string());
  }
  FoaSignal sig(w.frames(), w.sample_rate);
  for (int c = 0; c < 4; ++c) sig.channel(c) = std::move(w.channels[c]);
  sig.CheckFinite(path.string().c_str());
  return sig;
}

void WriteFoaWav(const std::filesystem::path& path, const FoaSignal& sig) {
  WavData w;
  w.sample_rate = sig.sample_rate();
  w.channels.reserve(4);
  for (int c = 0; c < 4; ++c) w.channels.push_back(sig.channel(c));
  WriteWavFloat32(path, w);
}

}  // namespace foa
