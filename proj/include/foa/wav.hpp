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

#ifndef FOA_WAV_HPP_
#define FOA_WAV_HPP_

#include <filesystem>
#include <vector>

#include "foa/signal.hpp"

namespace foa {

struct WavData {
  std::vector<std::vector<double>> channels;
  double sample_rate = 0.0;

  size_t frames() const { return channels.empty() ? 0 : channels[0].size(); }
};

// Reads RIFF/WAVE with 16-bit PCM, 32-bit PCM, 32/64-bit float, or the
// extensible wrapper around those. Samples are scaled to [-1, 1] doubles.
WavData ReadWav(const std::filesystem::path& path);

// Writes 32-bit float WAVE (format tag 3).
void WriteWavFloat32(const std::filesystem::path& path, const WavData& data);

// 4-channel convenience wrappers used for RIRs, mixtures and targets.
FoaSignal ReadFoaWav(const std::filesystem::path& path);
void WriteFoaWav(const std::filesystem::path& path, const FoaSignal& sig);

}  // namespace foa

#endif  // FOA_WAV_HPP_
