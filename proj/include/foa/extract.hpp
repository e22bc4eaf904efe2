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

#ifndef FOA_EXTRACT_HPP_
#define FOA_EXTRACT_HPP_

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "foa/sh.hpp"
#include "foa/signal.hpp"

namespace foa {

// Signal-processing target extractors. All of them are linear and
// memoryless: a per-sample matrix for the loudness transform, a steered
// beam followed by re-encoding for the beamformers, and a pass-through
// used as the 0 dB SI-SDRi reference.
enum class ExtractorAlgo { kIdentity, kLoudnessMod, kMaxDiBap, kMaxReBap };

// Canonical CLI names: identity, loudness, max-di, max-re.
const char* AlgoName(ExtractorAlgo algo);
std::optional<ExtractorAlgo> AlgoFromName(std::string_view name);
std::vector<ExtractorAlgo> AllAlgos();

struct ExtractorConfig {
  ExtractorAlgo algorithm = ExtractorAlgo::kLoudnessMod;
  Direction target_dir;
  // Full angular width of the preserved spherical cap (the kept region is
  // within cap_spread_deg / 2 of the target direction).
  double cap_spread_deg = 60.0;
  double out_gain = 0.0;  // linear gain outside the cap
  int grid_size = 36;     // sampling directions for the loudness transform
};

struct LoudnessMatrix {
  std::array<double, 16> m{};  // row-major 4x4
};

// Near-uniform direction grid (Fibonacci lattice).
std::vector<Direction> FibonacciGrid(int n);

// Directional loudness transform M = pinv(Yg) * diag(g) * Yg, where row i
// of Yg is the SH evaluation of grid direction i and g_i is 1 inside the
// cap and out_gain outside. Throws ConfigError when the grid is
// rank-deficient for FOA.
LoudnessMatrix BuildLoudnessMatrix(const Direction& target_dir,
                                   double cap_spread_deg, double out_gain,
                                   std::span<const Direction> grid);

// Per-sample multiplication by the loudness matrix; an exact identity
// matrix returns a bit-identical signal.
FoaSignal ApplyLoudnessMod(const FoaSignal& x, const LoudnessMatrix& m);

enum class BeamKind { kMaxDi, kMaxRe };

// First-order beamformer weights in ACN order, distortionless toward the
// steering direction (w . ShEval(steer) = 1).
//   max-DI: (g0, g1) = (1/4, 3/4), null at arccos(-1/3) ~ 109.47 deg
//   max-rE: (g0, g1) = (1, sqrt(3)) / (1 + sqrt(3)), null at ~125.26 deg
std::array<double, 4> BeamWeights(BeamKind kind, const Direction& steer);

// Beamform toward the target, then re-encode the mono estimate at the
// target direction. Output channels are exact scalar multiples of the beam
// signal.
FoaSignal BeamformAndProject(const FoaSignal& x, BeamKind kind,
                             const Direction& target_dir);

// Dispatches to the configured algorithm; output length equals input length.
FoaSignal RunExtractor(const ExtractorConfig& cfg, const FoaSignal& x);

}  // namespace foa

#endif  // FOA_EXTRACT_HPP_
