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

#ifndef FOA_PIPELINE_HPP_
#define FOA_PIPELINE_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "foa/bank.hpp"
#include "foa/extract.hpp"
#include "foa/metrics.hpp"
#include "foa/mixer.hpp"

namespace foa {

// ---- RIR bank generation ----------------------------------------------

struct RirGenConfig {
  std::filesystem::path out_dir;
  int count = 0;  // number of RIR wavs
  uint64_t seed = 0;
  SimConfig sim;
  int sources_per_scene = 4;
  int threads = 0;  // 0 = hardware concurrency
};

// Generates `count` RIRs grouped into scenes of sources_per_scene sources
// (the last scene may be partial), writes wav + sidecar per RIR and a bank
// manifest. Fully determined by (seed, config). Returns the loaded bank.
RirBank GenRirs(const RirGenConfig& cfg);

// ---- Mixture dataset generation ----------------------------------------

struct MixGenConfig {
  std::filesystem::path rir_dir;
  std::filesystem::path clips_dir;
  std::filesystem::path out_dir;
  int count = 0;
  uint64_t seed = 0;
  PairConfig pair;
  int threads = 0;
};

struct DatasetStats {
  size_t pairs = 0;
  size_t close_secondary_pairs = 0;
  size_t near_placed_pairs = 0;

  double CloseFraction() const {
    return pairs == 0 ? 0.0
                      : static_cast<double>(close_secondary_pairs) /
                            static_cast<double>(pairs);
  }
};

// Renders `count` pairs into out_dir/pairs/pair_<index>/ and writes a
// dataset manifest with bucket statistics. (seed, config, inputs) fully
// determine every emitted byte.
DatasetStats GenMixtures(const MixGenConfig& cfg);

// ---- Dataset access and evaluation --------------------------------------

struct LoadedPair {
  FoaSignal mixture;
  FoaSignal target;
  PairMeta meta;
};

PairMeta PairMetaFromJsonFile(const std::filesystem::path& path);
void WritePairMetaJson(const std::filesystem::path& path, const PairMeta& meta);

// Reads one pair directory and verifies its integrity: finite samples,
// expected shape, and the stored mixture/target/residual RMS values within
// 1e-6 relative (the on-disk form of the mixture = target + residual
// identity). Throws DataError on violation.
LoadedPair LoadPair(const std::filesystem::path& pair_dir);

struct EvalConfig {
  std::filesystem::path pairs_dir;
  std::vector<ExtractorAlgo> algos = AllAlgos();
  double loudness_spread_deg = 60.0;
  double loudness_out_gain = 0.0;
  int loudness_grid_size = 36;
  int threads = 0;
};

// Runs every algorithm over every pair, scoring SI-SDRi per channel against
// the stored target. Corrupt pairs are skipped (and counted); evaluation
// fails only when no pair survives.
EvalReport EvaluateDataset(const EvalConfig& cfg);

std::string ReportToJson(const EvalReport& report);
void WriteReportJson(const std::filesystem::path& path, const EvalReport& report);

}  // namespace foa

#endif  // FOA_PIPELINE_HPP_
