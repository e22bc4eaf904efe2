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

#ifndef FOA_MIXER_HPP_
#define FOA_MIXER_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "foa/bank.hpp"
#include "foa/metrics.hpp"
#include "foa/rng.hpp"
#include "foa/signal.hpp"

namespace foa {

// Every emitted pair is 4.096 s at 16 kHz.
inline constexpr size_t kPairFrames = 65536;
inline constexpr double kPairSampleRate = 16000.0;
// Imported clips are loudness-normalized to this RMS before the random
// per-source gain is applied.
inline constexpr double kClipRmsDbfs = -25.0;
// A secondary source placed adversarially lands within this coordinate box
// around the target direction.
inline constexpr double kNearBoxDeg = 15.0;

struct Clip {
  std::string id;
  std::string description;  // free text, preserved into pair metadata
  std::vector<double> samples;
};

// A pool of mono 16 kHz clips with free-text descriptions. LoadDir imports
// every *.wav in a directory; a clip's description comes from a sibling
// <stem>.txt when present and falls back to the stem itself.
class ClipPool {
 public:
  static ClipPool LoadDir(const std::filesystem::path& dir);
  static ClipPool FromClips(std::vector<Clip> clips);

  size_t size() const { return clips_.size(); }
  const Clip& clip(size_t i) const { return clips_[i]; }

  // Number of distinct descriptions, compared case-insensitively.
  size_t DistinctDescriptions() const;

 private:
  std::vector<Clip> clips_;
};

struct SourceSpec {
  size_t clip_index = 0;
  double gain_db = 0.0;
  int geometry_index = 0;  // index into SceneGeometry::sources
  std::string description;
  bool is_target = false;
  bool silenced = false;
};

struct PairSourceMeta {
  double azimuth_deg = 0.0;
  double elevation_deg = 0.0;
  double distance_m = 0.0;
  double gain_db = 0.0;
  std::string clip_id;
  std::string description;
  std::string rir_ref;
  bool silenced = false;
  bool near_placed = false;
};

struct PairMeta {
  uint64_t seed = 0;
  int scene_index = 0;
  PairSourceMeta target;
  std::vector<PairSourceMeta> secondaries;
  bool close_secondary = false;  // >= 1 non-silenced secondary within 15 deg
  double mixture_rms = 0.0;
  double target_rms = 0.0;
  double residual_rms = 0.0;
  double sample_rate = kPairSampleRate;
  size_t num_samples = kPairFrames;

  std::vector<SecondaryInfo> SecondaryInfos() const;
};

struct MixturePair {
  FoaSignal mixture;
  FoaSignal target;
  FoaSignal residual;
  PairMeta meta;
};

// Convolves a mono 16 kHz clip with each RIR channel, truncated or
// zero-padded to kPairFrames samples and scaled by 10^(gain_db/20).
// Throws DataError when the RIR sample rate is not 16 kHz.
FoaSignal RenderSource(std::span<const double> clip, const AmbisonicRir& rir,
                       double gain_db);

// Crops or crossfade-loops a clip to exactly `frames` samples. Clips
// shorter than the window are looped with a 10 ms linear crossfade; longer
// clips are cropped at a random offset.
std::vector<double> PrepareClip(std::span<const double> samples, size_t frames,
                                Rng& rng);

// Renders every source through its RIR and forms target, residual and
// mixture = target + residual (sample-exact by construction). Throws
// DataError when the target render has zero energy.
MixturePair MixScene(const SceneGeometry& scene,
                     const std::vector<SourceSpec>& specs,
                     const std::vector<const AmbisonicRir*>& rirs,
                     const std::vector<std::vector<double>>& prepared_clips);

// Uniform draw from the +-15 deg azimuth/elevation box around the target,
// elevation clamped to the valid range.
Direction PlaceNearTarget(const Direction& target_dir, Rng& rng);

// Rotates a FOA segment with a known static direction of arrival to a
// fresh uniform direction; returns the rotated signal and the new direction.
std::pair<FoaSignal, Direction> RotateRemix(const FoaSignal& segment,
                                            const Direction& known_dir,
                                            Rng& rng);

struct PairConfig {
  double near_prob = 0.5;
  double silence_prob = 0.2;   // per secondary; the near secondary is exempt
  double gain_range_db = 10.0; // per-source gain uniform in +-gain_range_db
  SimConfig resim;             // simulation settings for near re-placement
};

// All randomized decisions of one pair, separated from audio rendering so
// placement statistics can be tested cheaply.
struct PlannedSource {
  size_t clip_index = 0;
  double gain_db = 0.0;
  bool silenced = false;
  bool near_placed = false;
  Direction direction;
  double distance_m = 0.0;
  Vec3 position{};
  std::string rir_ref;     // bank wav path, or "resim" for near placement
  size_t bank_entry = 0;   // valid when rir_ref is a bank path
};

struct PairPlan {
  uint64_t seed = 0;
  size_t scene_id = 0;
  std::vector<PlannedSource> sources;  // [0] is the target
  bool close_secondary = false;
  uint64_t resim_seed = 0;
};

// Samples a pair: picks an eligible 4-source scene from the bank, assigns
// clips and gains, silences secondaries, and with probability near_prob
// re-places one secondary inside the near box (choosing a clip whose
// description differs from the target's; that secondary is never
// silenced). Throws ConfigError when the pool has fewer than 4 distinct
// descriptions or the bank has no eligible scene.
PairPlan PlanPair(const PairConfig& cfg, const RirBank& bank,
                  const ClipPool& pool, uint64_t pair_seed);

// Renders a plan to audio. The near secondary's RIR is re-simulated at its
// planned position with the bank's simulation settings.
MixturePair RenderPair(const PairPlan& plan, const RirBank& bank,
                       const ClipPool& pool);

MixturePair BuildPair(const PairConfig& cfg, const RirBank& bank,
                      const ClipPool& pool, uint64_t pair_seed);

}  // namespace foa

#endif  // FOA_MIXER_HPP_
