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

#ifndef FOA_BANK_HPP_
#define FOA_BANK_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "foa/room.hpp"

namespace foa {

inline constexpr int kSchemaVersion = 1;

// One simulated RIR in a bank: a 4-channel float WAV plus a JSON sidecar
// carrying the full scene description.
struct RirBankEntry {
  int index = 0;
  int scene_index = 0;
  int source_index = 0;  // which scene source this RIR belongs to
  std::string wav;       // path relative to the bank directory
  std::string sidecar;
};

// An on-disk bank of ambisonic RIRs grouped into scenes; every scene shares
// one room, receiver and source set, with sources[0] being the target.
class RirBank {
 public:
  static RirBank Load(const std::filesystem::path& dir);

  const std::filesystem::path& dir() const { return dir_; }
  const SimConfig& sim() const { return sim_; }
  uint64_t seed() const { return seed_; }
  int sources_per_scene() const { return sources_per_scene_; }

  const std::vector<RirBankEntry>& entries() const { return entries_; }
  size_t num_scenes() const { return scenes_.size(); }
  const std::vector<size_t>& scene_entries(size_t scene) const {
    return scenes_[scene];
  }
  const SceneGeometry& scene_geometry(size_t scene) const {
    return geometry_[scene];
  }
  uint64_t scene_seed(size_t scene) const { return scene_seeds_[scene]; }

  // Scenes that have simulated RIRs for at least min_sources sources.
  std::vector<size_t> EligibleScenes(int min_sources) const;

  AmbisonicRir LoadRir(size_t entry_index) const;

  // In-memory construction, used by the generator before the manifest hits
  // disk and by tests.
  RirBank(std::filesystem::path dir, SimConfig sim, uint64_t seed,
          int sources_per_scene, std::vector<RirBankEntry> entries,
          std::vector<SceneGeometry> geometry,
          std::vector<uint64_t> scene_seeds);

 private:
  RirBank() = default;

  std::filesystem::path dir_;
  SimConfig sim_;
  uint64_t seed_ = 0;
  int sources_per_scene_ = 4;
  std::vector<RirBankEntry> entries_;
  std::vector<std::vector<size_t>> scenes_;  // scene -> entry indices
  std::vector<SceneGeometry> geometry_;
  std::vector<uint64_t> scene_seeds_;

  void BuildSceneIndex();
};

}  // namespace foa

#endif  // FOA_BANK_HPP_
