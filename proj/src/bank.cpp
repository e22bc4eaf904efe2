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

#include "foa/bank.hpp"

#include <fstream>

#include <json.hpp>

#include "foa/error.hpp"
#include "foa/wav.hpp"

namespace foa {

using nlohmann::json;

namespace {

json LoadJsonFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DataError("bad json in " + path.string() + ": " + e.what());
  }
  return j;
}

SimConfig SimFromJson(const json& j) {
  SimConfig sim;
  sim.fs = j.at("fs").get<double>();
  sim.max_order = j.at("max_order").get<int>();
  sim.jitter_m = j.at("jitter_m").get<double>();
  sim.rir_seconds = j.at("rir_seconds").get<double>();
  return sim;
}

SceneGeometry SceneFromJson(const json& j) {
  SceneGeometry scene;
  const auto& room = j.at("room");
  for (int a = 0; a < 3; ++a) scene.room.dims[a] = room.at("dims")[a].get<double>();
  for (int s = 0; s < 6; ++s) {
    scene.room.surface_materials[s] = room.at("materials")[s].get<std::string>();
  }
  for (int a = 0; a < 3; ++a) scene.receiver[a] = j.at("receiver")[a].get<double>();
  for (const auto& src : j.at("sources")) {
    SceneSource s;
    for (int a = 0; a < 3; ++a) s.position[a] = src.at("position")[a].get<double>();
    s.distance = src.at("distance_m").get<double>();
    s.direction = Direction::FromDegrees(src.at("azimuth_deg").get<double>(),
                                         src.at("elevation_deg").get<double>());
    scene.sources.push_back(s);
  }
  return scene;
}

}  // namespace

RirBank::RirBank(std::filesystem::path dir, SimConfig sim, uint64_t seed,
                 int sources_per_scene, std::vector<RirBankEntry> entries,
                 std::vector<SceneGeometry> geometry,
                 std::vector<uint64_t> scene_seeds)
    : dir_(std::move(dir)),
      sim_(sim),
      seed_(seed),
      sources_per_scene_(sources_per_scene),
      entries_(std::move(entries)),
      geometry_(std::move(geometry)),
      scene_seeds_(std::move(scene_seeds)) {
  BuildSceneIndex();
}

void RirBank::BuildSceneIndex() {
  scenes_.assign(geometry_.size(), {});
  for (size_t i = 0; i < entries_.size(); ++i) {
    const int scene = entries_[i].scene_index;
    if (scene < 0 || static_cast<size_t>(scene) >= scenes_.size()) {
      throw DataError("rir bank entry references missing scene " +
                      std::to_string(scene));
    }
    scenes_[static_cast<size_t>(scene)].push_back(i);
  }
}

RirBank RirBank::Load(const std::filesystem::path& dir) {
  const json manifest = LoadJsonFile(dir / "manifest.json");
  if (manifest.value("kind", "") != "rir_bank") {
    throw DataError("manifest is not a rir_bank: " + dir.string());
  }

  RirBank bank;
  bank.dir_ = dir;
  bank.seed_ = manifest.at("seed").get<uint64_t>();
  bank.sources_per_scene_ = manifest.at("sources_per_scene").get<int>();
  bank.sim_ = SimFromJson(manifest.at("sim"));

  int max_scene = -1;
  for (const auto& e : manifest.at("entries")) {
    RirBankEntry entry;
    entry.index = e.at("index").get<int>();
    entry.scene_index = e.at("scene_index").get<int>();
    entry.source_index = e.at("source_index").get<int>();
    entry.wav = e.at("wav").get<std::string>();
    entry.sidecar = e.at("sidecar").get<std::string>();
    max_scene = std::max(max_scene, entry.scene_index);
    bank.entries_.push_back(std::move(entry));
  }

  bank.geometry_.resize(static_cast<size_t>(max_scene + 1));
  bank.scene_seeds_.assign(static_cast<size_t>(max_scene + 1), 0);
  std::vector<bool> have(static_cast<size_t>(max_scene + 1), false);
  for (const auto& entry : bank.entries_) {
    const auto scene = static_cast<size_t>(entry.scene_index);
    if (have[scene]) continue;
    const json side = LoadJsonFile(dir / entry.sidecar);
    bank.geometry_[scene] = SceneFromJson(side);
    bank.scene_seeds_[scene] = side.at("scene_seed").get<uint64_t>();
    have[scene] = true;
  }
  bank.BuildSceneIndex();
  return bank;
}

std::vector<size_t> RirBank::EligibleScenes(int min_sources) const {
  std::vector<size_t> out;
  for (size_t s = 0; s < scenes_.size(); ++s) {
    if (scenes_[s].size() >= static_cast<size_t>(min_sources)) out.push_back(s);
  }
  return out;
}

AmbisonicRir RirBank::LoadRir(size_t entry_index) const {
  if (entry_index >= entries_.size()) {
    throw DataError("rir bank entry out of range");
  }
  return ReadFoaWav(dir_ / entries_[entry_index].wav);
}

}  // namespace foa
