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

#include "foa/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>

#include <json.hpp>

#include "foa/error.hpp"
#include "foa/kernels.hpp"
#include "foa/parallel.hpp"
#include "foa/wav.hpp"

namespace foa {

using nlohmann::json;

namespace {

void WriteJsonFile(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write: " + path.string());
  out << j.dump(2) << "\n";
  if (!out) throw IoError("short write: " + path.string());
}

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

json SimToJson(const SimConfig& sim) {
  return json{{"fs", sim.fs},
              {"max_order", sim.max_order},
              {"jitter_m", sim.jitter_m},
              {"rir_seconds", sim.rir_seconds}};
}

json SceneToJson(const SceneGeometry& scene) {
  json sources = json::array();
  for (const auto& s : scene.sources) {
    sources.push_back({{"position", {s.position[0], s.position[1], s.position[2]}},
                       {"distance_m", s.distance},
                       {"azimuth_deg", s.direction.azimuth_deg()},
                       {"elevation_deg", s.direction.elevation_deg()}});
  }
  return json{
      {"room",
       {{"dims", {scene.room.dims[0], scene.room.dims[1], scene.room.dims[2]}},
        {"materials", scene.room.surface_materials}}},
      {"receiver", {scene.receiver[0], scene.receiver[1], scene.receiver[2]}},
      {"sources", sources}};
}

std::string EntryName(int index, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "rirs/rir_%06d.%s", index, ext);
  return buf;
}

std::string PairDirName(int index) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "pair_%06d", index);
  return buf;
}

json SourceMetaToJson(const PairSourceMeta& m) {
  return json{{"azimuth_deg", m.azimuth_deg},
              {"elevation_deg", m.elevation_deg},
              {"distance_m", m.distance_m},
              {"gain_db", m.gain_db},
              {"clip", m.clip_id},
              {"description", m.description},
              {"rir", m.rir_ref},
              {"silenced", m.silenced},
              {"near_placed", m.near_placed}};
}

PairSourceMeta SourceMetaFromJson(const json& j) {
  PairSourceMeta m;
  m.azimuth_deg = j.at("azimuth_deg").get<double>();
  m.elevation_deg = j.at("elevation_deg").get<double>();
  m.distance_m = j.at("distance_m").get<double>();
  m.gain_db = j.at("gain_db").get<double>();
  m.clip_id = j.at("clip").get<std::string>();
  m.description = j.at("description").get<std::string>();
  m.rir_ref = j.at("rir").get<std::string>();
  m.silenced = j.at("silenced").get<bool>();
  m.near_placed = j.at("near_placed").get<bool>();
  return m;
}

}  // namespace

RirBank GenRirs(const RirGenConfig& cfg) {
  if (cfg.count < 0) throw ConfigError("gen-rirs: count must be >= 0");
  if (cfg.sources_per_scene < 1) {
    throw ConfigError("gen-rirs: sources_per_scene must be >= 1");
  }
  std::filesystem::create_directories(cfg.out_dir / "rirs");

  const int sps = cfg.sources_per_scene;
  const int num_scenes = (cfg.count + sps - 1) / sps;

  // Scene geometries are sampled up front from per-scene forked streams;
  // simulation then parallelizes over RIRs without affecting determinism.
  const Rng root(cfg.seed);
  std::vector<SceneGeometry> scenes;
  std::vector<uint64_t> scene_seeds;
  scenes.reserve(static_cast<size_t>(num_scenes));
  for (int s = 0; s < num_scenes; ++s) {
    Rng scene_rng = root.Fork(static_cast<uint64_t>(s));
    scene_seeds.push_back(scene_rng.seed());
    scenes.push_back(SampleSceneGeometry(scene_rng, sps));
  }

  std::vector<RirBankEntry> entries(static_cast<size_t>(cfg.count));
  ParallelFor(static_cast<size_t>(cfg.count), cfg.threads, [&](size_t i) {
    const int scene_idx = static_cast<int>(i) / sps;
    const int source_idx = static_cast<int>(i) % sps;
    const SceneGeometry& scene = scenes[static_cast<size_t>(scene_idx)];

    SimConfig sim = cfg.sim;
    sim.seed = Rng(scene_seeds[static_cast<size_t>(scene_idx)])
                   .Fork(100 + static_cast<uint64_t>(source_idx))
                   .seed();
    const AmbisonicRir rir =
        SimulateRir(scene.room, scene.sources[static_cast<size_t>(source_idx)].position,
                    scene.receiver, sim);

    RirBankEntry entry;
    entry.index = static_cast<int>(i);
    entry.scene_index = scene_idx;
    entry.source_index = source_idx;
    entry.wav = EntryName(entry.index, "wav");
    entry.sidecar = EntryName(entry.index, "json");
    WriteFoaWav(cfg.out_dir / entry.wav, rir);

    json side = SceneToJson(scene);
    side["schema_version"] = kSchemaVersion;
    side["scene_index"] = scene_idx;
    side["source_index"] = source_idx;
    side["scene_seed"] = scene_seeds[static_cast<size_t>(scene_idx)];
    side["jitter_seed"] = sim.seed;
    side["sim"] = SimToJson(cfg.sim);
    WriteJsonFile(cfg.out_dir / entry.sidecar, side);

    entries[i] = std::move(entry);
  });

  json manifest;
  manifest["schema_version"] = kSchemaVersion;
  manifest["kind"] = "rir_bank";
  manifest["seed"] = cfg.seed;
  manifest["count"] = cfg.count;
  manifest["sources_per_scene"] = sps;
  manifest["sim"] = SimToJson(cfg.sim);
  json jentries = json::array();
  for (const auto& e : entries) {
    jentries.push_back({{"index", e.index},
                        {"scene_index", e.scene_index},
                        {"source_index", e.source_index},
                        {"wav", e.wav},
                        {"sidecar", e.sidecar}});
  }
  manifest["entries"] = jentries;
  WriteJsonFile(cfg.out_dir / "manifest.json", manifest);

  scenes.resize(static_cast<size_t>(num_scenes));
  return RirBank(cfg.out_dir, cfg.sim, cfg.seed, sps, std::move(entries),
                 std::move(scenes), std::move(scene_seeds));
}

void WritePairMetaJson(const std::filesystem::path& path, const PairMeta& meta) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "mixture_pair";
  j["seed"] = meta.seed;
  j["scene_index"] = meta.scene_index;
  j["sample_rate"] = meta.sample_rate;
  j["num_samples"] = meta.num_samples;
  j["close_secondary"] = meta.close_secondary;
  j["mixture_rms"] = meta.mixture_rms;
  j["target_rms"] = meta.target_rms;
  j["residual_rms"] = meta.residual_rms;
  j["target"] = SourceMetaToJson(meta.target);
  json secs = json::array();
  for (const auto& s : meta.secondaries) secs.push_back(SourceMetaToJson(s));
  j["secondaries"] = secs;
  WriteJsonFile(path, j);
}

PairMeta PairMetaFromJsonFile(const std::filesystem::path& path) {
  const json j = LoadJsonFile(path);
  PairMeta meta;
  meta.seed = j.at("seed").get<uint64_t>();
  meta.scene_index = j.at("scene_index").get<int>();
  meta.sample_rate = j.at("sample_rate").get<double>();
  meta.num_samples = j.at("num_samples").get<size_t>();
  meta.close_secondary = j.at("close_secondary").get<bool>();
  meta.mixture_rms = j.at("mixture_rms").get<double>();
  meta.target_rms = j.at("target_rms").get<double>();
  meta.residual_rms = j.at("residual_rms").get<double>();
  meta.target = SourceMetaFromJson(j.at("target"));
  for (const auto& s : j.at("secondaries")) {
    meta.secondaries.push_back(SourceMetaFromJson(s));
  }
  return meta;
}

DatasetStats GenMixtures(const MixGenConfig& cfg) {
  if (cfg.count < 0) throw ConfigError("gen-mixtures: count must be >= 0");
  const RirBank bank = RirBank::Load(cfg.rir_dir);
  const ClipPool pool = ClipPool::LoadDir(cfg.clips_dir);
  if (pool.DistinctDescriptions() < 4) {
    throw ConfigError(
        "clip pool needs at least 4 distinct descriptions (near-secondary "
        "placement requires a different description than the target)");
  }

  std::filesystem::create_directories(cfg.out_dir / "pairs");
  const Rng root(cfg.seed);

  std::vector<uint8_t> close_flags(static_cast<size_t>(cfg.count), 0);
  std::vector<uint8_t> near_flags(static_cast<size_t>(cfg.count), 0);

  ParallelFor(static_cast<size_t>(cfg.count), cfg.threads, [&](size_t i) {
    const uint64_t pair_seed = root.Fork(i).seed();
    const MixturePair pair = BuildPair(cfg.pair, bank, pool, pair_seed);

    const std::filesystem::path dir = cfg.out_dir / "pairs" / PairDirName(static_cast<int>(i));
    std::filesystem::create_directories(dir);
    WriteFoaWav(dir / "mixture.wav", pair.mixture);
    WriteFoaWav(dir / "target.wav", pair.target);
    WritePairMetaJson(dir / "meta.json", pair.meta);

    close_flags[i] = pair.meta.close_secondary ? 1 : 0;
    for (const auto& s : pair.meta.secondaries) {
      if (s.near_placed) near_flags[i] = 1;
    }
  });

  DatasetStats stats;
  stats.pairs = static_cast<size_t>(cfg.count);
  for (size_t i = 0; i < close_flags.size(); ++i) {
    stats.close_secondary_pairs += close_flags[i];
    stats.near_placed_pairs += near_flags[i];
  }

  json manifest;
  manifest["schema_version"] = kSchemaVersion;
  manifest["kind"] = "mixture_dataset";
  manifest["seed"] = cfg.seed;
  manifest["count"] = cfg.count;
  manifest["near_prob"] = cfg.pair.near_prob;
  manifest["silence_prob"] = cfg.pair.silence_prob;
  manifest["gain_range_db"] = cfg.pair.gain_range_db;
  manifest["sample_rate"] = kPairSampleRate;
  manifest["num_samples"] = kPairFrames;
  manifest["rir_bank"] = cfg.rir_dir.string();
  manifest["buckets"] = {{"close_secondary_pairs", stats.close_secondary_pairs},
                         {"no_close_secondary_pairs",
                          stats.pairs - stats.close_secondary_pairs},
                         {"near_placed_pairs", stats.near_placed_pairs},
                         {"close_fraction", stats.CloseFraction()}};
  WriteJsonFile(cfg.out_dir / "manifest.json", manifest);
  return stats;
}

LoadedPair LoadPair(const std::filesystem::path& pair_dir) {
  LoadedPair pair;
  pair.meta = PairMetaFromJsonFile(pair_dir / "meta.json");
  pair.mixture = ReadFoaWav(pair_dir / "mixture.wav");
  pair.target = ReadFoaWav(pair_dir / "target.wav");

  if (pair.mixture.frames() != pair.meta.num_samples ||
      pair.target.frames() != pair.meta.num_samples) {
    throw DataError("pair length does not match metadata: " + pair_dir.string());
  }
  if (pair.mixture.sample_rate() != pair.meta.sample_rate ||
      pair.target.sample_rate() != pair.meta.sample_rate) {
    throw DataError("pair sample rate mismatch: " + pair_dir.string());
  }

  // On-disk form of the mixture = target + residual identity: the residual
  // implied by the files must reproduce the stored RMS values.
  const size_t n = pair.meta.num_samples;
  double res_energy = 0.0;
  for (int c = 0; c < kNumFoaChannels; ++c) {
    const auto& m = pair.mixture.channel(c);
    const auto& t = pair.target.channel(c);
    for (size_t i = 0; i < n; ++i) {
      const double r = m[i] - t[i];
      res_energy += r * r;
    }
  }
  const double res_rms = std::sqrt(res_energy / (4.0 * static_cast<double>(n)));
  auto rms_ok = [](double got, double want) {
    return std::abs(got - want) <= 1e-6 * std::max({1e-3, got, want});
  };
  if (!rms_ok(res_rms, pair.meta.residual_rms) ||
      !rms_ok(pair.mixture.Rms(), pair.meta.mixture_rms) ||
      !rms_ok(pair.target.Rms(), pair.meta.target_rms)) {
    throw DataError("pair violates the mixture = target + residual identity: " +
                    pair_dir.string());
  }
  return pair;
}

EvalReport EvaluateDataset(const EvalConfig& cfg) {
  std::vector<std::filesystem::path> pair_dirs;
  const std::filesystem::path root = cfg.pairs_dir / "pairs";
  if (!std::filesystem::is_directory(root)) {
    throw IoError("no pairs/ directory under " + cfg.pairs_dir.string());
  }
  for (const auto& e : std::filesystem::directory_iterator(root)) {
    if (e.is_directory()) pair_dirs.push_back(e.path());
  }
  std::sort(pair_dirs.begin(), pair_dirs.end());
  if (pair_dirs.empty()) throw DataError("dataset has no pairs");

  struct PairResult {
    bool ok = false;
    std::vector<PairScore> scores;  // one per algorithm
  };
  std::vector<PairResult> results(pair_dirs.size());
  std::mutex log_mu;

  ParallelFor(pair_dirs.size(), cfg.threads, [&](size_t i) {
    PairResult& res = results[i];
    try {
      const LoadedPair pair = LoadPair(pair_dirs[i]);
      const Direction target_dir = Direction::FromDegrees(
          pair.meta.target.azimuth_deg, pair.meta.target.elevation_deg);
      const std::vector<SecondaryInfo> secs = pair.meta.SecondaryInfos();
      for (ExtractorAlgo algo : cfg.algos) {
        ExtractorConfig ex;
        ex.algorithm = algo;
        ex.target_dir = target_dir;
        ex.cap_spread_deg = cfg.loudness_spread_deg;
        ex.out_gain = cfg.loudness_out_gain;
        ex.grid_size = cfg.loudness_grid_size;
        const FoaSignal est = RunExtractor(ex, pair.mixture);
        res.scores.push_back(
            ScorePair(pair.mixture, pair.target, target_dir, secs, est));
      }
      res.ok = true;
    } catch (const Error& e) {
      std::lock_guard<std::mutex> lock(log_mu);
      std::fprintf(stderr, "skipping pair %s: %s\n",
                   pair_dirs[i].filename().string().c_str(), e.what());
    }
  });

  EvalReport report;
  std::vector<std::vector<PairScore>> per_algo(cfg.algos.size());
  for (const PairResult& res : results) {
    if (!res.ok) {
      report.pairs_skipped++;
      continue;
    }
    report.pairs_scored++;
    for (size_t a = 0; a < cfg.algos.size(); ++a) {
      per_algo[a].push_back(res.scores[a]);
    }
  }
  if (report.pairs_scored == 0) {
    throw DataError("evaluation failed: no pair passed the integrity check");
  }
  for (size_t a = 0; a < cfg.algos.size(); ++a) {
    report.rows.push_back({AlgoName(cfg.algos[a]), Aggregate(per_algo[a])});
  }
  return report;
}

std::string ReportToJson(const EvalReport& report) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "eval_report";
  j["pairs_scored"] = report.pairs_scored;
  j["pairs_skipped"] = report.pairs_skipped;
  json rows = json::array();
  for (const EvalRow& row : report.rows) {
    json r;
    r["algorithm"] = row.algorithm;
    r["all"] = {{"count", row.scores.all.count},
                {"mean_si_sdri_db", row.scores.all.mean_si_sdri_db}};
    if (row.scores.close.has_value()) {
      r["only_close_secondary"] = {
          {"count", row.scores.close->count},
          {"mean_si_sdri_db", row.scores.close->mean_si_sdri_db}};
    } else {
      r["only_close_secondary"] = nullptr;
    }
    if (row.scores.no_close.has_value()) {
      r["no_close_secondary"] = {
          {"count", row.scores.no_close->count},
          {"mean_si_sdri_db", row.scores.no_close->mean_si_sdri_db}};
    } else {
      r["no_close_secondary"] = nullptr;
    }
    rows.push_back(r);
  }
  j["algorithms"] = rows;
  return j.dump(2) + "\n";
}

void WriteReportJson(const std::filesystem::path& path, const EvalReport& report) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write: " + path.string());
  out << ReportToJson(report);
}

}  // namespace foa
