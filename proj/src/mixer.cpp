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

#include "foa/mixer.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>

#include "foa/error.hpp"
#include "foa/fft.hpp"
#include "foa/kernels.hpp"
#include "foa/wav.hpp"

namespace foa {

namespace {

std::string FoldCase(const std::string& s) {
  std::string out = s;
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::string ReadDescriptionFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  // Trim surrounding whitespace.
  const auto b = text.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = text.find_last_not_of(" \t\r\n");
  return text.substr(b, e - b + 1);
}

// Distance along a ray from `origin` in direction `u` to the room boundary.
double ExitDistance(const Vec3& origin, const std::array<double, 3>& u,
                    const Vec3& dims) {
  double t = std::numeric_limits<double>::infinity();
  for (int a = 0; a < 3; ++a) {
    if (u[a] > 1e-12) {
      t = std::min(t, (dims[a] - origin[a]) / u[a]);
    } else if (u[a] < -1e-12) {
      t = std::min(t, -origin[a] / u[a]);
    }
  }
  return t;
}

// Streams forked off the per-pair seed; fixed ids keep draws decoupled.
enum PairStream : uint64_t {
  kStreamScene = 0,
  kStreamClips = 1,
  kStreamGains = 2,
  kStreamSilence = 3,
  kStreamNear = 4,
  kStreamNearDir = 5,
  kStreamNearDist = 6,
  kStreamNearClip = 7,
  kStreamCropBase = 8,  // +source index
  kStreamResim = 12,
};

}  // namespace

ClipPool ClipPool::LoadDir(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw IoError("clip directory does not exist: " + dir.string());
  }
  std::vector<std::filesystem::path> wavs;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".wav") {
      wavs.push_back(e.path());
    }
  }
  std::sort(wavs.begin(), wavs.end());
  if (wavs.empty()) throw ConfigError("no .wav clips in " + dir.string());

  std::vector<Clip> clips;
  for (const auto& path : wavs) {
    WavData w = ReadWav(path);
    if (w.channels.size() != 1) {
      throw DataError("clip must be mono: " + path.string());
    }
    if (w.sample_rate != kPairSampleRate) {
      throw DataError("clip must be 16 kHz (resample first): " + path.string());
    }
    Clip clip;
    clip.id = path.filename().string();
    std::filesystem::path txt = path;
    txt.replace_extension(".txt");
    clip.description = std::filesystem::exists(txt) ? ReadDescriptionFile(txt)
                                                    : path.stem().string();
    if (clip.description.empty()) clip.description = path.stem().string();
    clip.samples = std::move(w.channels[0]);

    // Loudness-normalize so the random gain range is meaningful.
    const double energy =
        kernels::Active().sumsq(clip.samples.size(), clip.samples.data());
    if (energy <= 0.0) {
      throw DataError("clip is digital silence: " + path.string());
    }
    const double rms = std::sqrt(energy / static_cast<double>(clip.samples.size()));
    const double k = std::pow(10.0, kClipRmsDbfs / 20.0) / rms;
    for (double& v : clip.samples) v *= k;
    clips.push_back(std::move(clip));
  }
  return FromClips(std::move(clips));
}

ClipPool ClipPool::FromClips(std::vector<Clip> clips) {
  ClipPool pool;
  pool.clips_ = std::move(clips);
  return pool;
}

size_t ClipPool::DistinctDescriptions() const {
  std::set<std::string> seen;
  for (const auto& c : clips_) seen.insert(FoldCase(c.description));
  return seen.size();
}

std::vector<SecondaryInfo> PairMeta::SecondaryInfos() const {
  std::vector<SecondaryInfo> out;
  out.reserve(secondaries.size());
  for (const auto& s : secondaries) {
    out.push_back({Direction::FromDegrees(s.azimuth_deg, s.elevation_deg),
                   s.silenced});
  }
  return out;
}

FoaSignal RenderSource(std::span<const double> clip, const AmbisonicRir& rir,
                       double gain_db) {
  if (rir.sample_rate() != kPairSampleRate) {
    throw DataError("RenderSource: RIR sample rate mismatch (" +
                    std::to_string(rir.sample_rate()) + " != 16000)");
  }
  if (rir.frames() == 0) throw DataError("RenderSource: empty RIR");
  for (double v : clip) {
    if (!std::isfinite(v)) throw DataError("RenderSource: non-finite clip");
  }
  const double gain = std::pow(10.0, gain_db / 20.0);
  FoaSignal out(kPairFrames, kPairSampleRate);
  if (clip.empty()) return out;

  // One forward transform of the clip, reused across the four channels.
  const size_t full = clip.size() + rir.frames() - 1;
  const size_t nfft = fft::NextPow2(full);
  std::vector<std::complex<double>> clip_spec(nfft);
  for (size_t i = 0; i < clip.size(); ++i) clip_spec[i] = clip[i];
  fft::Forward(clip_spec);

  std::vector<std::complex<double>> work(nfft);
  const size_t lim = std::min(kPairFrames, full);
  for (int c = 0; c < kNumFoaChannels; ++c) {
    std::fill(work.begin(), work.end(), std::complex<double>(0.0));
    const auto& h = rir.channel(c);
    for (size_t i = 0; i < h.size(); ++i) work[i] = h[i];
    fft::Forward(work);
    kernels::Active().cmul(nfft, work.data(), clip_spec.data(), work.data());
    fft::Inverse(work);
    auto& dst = out.channel(c);
    for (size_t i = 0; i < lim; ++i) dst[i] = gain * work[i].real();
  }
  return out;
}

std::vector<double> PrepareClip(std::span<const double> samples, size_t frames,
                                Rng& rng) {
  if (samples.empty()) throw DataError("PrepareClip: empty clip");
  if (samples.size() >= frames) {
    const size_t max_off = samples.size() - frames;
    const size_t off = static_cast<size_t>(
        rng.UniformInt(0, static_cast<int64_t>(max_off)));
    return std::vector<double>(samples.begin() + static_cast<long>(off),
                               samples.begin() + static_cast<long>(off + frames));
  }

  // Crossfade-loop: 10 ms linear fades, shorter when the clip is tiny.
  const size_t xf = std::min<size_t>(
      {static_cast<size_t>(0.010 * kPairSampleRate), samples.size() / 2});
  std::vector<double> out(samples.begin(), samples.end());
  while (out.size() < frames + xf) {
    const size_t start = out.size() - xf;
    for (size_t i = 0; i < xf; ++i) {
      const double t = static_cast<double>(i + 1) / static_cast<double>(xf + 1);
      out[start + i] = (1.0 - t) * out[start + i] + t * samples[i];
    }
    out.insert(out.end(), samples.begin() + static_cast<long>(xf), samples.end());
  }
  out.resize(frames);
  return out;
}

MixturePair MixScene(const SceneGeometry& scene,
                     const std::vector<SourceSpec>& specs,
                     const std::vector<const AmbisonicRir*>& rirs,
                     const std::vector<std::vector<double>>& prepared_clips) {
  if (specs.size() != rirs.size() || specs.size() != prepared_clips.size()) {
    throw ConfigError("MixScene: specs, rirs and clips must align");
  }
  int target_idx = -1;
  for (size_t i = 0; i < specs.size(); ++i) {
    if (!specs[i].is_target) continue;
    if (target_idx >= 0) throw ConfigError("MixScene: more than one target");
    if (specs[i].silenced) throw ConfigError("MixScene: target cannot be silenced");
    target_idx = static_cast<int>(i);
  }
  if (target_idx < 0) throw ConfigError("MixScene: no target source");
  (void)scene;

  MixturePair pair;
  pair.target = RenderSource(prepared_clips[target_idx], *rirs[target_idx],
                             specs[target_idx].gain_db);
  double target_energy = 0.0;
  for (int c = 0; c < kNumFoaChannels; ++c) {
    target_energy += kernels::Active().sumsq(kPairFrames,
                                             pair.target.channel(c).data());
  }
  if (target_energy <= 0.0) {
    throw DataError("MixScene: degenerate pair, target render has zero energy");
  }

  pair.residual = FoaSignal(kPairFrames, kPairSampleRate);
  for (size_t i = 0; i < specs.size(); ++i) {
    if (static_cast<int>(i) == target_idx || specs[i].silenced) continue;
    const FoaSignal r = RenderSource(prepared_clips[i], *rirs[i], specs[i].gain_db);
    for (int c = 0; c < kNumFoaChannels; ++c) {
      kernels::Active().axpy(kPairFrames, 1.0, r.channel(c).data(),
                             pair.residual.channel(c).data());
    }
  }

  pair.mixture = FoaSignal(kPairFrames, kPairSampleRate);
  for (int c = 0; c < kNumFoaChannels; ++c) {
    const auto& t = pair.target.channel(c);
    const auto& r = pair.residual.channel(c);
    auto& m = pair.mixture.channel(c);
    for (size_t i = 0; i < kPairFrames; ++i) m[i] = t[i] + r[i];
  }
  pair.mixture.CheckFinite("MixScene mixture");

  pair.meta.mixture_rms = pair.mixture.Rms();
  pair.meta.target_rms = pair.target.Rms();
  pair.meta.residual_rms = pair.residual.Rms();
  return pair;
}

Direction PlaceNearTarget(const Direction& target_dir, Rng& rng) {
  const double box = kNearBoxDeg * std::numbers::pi / 180.0;
  const double daz = rng.Uniform(-box, box);
  const double del = rng.Uniform(-box, box);
  const double el = std::clamp(target_dir.elevation() + del,
                               -std::numbers::pi / 2.0, std::numbers::pi / 2.0);
  return Direction(target_dir.azimuth() + daz, el);
}

std::pair<FoaSignal, Direction> RotateRemix(const FoaSignal& segment,
                                            const Direction& known_dir,
                                            Rng& rng) {
  const Direction new_dir = SampleUniformDirection(rng);
  const FoaRotation rot = RotationBetween(known_dir, new_dir);
  return {ApplyRotation(segment, rot), new_dir};
}

PairPlan PlanPair(const PairConfig& cfg, const RirBank& bank,
                  const ClipPool& pool, uint64_t pair_seed) {
  if (pool.DistinctDescriptions() < 4) {
    throw ConfigError(
        "clip pool needs at least 4 distinct descriptions for pair synthesis");
  }
  constexpr int kSources = 4;
  const std::vector<size_t> eligible = bank.EligibleScenes(kSources);
  if (eligible.empty()) {
    throw ConfigError("rir bank has no scene with 4 simulated sources");
  }

  const Rng root(pair_seed);
  PairPlan plan;
  plan.seed = pair_seed;

  Rng scene_rng = root.Fork(kStreamScene);
  plan.scene_id = eligible[static_cast<size_t>(
      scene_rng.UniformInt(0, static_cast<int64_t>(eligible.size()) - 1))];
  const SceneGeometry& scene = bank.scene_geometry(plan.scene_id);
  const auto& scene_entries = bank.scene_entries(plan.scene_id);

  Rng clip_rng = root.Fork(kStreamClips);
  Rng gain_rng = root.Fork(kStreamGains);
  Rng sil_rng = root.Fork(kStreamSilence);

  plan.sources.resize(kSources);
  for (int i = 0; i < kSources; ++i) {
    PlannedSource& s = plan.sources[i];
    s.clip_index = static_cast<size_t>(
        clip_rng.UniformInt(0, static_cast<int64_t>(pool.size()) - 1));
    s.gain_db = gain_rng.Uniform(-cfg.gain_range_db, cfg.gain_range_db);
    s.silenced = i == 0 ? false : sil_rng.Bernoulli(cfg.silence_prob);
    s.direction = scene.sources[i].direction;
    s.distance_m = scene.sources[i].distance;
    s.position = scene.sources[i].position;
    const size_t entry = scene_entries[i];
    s.rir_ref = bank.entries()[entry].wav;
    s.bank_entry = entry;
  }

  Rng near_rng = root.Fork(kStreamNear);
  if (near_rng.Bernoulli(cfg.near_prob)) {
    const int which = static_cast<int>(near_rng.UniformInt(1, kSources - 1));
    PlannedSource& s = plan.sources[which];
    Rng dir_rng = root.Fork(kStreamNearDir);
    const Direction target_dir = plan.sources[0].direction;
    s.direction = PlaceNearTarget(target_dir, dir_rng);
    s.near_placed = true;
    s.silenced = false;  // the adversarial secondary always plays

    // Re-place the source along the new ray, keeping it inside the room.
    const auto u = s.direction.UnitVector();
    const double t_exit = ExitDistance(scene.receiver, u, scene.room.dims);
    Rng dist_rng = root.Fork(kStreamNearDist);
    const double hi = std::min(5.0, 0.99 * t_exit);
    s.distance_m = dist_rng.Uniform(0.6, std::max(0.6 + 1e-6, hi));
    for (int a = 0; a < 3; ++a) {
      s.position[a] = scene.receiver[a] + s.distance_m * u[a];
    }
    s.rir_ref = "resim";

    // The near secondary must not share the target's description.
    Rng near_clip_rng = root.Fork(kStreamNearClip);
    const std::string target_desc =
        FoldCase(pool.clip(plan.sources[0].clip_index).description);
    bool found = false;
    for (int t = 0; t < 10000 && !found; ++t) {
      const size_t idx = static_cast<size_t>(
          near_clip_rng.UniformInt(0, static_cast<int64_t>(pool.size()) - 1));
      if (FoldCase(pool.clip(idx).description) != target_desc) {
        s.clip_index = idx;
        found = true;
      }
    }
    if (!found) {
      throw ConfigError("could not find a clip with a different description");
    }
  }
  plan.resim_seed = root.Fork(kStreamResim).NextU64();

  const double close_rad = kCloseSecondaryDeg * std::numbers::pi / 180.0;
  for (int i = 1; i < kSources; ++i) {
    const PlannedSource& s = plan.sources[i];
    if (s.silenced) continue;
    if (GreatCircleDistance(s.direction, plan.sources[0].direction) <=
        close_rad + 1e-12) {
      plan.close_secondary = true;
      break;
    }
  }
  return plan;
}

MixturePair RenderPair(const PairPlan& plan, const RirBank& bank,
                       const ClipPool& pool) {
  const SceneGeometry& scene = bank.scene_geometry(plan.scene_id);
  const Rng root(plan.seed);

  std::vector<SourceSpec> specs;
  std::vector<AmbisonicRir> storage;
  storage.reserve(plan.sources.size());
  std::vector<std::vector<double>> clips;
  for (size_t i = 0; i < plan.sources.size(); ++i) {
    const PlannedSource& p = plan.sources[i];
    SourceSpec spec;
    spec.clip_index = p.clip_index;
    spec.gain_db = p.gain_db;
    spec.geometry_index = static_cast<int>(i);
    spec.description = pool.clip(p.clip_index).description;
    spec.is_target = i == 0;
    spec.silenced = p.silenced;
    specs.push_back(std::move(spec));

    if (p.near_placed) {
      SimConfig sim = bank.sim();
      sim.seed = plan.resim_seed;
      storage.push_back(
          SimulateRir(scene.room, p.position, scene.receiver, sim));
    } else {
      storage.push_back(bank.LoadRir(p.bank_entry));
    }

    Rng crop_rng = root.Fork(kStreamCropBase + i);
    clips.push_back(
        PrepareClip(pool.clip(p.clip_index).samples, kPairFrames, crop_rng));
  }

  std::vector<const AmbisonicRir*> rirs;
  rirs.reserve(storage.size());
  for (const auto& r : storage) rirs.push_back(&r);

  MixturePair pair = MixScene(scene, specs, rirs, clips);

  pair.meta.seed = plan.seed;
  pair.meta.scene_index = static_cast<int>(plan.scene_id);
  pair.meta.close_secondary = plan.close_secondary;
  auto fill = [&](const PlannedSource& p, bool near, PairSourceMeta* m) {
    m->azimuth_deg = p.direction.azimuth_deg();
    m->elevation_deg = p.direction.elevation_deg();
    m->distance_m = p.distance_m;
    m->gain_db = p.gain_db;
    m->clip_id = pool.clip(p.clip_index).id;
    m->description = pool.clip(p.clip_index).description;
    m->rir_ref = p.rir_ref;
    m->silenced = p.silenced;
    m->near_placed = near;
  };
  fill(plan.sources[0], false, &pair.meta.target);
  pair.meta.secondaries.resize(plan.sources.size() - 1);
  for (size_t i = 1; i < plan.sources.size(); ++i) {
    fill(plan.sources[i], plan.sources[i].near_placed,
         &pair.meta.secondaries[i - 1]);
  }
  return pair;
}

MixturePair BuildPair(const PairConfig& cfg, const RirBank& bank,
                      const ClipPool& pool, uint64_t pair_seed) {
  return RenderPair(PlanPair(cfg, bank, pool, pair_seed), bank, pool);
}

}  // namespace foa
