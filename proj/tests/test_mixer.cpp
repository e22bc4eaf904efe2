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

#include <cmath>
#include <numbers>

#include <doctest.h>

#include "foa/error.hpp"
#include "foa/mixer.hpp"
#include "foa/room.hpp"
#include "testutil.hpp"

using namespace foa;

namespace {

constexpr double kPi = std::numbers::pi;

AmbisonicRir AnechoicRir(const Vec3& offset, double rir_seconds = 0.05) {
  Room room;
  room.dims = {12.0, 12.0, 12.0};
  room.surface_materials.fill("rigid");
  const Vec3 recv = {6.0, 6.0, 6.0};
  const Vec3 src = {6.0 + offset[0], 6.0 + offset[1], 6.0 + offset[2]};
  SimConfig cfg;
  cfg.fs = 16000.0;
  cfg.max_order = 0;
  cfg.jitter_m = 0.0;
  cfg.rir_seconds = rir_seconds;
  return SimulateRir(room, src, recv, cfg);
}

// Wrapped azimuth difference in degrees, in [-180, 180).
double AzDiffDeg(double a, double b) {
  return std::remainder(a - b, 360.0);
}

}  // namespace

TEST_CASE("PrepareClip crops, loops and stays deterministic") {
  Rng rng(1);
  std::vector<double> longclip(100000);
  for (auto& v : longclip) v = rng.Uniform(-1, 1);

  Rng crop1(9), crop2(9);
  const auto a = PrepareClip(longclip, kPairFrames, crop1);
  const auto b = PrepareClip(longclip, kPairFrames, crop2);
  REQUIRE(a.size() == kPairFrames);
  CHECK(a == b);

  // Exact length: unchanged.
  std::vector<double> exact(kPairFrames, 0.25);
  Rng crop3(1);
  CHECK(PrepareClip(exact, kPairFrames, crop3) == exact);

  // Short clip: looped with a crossfade, no sample exceeding the envelope.
  std::vector<double> shortclip(5000);
  for (auto& v : shortclip) v = rng.Uniform(-0.5, 0.5);
  Rng crop4(2);
  const auto looped = PrepareClip(shortclip, kPairFrames, crop4);
  REQUIRE(looped.size() == kPairFrames);
  double peak_in = 0, peak_out = 0;
  for (double v : shortclip) peak_in = std::max(peak_in, std::abs(v));
  for (double v : looped) peak_out = std::max(peak_out, std::abs(v));
  CHECK(peak_out <= peak_in + 1e-12);
  // The head of the loop is the clip itself.
  for (size_t i = 0; i < 1000; ++i) CHECK(looped[i] == shortclip[i]);

  CHECK_THROWS_AS(PrepareClip({}, kPairFrames, crop4), DataError);
}

TEST_CASE("RenderSource: convolution identity, gain scaling, zero input") {
  const AmbisonicRir rir = AnechoicRir({1.0, 0.0, 0.0});
  std::vector<double> impulse(kPairFrames, 0.0);
  impulse[0] = 1.0;

  const FoaSignal out = RenderSource(impulse, rir, 0.0);
  REQUIRE(out.frames() == kPairFrames);
  for (int c = 0; c < 4; ++c) {
    for (size_t i = 0; i < rir.frames(); ++i) {
      CHECK(std::abs(out.channel(c)[i] - rir.channel(c)[i]) <= 1e-12);
    }
    for (size_t i = rir.frames(); i < kPairFrames; ++i) {
      CHECK(std::abs(out.channel(c)[i]) <= 1e-12);
    }
  }

  // -6.02 dB halves the samples.
  Rng rng(3);
  std::vector<double> clip(30000);
  for (auto& v : clip) v = rng.Uniform(-1, 1);
  const FoaSignal loud = RenderSource(clip, rir, 0.0);
  const FoaSignal soft = RenderSource(clip, rir, -6.02);
  const double ratio = std::pow(10.0, -6.02 / 20.0);
  CHECK(ratio == doctest::Approx(0.5).epsilon(2e-4));
  for (size_t i = 0; i < 2000; ++i) {
    CHECK(soft.channel(0)[i] ==
          doctest::Approx(loud.channel(0)[i] * ratio).epsilon(1e-9));
  }

  const std::vector<double> silence(1000, 0.0);
  const FoaSignal zero = RenderSource(silence, rir, 0.0);
  for (int c = 0; c < 4; ++c) {
    for (double v : zero.channel(c)) CHECK(v == 0.0);
  }

  AmbisonicRir wrong = rir;
  wrong.set_sample_rate(8000.0);
  CHECK_THROWS_AS(RenderSource(clip, wrong, 0.0), DataError);
}

TEST_CASE("MixScene: the mixture identity holds sample-exactly") {
  SceneGeometry scene;  // geometry is not consulted by MixScene itself

  std::vector<AmbisonicRir> rirs;
  rirs.push_back(AnechoicRir({1.0, 0.0, 0.0}));
  rirs.push_back(AnechoicRir({0.0, 1.5, 0.0}));
  rirs.push_back(AnechoicRir({-2.0, 0.0, 0.5}));
  std::vector<const AmbisonicRir*> rir_ptrs = {&rirs[0], &rirs[1], &rirs[2]};

  Rng rng(5);
  std::vector<std::vector<double>> clips(3, std::vector<double>(kPairFrames));
  for (auto& clip : clips) {
    for (auto& v : clip) v = 0.1 * rng.Uniform(-1, 1);
  }

  std::vector<SourceSpec> specs(3);
  specs[0].is_target = true;
  specs[1].gain_db = -3.0;
  specs[2].gain_db = 2.0;

  const MixturePair pair = MixScene(scene, specs, rir_ptrs, clips);
  for (int c = 0; c < 4; ++c) {
    for (size_t i = 0; i < kPairFrames; ++i) {
      CHECK(pair.mixture.channel(c)[i] ==
            pair.target.channel(c)[i] + pair.residual.channel(c)[i]);
    }
  }
  CHECK(pair.meta.residual_rms > 0.0);

  // All secondaries silenced: the mixture is the target, bit for bit.
  std::vector<SourceSpec> muted = specs;
  muted[1].silenced = true;
  muted[2].silenced = true;
  const MixturePair solo = MixScene(scene, muted, rir_ptrs, clips);
  for (int c = 0; c < 4; ++c) {
    CHECK(solo.mixture.channel(c) == solo.target.channel(c));
    for (double v : solo.residual.channel(c)) CHECK(v == 0.0);
  }

  // Zero-energy target is a degenerate pair.
  std::vector<std::vector<double>> silent = clips;
  silent[0].assign(kPairFrames, 0.0);
  CHECK_THROWS_AS(MixScene(scene, specs, rir_ptrs, silent), DataError);

  // Silenced targets and duplicate targets are config errors.
  std::vector<SourceSpec> bad = specs;
  bad[0].silenced = true;
  CHECK_THROWS_AS(MixScene(scene, bad, rir_ptrs, clips), ConfigError);
  bad = specs;
  bad[1].is_target = true;
  CHECK_THROWS_AS(MixScene(scene, bad, rir_ptrs, clips), ConfigError);
}

TEST_CASE("PlaceNearTarget stays in the box and clamps elevation") {
  Rng rng(7);
  double max_gc = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const Direction target(0.0, 0.0);
    const Direction near = PlaceNearTarget(target, rng);
    CHECK(std::abs(AzDiffDeg(near.azimuth_deg(), 0.0)) <= 15.0 + 1e-9);
    CHECK(std::abs(near.elevation_deg()) <= 15.0 + 1e-9);
    max_gc = std::max(max_gc,
                      GreatCircleDistance(near, target) * 180.0 / kPi);
  }
  // Box corner at the equator: arccos(cos15 * cos15) ~ 21.17 degrees.
  CHECK(max_gc <= 21.18);
  CHECK(max_gc > 15.0);  // corners are actually reachable

  for (int i = 0; i < 10000; ++i) {
    const Direction high = PlaceNearTarget(Direction::FromDegrees(10.0, 80.0), rng);
    CHECK(high.elevation_deg() <= 90.0 + 1e-9);
    CHECK(high.elevation_deg() >= 65.0 - 1e-9);
  }

  Rng r1(3), r2(3);
  const Direction d1 = PlaceNearTarget(Direction(1.0, 0.2), r1);
  const Direction d2 = PlaceNearTarget(Direction(1.0, 0.2), r2);
  CHECK(d1.azimuth() == d2.azimuth());
  CHECK(d1.elevation() == d2.elevation());
}

TEST_CASE("RotateRemix rotates to the sampled direction") {
  Rng rng(9);
  std::vector<double> mono(2048);
  for (auto& v : mono) v = rng.Uniform(-1, 1);
  const Direction known(0.7, -0.2);
  const FoaSignal seg = EncodePlaneWave(mono, known, 16000.0);

  Rng remix_rng(21);
  const auto [rotated, new_dir] = RotateRemix(seg, known, remix_rng);
  const FoaSignal expected = EncodePlaneWave(mono, new_dir, 16000.0);
  for (int c = 0; c < 4; ++c) {
    for (size_t i = 0; i < mono.size(); ++i) {
      CHECK(std::abs(rotated.channel(c)[i] - expected.channel(c)[i]) <= 1e-9);
    }
  }
  // W is never altered by a rotation.
  CHECK(rotated.channel(kAcnW) == seg.channel(kAcnW));

  // Degenerate case: rotating onto the same direction is the identity.
  const FoaRotation same = RotationBetween(known, known);
  const FoaSignal unchanged = ApplyRotation(seg, same);
  for (int c = 0; c < 4; ++c) CHECK(unchanged.channel(c) == seg.channel(c));
}

TEST_CASE("PlanPair: near placement, silencing exemption, descriptions") {
  const auto bank_dir = test::FreshDir("foa_mixer_bank");
  const auto clip_dir = test::FreshDir("foa_mixer_clips");
  const RirBank bank = test::MakeTinyBank(bank_dir);
  test::MakeClipDir(clip_dir);
  const ClipPool pool = ClipPool::LoadDir(clip_dir);
  REQUIRE(pool.DistinctDescriptions() >= 4);

  PairConfig cfg;
  cfg.near_prob = 1.0;
  Rng seeds(100);
  int near_in_cap = 0;
  const int kPlans = 400;
  for (int i = 0; i < kPlans; ++i) {
    const PairPlan plan = PlanPair(cfg, bank, pool, seeds.Fork(i).seed());
    REQUIRE(plan.sources.size() == 4);
    const Direction target_dir = plan.sources[0].direction;
    const std::string target_desc = pool.clip(plan.sources[0].clip_index).description;

    int near_count = 0;
    for (size_t s = 1; s < plan.sources.size(); ++s) {
      const PlannedSource& sec = plan.sources[s];
      if (!sec.near_placed) continue;
      near_count++;
      CHECK_FALSE(sec.silenced);
      CHECK(std::abs(AzDiffDeg(sec.direction.azimuth_deg(),
                               target_dir.azimuth_deg())) <= 15.0 + 1e-9);
      // Clamping at the poles can only shrink the elevation offset.
      CHECK(std::abs(sec.direction.elevation_deg() -
                     target_dir.elevation_deg()) <= 15.0 + 1e-9);
      CHECK(sec.rir_ref == "resim");
      const std::string desc = pool.clip(sec.clip_index).description;
      CHECK(desc != target_desc);
      if (GreatCircleDistance(sec.direction, target_dir) <=
          15.0 * kPi / 180.0 + 1e-12) {
        near_in_cap++;
      }
      // The re-placed source stays inside the room.
      const SceneGeometry& scene = bank.scene_geometry(plan.scene_id);
      for (int a = 0; a < 3; ++a) {
        CHECK(sec.position[a] > 0.0);
        CHECK(sec.position[a] < scene.room.dims[a]);
      }
      CHECK(sec.distance_m >= 0.6);
      CHECK(sec.distance_m <= 5.0);
    }
    CHECK(near_count == 1);
  }
  // Most box draws fall inside the 15-degree cap (box corners do not).
  CHECK(near_in_cap > kPlans * 0.7);

  // near_prob = 0: no near placement, and random secondaries land in the
  // cap only via the ~1.7% solid-angle coincidence per (non-silenced)
  // secondary.
  cfg.near_prob = 0.0;
  int close_secondaries = 0, total_secondaries = 0;
  for (int i = 0; i < 2000; ++i) {
    const PairPlan plan = PlanPair(cfg, bank, pool, seeds.Fork(10000 + i).seed());
    const Direction target_dir = plan.sources[0].direction;
    for (size_t s = 1; s < plan.sources.size(); ++s) {
      CHECK_FALSE(plan.sources[s].near_placed);
      total_secondaries++;
      if (!plan.sources[s].silenced &&
          GreatCircleDistance(plan.sources[s].direction, target_dir) <=
              15.0 * kPi / 180.0) {
        close_secondaries++;
      }
    }
  }
  CHECK(static_cast<double>(close_secondaries) / total_secondaries <= 0.02);

  // Determinism: identical seeds give identical plans.
  cfg.near_prob = 0.5;
  const PairPlan p1 = PlanPair(cfg, bank, pool, 777);
  const PairPlan p2 = PlanPair(cfg, bank, pool, 777);
  CHECK(p1.scene_id == p2.scene_id);
  for (size_t s = 0; s < 4; ++s) {
    CHECK(p1.sources[s].clip_index == p2.sources[s].clip_index);
    CHECK(p1.sources[s].gain_db == p2.sources[s].gain_db);
    CHECK(p1.sources[s].silenced == p2.sources[s].silenced);
    CHECK(p1.sources[s].direction.azimuth() == p2.sources[s].direction.azimuth());
  }

  // A pool without distinct descriptions cannot build pairs.
  std::vector<Clip> same_desc;
  for (int i = 0; i < 5; ++i) {
    Clip c;
    c.id = "c" + std::to_string(i);
    c.description = "Thunder";
    c.samples.assign(8000, 0.1);
    same_desc.push_back(c);
  }
  const ClipPool degenerate = ClipPool::FromClips(same_desc);
  CHECK_THROWS_AS(PlanPair(cfg, bank, degenerate, 1), ConfigError);
}

TEST_CASE("BuildPair renders deterministically and keeps the identity") {
  const auto bank_dir = test::FreshDir("foa_mixer_bank2");
  const auto clip_dir = test::FreshDir("foa_mixer_clips2");
  const RirBank bank = test::MakeTinyBank(bank_dir);
  test::MakeClipDir(clip_dir);
  const ClipPool pool = ClipPool::LoadDir(clip_dir);

  PairConfig cfg;
  cfg.near_prob = 1.0;  // exercise the re-simulation path
  const MixturePair a = BuildPair(cfg, bank, pool, 4242);
  const MixturePair b = BuildPair(cfg, bank, pool, 4242);

  for (int c = 0; c < 4; ++c) {
    CHECK(a.mixture.channel(c) == b.mixture.channel(c));
    CHECK(a.target.channel(c) == b.target.channel(c));
    for (size_t i = 0; i < kPairFrames; ++i) {
      CHECK(a.mixture.channel(c)[i] ==
            a.target.channel(c)[i] + a.residual.channel(c)[i]);
    }
  }

  // The metadata alone recomputes the bucket label.
  bool recomputed = false;
  const Direction tdir = Direction::FromDegrees(a.meta.target.azimuth_deg,
                                                a.meta.target.elevation_deg);
  for (const auto& s : a.meta.secondaries) {
    if (s.silenced) continue;
    if (GreatCircleDistance(Direction::FromDegrees(s.azimuth_deg, s.elevation_deg),
                            tdir) <= 15.0 * kPi / 180.0 + 1e-12) {
      recomputed = true;
    }
  }
  CHECK(recomputed == a.meta.close_secondary);
  CHECK(a.meta.secondaries.size() == 3);

  // Energy sanity: RMS of the mixture never exceeds the parts combined.
  CHECK(a.meta.mixture_rms <= a.meta.target_rms + a.meta.residual_rms + 1e-12);
}
