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

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include <doctest.h>

#include "foa/error.hpp"
#include "foa/extract.hpp"
#include "foa/metrics.hpp"
#include "foa/rng.hpp"

using namespace foa;

namespace {

constexpr double kPi = std::numbers::pi;

// Independent construction of the loudness transform: long-double
// accumulation, adjugate-based 4x4 inverse. Exercises the same math as the
// library through a different numerical route.
std::array<double, 16> OracleLoudnessMatrix(const Direction& target,
                                            double spread_deg, double out_gain,
                                            const std::vector<Direction>& grid) {
  long double n_mat[4][4] = {};
  long double a_mat[4][4] = {};
  const double cap = 0.5 * spread_deg * kPi / 180.0;
  for (const Direction& d : grid) {
    const FoaGains y = ShEval(d);
    const long double g =
        GreatCircleDistance(d, target) <= cap + 1e-12 ? 1.0L : out_gain;
    for (int j = 0; j < 4; ++j) {
      for (int i = 0; i < 4; ++i) {
        n_mat[i][j] += static_cast<long double>(y[i]) * y[j];
        a_mat[i][j] += g * static_cast<long double>(y[i]) * y[j];
      }
    }
  }
  // Inverse of N via cofactors.
  long double inv[4][4];
  {
    const auto& m = n_mat;
    long double minors[4][4];
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        long double sub[3][3];
        int r = 0;
        for (int ii = 0; ii < 4; ++ii) {
          if (ii == i) continue;
          int cidx = 0;
          for (int jj = 0; jj < 4; ++jj) {
            if (jj == j) continue;
            sub[r][cidx++] = m[ii][jj];
          }
          r++;
        }
        minors[i][j] = sub[0][0] * (sub[1][1] * sub[2][2] - sub[1][2] * sub[2][1]) -
                       sub[0][1] * (sub[1][0] * sub[2][2] - sub[1][2] * sub[2][0]) +
                       sub[0][2] * (sub[1][0] * sub[2][1] - sub[1][1] * sub[2][0]);
      }
    }
    long double det = 0.0L;
    for (int j = 0; j < 4; ++j) {
      det += (j % 2 == 0 ? 1.0L : -1.0L) * m[0][j] * minors[0][j];
    }
    REQUIRE(std::abs(static_cast<double>(det)) > 1e-9);
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        const long double sign = ((i + j) % 2 == 0) ? 1.0L : -1.0L;
        inv[i][j] = sign * minors[j][i] / det;
      }
    }
  }
  std::array<double, 16> out{};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      long double acc = 0.0L;
      for (int k = 0; k < 4; ++k) acc += inv[i][k] * a_mat[k][j];
      out[static_cast<size_t>(i * 4 + j)] = static_cast<double>(acc);
    }
  }
  return out;
}

// Response of the transform to a plane wave from d, observed at the target
// encoding: ShEval(d)^T M^T ShEval(target).
double PatternResponse(const std::array<double, 16>& m, const Direction& d,
                       const Direction& target) {
  const FoaGains in = ShEval(d);
  const FoaGains t = ShEval(target);
  double acc = 0.0;
  for (int i = 0; i < 4; ++i) {
    double row = 0.0;
    for (int j = 0; j < 4; ++j) row += m[static_cast<size_t>(i * 4 + j)] * in[j];
    acc += row * t[i];
  }
  return acc;
}

FoaSignal RandomFoa(Rng& rng, size_t frames) {
  FoaSignal sig(frames, 16000.0);
  for (int c = 0; c < 4; ++c) {
    for (auto& v : sig.channel(c)) v = rng.Uniform(-1, 1);
  }
  return sig;
}

}  // namespace

TEST_CASE("algorithm names round-trip") {
  for (ExtractorAlgo a : AllAlgos()) {
    const auto back = AlgoFromName(AlgoName(a));
    REQUIRE(back.has_value());
    CHECK(*back == a);
  }
  CHECK_FALSE(AlgoFromName("nonsense").has_value());
}

TEST_CASE("beam weights match the closed forms") {
  const auto di = BeamWeights(BeamKind::kMaxDi, Direction(0, 0));
  CHECK(std::abs(di[0] - 0.25) <= 1e-15);
  CHECK(std::abs(di[1]) <= 1e-15);
  CHECK(std::abs(di[2]) <= 1e-15);
  CHECK(std::abs(di[3] - 0.75) <= 1e-15);

  const auto re = BeamWeights(BeamKind::kMaxRe, Direction(0, 0));
  CHECK(std::abs(re[0] - 0.366025) <= 1e-6);
  CHECK(std::abs(re[3] - 0.633975) <= 1e-6);
  const double s3 = std::sqrt(3.0);
  CHECK(re[0] == doctest::Approx(1.0 / (1.0 + s3)).epsilon(1e-15));
  CHECK(re[3] == doctest::Approx(s3 / (1.0 + s3)).epsilon(1e-15));
}

TEST_CASE("beams are distortionless toward the steering direction") {
  Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    const Direction steer = SampleUniformDirection(rng);
    const FoaGains e = ShEval(steer);
    for (BeamKind kind : {BeamKind::kMaxDi, BeamKind::kMaxRe}) {
      const auto w = BeamWeights(kind, steer);
      double resp = 0.0;
      for (int c = 0; c < 4; ++c) resp += w[c] * e[c];
      CHECK(std::abs(resp - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("beam nulls sit at the pattern zeros") {
  const Direction steer(0, 0);
  // max-DI: 1 + 3cos(g) = 0 at arccos(-1/3); max-rE null at arccos(-1/sqrt(3)).
  const Direction di_null(std::acos(-1.0 / 3.0), 0.0);
  const Direction re_null(std::acos(-1.0 / std::sqrt(3.0)), 0.0);

  const auto wd = BeamWeights(BeamKind::kMaxDi, steer);
  const auto wr = BeamWeights(BeamKind::kMaxRe, steer);
  const FoaGains ed = ShEval(di_null);
  const FoaGains er = ShEval(re_null);
  double rd = 0.0, rr = 0.0;
  for (int c = 0; c < 4; ++c) {
    rd += wd[c] * ed[c];
    rr += wr[c] * er[c];
  }
  CHECK(std::abs(rd) <= 1e-12);
  CHECK(std::abs(rr) <= 1e-12);

  // Behind the beam, max-DI responds with -1/2.
  const FoaGains back = ShEval(Direction(kPi, 0));
  double rb = 0.0;
  for (int c = 0; c < 4; ++c) rb += wd[c] * back[c];
  CHECK(rb == doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("beamform-and-project reproduces an on-target plane wave") {
  Rng rng(5);
  std::vector<double> mono(2048);
  for (auto& v : mono) v = rng.Uniform(-1, 1);
  const Direction target(0.8, -0.3);
  const FoaSignal x = EncodePlaneWave(mono, target, 16000.0);
  for (BeamKind kind : {BeamKind::kMaxDi, BeamKind::kMaxRe}) {
    const FoaSignal y = BeamformAndProject(x, kind, target);
    for (int c = 0; c < 4; ++c) {
      for (size_t i = 0; i < mono.size(); ++i) {
        CHECK(std::abs(y.channel(c)[i] - x.channel(c)[i]) <= 1e-9);
      }
    }
  }
}

TEST_CASE("an interferer at the null vanishes from the beam estimate") {
  Rng rng(7);
  std::vector<double> s1(4096), s2(4096);
  for (auto& v : s1) v = rng.Uniform(-1, 1);
  for (auto& v : s2) v = rng.Uniform(-1, 1);
  const Direction target(0, 0);

  struct Case {
    BeamKind kind;
    double null_angle;
  };
  for (const Case& c : {Case{BeamKind::kMaxDi, std::acos(-1.0 / 3.0)},
                        Case{BeamKind::kMaxRe, std::acos(-1.0 / std::sqrt(3.0))}}) {
    const Direction interferer(c.null_angle, 0.0);
    const FoaSignal tgt = EncodePlaneWave(s1, target, 16000.0);
    const FoaSignal inf = EncodePlaneWave(s2, interferer, 16000.0);
    FoaSignal mix(tgt.frames(), 16000.0);
    for (int ch = 0; ch < 4; ++ch) {
      for (size_t i = 0; i < tgt.frames(); ++i) {
        mix.channel(ch)[i] = tgt.channel(ch)[i] + inf.channel(ch)[i];
      }
    }
    const FoaSignal est = BeamformAndProject(mix, c.kind, target);
    for (int ch = 0; ch < 4; ++ch) {
      if (ch == kAcnY || ch == kAcnZ) continue;  // target leaves them silent
      CHECK(SiSdrDb(est.channel(ch), tgt.channel(ch)) >= 60.0);
    }
  }
}

TEST_CASE("beamform-and-project output is rank-1 across channels") {
  Rng rng(9);
  const FoaSignal x = RandomFoa(rng, 1024);
  const Direction target(1.1, 0.4);
  const FoaSignal y = BeamformAndProject(x, BeamKind::kMaxRe, target);
  const FoaGains e = ShEval(target);
  for (size_t i = 0; i < y.frames(); ++i) {
    const double w = y.channel(kAcnW)[i];
    if (std::abs(w) < 1e-12) continue;
    for (int c = 1; c < 4; ++c) {
      CHECK(std::abs(y.channel(c)[i] / w - e[c] / e[0]) <= 1e-9);
    }
  }
}

TEST_CASE("extractors are linear") {
  Rng rng(11);
  const FoaSignal x = RandomFoa(rng, 512);
  for (ExtractorAlgo algo : AllAlgos()) {
    ExtractorConfig cfg;
    cfg.algorithm = algo;
    cfg.target_dir = Direction(0.3, 0.2);
    const FoaSignal y = RunExtractor(cfg, x);
    REQUIRE(y.frames() == x.frames());

    FoaSignal x2 = x;
    for (int c = 0; c < 4; ++c) {
      for (auto& v : x2.channel(c)) v *= 2.0;  // exact scaling
    }
    const FoaSignal y2 = RunExtractor(cfg, x2);
    for (int c = 0; c < 4; ++c) {
      for (size_t i = 0; i < y.frames(); ++i) {
        CHECK(y2.channel(c)[i] == 2.0 * y.channel(c)[i]);
      }
    }
  }
}

TEST_CASE("loudness matrix identities") {
  const std::vector<Direction> grid = FibonacciGrid(36);

  // Full-sphere cap: g == 1 everywhere.
  const LoudnessMatrix full =
      BuildLoudnessMatrix(Direction(0.2, 0.1), 360.0, 0.0, grid);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      CHECK(std::abs(full.m[static_cast<size_t>(i * 4 + j)] -
                     (i == j ? 1.0 : 0.0)) <= 1e-9);
    }
  }

  // out_gain 1 is the identity regardless of the cap.
  const LoudnessMatrix unity =
      BuildLoudnessMatrix(Direction(2.0, -0.4), 10.0, 1.0, grid);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      CHECK(std::abs(unity.m[static_cast<size_t>(i * 4 + j)] -
                     (i == j ? 1.0 : 0.0)) <= 1e-9);
    }
  }

  // A cap so narrow no grid point falls inside, with zero outside gain.
  const LoudnessMatrix zero =
      BuildLoudnessMatrix(Direction(0.123, 0.456), 1e-6, 0.0, grid);
  for (double v : zero.m) CHECK(std::abs(v) <= 1e-12);

  // Degenerate grid: every direction identical.
  const std::vector<Direction> bad(36, Direction(0.0, 0.0));
  CHECK_THROWS_AS(BuildLoudnessMatrix(Direction(0, 0), 60.0, 0.0, bad),
                  ConfigError);
  CHECK_THROWS_AS(
      BuildLoudnessMatrix(Direction(0, 0), 60.0, 0.0,
                          std::vector<Direction>{Direction(0, 0)}),
      ConfigError);
}

TEST_CASE("ApplyLoudnessMod: identity fast path and linearity") {
  Rng rng(13);
  const FoaSignal x = RandomFoa(rng, 333);
  LoudnessMatrix ident;
  ident.m = {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1};
  const FoaSignal same = ApplyLoudnessMod(x, ident);
  for (int c = 0; c < 4; ++c) CHECK(same.channel(c) == x.channel(c));

  LoudnessMatrix m;
  Rng mr(14);
  for (auto& v : m.m) v = mr.Uniform(-1, 1);
  const FoaSignal y = ApplyLoudnessMod(x, m);
  FoaSignal z = RandomFoa(mr, 333);
  FoaSignal sum(333, 16000.0);
  for (int c = 0; c < 4; ++c) {
    for (size_t i = 0; i < 333; ++i) {
      sum.channel(c)[i] = x.channel(c)[i] + z.channel(c)[i];
    }
  }
  const FoaSignal ysum = ApplyLoudnessMod(sum, m);
  const FoaSignal yz = ApplyLoudnessMod(z, m);
  for (int c = 0; c < 4; ++c) {
    for (size_t i = 0; i < 333; ++i) {
      CHECK(std::abs(ysum.channel(c)[i] - (y.channel(c)[i] + yz.channel(c)[i])) <=
            1e-12);
    }
  }
}

TEST_CASE("loudness transform matches the dense-grid oracle") {
  const std::vector<Direction> grid = FibonacciGrid(36);
  const Direction target(0.0, 0.0);
  const LoudnessMatrix m = BuildLoudnessMatrix(target, 60.0, 0.0, grid);
  const std::array<double, 16> oracle =
      OracleLoudnessMatrix(target, 60.0, 0.0, FibonacciGrid(36));

  const std::vector<Direction> dense = FibonacciGrid(10000);
  double max_diff = 0.0;
  for (const Direction& d : dense) {
    max_diff = std::max(max_diff, std::abs(PatternResponse(m.m, d, target) -
                                           PatternResponse(oracle, d, target)));
  }
  CHECK(max_diff <= 1e-6);

  // Cap response dominates the antipode by at least 10 dB.
  const double at_target = std::abs(PatternResponse(m.m, target, target));
  const double at_antipode =
      std::abs(PatternResponse(m.m, Direction(kPi, 0.0), target));
  REQUIRE(at_antipode > 0.0);
  CHECK(20.0 * std::log10(at_target / at_antipode) >= 10.0);

  // Plane wave at the cap center: the output deviates from the input by no
  // more than the transform's own projection error, measured from the
  // oracle matrix (an FOA-order projection cannot pass the cap untouched).
  const FoaGains e = ShEval(target);
  double proj_err2 = 0.0, enc2 = 0.0;
  for (int i = 0; i < 4; ++i) {
    double mi = 0.0;
    for (int j = 0; j < 4; ++j) mi += oracle[static_cast<size_t>(i * 4 + j)] * e[j];
    proj_err2 += (mi - e[i]) * (mi - e[i]);
    enc2 += e[i] * e[i];
  }
  const double bound = std::sqrt(proj_err2 / enc2) + 1e-9;

  Rng rng(15);
  std::vector<double> mono(512);
  for (auto& v : mono) v = rng.Uniform(-1, 1);
  const FoaSignal in = EncodePlaneWave(mono, target, 16000.0);
  const FoaSignal out = ApplyLoudnessMod(in, m);
  double err = 0.0, ref = 0.0;
  for (int c = 0; c < 4; ++c) {
    for (size_t i = 0; i < mono.size(); ++i) {
      err += (out.channel(c)[i] - in.channel(c)[i]) *
             (out.channel(c)[i] - in.channel(c)[i]);
      ref += in.channel(c)[i] * in.channel(c)[i];
    }
  }
  CHECK(std::sqrt(err / ref) <= bound + 1e-9);
}

TEST_CASE("run_extractor dispatch") {
  Rng rng(17);
  const FoaSignal x = RandomFoa(rng, 700);

  ExtractorConfig cfg;
  cfg.algorithm = ExtractorAlgo::kIdentity;
  cfg.target_dir = Direction(1.0, 0.0);
  const FoaSignal same = RunExtractor(cfg, x);
  for (int c = 0; c < 4; ++c) CHECK(same.channel(c) == x.channel(c));

  cfg.algorithm = ExtractorAlgo::kLoudnessMod;
  cfg.cap_spread_deg = 360.0;
  const FoaSignal full = RunExtractor(cfg, x);
  for (int c = 0; c < 4; ++c) {
    for (size_t i = 0; i < x.frames(); ++i) {
      CHECK(std::abs(full.channel(c)[i] - x.channel(c)[i]) <= 1e-9);
    }
  }

  std::vector<double> mono(256);
  for (auto& v : mono) v = rng.Uniform(-1, 1);
  const Direction dir(0.4, 0.2);
  const FoaSignal wave = EncodePlaneWave(mono, dir, 16000.0);
  cfg.algorithm = ExtractorAlgo::kMaxDiBap;
  cfg.target_dir = dir;
  const FoaSignal est = RunExtractor(cfg, wave);
  for (int c = 0; c < 4; ++c) {
    for (size_t i = 0; i < mono.size(); ++i) {
      CHECK(std::abs(est.channel(c)[i] - wave.channel(c)[i]) <= 1e-9);
    }
  }
}
