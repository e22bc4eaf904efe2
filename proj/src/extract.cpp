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

#include "foa/extract.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "foa/error.hpp"
#include "foa/kernels.hpp"

namespace foa {

namespace {

constexpr std::array<double, 16> kIdentity4 = {1, 0, 0, 0, 0, 1, 0, 0,
                                               0, 0, 1, 0, 0, 0, 0, 1};

// Solves the 4x4 SPD system N * X = B for X via Cholesky. Returns false
// when N is not (numerically) positive definite.
bool SolveSpd4(const std::array<double, 16>& n_mat,
               const std::array<double, 16>& b, std::array<double, 16>* x) {
  std::array<double, 16> l{};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j <= i; ++j) {
      double acc = n_mat[i * 4 + j];
      for (int k = 0; k < j; ++k) acc -= l[i * 4 + k] * l[j * 4 + k];
      if (i == j) {
        if (acc <= 1e-12) return false;
        l[i * 4 + i] = std::sqrt(acc);
      } else {
        l[i * 4 + j] = acc / l[j * 4 + j];
      }
    }
  }
  // Forward/back substitution per column of B.
  for (int col = 0; col < 4; ++col) {
    double y[4];
    for (int i = 0; i < 4; ++i) {
      double acc = b[i * 4 + col];
      for (int k = 0; k < i; ++k) acc -= l[i * 4 + k] * y[k];
      y[i] = acc / l[i * 4 + i];
    }
    for (int i = 3; i >= 0; --i) {
      double acc = y[i];
      for (int k = i + 1; k < 4; ++k) acc -= l[k * 4 + i] * (*x)[k * 4 + col];
      (*x)[i * 4 + col] = acc / l[i * 4 + i];
    }
  }
  return true;
}

}  // namespace

const char* AlgoName(ExtractorAlgo algo) {
  switch (algo) {
    case ExtractorAlgo::kIdentity:
      return "identity";
    case ExtractorAlgo::kLoudnessMod:
      return "loudness";
    case ExtractorAlgo::kMaxDiBap:
      return "max-di";
    case ExtractorAlgo::kMaxReBap:
      return "max-re";
  }
  return "unknown";
}

std::optional<ExtractorAlgo> AlgoFromName(std::string_view name) {
  for (ExtractorAlgo a : AllAlgos()) {
    if (name == AlgoName(a)) return a;
  }
  return std::nullopt;
}

std::vector<ExtractorAlgo> AllAlgos() {
  return {ExtractorAlgo::kIdentity, ExtractorAlgo::kLoudnessMod,
          ExtractorAlgo::kMaxDiBap, ExtractorAlgo::kMaxReBap};
}

std::vector<Direction> FibonacciGrid(int n) {
  if (n < 1) throw ConfigError("FibonacciGrid: n must be >= 1");
  std::vector<Direction> grid;
  grid.reserve(static_cast<size_t>(n));
  const double golden_angle =
      std::numbers::pi * (3.0 - std::sqrt(5.0));  // ~2.39996 rad
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / static_cast<double>(n);
    const double az = golden_angle * static_cast<double>(i);
    grid.emplace_back(az, std::asin(std::clamp(z, -1.0, 1.0)));
  }
  return grid;
}

LoudnessMatrix BuildLoudnessMatrix(const Direction& target_dir,
                                   double cap_spread_deg, double out_gain,
                                   std::span<const Direction> grid) {
  if (grid.size() < 4) {
    throw ConfigError("loudness grid needs at least 4 directions, got " +
                      std::to_string(grid.size()));
  }
  if (!(cap_spread_deg > 0.0) || cap_spread_deg > 360.0) {
    throw ConfigError("cap spread must be in (0, 360] degrees");
  }
  const double cap_rad = 0.5 * cap_spread_deg * std::numbers::pi / 180.0;

  // Normal matrix N = Yg^T Yg and masked matrix A = Yg^T diag(g) Yg.
  std::array<double, 16> n_mat{};
  std::array<double, 16> a_mat{};
  for (const Direction& d : grid) {
    const FoaGains y = ShEval(d);
    const double g =
        GreatCircleDistance(d, target_dir) <= cap_rad + 1e-12 ? 1.0 : out_gain;
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        n_mat[i * 4 + j] += y[i] * y[j];
        a_mat[i * 4 + j] += g * y[i] * y[j];
      }
    }
  }

  LoudnessMatrix out;
  if (!SolveSpd4(n_mat, a_mat, &out.m)) {
    throw ConfigError("loudness grid of " + std::to_string(grid.size()) +
                      " directions is rank-deficient for FOA");
  }
  return out;
}

FoaSignal ApplyLoudnessMod(const FoaSignal& x, const LoudnessMatrix& m) {
  if (m.m == kIdentity4) return x;
  FoaSignal out(x.frames(), x.sample_rate());
  const auto in = x.data();
  const auto op = out.data();
  kernels::Active().apply_mat4(x.frames(), m.m.data(), in.data(), op.data());
  return out;
}

std::array<double, 4> BeamWeights(BeamKind kind, const Direction& steer) {
  double g0 = 0.0, g1 = 0.0;
  switch (kind) {
    case BeamKind::kMaxDi:
      g0 = 0.25;
      g1 = 0.75;
      break;
    case BeamKind::kMaxRe: {
      const double s3 = std::sqrt(3.0);
      g0 = 1.0 / (1.0 + s3);
      g1 = s3 / (1.0 + s3);
      break;
    }
  }
  const auto u = steer.UnitVector();
  return {g0, g1 * u[1], g1 * u[2], g1 * u[0]};  // ACN order [W, Y, Z, X]
}

FoaSignal BeamformAndProject(const FoaSignal& x, BeamKind kind,
                             const Direction& target_dir) {
  const std::array<double, 4> w = BeamWeights(kind, target_dir);
  const size_t n = x.frames();
  std::vector<double> beam(n, 0.0);
  const auto in = x.data();
  for (int c = 0; c < kNumFoaChannels; ++c) {
    kernels::Active().axpy(n, w[c], in[c], beam.data());
  }
  const FoaGains enc = ShEval(target_dir);
  FoaSignal out(n, x.sample_rate());
  for (int c = 0; c < kNumFoaChannels; ++c) {
    kernels::Active().scale(n, enc[c], beam.data(), out.channel(c).data());
  }
  return out;
}

FoaSignal RunExtractor(const ExtractorConfig& cfg, const FoaSignal& x) {
  switch (cfg.algorithm) {
    case ExtractorAlgo::kIdentity:
      return x;
    case ExtractorAlgo::kLoudnessMod: {
      const std::vector<Direction> grid = FibonacciGrid(cfg.grid_size);
      const LoudnessMatrix m = BuildLoudnessMatrix(
          cfg.target_dir, cfg.cap_spread_deg, cfg.out_gain, grid);
      return ApplyLoudnessMod(x, m);
    }
    case ExtractorAlgo::kMaxDiBap:
      return BeamformAndProject(x, BeamKind::kMaxDi, cfg.target_dir);
    case ExtractorAlgo::kMaxReBap:
      return BeamformAndProject(x, BeamKind::kMaxRe, cfg.target_dir);
  }
  throw ConfigError("unknown extractor algorithm");
}

}  // namespace foa
