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
#include "foa/sh.hpp"
#include "foa/signal.hpp"

using namespace foa;

namespace {

constexpr double kPi = std::numbers::pi;

// Applies the Cartesian rotation hidden inside a FoaRotation to a unit
// vector, recovered through the (Y, Z, X) channel permutation. Used as the
// independent route for the equivariance oracle.
std::array<double, 3> RotateVector(const FoaRotation& r,
                                   const std::array<double, 3>& u) {
  // Cartesian component c lives at block row/col inv[c].
  constexpr int inv[3] = {2, 0, 1};  // x->X block idx 2, y->0, z->1
  const auto& m = r.matrix();
  std::array<double, 3> out{};
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      out[a] += m[(inv[a] + 1) * 4 + (inv[b] + 1)] * u[b];
    }
  }
  return out;
}

double GainError(const FoaGains& a, const FoaGains& b) {
  double acc = 0.0;
  for (int i = 0; i < 4; ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(acc);
}

}  // namespace

TEST_CASE("Direction normalizes azimuth and round-trips unit vectors") {
  const Direction d(-kPi / 2.0, 0.25);
  CHECK(d.azimuth() == doctest::Approx(3.0 * kPi / 2.0).epsilon(1e-15));

  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    const Direction a = SampleUniformDirection(rng);
    const Direction b = Direction::FromUnitVector(a.UnitVector());
    const auto ua = a.UnitVector();
    const auto ub = b.UnitVector();
    for (int k = 0; k < 3; ++k) CHECK(ua[k] == doctest::Approx(ub[k]).epsilon(1e-12));
  }

  CHECK_THROWS_AS(Direction(0.0, 2.0), ConfigError);
  CHECK_THROWS_AS(Direction::FromUnitVector({0, 0, 0}), ConfigError);
}

TEST_CASE("ShEval axis cases") {
  const FoaGains fwd = ShEval(Direction(0.0, 0.0));
  CHECK(std::abs(fwd[0] - 1.0) <= 1e-12);
  CHECK(std::abs(fwd[1] - 0.0) <= 1e-12);
  CHECK(std::abs(fwd[2] - 0.0) <= 1e-12);
  CHECK(std::abs(fwd[3] - 1.0) <= 1e-12);

  const FoaGains left = ShEval(Direction(kPi / 2.0, 0.0));
  CHECK(std::abs(left[0] - 1.0) <= 1e-12);
  CHECK(std::abs(left[1] - 1.0) <= 1e-12);
  CHECK(std::abs(left[2] - 0.0) <= 1e-12);
  CHECK(std::abs(left[3] - 0.0) <= 1e-12);

  const FoaGains up = ShEval(Direction(0.0, kPi / 2.0));
  CHECK(std::abs(up[0] - 1.0) <= 1e-12);
  CHECK(std::abs(up[1] - 0.0) <= 1e-12);
  CHECK(std::abs(up[2] - 1.0) <= 1e-12);
  CHECK(std::abs(up[3] - 0.0) <= 1e-12);
}

TEST_CASE("ShEval directional channels carry the unit vector") {
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    const Direction d = SampleUniformDirection(rng);
    const FoaGains g = ShEval(d);
    const auto u = d.UnitVector();
    CHECK(g[0] == 1.0);
    CHECK(std::abs(g[kAcnY] - u[1]) <= 1e-14);
    CHECK(std::abs(g[kAcnZ] - u[2]) <= 1e-14);
    CHECK(std::abs(g[kAcnX] - u[0]) <= 1e-14);
    const double norm = std::sqrt(g[1] * g[1] + g[2] * g[2] + g[3] * g[3]);
    CHECK(std::abs(norm - 1.0) <= 1e-12);
  }
}

TEST_CASE("GreatCircleDistance basics and metric properties") {
  const Direction a(0.3, -0.2);
  CHECK(GreatCircleDistance(a, a) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(GreatCircleDistance(Direction(0, 0), Direction(kPi, 0)) ==
        doctest::Approx(kPi).epsilon(1e-12));
  // dot((1,0,0), (0, cos45, sin45)*...) = cos(pi/4)*cos(pi/2) = 0.
  CHECK(GreatCircleDistance(Direction(0, 0), Direction(kPi / 2, kPi / 4)) ==
        doctest::Approx(kPi / 2).epsilon(1e-12));

  Rng rng(3);
  for (int i = 0; i < 500; ++i) {
    const Direction x = SampleUniformDirection(rng);
    const Direction y = SampleUniformDirection(rng);
    const Direction z = SampleUniformDirection(rng);
    const double xy = GreatCircleDistance(x, y);
    const double yx = GreatCircleDistance(y, x);
    CHECK(std::abs(xy - yx) <= 1e-12);
    CHECK(xy >= 0.0);
    CHECK(xy <= kPi + 1e-12);
    CHECK(xy <= GreatCircleDistance(x, z) + GreatCircleDistance(z, y) + 1e-9);
  }
}

TEST_CASE("SampleUniformDirection statistics and determinism") {
  Rng rng(123);
  const int n = 100000;
  double mx = 0, my = 0, mz = 0;
  int upper = 0;
  for (int i = 0; i < n; ++i) {
    const Direction d = SampleUniformDirection(rng);
    const auto u = d.UnitVector();
    mx += u[0];
    my += u[1];
    mz += u[2];
    if (d.elevation() > 0.0) upper++;
  }
  mx /= n;
  my /= n;
  mz /= n;
  CHECK(std::sqrt(mx * mx + my * my + mz * mz) <= 0.02);
  CHECK(std::abs(static_cast<double>(upper) / n - 0.5) <= 0.01);

  Rng r1(99), r2(99);
  for (int i = 0; i < 100; ++i) {
    const Direction d1 = SampleUniformDirection(r1);
    const Direction d2 = SampleUniformDirection(r2);
    CHECK(d1.azimuth() == d2.azimuth());
    CHECK(d1.elevation() == d2.elevation());
  }
}

TEST_CASE("RotationBetween maps encodings exactly") {
  // Same direction: exact identity.
  const FoaRotation id = RotationBetween(Direction(0.4, 0.1), Direction(0.4, 0.1));
  CHECK(id.IsIdentity());

  // Forward to left: gains [1,0,0,1] -> [1,1,0,0].
  const FoaRotation quarter =
      RotationBetween(Direction(0, 0), Direction(kPi / 2, 0));
  const FoaGains got = quarter.Apply(ShEval(Direction(0, 0)));
  CHECK(GainError(got, ShEval(Direction(kPi / 2, 0))) <= 1e-12);

  Rng rng(17);
  for (int i = 0; i < 100; ++i) {
    const Direction from = SampleUniformDirection(rng);
    const Direction to = SampleUniformDirection(rng);
    const FoaRotation r = RotationBetween(from, to);
    CHECK(r.OrthogonalityError() <= 1e-12);
    CHECK(GainError(r.Apply(ShEval(from)), ShEval(to)) <= 1e-10);
    // W row and column are untouched.
    const auto& m = r.matrix();
    CHECK(m[0] == 1.0);
    for (int k = 1; k < 4; ++k) {
      CHECK(m[k] == 0.0);
      CHECK(m[k * 4] == 0.0);
    }
  }
}

TEST_CASE("RotationBetween handles antipodal pairs") {
  Rng rng(29);
  for (int i = 0; i < 50; ++i) {
    const Direction from = SampleUniformDirection(rng);
    const auto u = from.UnitVector();
    const Direction to = Direction::FromUnitVector({-u[0], -u[1], -u[2]});
    const FoaRotation r = RotationBetween(from, to);
    CHECK(r.OrthogonalityError() <= 1e-12);
    CHECK(GainError(r.Apply(ShEval(from)), ShEval(to)) <= 1e-10);
  }
  // Poles flip around +X.
  const FoaRotation pole =
      RotationBetween(Direction(0, kPi / 2), Direction(0, -kPi / 2));
  CHECK(GainError(pole.Apply(ShEval(Direction(0, kPi / 2))),
                  ShEval(Direction(0, -kPi / 2))) <= 1e-10);
}

TEST_CASE("Rotation equivariance across random pairs") {
  Rng rng(41);
  for (int i = 0; i < 100; ++i) {
    const Direction d = SampleUniformDirection(rng);
    const FoaRotation r =
        RotationBetween(SampleUniformDirection(rng), SampleUniformDirection(rng));
    const auto rd = RotateVector(r, d.UnitVector());
    const FoaGains direct = ShEval(Direction::FromUnitVector(rd));
    const FoaGains via_channels = r.Apply(ShEval(d));
    CHECK(GainError(direct, via_channels) <= 1e-10);
  }
}

TEST_CASE("EncodePlaneWave splits the signal over the gains") {
  std::vector<double> impulse(16, 0.0);
  impulse[0] = 1.0;
  const FoaSignal enc = EncodePlaneWave(impulse, Direction(0, 0), 16000.0);
  CHECK(enc.channel(kAcnW)[0] == 1.0);
  CHECK(enc.channel(kAcnX)[0] == 1.0);
  for (size_t i = 0; i < 16; ++i) {
    CHECK(enc.channel(kAcnY)[i] == 0.0);
    CHECK(std::abs(enc.channel(kAcnZ)[i]) <= 1e-16);
  }

  // Zenith: Z equals W sample for sample.
  Rng rng(5);
  std::vector<double> noise(64);
  for (double& v : noise) v = rng.Uniform(-1, 1);
  const FoaSignal zen = EncodePlaneWave(noise, Direction(1.3, kPi / 2), 16000.0);
  for (size_t i = 0; i < noise.size(); ++i) {
    CHECK(zen.channel(kAcnZ)[i] == doctest::Approx(zen.channel(kAcnW)[i]).epsilon(1e-12));
  }

  // 45 degrees azimuth: Y and X both carry mono / sqrt(2).
  std::vector<double> sine(128);
  for (size_t i = 0; i < sine.size(); ++i) sine[i] = std::sin(0.1 * i);
  const FoaSignal diag = EncodePlaneWave(sine, Direction(kPi / 4, 0), 16000.0);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (size_t i = 0; i < sine.size(); ++i) {
    CHECK(diag.channel(kAcnY)[i] == doctest::Approx(sine[i] * inv_sqrt2).epsilon(1e-14));
    CHECK(diag.channel(kAcnX)[i] == doctest::Approx(sine[i] * inv_sqrt2).epsilon(1e-14));
  }

  CHECK_THROWS_AS(EncodePlaneWave({}, Direction(0, 0), 16000.0), DataError);
}

TEST_CASE("ApplyRotation preserves W, norms, and plane-wave structure") {
  Rng rng(53);
  FoaSignal x(256, 16000.0);
  for (int c = 0; c < 4; ++c) {
    for (auto& v : x.channel(c)) v = rng.Uniform(-1, 1);
  }

  // Identity: bit-identical.
  const FoaSignal same = ApplyRotation(x, FoaRotation::Identity());
  for (int c = 0; c < 4; ++c) CHECK(same.channel(c) == x.channel(c));

  const FoaRotation r =
      RotationBetween(SampleUniformDirection(rng), SampleUniformDirection(rng));
  const FoaSignal y = ApplyRotation(x, r);
  CHECK(y.channel(kAcnW) == x.channel(kAcnW));
  for (size_t i = 0; i < x.frames(); ++i) {
    double nx = 0, ny = 0;
    for (int c = 0; c < 4; ++c) {
      nx += x.channel(c)[i] * x.channel(c)[i];
      ny += y.channel(c)[i] * y.channel(c)[i];
    }
    CHECK(std::abs(std::sqrt(nx) - std::sqrt(ny)) <= 1e-9);
  }

  // Rotating an encoded plane wave gives the encoding of the rotated
  // direction.
  std::vector<double> tone(200);
  for (size_t i = 0; i < tone.size(); ++i) tone[i] = std::cos(0.05 * i);
  const Direction from = SampleUniformDirection(rng);
  const Direction to = SampleUniformDirection(rng);
  const FoaSignal rotated =
      ApplyRotation(EncodePlaneWave(tone, from, 16000.0), RotationBetween(from, to));
  const FoaSignal expected = EncodePlaneWave(tone, to, 16000.0);
  for (int c = 0; c < 4; ++c) {
    for (size_t i = 0; i < tone.size(); ++i) {
      CHECK(std::abs(rotated.channel(c)[i] - expected.channel(c)[i]) <= 1e-10);
    }
  }
}
