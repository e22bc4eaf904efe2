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

#include "foa/sh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "foa/error.hpp"

namespace foa {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double WrapAzimuth(double az) {
  az = std::fmod(az, kTwoPi);
  if (az < 0.0) az += kTwoPi;
  if (az >= kTwoPi) az = 0.0;  // fmod can land exactly on 2*pi
  return az;
}

// Maps channels (Y, Z, X) = block indices (0, 1, 2) to Cartesian component
// indices (y, z, x) = (1, 2, 0).
constexpr int kBlockToCartesian[3] = {1, 2, 0};

}  // namespace

Direction::Direction(double azimuth_rad, double elevation_rad) {
  if (!std::isfinite(azimuth_rad) || !std::isfinite(elevation_rad)) {
    throw ConfigError("Direction: angles must be finite");
  }
  constexpr double kHalfPi = kPi / 2.0;
  if (std::abs(elevation_rad) > kHalfPi + 1e-9) {
    throw ConfigError("Direction: |elevation| exceeds pi/2");
  }
  azimuth_ = WrapAzimuth(azimuth_rad);
  elevation_ = std::clamp(elevation_rad, -kHalfPi, kHalfPi);
}

Direction Direction::FromDegrees(double azimuth_deg, double elevation_deg) {
  return Direction(azimuth_deg * kPi / 180.0, elevation_deg * kPi / 180.0);
}

Direction Direction::FromUnitVector(const std::array<double, 3>& v) {
  const double norm = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw ConfigError("Direction::FromUnitVector: zero or non-finite vector");
  }
  const double z = std::clamp(v[2] / norm, -1.0, 1.0);
  const double el = std::asin(z);
  double az = std::atan2(v[1], v[0]);
  return Direction(az, el);
}

std::array<double, 3> Direction::UnitVector() const {
  const double ce = std::cos(elevation_);
  return {ce * std::cos(azimuth_), ce * std::sin(azimuth_),
          std::sin(elevation_)};
}

double Direction::azimuth_deg() const { return azimuth_ * 180.0 / kPi; }
double Direction::elevation_deg() const { return elevation_ * 180.0 / kPi; }

FoaRotation::FoaRotation() {
  m_ = {1, 0, 0, 0,  //
        0, 1, 0, 0,  //
        0, 0, 1, 0,  //
        0, 0, 0, 1};
}

FoaRotation FoaRotation::FromCartesian(const std::array<double, 9>& r) {
  FoaRotation out;
  // First-order SH rotates exactly like the direction vector; only the
  // channel order differs from the Cartesian component order.
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      out.m_[(i + 1) * 4 + (j + 1)] =
          r[kBlockToCartesian[i] * 3 + kBlockToCartesian[j]];
    }
  }
  return out;
}

bool FoaRotation::IsIdentity() const {
  static const std::array<double, 16> kId = {1, 0, 0, 0, 0, 1, 0, 0,
                                             0, 0, 1, 0, 0, 0, 0, 1};
  return m_ == kId;
}

FoaGains FoaRotation::Apply(const FoaGains& g) const {
  FoaGains out;
  for (int i = 0; i < 4; ++i) {
    double acc = 0.0;
    for (int j = 0; j < 4; ++j) acc += m_[i * 4 + j] * g[j];
    out[i] = acc;
  }
  return out;
}

double FoaRotation::OrthogonalityError() const {
  double err = 0.0;
  // B * B^T vs identity.
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double acc = 0.0;
      for (int k = 0; k < 3; ++k) {
        acc += m_[(i + 1) * 4 + (k + 1)] * m_[(j + 1) * 4 + (k + 1)];
      }
      err = std::max(err, std::abs(acc - (i == j ? 1.0 : 0.0)));
    }
  }
  // Determinant of the block.
  const auto b = [&](int i, int j) { return m_[(i + 1) * 4 + (j + 1)]; };
  const double det = b(0, 0) * (b(1, 1) * b(2, 2) - b(1, 2) * b(2, 1)) -
                     b(0, 1) * (b(1, 0) * b(2, 2) - b(1, 2) * b(2, 0)) +
                     b(0, 2) * (b(1, 0) * b(2, 1) - b(1, 1) * b(2, 0));
  return err + std::abs(det - 1.0);
}

FoaGains ShEval(const Direction& d) {
  const double ce = std::cos(d.elevation());
  FoaGains g;
  g[kAcnW] = 1.0;
  g[kAcnY] = ce * std::sin(d.azimuth());
  g[kAcnZ] = std::sin(d.elevation());
  g[kAcnX] = ce * std::cos(d.azimuth());
  return g;
}

double GreatCircleDistance(const Direction& a, const Direction& b) {
  const auto u = a.UnitVector();
  const auto v = b.UnitVector();
  const double dot = u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
  return std::acos(std::clamp(dot, -1.0, 1.0));
}

Direction SampleUniformDirection(Rng& rng) {
  // Normalized 3-D Gaussian; degenerate draws are rejected.
  while (true) {
    const double x = rng.Normal();
    const double y = rng.Normal();
    const double z = rng.Normal();
    const double n = std::sqrt(x * x + y * y + z * z);
    if (n > 1e-9) return Direction::FromUnitVector({x / n, y / n, z / n});
  }
}

FoaRotation RotationBetween(const Direction& from, const Direction& to) {
  const auto a = from.UnitVector();
  const auto b = to.UnitVector();
  std::array<double, 3> axis = {a[1] * b[2] - a[2] * b[1],
                                a[2] * b[0] - a[0] * b[2],
                                a[0] * b[1] - a[1] * b[0]};
  const double s =
      std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
  const double c = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];

  if (s < 1e-12) {
    if (c > 0.0) return FoaRotation::Identity();
    // Antipodal: rotate by pi about an axis perpendicular to `from`. The
    // axis is +Z projected perpendicular to the pair (which is +Z itself
    // for equatorial directions); +X serves when the pair lies on Z.
    std::array<double, 3> flip_axis;
    if (std::abs(a[2]) > 1.0 - 1e-9) {
      flip_axis = {1.0, 0.0, 0.0};
    } else {
      flip_axis = {-a[2] * a[0], -a[2] * a[1], 1.0 - a[2] * a[2]};
      const double n = std::sqrt(flip_axis[0] * flip_axis[0] +
                                 flip_axis[1] * flip_axis[1] +
                                 flip_axis[2] * flip_axis[2]);
      for (double& v : flip_axis) v /= n;
    }
    const double ux = flip_axis[0], uy = flip_axis[1], uz = flip_axis[2];
    // Rodrigues with angle pi: R = 2*u*u^T - I.
    const std::array<double, 9> r = {
        2 * ux * ux - 1, 2 * ux * uy,     2 * ux * uz,      //
        2 * uy * ux,     2 * uy * uy - 1, 2 * uy * uz,      //
        2 * uz * ux,     2 * uz * uy,     2 * uz * uz - 1,  //
    };
    return FoaRotation::FromCartesian(r);
  }

  // Rodrigues' formula with K = [axis]_x (axis unnormalized, |axis| = s):
  // R = I + K + K^2 * (1 - c) / s^2.
  const double k = (1.0 - c) / (s * s);
  const double x = axis[0], y = axis[1], z = axis[2];
  const std::array<double, 9> r = {
      1.0 + k * (-z * z - y * y), -z + k * x * y, y + k * x * z,        //
      z + k * x * y, 1.0 + k * (-z * z - x * x), -x + k * y * z,        //
      -y + k * x * z, x + k * y * z, 1.0 + k * (-y * y - x * x),        //
  };
  return FoaRotation::FromCartesian(r);
}

}  // namespace foa
