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

#ifndef FOA_SH_HPP_
#define FOA_SH_HPP_

#include <array>
#include <cstddef>

#include "foa/rng.hpp"

namespace foa {

// First-order ambisonic channels in ACN order with SN3D normalization.
// Channel 0 is omnidirectional (W); channels 1..3 carry the Y, Z, X
// direction cosines.
enum AcnChannel : int { kAcnW = 0, kAcnY = 1, kAcnZ = 2, kAcnX = 3 };
inline constexpr int kNumFoaChannels = 4;

// Azimuth/elevation pair on the unit sphere. Azimuth 0 points along +X and
// grows counterclockwise toward +Y; elevation grows toward +Z. Azimuth is
// normalized into [0, 2*pi) on construction; elevation must lie in
// [-pi/2, +pi/2] (a tiny tolerance is forgiven and clamped).
class Direction {
 public:
  Direction() = default;
  Direction(double azimuth_rad, double elevation_rad);

  static Direction FromDegrees(double azimuth_deg, double elevation_deg);
  static Direction FromUnitVector(const std::array<double, 3>& v);

  // Cartesian unit vector (x, y, z). Round-trips with FromUnitVector to
  // within 1e-12.
  std::array<double, 3> UnitVector() const;

  double azimuth() const { return azimuth_; }
  double elevation() const { return elevation_; }
  double azimuth_deg() const;
  double elevation_deg() const;

 private:
  double azimuth_ = 0.0;
  double elevation_ = 0.0;
};

// Per-channel plane-wave encoding gains, ACN order [W, Y, Z, X], SN3D.
struct FoaGains {
  std::array<double, 4> c{};

  double& operator[](size_t i) { return c[i]; }
  double operator[](size_t i) const { return c[i]; }
};

// 4x4 rotation acting on ACN/SN3D channels. W is invariant; the lower-right
// 3x3 block is the Cartesian rotation conjugated by the (Y, Z, X) channel
// permutation, orthogonal with determinant +1.
class FoaRotation {
 public:
  FoaRotation();  // identity

  // Builds the channel-domain rotation from a Cartesian rotation matrix
  // (row-major, acts on column vectors).
  static FoaRotation FromCartesian(const std::array<double, 9>& r);

  static FoaRotation Identity() { return FoaRotation(); }

  // Row-major 4x4.
  const std::array<double, 16>& matrix() const { return m_; }

  bool IsIdentity() const;

  FoaGains Apply(const FoaGains& g) const;

  // Largest deviation of B*B^T from the identity plus |det - 1|, where B is
  // the 3x3 block. Zero for a proper rotation.
  double OrthogonalityError() const;

 private:
  std::array<double, 16> m_;
};

// Evaluates the first-order SN3D/ACN basis at a direction:
// [1, cos(el)*sin(az), sin(el), cos(el)*cos(az)].
FoaGains ShEval(const Direction& d);

// Angle between two directions in [0, pi].
double GreatCircleDistance(const Direction& a, const Direction& b);

// Uniform direction on the sphere via a normalized 3-D Gaussian draw.
Direction SampleUniformDirection(Rng& rng);

// Rotation mapping `from` onto `to`, built from the axis-angle between the
// two unit vectors. For antipodal inputs the rotation axis is +Z, unless
// both directions lie on the Z axis, in which case +X is used.
FoaRotation RotationBetween(const Direction& from, const Direction& to);

}  // namespace foa

#endif  // FOA_SH_HPP_
