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

#ifndef FOA_ROOM_HPP_
#define FOA_ROOM_HPP_

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "foa/rng.hpp"
#include "foa/sh.hpp"
#include "foa/signal.hpp"

namespace foa {

inline constexpr double kSpeedOfSound = 343.0;  // m/s
// Distance attenuation is 1/d with unit gain at 1 m; closer sources are
// clamped to this distance.
inline constexpr double kMinAttenuationDistance = 0.1;  // m

using Vec3 = std::array<double, 3>;

// Wall material as a short linear-phase reflection FIR. Construction
// normalizes the filter so that |H(f)| <= 1 everywhere (passive surface).
struct Material {
  std::string name;
  std::vector<double> fir;

  // True for the unit-impulse (fully rigid) response.
  bool IsIdentity() const;

  // Group delay of the linear-phase filter in samples.
  int GroupDelaySamples() const;

  // Complex frequency response at the given frequencies for sample rate fs.
  std::vector<std::complex<double>> Response(std::span<const double> freqs_hz,
                                             double fs) const;

  // Designs a linear-phase FIR matching per-octave-band absorption
  // coefficients at [125, 250, 500, 1k, 2k, 4k] Hz.
  static Material FromOctaveAbsorption(const std::string& name,
                                       const std::array<double, 6>& absorption,
                                       int taps = 32, double fs = 16000.0);
};

// Named material presets: rigid, carpet, curtain, concrete, glass, plaster.
class MaterialBank {
 public:
  static const MaterialBank& Presets();

  // Throws ConfigError for an unknown name.
  const Material& Get(const std::string& name) const;
  bool Has(const std::string& name) const;
  std::vector<std::string> Names() const;

  void Add(Material m);

 private:
  std::vector<Material> materials_;
};

// Surface indexing used by Room::surface_materials and
// ImagePath::wall_sequence.
enum Surface : int {
  kFloor = 0,    // z = 0
  kCeiling = 1,  // z = Lz
  kWallX0 = 2,   // x = 0
  kWallX1 = 3,   // x = Lx
  kWallY0 = 4,   // y = 0
  kWallY1 = 5,   // y = Ly
};

struct Room {
  Vec3 dims{};                                 // (Lx, Ly, Lz) meters
  std::array<std::string, 6> surface_materials{};  // indexed by Surface
};

// One image-source propagation path.
struct ImagePath {
  double delay_s = 0.0;       // travel delay, seconds
  Direction direction;        // arrival direction at the receiver
  int order = 0;              // total reflection count
  double gain = 1.0;          // 1/d distance attenuation
  std::vector<uint8_t> wall_sequence;  // surfaces hit (multiset, not in hit order)
  Vec3 image_pos{};           // jittered image position, meters
};

struct SceneSource {
  Vec3 position{};
  double distance = 0.0;   // to the receiver
  Direction direction;     // from the receiver
};

// A sampled room with receiver and sources; sources[0] is the target.
struct SceneGeometry {
  Room room;
  Vec3 receiver{};
  std::vector<SceneSource> sources;
};

struct SimConfig {
  double fs = 16000.0;
  int max_order = 40;
  // Per reflection order, uniform per component in [-j*order, +j*order].
  // The direct path is never jittered.
  double jitter_m = 0.05;
  double rir_seconds = 1.5;
  uint64_t seed = 0;
};

// Enumerates image sources up to max_order total reflections. Jitter
// displaces each image position by a per-component uniform offset bounded
// by jitter_m * order; offsets are drawn from streams forked per lattice
// index, so the result is independent of enumeration order. Throws
// DataError when src == recv.
std::vector<ImagePath> EnumerateImageSources(const Room& room, const Vec3& src,
                                             const Vec3& recv, int max_order,
                                             double jitter_m, Rng& rng);

// Complex multiplier of one path on a frequency grid:
// gain * prod(wall responses) * exp(-j*2*pi*f*delay). Material names are
// resolved through the bank; unknown names throw ConfigError.
std::vector<std::complex<double>> PathSpectrum(const ImagePath& path,
                                               std::span<const double> freqs_hz,
                                               const Room& room,
                                               const MaterialBank& bank,
                                               double fs);

// Frequency-domain image-source simulation of a first-order ambisonic RIR.
// Per channel, the transfer function is the sum of path spectra weighted by
// the SN3D encoding gains of each arrival direction, synthesized on a
// real-FFT grid of size NextPow2(rir length) and inverted to time domain.
//
// Paths whose (filter-delayed) arrival falls beyond the configured RIR
// length are dropped; this is how the reflection order and the RIR length
// bound each other. If even the direct path does not fit, a ConfigError
// reporting the required length is thrown.
AmbisonicRir SimulateRir(const Room& room, const Vec3& src, const Vec3& recv,
                         const SimConfig& cfg,
                         const MaterialBank& bank = MaterialBank::Presets());

// Randomized scene: room dims uniform in [2, 15] m, receiver at the room
// center plus a uniform offset within +-10% of each dimension, sources at
// uniform sphere directions with distance uniform in [0.6, 5] m, rejected
// and resampled until strictly inside the room. Materials are drawn
// uniformly from the presets. Throws DataError if the retry cap is hit.
SceneGeometry SampleSceneGeometry(Rng& rng, int n_sources);

}  // namespace foa

#endif  // FOA_ROOM_HPP_
