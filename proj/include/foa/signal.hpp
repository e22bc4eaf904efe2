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

#ifndef FOA_SIGNAL_HPP_
#define FOA_SIGNAL_HPP_

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "foa/sh.hpp"

namespace foa {

// 4-channel ACN/SN3D time-domain signal with planar storage.
class FoaSignal {
 public:
  FoaSignal() = default;
  FoaSignal(size_t frames, double sample_rate);

  size_t frames() const { return ch_[0].size(); }
  double sample_rate() const { return sample_rate_; }
  void set_sample_rate(double sr) { sample_rate_ = sr; }

  std::vector<double>& channel(int c) { return ch_[c]; }
  const std::vector<double>& channel(int c) const { return ch_[c]; }

  std::array<double*, 4> data();
  std::array<const double*, 4> data() const;

  bool AllFinite() const;
  // Throws DataError when any sample is NaN or infinite.
  void CheckFinite(const char* what) const;

  double Rms() const;

 private:
  std::array<std::vector<double>, 4> ch_;
  double sample_rate_ = 16000.0;
};

// A 4-channel room impulse response shares the signal layout.
using AmbisonicRir = FoaSignal;

// Multiplies a mono signal onto the four encoding gains of a direction.
// Throws DataError for an empty input.
FoaSignal EncodePlaneWave(std::span<const double> mono, const Direction& d,
                          double sample_rate);

// Per-sample rotation of the channel vector. The W channel is copied
// untouched; an exact-identity rotation returns a bit-identical signal.
FoaSignal ApplyRotation(const FoaSignal& x, const FoaRotation& r);

}  // namespace foa

#endif  // FOA_SIGNAL_HPP_
