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

#include "foa/signal.hpp"

#include <cmath>
#include <string>

#include "foa/error.hpp"
#include "foa/kernels.hpp"

namespace foa {

FoaSignal::FoaSignal(size_t frames, double sample_rate)
    : sample_rate_(sample_rate) {
  for (auto& c : ch_) c.assign(frames, 0.0);
}

std::array<double*, 4> FoaSignal::data() {
  return {ch_[0].data(), ch_[1].data(), ch_[2].data(), ch_[3].data()};
}

std::array<const double*, 4> FoaSignal::data() const {
  return {ch_[0].data(), ch_[1].data(), ch_[2].data(), ch_[3].data()};
}

bool FoaSignal::AllFinite() const {
  for (const auto& c : ch_) {
    for (double v : c) {
      if (!std::isfinite(v)) return false;
    }
  }
  return true;
}

void FoaSignal::CheckFinite(const char* what) const {
  if (!AllFinite()) {
    throw DataError(std::string(what) + ": non-finite samples");
  }
}

double FoaSignal::Rms() const {
  const size_t n = frames();
  if (n == 0) return 0.0;
  double acc = 0.0;
  for (const auto& c : ch_) acc += kernels::Active().sumsq(n, c.data());
  return std::sqrt(acc / (4.0 * static_cast<double>(n)));
}

FoaSignal EncodePlaneWave(std::span<const double> mono, const Direction& d,
                          double sample_rate) {
  if (mono.empty()) throw DataError("EncodePlaneWave: empty mono signal");
  const FoaGains g = ShEval(d);
  FoaSignal out(mono.size(), sample_rate);
  for (int c = 0; c < kNumFoaChannels; ++c) {
    kernels::Active().scale(mono.size(), g[c], mono.data(),
                            out.channel(c).data());
  }
  return out;
}

FoaSignal ApplyRotation(const FoaSignal& x, const FoaRotation& r) {
  if (r.IsIdentity()) return x;
  FoaSignal out(x.frames(), x.sample_rate());
  // The W row of a FoaRotation is pinned to [1, 0, 0, 0].
  out.channel(kAcnW) = x.channel(kAcnW);
  const auto& m = r.matrix();
  const auto in = x.data();
  auto outp = out.data();
  const size_t n = x.frames();
  for (int i = 1; i < 4; ++i) {
    double* dst = outp[i];
    kernels::Active().scale(n, m[i * 4 + 1], in[1], dst);
    kernels::Active().axpy(n, m[i * 4 + 2], in[2], dst);
    kernels::Active().axpy(n, m[i * 4 + 3], in[3], dst);
  }
  return out;
}

}  // namespace foa
