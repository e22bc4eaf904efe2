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

#ifndef FOA_TESTS_ORACLE_HPP_
#define FOA_TESTS_ORACLE_HPP_

// Test-only oracles, kept independent of the library's frequency-domain
// synthesis path: impulse responses are written directly in the time domain
// as windowed-sinc fractional delays.

#include <cmath>
#include <numbers>
#include <vector>

#include "foa/room.hpp"
#include "foa/sh.hpp"
#include "foa/signal.hpp"

namespace foa::test {

inline double Sinc(double x) {
  if (std::abs(x) < 1e-12) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

// Tukey taper over a half-width of nfft/2 samples: flat inner region,
// cosine roll-off near the circular wrap point.
inline double TukeyTaper(double dist, double half_width, double flat = 0.75) {
  const double a = std::abs(dist);
  if (a <= flat * half_width) return 1.0;
  if (a >= half_width) return 0.0;
  const double t = (a - flat * half_width) / ((1.0 - flat) * half_width);
  return 0.5 * (1.0 + std::cos(std::numbers::pi * t));
}

// Sum of windowed-sinc fractional-delay impulses, scaled by the 1/d gain
// and the SN3D encoding gains of each arrival. The synthesis grid is
// circular, so each impulse also appears at its alias delays +-k*nfft; the
// window spans all included aliases. The truncation error of the windowed
// sinc shrinks like 1/sqrt(total span), so `aliases` controls oracle
// accuracy (25 keeps it near 0.1% for nfft >= 2048).
inline AmbisonicRir TimeDomainRirOracle(const std::vector<ImagePath>& paths,
                                        double fs, size_t rir_len, size_t nfft,
                                        int aliases = 25) {
  std::vector<std::vector<double>> buf(4, std::vector<double>(nfft, 0.0));
  const double span_half =
      (static_cast<double>(aliases) + 0.5) * static_cast<double>(nfft);
  for (const ImagePath& p : paths) {
    const double delay_samples = p.delay_s * fs;
    const FoaGains sh = ShEval(p.direction);
    for (size_t n = 0; n < nfft; ++n) {
      const double base = std::remainder(
          static_cast<double>(n) - delay_samples, static_cast<double>(nfft));
      double v = 0.0;
      for (int k = -aliases; k <= aliases; ++k) {
        const double d = base + static_cast<double>(k) * static_cast<double>(nfft);
        v += Sinc(d) * TukeyTaper(d, span_half);
      }
      v *= p.gain;
      for (int c = 0; c < 4; ++c) buf[c][n] += sh[c] * v;
    }
  }
  AmbisonicRir rir(rir_len, fs);
  for (int c = 0; c < 4; ++c) {
    for (size_t n = 0; n < rir_len && n < nfft; ++n) rir.channel(c)[n] = buf[c][n];
  }
  return rir;
}

inline double RelativeL2(const std::vector<double>& got,
                         const std::vector<double>& want) {
  double diff = 0.0, ref = 0.0;
  for (size_t i = 0; i < got.size(); ++i) {
    diff += (got[i] - want[i]) * (got[i] - want[i]);
    ref += want[i] * want[i];
  }
  return ref > 0.0 ? std::sqrt(diff / ref) : std::sqrt(diff);
}

}  // namespace foa::test

#endif  // FOA_TESTS_ORACLE_HPP_
