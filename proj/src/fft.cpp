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

#include "foa/fft.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "foa/error.hpp"
#include "foa/kernels.hpp"

namespace foa::fft {

namespace {

bool IsPow2(size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Twiddles exp(-2*pi*i*k/n) for k in [0, n/2), cached per size.
std::shared_ptr<const std::vector<std::complex<double>>> TwiddleTable(size_t n) {
  static std::mutex mu;
  static std::map<size_t, std::shared_ptr<const std::vector<std::complex<double>>>>
      cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  auto table = std::make_shared<std::vector<std::complex<double>>>(n / 2);
  for (size_t k = 0; k < n / 2; ++k) {
    const double a = -2.0 * std::numbers::pi * static_cast<double>(k) /
                     static_cast<double>(n);
    (*table)[k] = {std::cos(a), std::sin(a)};
  }
  cache.emplace(n, table);
  return table;
}

void Transform(std::span<std::complex<double>> a, bool inverse) {
  const size_t n = a.size();
  if (n <= 1) return;
  if (!IsPow2(n)) throw ConfigError("fft: size must be a power of two");

  // Bit-reversal permutation.
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }

  const auto table = TwiddleTable(n);
  const auto& tw = *table;
  for (size_t len = 2; len <= n; len <<= 1) {
    const size_t stride = n / len;
    for (size_t i = 0; i < n; i += len) {
      for (size_t j = 0; j < len / 2; ++j) {
        std::complex<double> w = tw[j * stride];
        if (inverse) w = std::conj(w);
        const std::complex<double> u = a[i + j];
        const std::complex<double> v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
      }
    }
  }

  if (inverse) {
    const double s = 1.0 / static_cast<double>(n);
    for (auto& x : a) x *= s;
  }
}

}  // namespace

void Forward(std::span<std::complex<double>> a) { Transform(a, false); }
void Inverse(std::span<std::complex<double>> a) { Transform(a, true); }

size_t NextPow2(size_t n) {
  size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

std::vector<std::complex<double>> RealForward(std::span<const double> x,
                                              size_t nfft) {
  if (!IsPow2(nfft)) throw ConfigError("RealForward: nfft must be a power of two");
  if (x.size() > nfft) throw ConfigError("RealForward: input longer than nfft");
  std::vector<std::complex<double>> buf(nfft);
  for (size_t i = 0; i < x.size(); ++i) buf[i] = x[i];
  Forward(buf);
  buf.resize(nfft / 2 + 1);
  return buf;
}

std::vector<double> RealInverse(std::span<const std::complex<double>> bins,
                                size_t nfft, double* imag_residue_rel) {
  if (!IsPow2(nfft)) throw ConfigError("RealInverse: nfft must be a power of two");
  if (bins.size() != nfft / 2 + 1) {
    throw ConfigError("RealInverse: expected nfft/2 + 1 bins");
  }
  std::vector<std::complex<double>> buf(nfft);
  buf[0] = {bins[0].real(), 0.0};
  buf[nfft / 2] = {bins[nfft / 2].real(), 0.0};
  for (size_t k = 1; k < nfft / 2; ++k) {
    buf[k] = bins[k];
    buf[nfft - k] = std::conj(bins[k]);
  }
  Inverse(buf);
  std::vector<double> out(nfft);
  double re2 = 0.0, im2 = 0.0;
  for (size_t i = 0; i < nfft; ++i) {
    out[i] = buf[i].real();
    re2 += buf[i].real() * buf[i].real();
    im2 += buf[i].imag() * buf[i].imag();
  }
  if (imag_residue_rel != nullptr) {
    *imag_residue_rel = re2 > 0.0 ? std::sqrt(im2 / re2) : std::sqrt(im2);
  }
  return out;
}

std::vector<double> ConvolveTruncate(std::span<const double> x,
                                     std::span<const double> h,
                                     size_t out_len) {
  if (x.empty() || h.empty()) return std::vector<double>(out_len, 0.0);
  const size_t full = x.size() + h.size() - 1;
  const size_t nfft = NextPow2(full);
  std::vector<std::complex<double>> a(nfft), b(nfft);
  for (size_t i = 0; i < x.size(); ++i) a[i] = x[i];
  for (size_t i = 0; i < h.size(); ++i) b[i] = h[i];
  Forward(a);
  Forward(b);
  kernels::Active().cmul(nfft, a.data(), b.data(), a.data());
  Inverse(a);
  std::vector<double> out(out_len, 0.0);
  const size_t lim = std::min(out_len, full);
  for (size_t i = 0; i < lim; ++i) out[i] = a[i].real();
  return out;
}

}  // namespace foa::fft
