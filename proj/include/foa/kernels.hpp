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

#ifndef FOA_KERNELS_HPP_
#define FOA_KERNELS_HPP_

#include <complex>
#include <cstddef>

namespace foa::kernels {

// Arguments for the image-source spectrum accumulation kernel. For every
// frequency bin k in [0, n) the kernel computes
//
//   m(k) = amp * prod_i filt_i(k) * exp(j * (phase0 + k * dphase))
//
// and adds sh[c] * m(k) into the per-channel output spectra (split
// real/imag storage). All pointers address arrays of length n; up to three
// complex filter factors may be supplied.
struct PathAccum {
  size_t n = 0;
  double phase0 = 0.0;
  double dphase = 0.0;
  double amp = 1.0;
  double sh[4] = {1.0, 0.0, 0.0, 0.0};
  int num_filters = 0;
  const double* filt_re[3] = {nullptr, nullptr, nullptr};
  const double* filt_im[3] = {nullptr, nullptr, nullptr};
  double* out_re[4] = {nullptr, nullptr, nullptr, nullptr};
  double* out_im[4] = {nullptr, nullptr, nullptr, nullptr};
};

// The data-parallel inner loops of the library. Each backend provides the
// same contract; the scalar implementation is the reference and the SIMD
// variants are equivalence-tested against it.
struct Ops {
  const char* name;

  // y[i] += a * x[i]
  void (*axpy)(size_t n, double a, const double* x, double* y);
  // y[i] = a * x[i]
  void (*scale)(size_t n, double a, const double* x, double* y);
  double (*dot)(size_t n, const double* x, const double* y);
  double (*sumsq)(size_t n, const double* x);
  // out[c][i] = sum_d m[c*4+d] * in[d][i], for 4 planar channels.
  void (*apply_mat4)(size_t n, const double* m, const double* const* in,
                     double* const* out);
  // out[i] = a[i] * b[i] on interleaved complex arrays.
  void (*cmul)(size_t n, const std::complex<double>* a,
               const std::complex<double>* b, std::complex<double>* out);
  void (*path_accum)(const PathAccum& p);
};

enum class Backend { kAuto, kScalar, kAvx2, kAvx512 };

// Scalar reference backend; always available.
const Ops& Scalar();

// SIMD backends, or nullptr when the build or the CPU does not support
// them. Auto-detection prefers AVX-512, then AVX2, then scalar.
const Ops* Avx2();
const Ops* Avx512();

// Currently selected backend (auto-detected on first use).
const Ops& Active();
Backend ActiveBackend();

// Forces a backend, e.g. from a --kernel CLI flag or from the equivalence
// tests. Throws ConfigError if the backend is unavailable.
void SetBackend(Backend b);

}  // namespace foa::kernels

#endif  // FOA_KERNELS_HPP_
